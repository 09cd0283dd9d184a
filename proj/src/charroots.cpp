#include "ddestab/charroots.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "ddestab/hayes.hpp"

namespace ddestab {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kAxisMargin = 1e-9;
constexpr double kOnContourTol = 1e-8;
constexpr double kResidualTol = 1e-10;

bool finite(std::complex<double> z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
}

struct WindingResult {
    bool on_contour = false;
    double winding = 0.0;
    double max_step = 0.0;
};

// Accumulated argument change of char_fn around the rectangle, counterclockwise.
WindingResult winding_over_rectangle(double p, double q, double r, double re_min, double re_max,
                                     double im_min, double im_max, int samples_per_edge) {
    WindingResult out;
    const int n = samples_per_edge;

    auto point = [&](int idx) -> std::complex<double> {
        // edges: bottom, right, top, left; idx in [0, 4n)
        const int edge = idx / n;
        const double t = static_cast<double>(idx % n) / n;
        switch (edge) {
            case 0: return {re_min + (re_max - re_min) * t, im_min};
            case 1: return {re_max, im_min + (im_max - im_min) * t};
            case 2: return {re_max - (re_max - re_min) * t, im_max};
            default: return {re_min, im_max - (im_max - im_min) * t};
        }
    };

    std::complex<double> f_first = char_fn(p, q, r, point(0));
    if (std::abs(f_first) <= kOnContourTol) {
        out.on_contour = true;
        return out;
    }
    std::complex<double> f_prev = f_first;
    double total = 0.0;
    for (int idx = 1; idx < 4 * n; ++idx) {
        const std::complex<double> f = char_fn(p, q, r, point(idx));
        if (std::abs(f) <= kOnContourTol) {
            out.on_contour = true;
            return out;
        }
        const double step = std::arg(f / f_prev);
        total += step;
        out.max_step = std::max(out.max_step, std::abs(step));
        f_prev = f;
    }
    const double closing = std::arg(f_first / f_prev);
    total += closing;
    out.max_step = std::max(out.max_step, std::abs(closing));
    out.winding = total / (2.0 * kPi);
    return out;
}

}  // namespace

std::complex<double> char_fn(double p, double q, double r, std::complex<double> lambda) {
    return lambda + p - q * std::exp(-lambda * r);
}

RhpRootCount count_rhp_roots(double p, double q, double r, int initial_samples_per_edge) {
    if (!(r > 0.0))
        throw std::domain_error("count_rhp_roots: delay must be positive");

    const double bound = std::abs(p) + std::abs(q) + 1.0;
    RhpRootCount out;
    out.re_min = kAxisMargin;
    out.re_max = bound;
    out.im_min = -bound;
    out.im_max = bound;

    for (int attempt = 0; attempt <= 5; ++attempt) {
        bool hit_contour = false;
        for (int n = initial_samples_per_edge; n <= (1 << 20); n *= 2) {
            const WindingResult w = winding_over_rectangle(p, q, r, out.re_min, out.re_max,
                                                           out.im_min, out.im_max, n);
            if (w.on_contour) {
                hit_contour = true;
                break;
            }
            const double rounded = std::round(w.winding);
            out.samples_per_edge = n;
            out.winding_residual = std::abs(w.winding - rounded);
            // a single argument step near pi can hide a full turn, so insist
            // on comfortably sub-pi steps before accepting
            if (out.winding_residual <= 0.25 && w.max_step < 2.5 && rounded >= 0.0) {
                out.count = static_cast<int>(rounded);
                return out;
            }
        }
        // dilate away from whatever sits on the contour and retry
        out.re_min += 1e-6;
        out.re_max += 1e-6;
        out.im_min -= 1e-6;
        out.im_max += 1e-6;
        (void)hit_contour;
    }

    out.on_axis_root = true;
    out.count = -1;
    return out;
}

RootRefinement refine_root(double p, double q, double r, std::complex<double> seed) {
    std::complex<double> z = seed;
    int it = 0;
    for (; it < 100; ++it) {
        if (-z.real() * r > 700.0) break;  // exp overflow; seed outside any useful basin
        const std::complex<double> e = std::exp(-z * r);
        const std::complex<double> f = z + p - q * e;
        const std::complex<double> fp = 1.0 + q * r * e;
        if (!finite(f) || !finite(fp)) break;
        if (std::abs(fp) < 1e-14) break;
        const std::complex<double> dz = f / fp;
        z -= dz;
        if (std::abs(dz) <= 1e-14 * (1.0 + std::abs(z))) {
            ++it;
            break;
        }
    }
    const double residual = finite(z) ? std::abs(char_fn(p, q, r, z))
                                      : std::numeric_limits<double>::infinity();
    return RootRefinement{CharRoot{z.real(), z.imag(), residual},
                          residual <= kResidualTol, it};
}

RightmostRoot rightmost_root(double p, double q, double r) {
    const double radius = std::abs(p) + std::abs(q);
    const double bound = radius + 1.0;

    auto collect = [&](int n_re, int n_im) {
        std::vector<std::complex<double>> seeds{{0.0, 0.0}, {-p, 0.0}};
        if (-p * r <= 1.0) {
            const double w0 = t_inv(-p * r) / r;
            if (w0 > 0.0) seeds.emplace_back(0.0, w0);
        }
        for (int i = 0; i < n_re; ++i) {
            const double re = -2.0 * radius + (bound + 2.0 * radius) * i / (n_re - 1.0);
            for (int j = 0; j < n_im; ++j) {
                const double im = bound * j / (n_im - 1.0);
                seeds.emplace_back(re, im);
            }
        }
        std::vector<CharRoot> roots;
        for (const auto& seed : seeds) {
            const RootRefinement ref = refine_root(p, q, r, seed);
            if (!ref.converged) continue;
            CharRoot root = ref.root;
            root.omega = std::abs(root.omega);
            const bool dup = std::any_of(roots.begin(), roots.end(), [&](const CharRoot& have) {
                return std::hypot(have.mu - root.mu, have.omega - root.omega) < 1e-7;
            });
            if (!dup) roots.push_back(root);
        }
        return roots;
    };

    const int n_im_base = std::max(10, static_cast<int>(std::ceil(bound * r / kPi)) + 4);
    std::vector<CharRoot> roots = collect(14, n_im_base);

    RightmostRoot out{};
    out.validated = false;
    out.axis_indeterminate = false;
    if (roots.empty()) {
        out.root = CharRoot{std::numeric_limits<double>::quiet_NaN(),
                            std::numeric_limits<double>::quiet_NaN(),
                            std::numeric_limits<double>::infinity()};
        return out;
    }
    auto rightmost_of = [](const std::vector<CharRoot>& rs) {
        return *std::max_element(rs.begin(), rs.end(),
                                 [](const CharRoot& a, const CharRoot& b) { return a.mu < b.mu; });
    };
    out.root = rightmost_of(roots);

    const RhpRootCount cnt = count_rhp_roots(p, q, r);
    if (cnt.on_axis_root || std::abs(out.root.mu) <= kAxisMargin) {
        out.axis_indeterminate = true;
        out.validated = true;
        return out;
    }
    bool consistent = (out.root.mu > 0.0) == (cnt.count > 0);
    if (!consistent) {
        // one denser pass before flagging: the grid may have missed a root
        roots = collect(28, 2 * n_im_base);
        if (!roots.empty()) out.root = rightmost_of(roots);
        if (std::abs(out.root.mu) <= kAxisMargin) {
            out.axis_indeterminate = true;
            out.validated = true;
            return out;
        }
        consistent = (out.root.mu > 0.0) == (cnt.count > 0);
    }
    out.validated = consistent;
    return out;
}

}  // namespace ddestab

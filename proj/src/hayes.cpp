#include "ddestab/hayes.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace ddestab {

namespace {
constexpr double kPi = std::numbers::pi;
}

double t_func(double y) {
    if (!(y >= 0.0) || y >= kPi)
        throw std::domain_error("t_func: argument outside [0, pi)");
    if (y == 0.0) return 1.0;
    return y * (std::cos(y) / std::sin(y));
}

double t_inv(double v) {
    if (!(v <= 1.0))
        throw std::domain_error("t_inv: argument must be <= 1");
    if (v == 1.0) return 0.0;

    double lo = 0.0;
    double hi = kPi - 1e-8;
    // For v below T(pi - 1e-8) walk the upper end toward the pole; T diverges
    // like -pi/(pi - y) there, so quartering the distance reaches any
    // representable target quickly.
    while (t_func(hi) > v) {
        const double next = kPi - 0.25 * (kPi - hi);
        if (next == hi) break;  // pinned at the last double below pi
        hi = next;
    }
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        if (t_func(mid) > v)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

double omega0(double p, double r) {
    if (!(r > 0.0))
        throw std::domain_error("omega0: delay must be positive");
    const double v = -p * r;
    if (v > 1.0)
        throw std::domain_error("omega0: p r < -1, no crossing frequency exists");
    return t_inv(v) / r;
}

const char* to_string(Stability s) {
    switch (s) {
        case Stability::Stable: return "Stable";
        case Stability::Unstable: return "Unstable";
        case Stability::Marginal: return "Marginal";
    }
    return "?";
}

const char* to_string(StabilityCase c) {
    switch (c) {
        case StabilityCase::A: return "A";
        case StabilityCase::B: return "B";
        case StabilityCase::C: return "C";
        case StabilityCase::PZero: return "PZero";
        case StabilityCase::QZero: return "QZero";
        case StabilityCase::DelayUnit: return "DelayUnit";
        case StabilityCase::Hopf: return "Hopf";
    }
    return "?";
}

StabilityVerdict classify(double p, double q, double r, double marginal_band) {
    if (!(r > 0.0) || !std::isfinite(p) || !std::isfinite(q))
        throw std::domain_error("classify: requires finite p, q and r > 0");

    StabilityVerdict out{};
    auto status_of = [&](double m) {
        if (std::abs(m) <= marginal_band) return Stability::Marginal;
        return m > 0.0 ? Stability::Stable : Stability::Unstable;
    };

    if (q == 0.0) {
        // lambda = -p is the only root
        out.margin = p * r;
        out.case_tag = StabilityCase::QZero;
        out.status = status_of(out.margin);
        return out;
    }

    const StabilityCase structural =
        q > 0.0 ? StabilityCase::C
                : (p < 0.0 ? StabilityCase::A
                           : (p > 0.0 ? StabilityCase::B : StabilityCase::PZero));

    const double m1 = 1.0 + p * r;
    // normalizing by max(|p|, |q|, 1/r) keeps the field smooth through the
    // degenerate corner p = q = 0
    const double m2 = (p - q) / std::max({std::abs(p), std::abs(q), 1.0 / r});

    if (m1 <= 0.0) {
        // p < 0 and no crossing frequency exists; the crossing slack
        // degenerates to its omega0 -> 0 limit and nothing here is stable.
        // Only the pinch p = q = -1/r sits on the boundary itself.
        const double m3_limit = 1.0 - q / p;
        out.margin = std::min({m1, m2, m3_limit});
        out.case_tag = structural;
        out.status = status_of(out.margin);
        if (out.status == Stability::Marginal) out.case_tag = StabilityCase::DelayUnit;
        return out;
    }

    const double w0 = t_inv(-p * r) / r;
    const double s = std::hypot(w0, p);
    const double m3 = (s + q) / s;

    out.margin = std::min({m1, m2, m3});
    if (w0 > 0.0) out.omega0 = w0;
    out.case_tag = structural;
    out.status = status_of(out.margin);
    if (out.status == Stability::Marginal) {
        if (out.margin == m3)
            out.case_tag = StabilityCase::Hopf;
        else if (out.margin == m1)
            out.case_tag = StabilityCase::DelayUnit;
    }
    return out;
}

std::optional<HopfBoundaryPoint> hopf_boundary_r(double p, double q) {
    if (!(q < 0.0) || !(std::abs(q) > std::abs(p))) return std::nullopt;
    const double ws = std::sqrt((q - p) * (q + p));
    const double rs = std::acos(p / q) / ws;
    const std::complex<double> lam(0.0, ws);
    const double residual = std::abs(lam + p - q * std::exp(-lam * rs));
    return HopfBoundaryPoint{rs, ws, residual};
}

double g_of_r(const Parameters& params, double r) {
    const Parameters at_r = params.with_r(r);
    const Equilibria eq = equilibria(at_r);
    if (!eq.x2) {
        std::ostringstream msg;
        msg << "g_of_r: positive equilibrium absent at r=" << r;
        throw std::domain_error(msg.str());
    }
    const ReducedCoeffs rc = reduced_coeffs(at_r, EquilibriumTag::X2);
    const double u = rc.p / rc.q;
    if (!(u >= -1.0 && u <= 1.0)) {
        std::ostringstream msg;
        msg << "g_of_r: arccos argument " << u << " outside [-1,1] at r=" << r
            << " (|delta+B| exceeds |kB|)";
        throw std::domain_error(msg.str());
    }
    if (-rc.p * r > 1.0) {
        std::ostringstream msg;
        msg << "g_of_r: -(delta+B) r = " << -rc.p * r << " > 1 at r=" << r;
        throw std::domain_error(msg.str());
    }
    return t_inv(-rc.p * r) - std::acos(u);
}

std::optional<double> find_stability_switch(const Parameters& params, double r_lo, double r_hi) {
    if (!(r_lo > 0.0) || !(r_hi > r_lo))
        throw std::domain_error("find_stability_switch: need 0 < r_lo < r_hi");

    auto eval = [&](double r) -> std::optional<double> {
        try {
            return g_of_r(params, r);
        } catch (const std::domain_error&) {
            return std::nullopt;
        }
    };

    constexpr int kScanIntervals = 512;
    double prev_r = r_lo;
    std::optional<double> prev_g = eval(r_lo);
    for (int i = 1; i <= kScanIntervals; ++i) {
        const double cur_r = r_lo + (r_hi - r_lo) * static_cast<double>(i) / kScanIntervals;
        const std::optional<double> cur_g = eval(cur_r);
        if (prev_g && *prev_g == 0.0) return prev_r;
        if (prev_g && cur_g && (*prev_g < 0.0) != (*cur_g < 0.0)) {
            double lo = prev_r, hi = cur_r;
            double glo = *prev_g;
            for (int it = 0; it < 200 && hi - lo > 1e-12; ++it) {
                const double mid = 0.5 * (lo + hi);
                const std::optional<double> gm = eval(mid);
                if (!gm) break;  // should not happen inside a bracket; bail to midpoint
                if ((glo < 0.0) == (*gm < 0.0)) {
                    lo = mid;
                    glo = *gm;
                } else {
                    hi = mid;
                }
            }
            return 0.5 * (lo + hi);
        }
        prev_r = cur_r;
        prev_g = cur_g;
    }
    return std::nullopt;
}

std::optional<double> legacy_boundary_r(double p, double q) {
    if (!(q < 0.0) || !(std::abs(q) > std::abs(p))) return std::nullopt;
    return std::acos(p / q) / std::sqrt((q - p) * (q + p));
}

}  // namespace ddestab

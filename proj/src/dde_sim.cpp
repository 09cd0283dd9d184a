#include "ddestab/dde_sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace ddestab {

namespace {

double hermite(double x0, double f0, double x1, double f1, double h, double theta) {
    const double t2 = theta * theta;
    const double t3 = t2 * theta;
    return (2.0 * t3 - 3.0 * t2 + 1.0) * x0 + (t3 - 2.0 * t2 + theta) * h * f0 +
           (-2.0 * t3 + 3.0 * t2) * x1 + (t3 - t2) * h * f1;
}

// Shape-preserving tangents (Fritsch-Carlson): no overshoot between samples.
std::vector<double> pchip_slopes(const std::vector<double>& t, const std::vector<double>& y) {
    const std::size_t n = t.size();
    std::vector<double> d(n - 1), m(n);
    for (std::size_t i = 0; i + 1 < n; ++i) d[i] = (y[i + 1] - y[i]) / (t[i + 1] - t[i]);
    if (n == 2) {
        m[0] = m[1] = d[0];
        return m;
    }
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (d[i - 1] == 0.0 || d[i] == 0.0 || (d[i - 1] > 0.0) != (d[i] > 0.0)) {
            m[i] = 0.0;
        } else {
            const double h0 = t[i] - t[i - 1], h1 = t[i + 1] - t[i];
            const double w1 = 2.0 * h1 + h0, w2 = h1 + 2.0 * h0;
            m[i] = (w1 + w2) / (w1 / d[i - 1] + w2 / d[i]);
        }
    }
    auto endpoint = [](double h0, double h1, double d0, double d1) {
        double slope = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
        if (d0 == 0.0 || (slope > 0.0) != (d0 > 0.0)) return 0.0;
        if ((d0 > 0.0) != (d1 > 0.0) && std::abs(slope) > 3.0 * std::abs(d0)) return 3.0 * d0;
        return slope;
    };
    m[0] = endpoint(t[1] - t[0], t[2] - t[1], d[0], d[1]);
    m[n - 1] = endpoint(t[n - 1] - t[n - 2], t[n - 2] - t[n - 3], d[n - 2], d[n - 3]);
    return m;
}

}  // namespace

History History::constant(double level) {
    History h;
    h.kind_ = Kind::Constant;
    h.level_ = level;
    return h;
}

History History::perturbed_equilibrium(const Parameters& params, EquilibriumTag which,
                                       double amplitude) {
    const Equilibria eq = equilibria(params);
    double base = 0.0;
    if (which == EquilibriumTag::X2) {
        if (!eq.x2)
            throw std::domain_error("History: positive equilibrium absent for these parameters");
        base = *eq.x2;
    }
    History h;
    h.kind_ = Kind::PerturbedEquilibrium;
    h.level_ = base + amplitude;
    return h;
}

History History::sampled(std::vector<double> times, std::vector<double> values) {
    if (times.size() < 2 || times.size() != values.size())
        throw std::domain_error("History: need at least two (time, value) samples");
    for (std::size_t i = 0; i + 1 < times.size(); ++i)
        if (!(times[i] < times[i + 1]))
            throw std::domain_error("History: sample times must be strictly increasing");
    if (std::abs(times.back()) > 1e-9)
        throw std::domain_error("History: last sample time must be 0");
    History h;
    h.kind_ = Kind::Sampled;
    h.slopes_ = pchip_slopes(times, values);
    h.times_ = std::move(times);
    h.values_ = std::move(values);
    return h;
}

double History::operator()(double s) const {
    if (kind_ != Kind::Sampled) return level_;
    if (s <= times_.front() + 1e-12 && s >= times_.front() - 1e-9) return values_.front();
    if (s >= times_.back()) return values_.back();
    if (s < times_.front())
        throw std::out_of_range("History: evaluation before the first sample");
    const auto it = std::upper_bound(times_.begin(), times_.end(), s);
    const std::size_t i = static_cast<std::size_t>(it - times_.begin()) - 1;
    const double h = times_[i + 1] - times_[i];
    return hermite(values_[i], slopes_[i], values_[i + 1], slopes_[i + 1], h,
                   (s - times_[i]) / h);
}

double History::min_value() const {
    if (kind_ != Kind::Sampled) return level_;
    // monotone interpolation cannot undershoot the data
    return *std::min_element(values_.begin(), values_.end());
}

double History::earliest_time() const {
    if (kind_ != Kind::Sampled) return -std::numeric_limits<double>::infinity();
    return times_.front();
}

double step_rhs(const Parameters& params, double x_now, double x_delayed) {
    const double k = derive_k(params);
    return -(hill_beta(params, x_now) + params.delta) * x_now +
           k * hill_beta(params, x_delayed) * x_delayed;
}

double Trajectory::eval(double t) const {
    if (t <= 0.0) return history(t);
    const double last = t_end();
    if (t > last + 1e-9 * (1.0 + last))
        throw std::out_of_range("Trajectory: evaluation past the end");
    const int n = static_cast<int>(values.size()) - 1;
    int i = static_cast<int>(t / h);
    if (i >= n) i = n - 1;
    const double theta = t / h - i;
    return hermite(values[i], derivs[i], values[i + 1], derivs[i + 1], h,
                   std::min(std::max(theta, 0.0), 1.0));
}

Trajectory integrate(const Parameters& params, const History& history, double t_end, double h) {
    if (!(params.r > 0.0))
        throw std::domain_error("integrate: delay must be positive");
    if (!(h > 0.0))
        throw std::domain_error("integrate: step must be positive");
    const int m = static_cast<int>(std::lround(params.r / h));
    if (m < 1 || std::abs(m * h - params.r) > 1e-9 * std::max(1.0, params.r)) {
        std::ostringstream msg;
        msg << "integrate: r/h must be an integer; nearest admissible h = "
            << params.r / std::max(1.0, std::round(params.r / h));
        throw std::domain_error(msg.str());
    }
    if (!(t_end >= params.r))
        throw std::domain_error("integrate: t_end must be at least one delay");
    if (history.earliest_time() > -params.r + 1e-9)
        throw std::domain_error("integrate: history does not cover [-r, 0]");

    Trajectory traj;
    traj.params = params;
    traj.k = derive_k(params);
    traj.h = h;
    traj.steps_per_delay = m;
    traj.history = history;

    const int n_steps = static_cast<int>(std::ceil(t_end / h - 1e-9));
    traj.values.reserve(n_steps + 1);
    traj.derivs.reserve(n_steps + 1);

    const double beta0 = params.beta0, n_exp = params.n, delta = params.delta, k = traj.k;
    auto rhs = [&](double x, double xd) {
        return -(beta0 / (1.0 + std::pow(x, n_exp)) + delta) * x +
               k * beta0 * xd / (1.0 + std::pow(xd, n_exp));
    };
    // Delayed state at node j + theta (j may be negative: exact history).
    // theta is 0, 1/2 or 1, so the lag lands on stored intervals exactly.
    auto delayed = [&](int j, double theta) {
        if (j < 0 || (j == 0 && theta == 0.0)) return history((j + theta) * h);
        if (theta == 0.0) return traj.values[j];
        if (theta == 1.0) return traj.values[j + 1];
        return hermite(traj.values[j], traj.derivs[j], traj.values[j + 1], traj.derivs[j + 1], h,
                       theta);
    };

    traj.values.push_back(history(0.0));
    traj.derivs.push_back(rhs(traj.values[0], history(-params.r)));

    for (int i = 0; i < n_steps; ++i) {
        const double x = traj.values[i];
        const int j = i - m;
        const double k1 = traj.derivs[i];
        const double k2 = rhs(x + 0.5 * h * k1, delayed(j, 0.5));
        const double k3 = rhs(x + 0.5 * h * k2, delayed(j, 0.5));
        const double k4 = rhs(x + h * k3, delayed(j + 1, 0.0));
        const double x_next = x + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if (!std::isfinite(x_next)) {
            traj.failed = true;
            traj.failed_at_step = i;
            break;
        }
        traj.values.push_back(x_next);
        traj.derivs.push_back(rhs(x_next, delayed(j + 1, 0.0)));
    }

    if (!traj.failed && history.min_value() >= 0.0) {
        traj.positivity = certify_positivity(traj);
        traj.boundedness = certify_boundedness(traj);
    }
    return traj;
}

PositivityCertificate certify_positivity(const Trajectory& traj) {
    if (traj.history.min_value() < 0.0)
        throw std::domain_error("certify_positivity: history must be nonnegative");
    double min_value = traj.values[0];
    double min_time = 0.0;
    const int n = static_cast<int>(traj.values.size()) - 1;
    for (int i = 0; i < n; ++i) {
        for (int s = 0; s < 10; ++s) {
            const double t = (i + s / 10.0) * traj.h;
            const double x = traj.eval(t);
            if (x < min_value) {
                min_value = x;
                min_time = t;
            }
        }
    }
    if (traj.values[n] < min_value) {
        min_value = traj.values[n];
        min_time = n * traj.h;
    }
    return PositivityCertificate{min_value, min_time, min_value >= -1e-12};
}

BoundednessCertificate certify_boundedness(const Trajectory& traj, double epsilon) {
    const double kb0 = traj.k * traj.params.beta0;
    const double eta = 2.0 * traj.params.delta - epsilon * kb0;
    if (!(epsilon > 0.0) || !(eta > 0.0))
        throw std::domain_error("certify_boundedness: need 0 < epsilon < 2 delta/(k beta0)");
    const double phi0_sq = traj.history(0.0) * traj.history(0.0);
    const double tail = kb0 / (epsilon * eta);
    double max_violation = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < traj.values.size(); ++i) {
        const double t = static_cast<double>(i) * traj.h;
        const double bound = phi0_sq * std::exp(-eta * t) + tail;
        max_violation = std::max(max_violation, traj.values[i] * traj.values[i] - bound);
    }
    const bool passed = max_violation <= 1e-9 * (1.0 + phi0_sq + tail);
    return BoundednessCertificate{epsilon, eta, max_violation, passed};
}

BoundednessCertificate certify_boundedness(const Trajectory& traj) {
    return certify_boundedness(traj, traj.params.delta / (traj.k * traj.params.beta0));
}

AsymptoticReport classify_asymptotics(const Trajectory& traj, const Equilibria& eq,
                                      double window, double tol) {
    const double t_end = traj.t_end();
    if (!(window > 0.0) || window > t_end + 1e-9)
        throw std::domain_error("classify_asymptotics: window must lie within the trajectory");

    AsymptoticReport report{};
    report.transient_cut = t_end - window;

    const int n = static_cast<int>(traj.values.size());
    const int first = std::max(0, static_cast<int>(std::floor(report.transient_cut / traj.h)));

    double best_gap = std::numeric_limits<double>::infinity();
    std::optional<EquilibriumTag> best_tag;
    auto try_equilibrium = [&](double x_star, EquilibriumTag tag) {
        double gap = 0.0;
        for (int i = first; i < n; ++i) gap = std::max(gap, std::abs(traj.values[i] - x_star));
        if (gap <= tol && gap < best_gap) {
            best_gap = gap;
            best_tag = tag;
        }
    };
    try_equilibrium(eq.x1, EquilibriumTag::X1);
    if (eq.x2) try_equilibrium(*eq.x2, EquilibriumTag::X2);
    if (best_tag) {
        report.kind = AsymptoticReport::Kind::ConvergedTo;
        report.equilibrium = *best_tag;
        report.final_gap = best_gap;
        return report;
    }

    double lo = traj.values[first], hi = traj.values[first];
    for (int i = first; i < n; ++i) {
        lo = std::min(lo, traj.values[i]);
        hi = std::max(hi, traj.values[i]);
    }
    report.amplitude = 0.5 * (hi - lo);

    std::vector<double> peak_t, peak_x;
    for (int i = std::max(first, 1); i + 1 < n; ++i) {
        if (traj.values[i] >= traj.values[i - 1] && traj.values[i] > traj.values[i + 1]) {
            peak_t.push_back(i * traj.h);
            peak_x.push_back(traj.values[i]);
        }
    }
    bool regular = report.amplitude > 10.0 * tol && peak_t.size() >= 3;
    for (std::size_t i = 0; regular && i + 1 < peak_x.size(); ++i) {
        const double scale = std::max(std::abs(peak_x[i]), std::abs(peak_x[i + 1]));
        if (std::abs(peak_x[i + 1] - peak_x[i]) > 0.05 * scale) regular = false;
    }
    if (regular) {
        report.kind = AsymptoticReport::Kind::SustainedOscillation;
        report.period_estimate = (peak_t.back() - peak_t.front()) / (peak_t.size() - 1.0);
        return report;
    }
    report.kind = AsymptoticReport::Kind::GrowingOrUndecided;
    return report;
}

AsymptoticReport classify_asymptotics(const Trajectory& traj, const Equilibria& eq) {
    const double tol = 1e-6 * (1.0 + (eq.x2 ? *eq.x2 : 0.0));
    return classify_asymptotics(traj, eq, 0.5 * traj.t_end(), tol);
}

}  // namespace ddestab

#include "ddestab/lyapunov.hpp"

#include <cmath>
#include <functional>
#include <random>
#include <stdexcept>
#include <vector>

namespace ddestab {

namespace {

// 7-point Gauss / 15-point Kronrod pair on [-1, 1].
constexpr double kKronrodNodes[8] = {
    0.0,
    0.207784955007898467600689403773245,
    0.405845151377397166906606412076961,
    0.586087235467691130294144838258730,
    0.741531185599394439863864773280788,
    0.864864423359769072789712788640926,
    0.949107912342758524526189684047851,
    0.991455371120812639206854697526329,
};
constexpr double kKronrodWeights[8] = {
    0.209482141084727828012999174891714,
    0.204432940075298892414161999234649,
    0.190350578064785409913256402421014,
    0.169004726639267902826583426598550,
    0.140653259715525918745189590510238,
    0.104790010322250183839876322541518,
    0.063092092629978553290700663189204,
    0.022935322010529224963732008058970,
};
constexpr double kGaussWeights[4] = {
    0.417959183673469387755102040816327,
    0.381830050505118944950369775488975,
    0.279705391489276667901467771423780,
    0.129484966168869693270611432679082,
};

struct GK {
    double integral;
    double error;
};

GK gk15(const std::function<double(double)>& f, double a, double b) {
    const double c = 0.5 * (a + b), half = 0.5 * (b - a);
    const double f0 = f(c);
    double kron = kKronrodWeights[0] * f0;
    double gauss = kGaussWeights[0] * f0;
    for (int i = 1; i < 8; ++i) {
        const double fa = f(c - half * kKronrodNodes[i]);
        const double fb = f(c + half * kKronrodNodes[i]);
        kron += kKronrodWeights[i] * (fa + fb);
        if (i % 2 == 0) gauss += kGaussWeights[i / 2] * (fa + fb);
    }
    return GK{kron * half, std::abs(kron - gauss) * half};
}

double adaptive_quad(const std::function<double(double)>& f, double a, double b, double rel_tol,
                     int depth = 0) {
    const GK whole = gk15(f, a, b);
    if (depth >= 30 || whole.error <= rel_tol * std::max(std::abs(whole.integral), 1e-300))
        return whole.integral;
    const double c = 0.5 * (a + b);
    return adaptive_quad(f, a, c, rel_tol, depth + 1) +
           adaptive_quad(f, c, b, rel_tol, depth + 1);
}

double hill_weight(double u, double n) {
    const double den = 1.0 + std::pow(u, n);
    return u * u / (den * den);
}

// Composite Simpson of f over [a, b] with an even panel count.
double simpson(const std::function<double(double)>& f, double a, double b, int panels) {
    if (panels % 2) ++panels;
    const double h = (b - a) / panels;
    double sum = f(a) + f(b);
    for (int i = 1; i < panels; ++i) sum += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return sum * h / 3.0;
}

double delay_integral(const Parameters& params, const std::function<double(double)>& x_of,
                      double t_hi, int min_panels) {
    const int panels = std::max(64, min_panels);
    auto integrand = [&](double s) { return hill_weight(x_of(s), params.n); };
    return simpson(integrand, t_hi - params.r, t_hi, panels);
}

}  // namespace

double g_func(double u, double n) {
    if (!(u >= 0.0)) throw std::domain_error("g_func: argument must be nonnegative");
    if (u == 0.0) return 0.0;
    if (n == 1.0) return 2.0 * (u - std::log1p(u));
    if (n == 2.0) return std::log1p(u * u);
    return adaptive_quad([n](double s) { return 2.0 * s / (1.0 + std::pow(s, n)); }, 0.0, u,
                         1e-12);
}

LyapunovValue v_func(const Parameters& params, const History& phi) {
    const double kb0 = derive_k(params) * params.beta0;
    const double g_part = g_func(phi(0.0), params.n);
    const double integral =
        delay_integral(params, [&phi](double s) { return phi(s); }, 0.0, 128);
    return LyapunovValue{g_part + kb0 * integral, g_part, kb0 * integral};
}

LyapunovValue v_at(const Parameters& params, const Trajectory& traj, double t) {
    if (t < 0.0 || t > traj.t_end() + 1e-9)
        throw std::domain_error("v_at: time outside the trajectory");
    const double kb0 = traj.k * params.beta0;
    const double g_part = g_func(traj.eval(t), params.n);
    int panels = traj.steps_per_delay;
    if (panels % 2) ++panels;
    const double integral =
        delay_integral(params, [&traj](double s) { return traj.eval(s); }, t, panels);
    return LyapunovValue{g_part + kb0 * integral, g_part, kb0 * integral};
}

double vdot_analytic(const Parameters& params, double x_now, double x_delayed) {
    const double kb0 = derive_k(params) * params.beta0;
    const double den_now = 1.0 + std::pow(x_now, params.n);
    const double den_del = 1.0 + std::pow(x_delayed, params.n);
    const double xdot = -(params.beta0 / den_now + params.delta) * x_now +
                        kb0 * x_delayed / den_del;
    return 2.0 * x_now / den_now * xdot +
           kb0 * (x_now * x_now / (den_now * den_now) -
                  x_delayed * x_delayed / (den_del * den_del));
}

VdotSample vdot_along(const Parameters& params, const Trajectory& traj, double t) {
    if (t < 0.0 || t + traj.h > traj.t_end() + 1e-9)
        throw std::domain_error("vdot_along: trajectory must cover [t - r, t + h]");
    const double analytic = vdot_analytic(params, traj.eval(t), traj.eval(t - params.r));
    const double fd = (v_at(params, traj, t + traj.h).v - v_at(params, traj, t).v) / traj.h;
    return VdotSample{analytic, fd};
}

CriticalStabilityReport verify_critical_stability(const Parameters& params, int draws,
                                                  std::uint64_t seed) {
    const double kb0 = derive_k(params) * params.beta0;
    if (std::abs(kb0 - (params.delta + params.beta0)) > 1e-12)
        throw std::domain_error(
            "verify_critical_stability: parameters are off the critical manifold "
            "(set r so that k beta0 = delta + beta0)");

    CriticalStabilityReport report;
    report.draws = draws;
    report.seed = seed;

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const int points = 9;
    const double h = params.r / 64.0;

    for (int d = 0; d < draws; ++d) {
        std::vector<double> times(points), values(points);
        double sup = 0.0;
        for (int i = 0; i < points; ++i) {
            times[i] = -params.r + params.r * i / (points - 1.0);
            values[i] = unit(rng);
            sup = std::max(sup, values[i]);
        }
        times.back() = 0.0;
        const History phi = History::sampled(times, values);
        const Trajectory traj = integrate(params, phi, 40.0 * params.r, h);
        if (traj.failed) {
            ++report.failures;
            continue;
        }

        const double state_bound = g_func(sup, params.n) + kb0 * params.r * sup * sup;
        bool ok = true;
        double v_prev = v_at(params, traj, 0.0).v;
        const int n = static_cast<int>(traj.values.size());
        for (int i = 1; i < n; ++i) {
            const double v_cur = v_at(params, traj, i * h).v;
            const double drift = v_cur - v_prev;
            report.max_step_drift = std::max(report.max_step_drift, drift);
            if (drift > 1e-10) ok = false;
            v_prev = v_cur;
            const double excess = g_func(std::abs(traj.values[i]), params.n) - state_bound;
            report.max_bound_excess = std::max(report.max_bound_excess, excess);
            if (excess > 1e-9) ok = false;
        }
        if (!ok) ++report.failures;
    }
    report.all_passed = report.failures == 0;
    return report;
}

}  // namespace ddestab

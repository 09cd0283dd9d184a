#pragma once

#include <cstdint>

#include "ddestab/dde_sim.hpp"
#include "ddestab/model.hpp"

namespace ddestab {

// Functional certifying stability of the zero equilibrium on the critical
// manifold k beta0 = delta + beta0 (equivalently r = r_max, where the
// positive equilibrium is born):
//
//   V(phi) = G(phi(0)) + k beta0 \int_{-r}^{0} phi^2(s)/(1 + phi^n(s))^2 ds,
//   G(u)   = \int_0^u 2s/(1 + s^n) ds.

// G(u) for u >= 0. Closed forms for n = 1 and n = 2, adaptive Gauss-Kronrod
// quadrature (1e-12 relative) otherwise.
double g_func(double u, double n);

struct LyapunovValue {
    double v;              // g_part + integral_part
    double g_part;         // G(phi(0))
    double integral_part;  // k beta0 times the delay integral
};

// V of an initial history. The delay integral uses composite Simpson with at
// least 64 panels.
LyapunovValue v_func(const Parameters& params, const History& phi);

// V of the trajectory segment x_t (the state on [t - r, t]), via dense output.
LyapunovValue v_at(const Parameters& params, const Trajectory& traj, double t);

// Pointwise derivative of V along solutions, as a function of the current
// and delayed values alone.
double vdot_analytic(const Parameters& params, double x_now, double x_delayed);

struct VdotSample {
    double analytic;
    double forward_difference;  // (V(x_{t+h}) - V(x_t))/h at the trajectory step
};

// Both evaluations at time t; requires the trajectory to cover [t-r, t+h].
VdotSample vdot_along(const Parameters& params, const Trajectory& traj, double t);

struct CriticalStabilityReport {
    int draws = 0;
    bool all_passed = false;
    double max_step_drift = 0.0;    // largest per-step increase of V observed
    double max_bound_excess = 0.0;  // largest G(x(t)) - [G(|phi|_0) + k beta0 r |phi|_0^2]
    int failures = 0;
    std::uint64_t seed = 0;
};

// On the critical manifold (|k beta0 - (delta + beta0)| <= 1e-12; throws
// otherwise): integrates `draws` random nonnegative histories with sup norm
// at most 1 to t = 40 r and checks that V never increases by more than 1e-10
// per step and that the state stays under the monotone bound implied by V.
CriticalStabilityReport verify_critical_stability(const Parameters& params, int draws,
                                                  std::uint64_t seed = 20240611);

}  // namespace ddestab

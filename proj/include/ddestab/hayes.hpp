#pragma once

#include <optional>

#include "ddestab/model.hpp"

namespace ddestab {

// Stability machinery for the reduced characteristic equation
//
//     lambda + p = q e^{-lambda r},        r > 0.
//
// All roots lie strictly in the left half plane exactly when
//     p r > -1,   q < p,   and   -q < sqrt(omega0^2 + p^2),
// where omega0 is the crossing frequency defined below. classify() reports
// the verdict together with a signed, normalized distance from the nearest
// of those three boundaries.

// T(y) = y cot y for y in (0, pi), T(0) = 1. Strictly decreasing bijection
// from [0, pi) onto (-inf, 1]. Throws std::domain_error outside [0, pi).
double t_func(double y);

// Unique y in [0, pi) with t_func(y) = v, for v <= 1. Bisection with a
// bracket that tracks the pole at pi for very negative v; the returned y is
// accurate to the last representable bit (well inside 1e-12 absolute).
// Throws std::domain_error for v > 1.
double t_inv(double v);

// Crossing frequency: the unique solution of w cot(w r) = -p in (0, pi/r),
// computed as t_inv(-p r)/r. Requires p r >= -1 (no admissible crossing
// otherwise; throws std::domain_error). w r lies in (0, pi/2) for p < 0,
// equals pi/2 for p = 0, and lies in (pi/2, pi) for p > 0.
double omega0(double p, double r);

enum class Stability { Stable, Unstable, Marginal };

// Which branch of the classification decided the verdict. A/B/C are the
// sign-structure cases (q<0<..., see classify); PZero and QZero are the
// degenerate axes; DelayUnit marks the r|p| = 1 endpoint; Hopf marks a
// marginal verdict sitting on the imaginary-axis crossing boundary.
enum class StabilityCase { A, B, C, PZero, QZero, DelayUnit, Hopf };

const char* to_string(Stability s);
const char* to_string(StabilityCase c);

struct StabilityVerdict {
    Stability status;
    StabilityCase case_tag;
    // Minimum over the decisive inequalities of their normalized signed
    // slack: positive inside the stable set, negative outside, zero on a
    // boundary. Gives sweeps a smooth boundary-distance field.
    double margin;
    std::optional<double> omega0;  // crossing frequency, when it was computed
};

inline constexpr double kDefaultMarginalBand = 1e-9;

// Full verdict for (p, q, r). Marginal iff |margin| <= marginal_band.
StabilityVerdict classify(double p, double q, double r,
                          double marginal_band = kDefaultMarginalBand);

// Delay at which a conjugate pair crosses the imaginary axis for fixed
// (p, q): omega* = sqrt(q^2 - p^2), r* = arccos(p/q)/omega*. A crossing with
// omega* r* in (0, pi) exists only for q < 0 with |q| > |p|; absent otherwise.
struct HopfBoundaryPoint {
    double r_star;
    double omega_star;
    double residual;  // |lambda + p - q e^{-lambda r*}| at lambda = i omega*
};

std::optional<HopfBoundaryPoint> hopf_boundary_r(double p, double q);

// Stability-change indicator along a delay sweep of the positive equilibrium:
//   g(r) = T^{-1}(-(delta + B(r)) r) - arccos((delta + B(r)) / (k(r) B(r))),
// with k and B recomputed at each r. A zero of g marks a stability change.
// Throws std::domain_error (with a diagnostic) when x2 is absent at r, when
// the arccos argument leaves [-1, 1], or when -(delta + B) r > 1.
double g_of_r(const Parameters& params, double r);

// First bracketed sign change of g on [r_lo, r_hi], located by bisection to
// 1e-10 absolute in r. The bracket is scanned left to right on a fixed grid;
// grid points where g is undefined are skipped. Absent when no sign change
// is found.
std::optional<double> find_stability_switch(const Parameters& params, double r_lo, double r_hi);

// The incorrect stability bound arccos(p/q)/sqrt(q^2 - p^2) claimed in
// earlier studies of this model; kept solely for discrepancy reporting
// against the correct arccos(p/q)/omega0(p, r). Absent unless q < 0 and
// |q| > |p|.
std::optional<double> legacy_boundary_r(double p, double q);

}  // namespace ddestab

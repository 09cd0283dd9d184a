#pragma once

#include <optional>

namespace ddestab {

// Parameter set for the delayed cell-density model
//
//   x'(t) = -[ beta0/(1 + x(t)^n) + delta ] x(t)
//           + k beta0 x(t-r) / (1 + x(t-r)^n),      k = 2 e^{-gamma r}.
//
// All constants are held here; everything else in the library is derived
// from a Parameters value on demand, so a value is always self-consistent.
struct Parameters {
    double beta0;  // maximal proliferation rate, > 0
    double n;      // Hill exponent, > 0 (not restricted to integers)
    double delta;  // decay rate, > 0
    double gamma;  // loss rate entering k, > 0
    double r;      // delay, >= 0

    // Validating factory; throws std::domain_error on an out-of-range field.
    static Parameters make(double beta0, double n, double delta, double gamma, double r);

    // Same constants, different delay. Handy for delay sweeps.
    Parameters with_r(double new_r) const;
};

// k = 2 e^{-gamma r}, in (0, 2].
double derive_k(const Parameters& p);

// beta(x) = beta0 / (1 + x^n), the Hill feedback term, x >= 0.
double hill_beta(const Parameters& p, double x);

enum class EquilibriumTag { X1, X2 };

struct Equilibria {
    double x1 = 0.0;           // trivial equilibrium, always present
    std::optional<double> x2;  // positive equilibrium, present iff (beta0/delta)(k-1) > 1
};

Equilibria equilibria(const Parameters& p);

// Largest delay for which the positive equilibrium exists:
// -(1/gamma) ln((1 + delta/beta0)/2). Absent when delta/beta0 >= 1
// (the formula value is <= 0 there, so no admissible delay remains).
std::optional<double> r_max(const Parameters& p);

// Delay at which the linearization slope B changes sign. Defined for n > 1,
// value -(1/gamma) ln((1/2)((delta/beta0) n/(n-1) + 1)); positive iff
// (n/(n-1)) delta < beta0.
std::optional<double> r_n(const Parameters& p);

// Coefficients of the linearization z' = -(delta + B) z + k B z(t - r),
// i.e. of the reduced characteristic equation lambda + p = q e^{-lambda r}.
struct ReducedCoeffs {
    EquilibriumTag tag;
    double A;  // (beta0/delta)(k-1); NaN for the x1 equilibrium
    double B;  // linearization slope: beta0 for x1, beta0 [n-(n-1)A]/A^2 for x2
    double p;  // delta + B
    double q;  // k B
};

// Throws std::domain_error when x2 coefficients are requested but x2 is absent.
ReducedCoeffs reduced_coeffs(const Parameters& p, EquilibriumTag which);

// Sign regions of B as the delay varies with all other constants fixed.
//   I:   n <= 1            -> B > 0 everywhere
//   II:  n > 1, (n/(n-1)) delta >= beta0 -> B > 0 on the admissible range
//   III: n > 1, (n/(n-1)) delta <  beta0 -> B < 0 for r < r_n, B > 0 for r_n < r < r_max
struct BSignRegion {
    enum class Region { I, II, III };
    Region region;
    std::optional<double> r_n;
    std::optional<double> r_max;
};

BSignRegion b_sign_region(const Parameters& p);

}  // namespace ddestab

#pragma once

#include <complex>

namespace ddestab {

// Independent verification engine for the reduced characteristic equation:
// right-half-plane root counting by the argument principle, and complex
// Newton refinement of individual roots. Deliberately shares no code with
// the classification in hayes.hpp so the two can cross-check each other.

// lambda + p - q e^{-lambda r}
std::complex<double> char_fn(double p, double q, double r, std::complex<double> lambda);

struct CharRoot {
    double mu;        // Re lambda
    double omega;     // Im lambda
    double residual;  // |char_fn| at the root
};

struct RhpRootCount {
    int count = 0;  // zeros with Re lambda > 0, with multiplicity; -1 when on_axis_root
    // contour rectangle actually used (after any dilation)
    double re_min = 0, re_max = 0, im_min = 0, im_max = 0;
    int samples_per_edge = 0;
    double winding_residual = 0;  // distance of the raw winding integral from an integer
    // a root persistently sits within 1e-8 of the contour after 5 dilations;
    // the count is unreliable and the parameters are marginal at the axis
    bool on_axis_root = false;
};

// Winding-number count over the rectangle [1e-9, M] x [-Omega, Omega] with
// M = Omega = |p| + |q| + 1 (any root with Re lambda >= 0 has
// |lambda| <= |p| + |q|). Edge sampling starts at 4096 and doubles until the
// winding residual drops to 0.25, capped at 2^20. The left edge sits 1e-9
// right of the imaginary axis, so exact axis roots are excluded by design.
RhpRootCount count_rhp_roots(double p, double q, double r, int initial_samples_per_edge = 4096);

struct RootRefinement {
    CharRoot root;  // last iterate when not converged
    bool converged;
    int iterations;
};

// Newton iteration on the analytic characteristic function from the given
// seed; converged means residual <= 1e-10 within 100 iterations. A derivative
// magnitude below 1e-14 aborts with the last iterate.
RootRefinement refine_root(double p, double q, double r, std::complex<double> seed);

struct RightmostRoot {
    CharRoot root;
    bool validated;          // sign of Re agrees with count_rhp_roots
    bool axis_indeterminate; // |Re| within the contour's axis margin; not checkable
};

// Root with maximal real part found by Newton from a seed grid over
// [-2(|p|+|q|), |p|+|q|+1] x [0, |p|+|q|+1] plus the seeds 0, -p and
// i omega0 (when defined). Roots are reported with omega >= 0 (conjugates
// carry no extra information). validated=false flags a mismatch with the
// contour count that needs manual inspection.
RightmostRoot rightmost_root(double p, double q, double r);

}  // namespace ddestab

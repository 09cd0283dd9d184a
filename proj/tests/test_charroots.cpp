#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "ddestab/charroots.hpp"
#include "ddestab/hayes.hpp"

using namespace ddestab;
using cplx = std::complex<double>;

TEST_CASE("char_fn anchors") {
    CHECK(std::abs(char_fn(1.5, 1.5, 2.0, {0, 0})) == 0.0);  // p = q: lambda = 0 is a root
    CHECK(std::abs(char_fn(0.7, 0.0, 1.0, {-0.7, 0})) == 0.0);
    const auto hopf = hopf_boundary_r(-1, -2);
    REQUIRE(hopf);
    CHECK(std::abs(char_fn(-1, -2, hopf->r_star, {0.0, hopf->omega_star})) <= 1e-10);
}

TEST_CASE("count_rhp_roots anchors") {
    CHECK(count_rhp_roots(1, 0, 1).count == 0);   // sole root at -1
    CHECK(count_rhp_roots(-1, 0, 1).count == 1);  // sole root at +1
    CHECK(count_rhp_roots(2, 1, 5).count == 0);   // stable case
    CHECK(count_rhp_roots(-1, -2, 0.8).count == 2);

    const RhpRootCount c = count_rhp_roots(-1, -2, 0.8);
    CHECK(c.winding_residual <= 0.25);
    CHECK(!c.on_axis_root);
    CHECK(c.re_min == doctest::Approx(1e-9));
    CHECK(c.re_max == doctest::Approx(1.0 + 2.0 + 1.0));
}

TEST_CASE("count is stable under sample refinement") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 30; ++i) {
        const double p = -4.0 + 8.0 * u(rng);
        const double q = -4.0 + 8.0 * u(rng);
        const double r = 0.2 + 4.0 * u(rng);
        const RhpRootCount coarse = count_rhp_roots(p, q, r);
        if (coarse.on_axis_root) continue;
        const RhpRootCount fine = count_rhp_roots(p, q, r, 2 * coarse.samples_per_edge);
        CHECK(coarse.count == fine.count);
    }
}

TEST_CASE("refine_root") {
    {
        const RootRefinement ref = refine_root(2.0, 2.0, 1.0, {0.1, 0.1});
        REQUIRE(ref.converged);
        CHECK(std::abs(cplx(ref.root.mu, ref.root.omega)) <= 1e-10);
    }
    {
        // linear case converges in one Newton step
        const RootRefinement ref = refine_root(0.5, 0.0, 1.0, {3.0, 2.0});
        REQUIRE(ref.converged);
        CHECK(ref.root.mu == doctest::Approx(-0.5).epsilon(1e-14));
        CHECK(std::abs(ref.root.omega) <= 1e-14);
    }
    {
        const auto hopf = hopf_boundary_r(-1, -2);
        REQUIRE(hopf);
        const RootRefinement ref =
            refine_root(-1, -2, hopf->r_star, {0.01, hopf->omega_star + 0.01});
        REQUIRE(ref.converged);
        CHECK(std::abs(ref.root.mu) <= 1e-8);
        CHECK(ref.root.omega == doctest::Approx(hopf->omega_star).epsilon(1e-8));
    }
    {
        // zero derivative at the seed: 1 + q r e^{-lambda r} = 0 at lambda = 0
        const RootRefinement ref = refine_root(0.0, -1.0, 1.0, {0.0, 0.0});
        CHECK(!ref.converged);
    }
}

TEST_CASE("roots satisfy the split real/imaginary system and conjugacy") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int found = 0;
    while (found < 50) {
        const double p = -3.0 + 6.0 * u(rng);
        const double q = -3.0 + 6.0 * u(rng);
        const double r = 0.2 + 3.0 * u(rng);
        const RootRefinement ref = refine_root(p, q, r, {u(rng) - 0.5, 3.0 * u(rng)});
        if (!ref.converged) continue;
        ++found;
        const double mu = ref.root.mu, w = ref.root.omega;
        const double em = std::exp(-mu * r);
        CHECK(std::abs(mu + p - q * em * std::cos(w * r)) <= 1e-9);
        CHECK(std::abs(w + q * em * std::sin(w * r)) <= 1e-9);
        CHECK(std::abs(char_fn(p, q, r, {mu, -w})) <= 1e-10);  // conjugate is a root too
    }
}

TEST_CASE("rightmost_root") {
    {
        // p = q > 0: the rightmost root is the zero crossing
        const RightmostRoot rm = rightmost_root(1.0, 1.0, 1.0);
        CHECK(std::abs(rm.root.mu) <= 1e-9);
        CHECK(rm.axis_indeterminate);
    }
    {
        const RightmostRoot rm = rightmost_root(2.0, 1.0, 5.0);
        CHECK(rm.root.mu < 0.0);
        CHECK(rm.validated);
    }
    {
        const auto hopf = hopf_boundary_r(-1, -2);
        REQUIRE(hopf);
        const RightmostRoot rm = rightmost_root(-1, -2, hopf->r_star);
        CHECK(std::abs(rm.root.mu) <= 1e-8);
        CHECK(rm.root.omega == doctest::Approx(hopf->omega_star).epsilon(1e-8));
    }
}

TEST_CASE("rightmost root respects the a priori modulus bound") {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 60; ++i) {
        const double p = -4.0 + 8.0 * u(rng);
        const double q = -4.0 + 8.0 * u(rng);
        const double r = 0.2 + 4.0 * u(rng);
        const RightmostRoot rm = rightmost_root(p, q, r);
        if (!std::isfinite(rm.root.mu)) continue;
        CHECK(rm.root.residual <= 1e-10);
        if (rm.root.mu >= 0.0)
            CHECK(std::hypot(rm.root.mu, rm.root.omega) <=
                  std::abs(p) + std::abs(q) + 1e-9);
    }
}

TEST_CASE("classification agrees with the contour oracle") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int checked = 0;
    for (int i = 0; i < 120; ++i) {
        const double p = -5.0 + 10.0 * u(rng);
        const double q = -5.0 + 10.0 * u(rng);
        const double r = 1e-3 + 5.0 * u(rng);
        const StabilityVerdict v = classify(p, q, r);
        if (std::abs(v.margin) <= 1e-8) continue;
        const RhpRootCount cnt = count_rhp_roots(p, q, r);
        if (cnt.on_axis_root) continue;
        ++checked;
        CHECK((v.status == Stability::Stable) == (cnt.count == 0));
    }
    CHECK(checked >= 100);
}

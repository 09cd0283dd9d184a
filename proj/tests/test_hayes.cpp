#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "ddestab/charroots.hpp"
#include "ddestab/hayes.hpp"
#include "ddestab/model.hpp"

using namespace ddestab;

namespace {

constexpr double kPi = std::numbers::pi;

// independent oracle: bisection on y cot y = v over a caller-supplied bracket
double ycoty_root(double v, double lo, double hi) {
    auto f = [](double y) { return y * std::cos(y) / std::sin(y); };
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        (f(mid) > v ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

const Parameters kSwitchFamily = Parameters::make(5, 2, 1, 0.05, 1.0);

}  // namespace

TEST_CASE("t_func anchors and domain") {
    CHECK(t_func(0.0) == 1.0);
    CHECK(t_func(kPi / 2) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(t_func(kPi / 4) == doctest::Approx(kPi / 4).epsilon(1e-15));
    CHECK_THROWS_AS(t_func(-1e-9), std::domain_error);
    CHECK_THROWS_AS(t_func(kPi), std::domain_error);
}

TEST_CASE("t_inv anchors") {
    CHECK(t_inv(1.0) == 0.0);
    CHECK(t_inv(0.0) == doctest::Approx(kPi / 2).epsilon(1e-13));
    CHECK(t_inv(-1.0) == doctest::Approx(2.0287578381104342).epsilon(1e-13));
    CHECK(t_inv(-1.0) == doctest::Approx(ycoty_root(-1.0, kPi / 2, kPi - 1e-6)).epsilon(1e-13));
    CHECK(t_inv(0.5) == doctest::Approx(ycoty_root(0.5, 1e-6, kPi / 2)).epsilon(1e-13));
    CHECK_THROWS_AS(t_inv(1.0 + 1e-12), std::domain_error);
}

TEST_CASE("t_inv round trip and monotonicity") {
    // relative round-trip accuracy; an absolute target is not representable
    // near the pole, where dT/dy ~ v^2 amplifies half an ulp of y
    for (int i = 0; i < 10000; ++i) {
        const double u = -12.0 + (std::log10(1e6 + 1.0) + 12.0) * i / 9999.0;
        const double v = 1.0 - std::pow(10.0, u);
        const double y = t_inv(v);
        CHECK(y >= 0.0);
        CHECK(y < kPi);
        CHECK(std::abs(t_func(y) - v) <= 1e-10 * std::max(1.0, std::abs(v)));
    }
    double prev = t_func(0.0);
    for (int i = 1; i < 10000; ++i) {
        const double y = (kPi - 1e-6) * i / 9999.0;
        const double cur = t_func(y);
        CHECK(cur < prev);
        prev = cur;
    }
}

TEST_CASE("omega0") {
    CHECK(omega0(0.0, 1.0) == doctest::Approx(kPi / 2).epsilon(1e-13));
    CHECK(omega0(1.0, 1.0) == doctest::Approx(2.0287578381104342).epsilon(1e-11));
    CHECK(omega0(-1.0, 0.5) == doctest::Approx(2.3311223704144226).epsilon(1e-11));
    CHECK_THROWS_AS(omega0(-2.1, 0.5), std::domain_error);  // p r = -1.05

    // defining equation and bracket placement
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 200; ++i) {
        const double r = 0.1 + 4.0 * u(rng);
        double p = -4.0 + 8.0 * u(rng);
        if (p * r < -0.999) p = -0.999 / r;
        const double w = omega0(p, r);
        CHECK(std::abs(w * std::cos(w * r) / std::sin(w * r) + p) <=
              1e-10 * std::max(1.0, std::abs(p)));
        if (p < 0.0) CHECK(w * r < kPi / 2);
        if (p > 0.0) {
            CHECK(w * r > kPi / 2);
            CHECK(w * r < kPi);
        }
    }
}

TEST_CASE("classify anchors") {
    {
        const StabilityVerdict v = classify(2, 1, 5);
        CHECK(v.status == Stability::Stable);
        CHECK(v.case_tag == StabilityCase::C);
    }
    {
        const StabilityVerdict v = classify(0, -1, 1);
        CHECK(v.status == Stability::Stable);  // |q| r = 1 < pi/2
        CHECK(v.case_tag == StabilityCase::PZero);
        REQUIRE(v.omega0);
        CHECK(*v.omega0 == doctest::Approx(kPi / 2).epsilon(1e-12));
    }
    {
        // example verdict cross-checked against the contour count
        const StabilityVerdict v = classify(-1, -2, 0.8);
        const RhpRootCount cnt = count_rhp_roots(-1, -2, 0.8);
        CHECK((v.status == Stability::Stable) == (cnt.count == 0));
        CHECK(cnt.count == 2);
    }
    {
        const StabilityVerdict v = classify(1.5, 0, 2);
        CHECK(v.status == Stability::Stable);
        CHECK(v.case_tag == StabilityCase::QZero);
        const StabilityVerdict w = classify(-0.5, 0, 2);
        CHECK(w.status == Stability::Unstable);
    }
}

TEST_CASE("classify boundaries") {
    // lambda = 0 crossing at q = p
    CHECK(classify(1, 1, 1).status == Stability::Marginal);
    CHECK(classify(0, 0, 1).status == Stability::Marginal);

    // r |p| = 1 endpoint with q < p < 0 is not stable
    {
        const StabilityVerdict v = classify(-0.5, -2.0, 2.0);  // p r = -1 exactly
        CHECK(v.status != Stability::Stable);
        CHECK(v.case_tag == StabilityCase::A);
        const StabilityVerdict w = classify(-0.5, -2.0, 2.0 + 1e-3);  // beyond the endpoint
        CHECK(w.status == Stability::Unstable);
    }
    // the measure-zero sub-case p = q = -1/r lands in the band
    {
        const StabilityVerdict v = classify(-0.5, -0.5, 2.0);
        CHECK(v.status == Stability::Marginal);
    }
    // marginal verdict on the crossing boundary carries the Hopf tag
    {
        const double p = 0.3, q = -1.1;
        const auto hopf = hopf_boundary_r(p, q);
        REQUIRE(hopf);
        const StabilityVerdict v = classify(p, q, hopf->r_star);
        CHECK(v.status == Stability::Marginal);
        CHECK(v.case_tag == StabilityCase::Hopf);
    }
    // purity: identical calls give identical results
    const StabilityVerdict a = classify(0.37, -1.21, 2.13), b = classify(0.37, -1.21, 2.13);
    CHECK(a.status == b.status);
    CHECK(a.margin == b.margin);
    CHECK(a.omega0.value() == b.omega0.value());
}

TEST_CASE("hopf_boundary_r") {
    {
        const auto h = hopf_boundary_r(0, -1);
        REQUIRE(h);
        CHECK(h->omega_star == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(h->r_star == doctest::Approx(kPi / 2).epsilon(1e-15));
        CHECK(h->residual <= 1e-10);
    }
    CHECK(!hopf_boundary_r(1.0, -0.5));  // |q| <= |p|
    CHECK(!hopf_boundary_r(0.5, 1.5));   // q > 0: no crossing with omega r in (0, pi)
    {
        const auto h = hopf_boundary_r(-1, -2);
        REQUIRE(h);
        CHECK(h->omega_star == doctest::Approx(std::sqrt(3.0)).epsilon(1e-15));
        CHECK(h->r_star == doctest::Approx(kPi / (3.0 * std::sqrt(3.0))).epsilon(1e-14));
        CHECK(h->residual <= 1e-10);
    }
}

TEST_CASE("hopf boundary consistency on random draws") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 100; ++i) {
        const double q = -(0.2 + 4.8 * u(rng));
        const double p = (2.0 * u(rng) - 1.0) * 0.95 * std::abs(q);
        const auto h = hopf_boundary_r(p, q);
        REQUIRE(h);
        CHECK(h->residual <= 1e-10);
        // crossing relations: the frequency equation and the modulus equation
        const double w = h->omega_star, r = h->r_star;
        CHECK(w * r > 0.0);
        CHECK(w * r < kPi);
        CHECK(std::abs(w * std::cos(w * r) / std::sin(w * r) + p) <= 1e-8 * std::max(1.0, std::abs(p)));
        CHECK(std::abs(w * w + p * p - q * q) <= 1e-10 * std::max(1.0, q * q));
        // and they reproduce the boundary delay through the T-inversion route
        CHECK(std::abs(omega0(p, r) - w) <= 1e-8 * std::max(1.0, w));
        // Newton refinement from the crossing seed stays on the axis
        const RootRefinement ref = refine_root(p, q, r, {0.0, w});
        REQUIRE(ref.converged);
        CHECK(std::abs(ref.root.mu) <= 1e-8);
    }
}

TEST_CASE("g_of_r and the switch locator") {
    // defined region: arccos argument inside [-1,1]
    CHECK_THROWS_AS(g_of_r(Parameters::make(3, 2, 1, 1, 0), 0.09), std::domain_error);
    // x2 absent
    CHECK_THROWS_AS(g_of_r(Parameters::make(3, 2, 1, 1, 0), 0.5), std::domain_error);

    const auto r_star = find_stability_switch(kSwitchFamily, 1.0, 2.5);
    REQUIRE(r_star);
    CHECK(std::abs(g_of_r(kSwitchFamily, *r_star)) <= 1e-9);

    // the located switch is a genuine axis crossing of the linearization
    const Parameters at = kSwitchFamily.with_r(*r_star);
    const ReducedCoeffs rc = reduced_coeffs(at, EquilibriumTag::X2);
    const RightmostRoot rm = rightmost_root(rc.p, rc.q, *r_star);
    CHECK(std::abs(rm.root.mu) <= 1e-8);

    // simultaneous solution of the fixed-(p,q) boundary with k(r): at r* the
    // two delays coincide
    const auto hopf = hopf_boundary_r(rc.p, rc.q);
    REQUIRE(hopf);
    CHECK(hopf->r_star == doctest::Approx(*r_star).epsilon(1e-8));

    // g's sign tracks the classification verdict through the defined region
    for (double r = 0.3; r < 2.6; r += 0.11) {
        double g;
        try {
            g = g_of_r(kSwitchFamily, r);
        } catch (const std::domain_error&) {
            continue;
        }
        const ReducedCoeffs c = reduced_coeffs(kSwitchFamily.with_r(r), EquilibriumTag::X2);
        const StabilityVerdict v = classify(c.p, c.q, r);
        if (std::abs(v.margin) <= 1e-8 || std::abs(g) <= 1e-8) continue;
        CHECK((g < 0.0) == (v.status == Stability::Stable));
    }

    // no sign change inside the stable band
    CHECK(!find_stability_switch(kSwitchFamily, 0.5, 1.0));
}

TEST_CASE("legacy boundary") {
    CHECK(!legacy_boundary_r(1.0, -0.5));
    CHECK(!legacy_boundary_r(0.5, 1.5));
    {
        const auto legacy = legacy_boundary_r(0, -1);
        REQUIRE(legacy);
        CHECK(*legacy == doctest::Approx(kPi / 2).epsilon(1e-15));  // coincides with the correct bound
    }
    {
        // at an exact crossing the legacy expression reproduces r*
        const auto h = hopf_boundary_r(-1, -2);
        const auto legacy = legacy_boundary_r(-1, -2);
        REQUIRE(h);
        REQUIRE(legacy);
        CHECK(*legacy == doctest::Approx(h->r_star).epsilon(1e-14));
    }
    {
        // away from the crossing the two bounds disagree because the true
        // crossing frequency depends on r
        const double p = 0.5, q = -1.0;
        const auto legacy = legacy_boundary_r(p, q);
        REQUIRE(legacy);
        for (double r : {0.4, 0.9, 1.3}) {
            const double correct = std::acos(p / q) / omega0(p, r);
            if (std::abs(r - correct) < 1e-6) continue;  // not at the self-consistent point
            CHECK(std::abs(correct - *legacy) > 1e-3);
        }
    }
}

#include "ddestab/model.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace ddestab {

Parameters Parameters::make(double beta0, double n, double delta, double gamma, double r) {
    auto positive = [](double v, const char* name) {
        if (!(std::isfinite(v) && v > 0.0))
            throw std::domain_error(std::string(name) + " must be a positive finite number");
    };
    positive(beta0, "beta0");
    positive(n, "n");
    positive(delta, "delta");
    positive(gamma, "gamma");
    if (!(std::isfinite(r) && r >= 0.0))
        throw std::domain_error("r must be a nonnegative finite number");
    return Parameters{beta0, n, delta, gamma, r};
}

Parameters Parameters::with_r(double new_r) const {
    return Parameters::make(beta0, n, delta, gamma, new_r);
}

double derive_k(const Parameters& p) {
    return 2.0 * std::exp(-p.gamma * p.r);
}

double hill_beta(const Parameters& p, double x) {
    return p.beta0 / (1.0 + std::pow(x, p.n));
}

Equilibria equilibria(const Parameters& p) {
    Equilibria eq;
    const double a = (p.beta0 / p.delta) * (derive_k(p) - 1.0) - 1.0;
    if (a > 0.0) eq.x2 = std::pow(a, 1.0 / p.n);
    return eq;
}

std::optional<double> r_max(const Parameters& p) {
    const double ratio = p.delta / p.beta0;
    if (ratio >= 1.0) return std::nullopt;
    return -(1.0 / p.gamma) * std::log(0.5 * (1.0 + ratio));
}

std::optional<double> r_n(const Parameters& p) {
    if (p.n <= 1.0) return std::nullopt;
    const double s = (p.delta / p.beta0) * (p.n / (p.n - 1.0));
    return -(1.0 / p.gamma) * std::log(0.5 * (s + 1.0));
}

ReducedCoeffs reduced_coeffs(const Parameters& p, EquilibriumTag which) {
    const double k = derive_k(p);
    if (which == EquilibriumTag::X1) {
        const double b = p.beta0;
        return ReducedCoeffs{which, std::numeric_limits<double>::quiet_NaN(), b,
                             p.delta + b, k * b};
    }
    const double a = (p.beta0 / p.delta) * (k - 1.0);
    if (!(a > 1.0))
        throw std::domain_error("reduced_coeffs: positive equilibrium absent for these parameters");
    const double b = p.beta0 * (p.n - (p.n - 1.0) * a) / (a * a);
    return ReducedCoeffs{which, a, b, p.delta + b, k * b};
}

BSignRegion b_sign_region(const Parameters& p) {
    BSignRegion out;
    out.r_n = r_n(p);
    out.r_max = r_max(p);
    if (p.n <= 1.0) {
        // at n = 1 the (n-1)A term vanishes and B = beta0/A^2 > 0, so region I applies
        out.region = BSignRegion::Region::I;
        out.r_n.reset();
    } else if ((p.n / (p.n - 1.0)) * p.delta >= p.beta0) {
        out.region = BSignRegion::Region::II;
    } else {
        out.region = BSignRegion::Region::III;
    }
    return out;
}

}  // namespace ddestab

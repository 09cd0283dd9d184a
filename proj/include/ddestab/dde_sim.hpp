#pragma once

#include <optional>
#include <vector>

#include "ddestab/model.hpp"

namespace ddestab {

// Initial history on [-r, 0]. Constant and PerturbedEquilibrium evaluate
// anywhere on the negative axis; Sampled interpolates its data with a
// monotone piecewise cubic (no overshoot, so nonnegative samples give a
// nonnegative history).
class History {
  public:
    enum class Kind { Constant, PerturbedEquilibrium, Sampled };

    static History constant(double level);
    // level = x* + amplitude; throws std::domain_error when x2 is requested but absent
    static History perturbed_equilibrium(const Parameters& params, EquilibriumTag which,
                                         double amplitude);
    // times strictly increasing, last one 0; at least two points
    static History sampled(std::vector<double> times, std::vector<double> values);

    double operator()(double s) const;
    double min_value() const;  // infimum over the covered range
    Kind kind() const { return kind_; }
    double earliest_time() const;  // -inf for constant kinds

  private:
    History() = default;
    Kind kind_ = Kind::Constant;
    double level_ = 0.0;
    std::vector<double> times_, values_, slopes_;
};

struct PositivityCertificate {
    double min_value;
    double min_time;
    bool passed;  // min_value >= -1e-12
};

struct BoundednessCertificate {
    double epsilon;
    double eta;            // 2 delta - epsilon k beta0, positive by construction
    double max_violation;  // max over nodes of x^2(t) - bound(t)
    bool passed;           // max_violation <= 1e-9 * (1 + bound(0))
};

// Method-of-steps trajectory with cubic Hermite dense output. Node values
// and derivatives are stored; eval() is continuous and matches them exactly.
struct Trajectory {
    Parameters params{};
    double k = 0.0;
    double h = 0.0;
    int steps_per_delay = 0;
    std::vector<double> values;  // x at nodes i h, i = 0..N
    std::vector<double> derivs;  // x' at the same nodes
    History history = History::constant(0.0);
    bool failed = false;     // non-finite value encountered; trajectory truncated
    int failed_at_step = -1;

    std::optional<PositivityCertificate> positivity;
    std::optional<BoundednessCertificate> boundedness;

    double t_end() const { return h * static_cast<double>(values.size() - 1); }
    // dense output; history for t <= 0
    double eval(double t) const;
};

// Right-hand side of the model at (x(t), x(t-r)). Values are used as-is;
// callers are responsible for keeping states in the nonnegative domain.
double step_rhs(const Parameters& params, double x_now, double x_delayed);

// Classical RK4 advanced in steps of h with r/h an integer, so every delayed
// argument lands on stored dense output (or on the exact history during the
// first delay interval). Requires r > 0, t_end >= r; h is rejected with the
// nearest admissible value suggested when r/h is not an integer. Certificates
// are populated for nonnegative histories.
Trajectory integrate(const Parameters& params, const History& history, double t_end, double h);

// Refuses (std::domain_error) when the history is negative anywhere.
// Scans the dense output at 10 points per step.
PositivityCertificate certify_positivity(const Trajectory& traj);

// Checks x^2(t) <= phi^2(0) e^{-eta t} + k beta0/(epsilon eta) at every node,
// eta = 2 delta - epsilon k beta0. Requires 0 < epsilon < 2 delta/(k beta0).
BoundednessCertificate certify_boundedness(const Trajectory& traj, double epsilon);
// Default epsilon = delta/(k beta0), the midpoint choice giving eta = delta.
BoundednessCertificate certify_boundedness(const Trajectory& traj);

struct AsymptoticReport {
    enum class Kind { ConvergedTo, SustainedOscillation, GrowingOrUndecided };
    Kind kind;
    EquilibriumTag equilibrium = EquilibriumTag::X1;  // valid for ConvergedTo
    double final_gap = 0.0;                           // max deviation over the window
    double amplitude = 0.0;                           // (max - min)/2 over the window
    double period_estimate = 0.0;                     // mean peak spacing
    double transient_cut = 0.0;
};

// Trailing-window classification: ConvergedTo when the window stays within
// tol of an equilibrium; SustainedOscillation when the window amplitude
// exceeds 10 tol and successive maxima agree within 5%; else undecided.
AsymptoticReport classify_asymptotics(const Trajectory& traj, const Equilibria& eq,
                                      double window, double tol);
// Defaults: window = t_end/2, tol = 1e-6 (1 + x2) (or 1e-6 when x2 absent).
AsymptoticReport classify_asymptotics(const Trajectory& traj, const Equilibria& eq);

}  // namespace ddestab

#include "ddestab/cli.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <optional>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "ddestab/charroots.hpp"
#include "ddestab/config.hpp"
#include "ddestab/dde_sim.hpp"
#include "ddestab/hayes.hpp"
#include "ddestab/lyapunov.hpp"
#include "ddestab/model.hpp"

namespace ddestab {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitEmptyDomain = 3;
constexpr int kExitCertificate = 4;

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// Deterministic order-preserving parallel map over [0, n).
void parallel_for(int n, const std::function<void(int)>& body) {
    const unsigned workers =
        std::min(8u, std::max(1u, std::thread::hardware_concurrency()));
    if (workers == 1 || n < 4) {
        for (int i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) body(i);
        });
    for (auto& t : pool) t.join();
}

std::optional<Parameters> load_config_or_report(const std::string& path, std::ostream& err) {
    const ConfigResult cfg = load_parameters_file(path);
    if (cfg.ok()) return cfg.params;
    for (const auto& e : cfg.errors) {
        err << path << ":";
        if (e.line > 0) err << e.line << ":";
        err << " " << e.message << "\n";
    }
    return std::nullopt;
}

Parameters apply_param(const Parameters& base, const std::string& name, double value) {
    double beta0 = base.beta0, n = base.n, delta = base.delta, gamma = base.gamma, r = base.r;
    if (name == "r")
        r = value;
    else if (name == "beta0")
        beta0 = value;
    else if (name == "delta")
        delta = value;
    else if (name == "gamma")
        gamma = value;
    else if (name == "n")
        n = value;
    else
        throw std::domain_error("unknown sweep parameter '" + name + "'");
    return Parameters::make(beta0, n, delta, gamma, r);
}

// One sweep/analysis record for the positive equilibrium at a grid point.
struct Record {
    bool admissible = false;  // x2 exists and classify applies (r > 0)
    double param_value = kNan;
    double param2_value = kNan;
    double x2 = kNan;
    ReducedCoeffs rc{};
    StabilityVerdict verdict{};
    std::optional<int> rhp_count;
    std::optional<double> g_value;
};

Record make_record(const Parameters& params, double band, bool verify) {
    Record rec;
    rec.param_value = kNan;
    const Equilibria eq = equilibria(params);
    if (!eq.x2 || !(params.r > 0.0)) return rec;
    rec.admissible = true;
    rec.x2 = *eq.x2;
    rec.rc = reduced_coeffs(params, EquilibriumTag::X2);
    rec.verdict = classify(rec.rc.p, rec.rc.q, params.r, band);
    if (verify) rec.rhp_count = count_rhp_roots(rec.rc.p, rec.rc.q, params.r).count;
    try {
        rec.g_value = g_of_r(params, params.r);
    } catch (const std::domain_error&) {
    }
    return rec;
}

std::string record_row(const Record& rec, bool verify, bool two_d) {
    std::ostringstream row;
    row << fmt17(rec.param_value);
    if (two_d) row << "," << fmt17(rec.param2_value);
    row << "," << fmt17(rec.x2) << "," << fmt17(rec.rc.A) << "," << fmt17(rec.rc.B) << ","
        << fmt17(rec.rc.p) << "," << fmt17(rec.rc.q) << "," << to_string(rec.verdict.status)
        << "," << to_string(rec.verdict.case_tag) << "," << fmt17(rec.verdict.margin) << ","
        << fmt17(rec.verdict.omega0 ? *rec.verdict.omega0 : kNan) << ",";
    if (verify && rec.rhp_count) row << *rec.rhp_count;
    return row.str();
}

std::ostream* open_sink(const std::string& path, std::ofstream& file, std::ostream& fallback,
                        std::ostream& err) {
    if (path.empty()) return &fallback;
    file.open(path);
    if (!file) {
        err << "cannot open output file '" << path << "'\n";
        return nullptr;
    }
    return &file;
}

// ----------------------------------------------------------------- analyze

int cmd_analyze(const std::string& config_path, bool verify, double band, std::ostream& out,
                std::ostream& err) {
    const auto params = load_config_or_report(config_path, err);
    if (!params) return kExitConfig;

    const double k = derive_k(*params);
    out << "parameters: beta0=" << fmt17(params->beta0) << " n=" << fmt17(params->n)
        << " delta=" << fmt17(params->delta) << " gamma=" << fmt17(params->gamma)
        << " r=" << fmt17(params->r) << " k=" << fmt17(k) << "\n";

    const Equilibria eq = equilibria(*params);
    out << "equilibria: x1=0";
    if (eq.x2)
        out << " x2=" << fmt17(*eq.x2);
    else
        out << " x2=absent ((beta0/delta)(k-1)-1 = "
            << fmt17((params->beta0 / params->delta) * (k - 1.0) - 1.0) << " <= 0)";
    out << "\n";

    const auto rmax = r_max(*params);
    const auto rn = r_n(*params);
    out << "r_max=" << (rmax ? fmt17(*rmax) : "absent") << " r_n=" << (rn ? fmt17(*rn) : "absent");
    const BSignRegion region = b_sign_region(*params);
    out << " B-sign-region="
        << (region.region == BSignRegion::Region::I
                ? "I"
                : region.region == BSignRegion::Region::II ? "II" : "III")
        << "\n";

    if (!(params->r > 0.0)) {
        out << "r=0: no delay dynamics to classify\n";
        return kExitOk;
    }

    auto report_equilibrium = [&](EquilibriumTag tag, const char* name) {
        const ReducedCoeffs rc = reduced_coeffs(*params, tag);
        const StabilityVerdict v = classify(rc.p, rc.q, params->r, band);
        out << name << ": ";
        if (tag == EquilibriumTag::X2) out << "A=" << fmt17(rc.A) << " ";
        out << "B=" << fmt17(rc.B) << " p=" << fmt17(rc.p) << " q=" << fmt17(rc.q)
            << " verdict=" << to_string(v.status) << " case=" << to_string(v.case_tag)
            << " margin=" << fmt17(v.margin);
        if (v.omega0) out << " omega0=" << fmt17(*v.omega0);
        out << "\n";
        if (tag == EquilibriumTag::X1 && v.status == Stability::Marginal)
            out << "  note: zero-equilibrium boundary case (k beta0 = delta + beta0); the "
                   "linearization is inconclusive here -- run 'verify-critical' on this "
                   "config\n";
        if (verify) {
            const RhpRootCount cnt = count_rhp_roots(rc.p, rc.q, params->r);
            const RightmostRoot rm = rightmost_root(rc.p, rc.q, params->r);
            out << "  rhp_count=" << cnt.count
                << " (samples_per_edge=" << cnt.samples_per_edge
                << " winding_residual=" << fmt17(cnt.winding_residual)
                << (cnt.on_axis_root ? " on-axis-root" : "") << ")\n";
            out << "  rightmost: mu=" << fmt17(rm.root.mu) << " omega=" << fmt17(rm.root.omega)
                << " residual=" << fmt17(rm.root.residual)
                << (rm.axis_indeterminate ? " axis-indeterminate"
                                          : (rm.validated ? " validated" : " MISMATCH"))
                << "\n";
        }
        return rc;
    };

    report_equilibrium(EquilibriumTag::X1, "x1");
    if (eq.x2) {
        const ReducedCoeffs rc = report_equilibrium(EquilibriumTag::X2, "x2");
        if (const auto hopf = hopf_boundary_r(rc.p, rc.q))
            out << "hopf (fixed p,q): r*=" << fmt17(hopf->r_star)
                << " omega*=" << fmt17(hopf->omega_star)
                << " residual=" << fmt17(hopf->residual) << "\n";
        else
            out << "hopf (fixed p,q): none (requires q < 0 and |q| > |p|)\n";

        Record rec = make_record(*params, band, false);
        rec.param_value = params->r;
        out << "csv: " << record_row(rec, false, false) << "\n";
    }
    return kExitOk;
}

// ------------------------------------------------------------------- sweep

struct Axis {
    std::string name;
    double from = 0, to = 0;
    int steps = 0;
    double at(int i) const {
        return steps == 1 ? from : from + (to - from) * static_cast<double>(i) / (steps - 1);
    }
};

int cmd_sweep(const std::string& config_path, const Axis& axis, std::optional<Axis> axis2,
              bool verify, double band, const std::string& out_path, std::ostream& out,
              std::ostream& err) {
    const auto base = load_config_or_report(config_path, err);
    if (!base) return kExitConfig;

    auto validate_axis = [&](const Axis& a) -> bool {
        const double lo = std::min(a.from, a.to);
        if (a.steps < 1) {
            err << "sweep: --steps must be >= 1\n";
            return false;
        }
        if (!(lo > 0.0)) {
            err << "sweep: range for '" << a.name << "' must be positive\n";
            return false;
        }
        return true;
    };
    if (!validate_axis(axis) || (axis2 && !validate_axis(*axis2))) return kExitConfig;

    std::ofstream file;
    std::ostream* sink = open_sink(out_path, file, out, err);
    if (!sink) return kExitConfig;

    const int n1 = axis.steps;
    const int n2 = axis2 ? axis2->steps : 1;
    std::vector<Record> records(static_cast<std::size_t>(n1) * n2);
    std::atomic<bool> bad_point{false};
    parallel_for(n1 * n2, [&](int idx) {
        const int i = idx / n2, j = idx % n2;
        try {
            Parameters p = apply_param(*base, axis.name, axis.at(i));
            if (axis2) p = apply_param(p, axis2->name, axis2->at(j));
            records[idx] = make_record(p, band, verify);
            records[idx].param_value = axis.at(i);
            if (axis2) records[idx].param2_value = axis2->at(j);
        } catch (const std::exception&) {
            bad_point = true;
        }
    });
    if (bad_point) {
        err << "sweep: a grid point produced invalid parameters\n";
        return kExitConfig;
    }

    *sink << "param" << (axis2 ? ",param2" : "") << ",x2,A,B,p,q,verdict,case,margin,omega0,rhp_count\n";
    int emitted = 0;
    for (const Record& rec : records)
        if (rec.admissible) {
            *sink << record_row(rec, verify, axis2.has_value()) << "\n";
            ++emitted;
        }
    if (emitted == 0) {
        err << "sweep: no grid point admits the positive equilibrium\n";
        return kExitEmptyDomain;
    }

    if (!axis2) {
        // stability switches: refine every verdict change between adjacent
        // admissible grid points by bisection on the classification margin
        auto margin_at = [&](double v) {
            const Parameters p = apply_param(*base, axis.name, v);
            const ReducedCoeffs rc = reduced_coeffs(p, EquilibriumTag::X2);
            return classify(rc.p, rc.q, p.r, band).margin;
        };
        for (int i = 0; i + 1 < n1; ++i) {
            const Record &a = records[i], &b = records[i + 1];
            if (!a.admissible || !b.admissible) continue;
            if (a.verdict.status == b.verdict.status) continue;
            double lo = axis.at(i), hi = axis.at(i + 1);
            try {
                double mlo = margin_at(lo);
                for (int it = 0; it < 200 && hi - lo > 1e-10; ++it) {
                    const double mid = 0.5 * (lo + hi);
                    const double mm = margin_at(mid);
                    if ((mlo < 0.0) == (mm < 0.0)) {
                        lo = mid;
                        mlo = mm;
                    } else {
                        hi = mid;
                    }
                }
                *sink << "# switch " << axis.name << "=" << fmt17(0.5 * (lo + hi)) << " ("
                      << to_string(a.verdict.status) << " -> " << to_string(b.verdict.status)
                      << ")\n";
            } catch (const std::exception&) {
                *sink << "# switch near " << axis.name << "=" << fmt17(0.5 * (lo + hi))
                      << " (unrefined)\n";
            }
        }
    }
    return kExitOk;
}

// ---------------------------------------------------------------- simulate

std::optional<History> parse_history_spec(const std::string& spec, const Parameters& params,
                                          std::ostream& err) {
    auto fail = [&](const std::string& msg) -> std::optional<History> {
        err << "simulate: " << msg << "\n";
        return std::nullopt;
    };
    try {
        if (spec.rfind("const:", 0) == 0) {
            const double level = std::stod(spec.substr(6));
            if (level < 0.0) return fail("history must be nonnegative");
            return History::constant(level);
        }
        if (spec.rfind("perturb:", 0) == 0) {
            const std::string rest = spec.substr(8);
            const auto colon = rest.find(':');
            if (colon == std::string::npos) return fail("expected perturb:{x1|x2}:AMPLITUDE");
            const std::string which = rest.substr(0, colon);
            const double amp = std::stod(rest.substr(colon + 1));
            if (which != "x1" && which != "x2") return fail("expected perturb:{x1|x2}:AMPLITUDE");
            const History h = History::perturbed_equilibrium(
                params, which == "x1" ? EquilibriumTag::X1 : EquilibriumTag::X2, amp);
            if (h.min_value() < 0.0) return fail("history must be nonnegative");
            return h;
        }
        if (spec.rfind("file:", 0) == 0) {
            const std::string path = spec.substr(5);
            std::ifstream in(path);
            if (!in) return fail("cannot open history file '" + path + "'");
            std::vector<double> times, values;
            std::string line;
            int lineno = 0;
            while (std::getline(in, line)) {
                ++lineno;
                if (auto hash = line.find('#'); hash != std::string::npos)
                    line = line.substr(0, hash);
                for (char& c : line)
                    if (c == ',') c = ' ';
                std::istringstream row(line);
                double s, x;
                if (!(row >> s)) continue;
                if (!(row >> x))
                    return fail(path + ":" + std::to_string(lineno) + ": expected 's,x'");
                times.push_back(s);
                values.push_back(x);
            }
            if (times.size() < 2) return fail("history file needs at least two samples");
            if (*std::min_element(values.begin(), values.end()) < 0.0)
                return fail("history must be nonnegative");
            if (times.front() > -params.r + 1e-9)
                return fail("history samples must start at -r");
            return History::sampled(std::move(times), std::move(values));
        }
    } catch (const std::exception& e) {
        return fail(e.what());
    }
    return fail("unknown history spec '" + spec + "' (const:L, perturb:x1:A, perturb:x2:A, file:P)");
}

int cmd_simulate(const std::string& config_path, const std::string& history_spec, double t_end,
                 double h, const std::string& out_path, double dense_dt, double window,
                 double tol, std::ostream& out, std::ostream& err) {
    const auto params = load_config_or_report(config_path, err);
    if (!params) return kExitConfig;
    if (!(params->r > 0.0)) {
        err << "simulate: config must have r > 0\n";
        return kExitConfig;
    }
    if (std::isnan(t_end)) t_end = 60.0 * params->r;
    if (std::isnan(h)) h = params->r / 64.0;

    const auto history = parse_history_spec(history_spec, *params, err);
    if (!history) return kExitConfig;

    Trajectory traj;
    try {
        traj = integrate(*params, *history, t_end, h);
    } catch (const std::domain_error& e) {
        err << "simulate: " << e.what() << "\n";
        return kExitConfig;
    }

    std::ofstream file;
    std::ostream* sink = open_sink(out_path, file, out, err);
    if (!sink) return kExitConfig;
    *sink << "t,x\n";
    if (dense_dt > 0.0) {
        for (double t = 0.0; t <= traj.t_end() + 1e-12; t += dense_dt)
            *sink << fmt17(t) << "," << fmt17(traj.eval(std::min(t, traj.t_end()))) << "\n";
    } else {
        for (std::size_t i = 0; i < traj.values.size(); ++i)
            *sink << fmt17(static_cast<double>(i) * traj.h) << "," << fmt17(traj.values[i])
                  << "\n";
    }

    if (traj.failed) {
        out << "integration: FAILED (non-finite value at step " << traj.failed_at_step
            << ", t=" << fmt17(traj.failed_at_step * traj.h) << "); trajectory truncated\n";
        return kExitCertificate;
    }

    bool cert_ok = true;
    if (traj.positivity) {
        out << "positivity: " << (traj.positivity->passed ? "PASS" : "FAIL")
            << " min=" << fmt17(traj.positivity->min_value)
            << " at t=" << fmt17(traj.positivity->min_time) << "\n";
        cert_ok = cert_ok && traj.positivity->passed;
    }
    if (traj.boundedness) {
        out << "boundedness: " << (traj.boundedness->passed ? "PASS" : "FAIL")
            << " epsilon=" << fmt17(traj.boundedness->epsilon)
            << " eta=" << fmt17(traj.boundedness->eta)
            << " max_violation=" << fmt17(traj.boundedness->max_violation) << "\n";
        cert_ok = cert_ok && traj.boundedness->passed;
    }

    const Equilibria eq = equilibria(*params);
    const AsymptoticReport rep = (window > 0.0 && tol > 0.0)
                                     ? classify_asymptotics(traj, eq, window, tol)
                                     : classify_asymptotics(traj, eq);
    switch (rep.kind) {
        case AsymptoticReport::Kind::ConvergedTo:
            out << "asymptotics: ConvergedTo "
                << (rep.equilibrium == EquilibriumTag::X1 ? "x1" : "x2")
                << " final_gap=" << fmt17(rep.final_gap) << "\n";
            break;
        case AsymptoticReport::Kind::SustainedOscillation:
            out << "asymptotics: SustainedOscillation amplitude=" << fmt17(rep.amplitude)
                << " period=" << fmt17(rep.period_estimate) << "\n";
            break;
        case AsymptoticReport::Kind::GrowingOrUndecided:
            out << "asymptotics: GrowingOrUndecided\n";
            break;
    }
    return cert_ok ? kExitOk : kExitCertificate;
}

// -------------------------------------------------------------- legacy-diff

int cmd_legacy_diff(const std::string& config_path, double from, double to, int steps,
                    const std::string& out_path, std::ostream& out, std::ostream& err) {
    const auto base = load_config_or_report(config_path, err);
    if (!base) return kExitConfig;
    if (!(from > 0.0) || !(to > from) || steps < 2) {
        err << "legacy-diff: need 0 < --from < --to and --steps >= 2\n";
        return kExitConfig;
    }

    struct Row {
        bool present = false;
        double r = 0, x2 = 0;
        ReducedCoeffs rc{};
        double correct = kNan, legacy = kNan, gap = kNan;
        int rhp = 0;
        StabilityVerdict verdict{};
    };
    std::vector<Row> rows(steps);
    parallel_for(steps, [&](int i) {
        Row& row = rows[i];
        row.r = from + (to - from) * static_cast<double>(i) / (steps - 1);
        const Parameters p = base->with_r(row.r);
        const Equilibria eq = equilibria(p);
        if (!eq.x2) return;
        row.present = true;
        row.x2 = *eq.x2;
        row.rc = reduced_coeffs(p, EquilibriumTag::X2);
        row.verdict = classify(row.rc.p, row.rc.q, row.r);
        row.rhp = count_rhp_roots(row.rc.p, row.rc.q, row.r).count;
        if (const auto legacy = legacy_boundary_r(row.rc.p, row.rc.q)) {
            row.legacy = *legacy;
            row.correct = std::acos(row.rc.p / row.rc.q) / omega0(row.rc.p, row.r);
            row.gap = std::abs(row.correct - row.legacy) /
                      std::max(std::abs(row.correct), std::abs(row.legacy));
        }
    });

    std::ofstream file;
    std::ostream* sink = open_sink(out_path, file, out, err);
    if (!sink) return kExitConfig;

    *sink << "r,x2,B,p,q,correct_bound,legacy_bound,rel_gap,rhp_count,verdict\n";
    int emitted = 0, defined = 0, mismatches = 0, checked = 0;
    double max_gap = -1.0, max_gap_r = kNan;
    for (const Row& row : rows) {
        if (!row.present) continue;
        ++emitted;
        *sink << fmt17(row.r) << "," << fmt17(row.x2) << "," << fmt17(row.rc.B) << ","
              << fmt17(row.rc.p) << "," << fmt17(row.rc.q) << "," << fmt17(row.correct) << ","
              << fmt17(row.legacy) << "," << fmt17(row.gap) << "," << row.rhp << ","
              << to_string(row.verdict.status) << "\n";
        if (!std::isnan(row.gap)) {
            ++defined;
            if (row.gap > max_gap) {
                max_gap = row.gap;
                max_gap_r = row.r;
            }
        }
        if (std::abs(row.verdict.margin) > 1e-8 && row.rhp >= 0) {
            ++checked;
            if ((row.verdict.status == Stability::Stable) != (row.rhp == 0)) ++mismatches;
        }
    }
    if (emitted == 0) {
        err << "legacy-diff: no r in range admits the positive equilibrium\n";
        return kExitEmptyDomain;
    }

    *sink << "# rows=" << emitted << " defined_boundary_rows=" << defined << "\n";
    if (defined > 0)
        *sink << "# max_rel_gap=" << fmt17(max_gap) << " at r=" << fmt17(max_gap_r) << "\n";
    const auto r_star = find_stability_switch(*base, from, to);
    if (r_star) {
        const Parameters at = base->with_r(*r_star);
        const ReducedCoeffs rc = reduced_coeffs(at, EquilibriumTag::X2);
        const double correct = std::acos(rc.p / rc.q) / omega0(rc.p, *r_star);
        const auto legacy = legacy_boundary_r(rc.p, rc.q);
        *sink << "# hopf r*=" << fmt17(*r_star) << " correct=" << fmt17(correct)
              << " legacy=" << fmt17(legacy ? *legacy : kNan)
              << " abs_gap=" << fmt17(legacy ? std::abs(correct - *legacy) : kNan) << "\n";
    } else {
        *sink << "# hopf: none found in range\n";
    }
    *sink << "# verdict_oracle_mismatches=" << mismatches << " of " << checked << " checked\n";
    return kExitOk;
}

// ---------------------------------------------------------- verify-critical

int cmd_verify_critical(const std::string& config_path, int draws, std::uint64_t seed,
                        std::ostream& out, std::ostream& err) {
    const auto params = load_config_or_report(config_path, err);
    if (!params) return kExitConfig;
    const double kb0 = derive_k(*params) * params->beta0;
    if (std::abs(kb0 - (params->delta + params->beta0)) > 1e-12) {
        err << "verify-critical: parameters are off the critical manifold "
               "(k beta0 - (delta + beta0) = "
            << fmt17(kb0 - (params->delta + params->beta0)) << ")";
        if (const auto rc = r_max(*params)) err << "; set r=" << fmt17(*rc);
        err << "\n";
        return kExitConfig;
    }
    const CriticalStabilityReport rep = verify_critical_stability(*params, draws, seed);
    out << "verify-critical: draws=" << rep.draws << " seed=" << rep.seed
        << " max_step_drift=" << fmt17(rep.max_step_drift)
        << " max_bound_excess=" << fmt17(rep.max_bound_excess)
        << " failures=" << rep.failures << " -> " << (rep.all_passed ? "PASS" : "FAIL") << "\n";
    return rep.all_passed ? kExitOk : kExitCertificate;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Stability analysis of a delayed cell-density model"};
    app.set_help_flag("--help", "print help");  // frees -h/--h for the step size
    app.require_subcommand(1);

    std::string config_path;
    bool verify = false;
    double band = kDefaultMarginalBand;

    auto* analyze = app.add_subcommand("analyze", "single-point stability report");
    analyze->add_option("config", config_path, "key=value parameter file")->required();
    analyze->add_flag("--verify", verify, "run the root-count verification");
    analyze->add_option("--band", band, "marginal band for verdicts");

    Axis axis, axis2_storage;
    bool has_axis2 = false;
    std::string out_path;
    auto* sweep = app.add_subcommand("sweep", "1-D or 2-D parameter sweep, CSV output");
    sweep->add_option("config", config_path)->required();
    sweep->add_option("--param", axis.name, "one of r, beta0, delta, gamma, n")->required();
    sweep->add_option("--from", axis.from)->required();
    sweep->add_option("--to", axis.to)->required();
    sweep->add_option("--steps", axis.steps)->required();
    auto* p2 = sweep->add_option("--param2", axis2_storage.name, "second sweep axis");
    sweep->add_option("--from2", axis2_storage.from)->needs(p2);
    sweep->add_option("--to2", axis2_storage.to)->needs(p2);
    sweep->add_option("--steps2", axis2_storage.steps)->needs(p2);
    sweep->add_flag("--verify", verify);
    sweep->add_option("--band", band);
    sweep->add_option("--out", out_path, "CSV path (stdout when omitted)");

    std::string history_spec;
    double t_end = kNan, h = kNan, dense_dt = 0.0, window = 0.0, tol = 0.0;
    auto* simulate = app.add_subcommand("simulate", "nonlinear run with certificates");
    simulate->set_help_flag("--help", "print help");
    simulate->add_option("config", config_path)->required();
    simulate->add_option("--history", history_spec, "const:L | perturb:{x1|x2}:A | file:PATH")
        ->required();
    simulate->add_option("--t-end", t_end, "default 60 r");
    simulate->add_option("--h", h, "step; r/h must be an integer (default r/64)");
    simulate->add_option("--out", out_path, "trajectory CSV path")->required();
    simulate->add_option("--dense-dt", dense_dt, "resample dense output at this spacing");
    simulate->add_option("--window", window, "asymptotics window (default t_end/2)");
    simulate->add_option("--tol", tol, "asymptotics tolerance (default 1e-6 (1+x2))");

    double from = 0.0, to = 0.0;
    int steps = 0;
    auto* legacy = app.add_subcommand("legacy-diff", "correct vs legacy stability bounds over r");
    legacy->add_option("config", config_path)->required();
    legacy->add_option("--from", from)->required();
    legacy->add_option("--to", to)->required();
    legacy->add_option("--steps", steps)->required();
    legacy->add_option("--out", out_path);

    int draws = 50;
    std::uint64_t seed = 20240611;
    auto* critical = app.add_subcommand("verify-critical", "functional check on the critical set");
    critical->add_option("config", config_path)->required();
    critical->add_option("--draws", draws);
    critical->add_option("--seed", seed);

    std::vector<const char*> argv;
    argv.push_back("ddestab");
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n";
        return kExitConfig;
    }

    try {
        if (analyze->parsed()) return cmd_analyze(config_path, verify, band, out, err);
        if (sweep->parsed()) {
            has_axis2 = p2->count() > 0;
            if (has_axis2 && axis2_storage.steps < 1) {
                err << "sweep: --param2 requires --from2/--to2/--steps2\n";
                return kExitConfig;
            }
            return cmd_sweep(config_path, axis,
                             has_axis2 ? std::optional<Axis>(axis2_storage) : std::nullopt,
                             verify, band, out_path, out, err);
        }
        if (simulate->parsed())
            return cmd_simulate(config_path, history_spec, t_end, h, out_path, dense_dt, window,
                                tol, out, err);
        if (legacy->parsed()) return cmd_legacy_diff(config_path, from, to, steps, out_path, out, err);
        if (critical->parsed()) return cmd_verify_critical(config_path, draws, seed, out, err);
    } catch (const std::exception& e) {
        err << e.what() << "\n";
        return kExitConfig;
    }
    return kExitConfig;
}

}  // namespace ddestab

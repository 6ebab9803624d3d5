#pragma once

// Subcommands of the besov-mhd tool. Each writes its artifacts under the
// configured output directory and returns a process exit status.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include "config.hpp"
#include "diagnostics.hpp"
#include "lifespan.hpp"
#include "picard.hpp"
#include "selftest.hpp"

namespace besov_mhd {

namespace detail {

inline std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

using ReportLines = std::vector<std::pair<std::string, std::string>>;

inline void write_report(const std::filesystem::path& path, const ReportLines& lines, std::ostream* echo = nullptr) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
    for (const auto& [k, v] : lines) {
        os << k << " = " << v << '\n';
        if (echo) *echo << k << " = " << v << '\n';
    }
    if (!os) throw std::runtime_error("write failed: " + path.string());
}

inline std::filesystem::path prepare_output(const ExperimentConfig& c) {
    const std::filesystem::path dir(c.output_dir);
    std::filesystem::create_directories(dir);
    return dir;
}

inline ReportLines smallness_lines(const MHDState& s, double p, const ExperimentConfig& c) {
    SmallnessThresholds th;
    th.epsilon = c.epsilon;
    th.C = c.constant_C;
    th.s = c.s;
    const auto r = check_smallness_conditions(s, p, th);
    return {{"mean_b", num(r.mean_b)},
            {"critical_smallness", num(r.critical)},
            {"critical_small", r.critical_small ? "true" : "false"},
            {"l2_sum", num(r.l2_sum)},
            {"E0", num(r.E0)},
            {"theta", num(r.theta)},
            {"theta_bar", num(r.theta_bar)},
            {"C_E0", num(r.C_E0)},
            {"sobolev_bound", num(r.sobolev_bound)},
            {"sobolev_small", r.sobolev_small ? "true" : "false"}};
}

inline void append(ReportLines& a, const ReportLines& b) { a.insert(a.end(), b.begin(), b.end()); }

inline ReportLines header_lines(const std::string& command, const ExperimentConfig& c) {
    return {{"command", command},
            {"resolution", std::to_string(c.resolution)},
            {"dt", num(c.dt)},
            {"tmax", num(c.t_max)},
            {"p", c.p},
            {"initial_data", c.initial_data},
            {"seed", std::to_string(c.seed)},
            {"constant_C", num(c.constant_C)}};
}

inline ReportLines run_lines(const RunResult& r) {
    return {{"steps", std::to_string(r.steps)},
            {"termination_time", num(r.termination_time)},
            {"blew_up", r.blew_up ? "true" : "false"},
            {"blowup_reason", r.blowup_reason.empty() ? "none" : r.blowup_reason},
            {"reprojections", std::to_string(r.reprojections)},
            {"max_div_u", num(r.max_div_u)},
            {"max_div_b", num(r.max_div_b)},
            {"max_abs_mean_b", num(r.max_abs_mean_b)}};
}

}  // namespace detail

inline int simulate_command(const ExperimentConfig& c, std::ostream& out) {
    const auto dir = detail::prepare_output(c);
    const double p = parse_p(c.p);
    const MHDState s0 = configured_initial_data(c);
    RunOptions opt;
    opt.record_every = c.record_every;
    opt.p = p;
    opt.keep_trajectory = c.snapshot_every > 0;
    const RunResult r = run(s0, c.t_max, c.dt, opt);

    write_diagnostics_csv(dir / "diagnostics.csv", r.diagnostics);
    write_snapshot_file(dir / "initial_u.bmhd", s0.u);
    write_snapshot_file(dir / "initial_b.bmhd", s0.b);
    write_snapshot_file(dir / "final_u.bmhd", r.final_state->u);
    write_snapshot_file(dir / "final_b.bmhd", r.final_state->b);
    if (c.snapshot_every > 0) {
        std::filesystem::create_directories(dir / "snapshots");
        for (std::size_t k = 0; k < r.trajectory.size(); k += static_cast<std::size_t>(c.snapshot_every)) {
            char name[32];
            std::snprintf(name, sizeof name, "%06zu", k);
            write_snapshot_file(dir / "snapshots" / (std::string("u_") + name + ".bmhd"), r.trajectory[k].u);
            write_snapshot_file(dir / "snapshots" / (std::string("b_") + name + ".bmhd"), r.trajectory[k].b);
        }
    }

    auto lines = detail::header_lines("simulate", c);
    detail::append(lines, detail::run_lines(r));
    detail::append(lines, detail::smallness_lines(s0, p, c));
    if (r.diagnostics.rows.size() >= 2)
        lines.emplace_back("energy_residual_final", detail::num(energy_identity_residual(r.diagnostics).final_residual));
    detail::write_report(dir / "simulate_report.txt", lines);
    out << "simulate: " << r.steps << " steps to t = " << r.termination_time
        << (r.blew_up ? " (blow-up: " + r.blowup_reason + ")" : std::string()) << ", wrote " << (dir / "diagnostics.csv").string()
        << '\n';
    return 0;
}

inline int lifespan_command(const ExperimentConfig& c, std::ostream& out) {
    const auto dir = detail::prepare_output(c);
    const double p = parse_p(c.p);
    const MHDState s0 = configured_initial_data(c);
    const DyadicFilterBank bank(s0.grid());
    const auto rep = compute_lifespan(s0.u, s0.b, p, c.constant_C, bank);
    auto lines = detail::header_lines("lifespan", c);
    lines.insert(lines.end(), {{"branch", to_string(rep.branch)},
                               {"a", detail::num(rep.a)},
                               {"E0", detail::num(rep.E0)},
                               {"u_low", detail::num(rep.u_low)},
                               {"u_mid", detail::num(rep.u_mid)},
                               {"j0", rep.j0 ? std::to_string(*rep.j0) : "none"},
                               {"T0", detail::num(rep.T0)},
                               {"T1", rep.T1 ? detail::num(*rep.T1) : "none"},
                               {"T2", rep.T2 ? detail::num(*rep.T2) : "none"},
                               {"T", detail::num(rep.T)}});
    if (rep.T > 0.0) {
        const auto sg = verify_semigroup_smallness(s0.u, rep.T, rep.a, p, bank);
        lines.insert(lines.end(), {{"semigroup_l1", detail::num(sg.l1_norm)},
                                   {"semigroup_l2", detail::num(sg.l2_norm)},
                                   {"semigroup_total", detail::num(sg.total)},
                                   {"semigroup_small", sg.pass ? "true" : "false"}});
    }
    detail::write_report(dir / "lifespan_report.txt", lines, &out);
    return 0;
}

inline int picard_command(const ExperimentConfig& c, std::ostream& out) {
    const auto dir = detail::prepare_output(c);
    const double p = parse_p(c.p);
    const MHDState s0 = configured_initial_data(c);
    const DyadicFilterBank bank(s0.grid());
    const auto life = compute_lifespan(s0.u, s0.b, p, c.constant_C, bank);
    // tmax = 0 selects the computed lifespan; dt is shrunk to divide T.
    const double T = c.t_max > 0.0 ? c.t_max : life.T;
    const long steps = std::max(1L, static_cast<long>(std::ceil(T / c.dt - 1e-9)));
    const double dt = T / static_cast<double>(steps);

    const auto it = picard_iterate(s0.u, s0.b, c.picard_iterates, T, dt, c.record_every, life.T);
    RunOptions opt;
    opt.record_every = c.record_every;
    opt.p = p;
    const auto ref = run(s0, T, dt, opt);

    std::ofstream csv(dir / "picard_convergence.csv");
    if (!csv) throw std::runtime_error("cannot open picard_convergence.csv for writing");
    csv << "n,truncation_level,d_n,h1,b_sup,b_AT,distance_to_nonlinear\n";
    if (it.failure.empty()) {
        const auto rep = picard_convergence_report(it, p, bank);
        const bool comparable = !ref.blew_up && ref.trajectory.size() == it.times.size();
        for (std::size_t n = 0; n < it.size(); ++n) {
            csv << n << ',' << it.truncation_levels[n] << ','
                << (n < rep.d.size() ? detail::num(rep.d[n]) : std::string("nan")) << ',' << detail::num(rep.h1[n]) << ','
                << detail::num(rep.b_sup[n]) << ',' << detail::num(rep.b_AT[n]) << ','
                << (comparable ? detail::num(picard_relative_distance(it, n, ref.trajectory, p, bank)) : std::string("nan"))
                << '\n';
        }
    }
    auto lines = detail::header_lines("picard", c);
    lines.insert(lines.end(), {{"T", detail::num(T)},
                               {"dt_used", detail::num(dt)},
                               {"lifespan", detail::num(life.T)},
                               {"iterates", std::to_string(c.picard_iterates)},
                               {"warning", it.warning.empty() ? "none" : it.warning},
                               {"failure", it.failure.empty() ? "none" : it.failure},
                               {"reference_blew_up", ref.blew_up ? "true" : "false"}});
    detail::write_report(dir / "picard_report.txt", lines);
    if (!it.warning.empty()) out << "picard: warning: " << it.warning << '\n';
    out << "picard: " << it.size() << " iterates on [0, " << T << "], wrote " << (dir / "picard_convergence.csv").string() << '\n';
    return 0;
}

inline int decay_study_command(const ExperimentConfig& c, std::ostream& out) {
    const auto dir = detail::prepare_output(c);
    const double p = parse_p(c.p);
    const MHDState s0 = configured_initial_data(c);
    const DyadicFilterBank bank(s0.grid());
    RunOptions opt;
    opt.record_every = c.record_every;
    opt.p = p;
    opt.keep_trajectory = false;
    const RunResult r = run(s0, c.t_max, c.dt, opt);
    write_diagnostics_csv(dir / "diagnostics.csv", r.diagnostics);

    const auto& rec = r.diagnostics;
    const auto t = rec.column(&DiagnosticsRow::t);
    auto lines = detail::header_lines("decay-study", c);
    detail::append(lines, detail::run_lines(r));
    auto fit_lines = [&](const std::string& name, double DiagnosticsRow::*col, double a, double b) {
        const double end = std::min(b, r.termination_time);
        try {
            const auto f = fit_decay_rate(t, rec.column(col), a, end);
            lines.insert(lines.end(), {{name + "_rate", detail::num(f.rate)},
                                       {name + "_r_squared", detail::num(f.r_squared)},
                                       {name + "_window", detail::num(a) + " " + detail::num(f.window_end)},
                                       {name + "_truncated", f.truncated ? "true" : "false"}});
        } catch (const std::invalid_argument&) {
            lines.emplace_back(name + "_rate", "insufficient data in window");
        }
    };
    fit_lines("b_l2", &DiagnosticsRow::b_l2, c.fit_start, c.fit_end);
    fit_lines("b_linf", &DiagnosticsRow::b_linf, c.fit_start, c.fit_end);
    fit_lines("b_l2_early", &DiagnosticsRow::b_l2, 1.0, 2.0);
    fit_lines("b_l2_late", &DiagnosticsRow::b_l2, 2.0, 4.0);
    if (rec.rows.size() >= 2) {
        lines.emplace_back("b_linf_decay_factor", detail::num(rec.rows.front().b_linf / rec.rows.back().b_linf));
        lines.emplace_back("energy_residual_max", detail::num(energy_identity_residual(rec).max_abs_residual));
    }
    bool monotone = true;
    for (std::size_t i = 1; i < rec.rows.size(); ++i)
        if (rec.rows[i].t > 0.5 && rec.rows[i].b_l2 > rec.rows[i - 1].b_l2) monotone = false;
    lines.emplace_back("b_l2_monotone_after_transient", monotone ? "true" : "false");
    const auto boot = bootstrap_monitor(rec, c.threshold);
    lines.insert(lines.end(), {{"bootstrap_threshold", detail::num(c.threshold)},
                               {"bootstrap_initial", detail::num(boot.max_form.front())},
                               {"bootstrap_peak", detail::num(boot.peak)},
                               {"bootstrap_crossed", boot.crossed ? "true" : "false"},
                               {"bootstrap_crossing_time", detail::num(boot.crossing_time)}});
    const auto vort = vorticity_bound_monitor(rec, besov_norm(s0.u, BesovParams(1.0, kInfinity, 1.0), bank));
    lines.insert(lines.end(), {{"vorticity_max_ratio", detail::num(vort.max_ratio)},
                               {"vorticity_envelope_c", detail::num(vort.envelope_c)}});
    detail::append(lines, detail::smallness_lines(s0, p, c));
    detail::write_report(dir / "decay_report.txt", lines, &out);
    return 0;
}

inline int stability_command(const ExperimentConfig& c, std::ostream& out) {
    const auto dir = detail::prepare_output(c);
    const double p = parse_p(c.p);
    const MHDState s0 = configured_initial_data(c);
    InitialDataSpec dir_spec;
    dir_spec.kind = InitialDataKind::random_solenoidal;
    dir_spec.seed = c.perturbation_seed;
    dir_spec.band_min = c.band_min;
    dir_spec.band_max = c.band_max;
    const MHDState d = make_initial_data(dir_spec, s0.grid());
    const auto deltas = parse_list(c.deltas);

    auto one = [&](double delta) {
        return stability_experiment(s0.u, s0.b, d.u, d.b, delta, c.t_max, c.dt, p, c.record_every, c.stability_C);
    };
    std::vector<StabilityExperiment> results;
    const int workers = c.parallel && !c.deterministic ? std::max(1, c.threads) : 1;
    for (std::size_t i = 0; i < deltas.size(); i += static_cast<std::size_t>(workers)) {
        std::vector<std::future<StabilityExperiment>> batch;
        for (std::size_t k = i; k < std::min(deltas.size(), i + workers); ++k)
            batch.push_back(std::async(workers > 1 ? std::launch::async : std::launch::deferred, one, deltas[k]));
        for (auto& f : batch) results.push_back(f.get());
    }

    std::ofstream csv(dir / "stability.csv");
    if (!csv) throw std::runtime_error("cannot open stability.csv for writing");
    csv << "delta,weak_norm,strong_norm,weak_ratio,strong_ratio,strong_data,A_T,partial\n";
    std::vector<double> weak, strong, ds;
    for (const auto& ex : results) {
        csv << detail::num(ex.delta) << ',' << detail::num(ex.weak_norm) << ',' << detail::num(ex.strong_norm) << ','
            << detail::num(ex.weak_ratio) << ',' << detail::num(ex.strong_ratio) << ',' << detail::num(ex.strong_data) << ','
            << detail::num(ex.A_T) << ',' << (ex.partial ? 1 : 0) << '\n';
        ds.push_back(ex.delta);
        weak.push_back(ex.weak_ratio);
        strong.push_back(ex.strong_ratio);
    }
    auto lines = detail::header_lines("stability", c);
    if (!weak.empty()) {
        double spread = 0.0;
        for (double w : weak) spread = std::max(spread, std::abs(w / weak.front() - 1.0));
        lines.emplace_back("weak_ratio_spread", detail::num(spread));
    }
    if (ds.size() >= 2) {
        lines.emplace_back("strong_ratio_exponent", detail::num(fitted_delta_exponent(ds, strong)));
        lines.emplace_back("weak_ratio_exponent", detail::num(fitted_delta_exponent(ds, weak)));
    }
    detail::write_report(dir / "stability_report.txt", lines, &out);
    return 0;
}

inline int selftest_command(const ExperimentConfig&, std::ostream& out) {
    const auto results = selftest::run_checks(selftest::kSelftestChecks);
    const auto failed = std::count_if(results.begin(), results.end(), [](const auto& r) { return !r.pass; });
    out << "selftest: " << results.size() - failed << '/' << results.size() << " checks passed\n";
    return failed == 0 ? 0 : 1;
}

inline int run_command(const std::string& command, const ExperimentConfig& c, std::ostream& out = std::cout) {
    validate(c);
    if (command == "simulate") return simulate_command(c, out);
    if (command == "picard") return picard_command(c, out);
    if (command == "lifespan") return lifespan_command(c, out);
    if (command == "decay-study") return decay_study_command(c, out);
    if (command == "stability") return stability_command(c, out);
    if (command == "selftest") return selftest_command(c, out);
    throw std::invalid_argument("unknown command '" + command + "'");
}

}  // namespace besov_mhd

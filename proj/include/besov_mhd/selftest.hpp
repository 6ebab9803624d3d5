#pragma once

// Numbered end-to-end checks of the toolkit. Each check builds its own data,
// computes an independent reference where one exists, and reports pass/fail
// with the measured numbers.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "diagnostics.hpp"
#include "gronwall.hpp"
#include "initial_data.hpp"
#include "lifespan.hpp"
#include "mhd.hpp"
#include "picard.hpp"
#include "propagators.hpp"

namespace besov_mhd::selftest {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
};

struct RunInvariants {
    std::string label;
    double max_abs_mean_b = 0.0;
    double max_div_u = 0.0;
    double max_div_b = 0.0;
};

/// Results shared between checks: invariants of every nonlinear run, and the
/// small-data decay run reused by the bootstrap check.
struct Context {
    std::vector<RunInvariants> runs;
    std::optional<RunResult> decay_run;

    void log(const std::string& label, const RunResult& r) {
        runs.push_back({label, r.max_abs_mean_b, r.max_div_u, r.max_div_b});
    }
};

inline CriterionResult make_result(int id, std::string name) {
    CriterionResult r;
    r.id = id;
    r.name = std::move(name);
    return r;
}

namespace detail {

inline std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

inline VectorField2 random_band_limited(const TorusGrid& g, std::uint64_t seed, int band) {
    std::mt19937_64 rng(seed);
    return besov_mhd::detail::random_band_field(g, rng, 1, band);
}

inline MHDState random_small(const TorusGrid& g, std::uint64_t seed, double scale, bool magnetic = true, int band = 4) {
    InitialDataSpec sp;
    sp.kind = InitialDataKind::random_solenoidal;
    sp.seed = seed;
    sp.scale = scale;
    sp.band_max = band;
    sp.with_magnetic = magnetic;
    return make_initial_data(sp, g);
}

/// remark15, n = 4, scaled to ||u0||_{B^1_{inf,1}} + ||b0||_{B^0_{inf,1}} = target.
inline MHDState scaled_remark15(const TorusGrid& g, double target) {
    const DyadicFilterBank bank(g);
    const auto s = remark15_data(g, 4);
    return remark15_data(g, 4, target / critical_smallness(s.u, s.b, bank));
}

inline RunResult quiet_run(const MHDState& s, double T, double dt, int every, double p) {
    RunOptions opt;
    opt.record_every = every;
    opt.p = p;
    opt.keep_trajectory = false;
    return run(s, T, dt, opt);
}

inline double rk4_comparison(double rho0, const std::function<double(double)>& gamma, ModulusKind kind,
                             const ModulusParams& prm, double T, int steps) {
    const double h = T / steps;
    double r = rho0;
    auto f = [&](double s, double x) { return gamma(s) * modulus_value(kind, prm, x); };
    for (int i = 0; i < steps; ++i) {
        const double t = i * h;
        const double k1 = f(t, r), k2 = f(t + h / 2, r + h / 2 * k1), k3 = f(t + h / 2, r + h / 2 * k2),
                     k4 = f(t + h, r + h * k3);
        r += h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
    }
    return r;
}

}  // namespace detail

inline CriterionResult filter_bank_exactness(Context&) {
    auto r = make_result(1, "filter-bank partition of unity");
    const auto start = std::chrono::steady_clock::now();
    double worst = 0.0;
    for (int n : {64, 128}) {
        const TorusGrid g(n);
        const DyadicFilterBank bank(g);
        for (std::size_t i = 1; i < g.spectral_size(); ++i) {
            double sum = 0.0;
            for (int j = -1; j <= bank.j_max(); ++j) sum += bank.block_filter(j)[i];
            worst = std::max(worst, std::abs(sum - 1.0));
        }
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    r.pass = worst < 1e-12 && r.seconds < 1.0;
    r.detail = detail::fmt("max residual %.3e, %.3f s", worst, r.seconds);
    return r;
}

inline CriterionResult reconstruction(Context&) {
    auto r = make_result(2, "dyadic reconstruction");
    const TorusGrid g(64);
    const DyadicFilterBank bank(g);
    double worst = 0.0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto f = detail::random_band_limited(g, 1000 + seed, 21);
        for (int c = 0; c < 2; ++c) {
            ScalarField sum = ScalarField::zero(g);
            for (int j = -1; j <= bank.j_max(); ++j) sum = sum + dyadic_block(f[c], j, bank);
            worst = std::max(worst, spectral_l2(sum - f[c]) / spectral_l2(f[c]));
        }
    }
    r.pass = worst < 1e-10;
    r.detail = detail::fmt("max relative L2 error %.3e over 100 fields", worst);
    return r;
}

inline CriterionResult heat_semigroup_check(Context&) {
    auto r = make_result(3, "heat semigroup and solver");
    const TorusGrid g(32);
    auto mode = [&](double amp) {
        return ScalarField::from_function(g, [=](double x1, double x2) { return amp * std::sin(2 * x1 + x2); });
    };
    const double t = 0.37;
    const auto exact = mode(std::exp(-5.0 * t));
    const double single = lp_norm(heat_semigroup(mode(1.0), t) - exact, kInfinity) / lp_norm(exact, kInfinity);
    const auto shape = mode(1.0);
    const Forcing<ScalarField> G = [&](double s) { return shape.scaled(-3 * std::sin(3 * s) + 5 * std::cos(3 * s)); };
    double manufactured = 0.0;
    const auto fine = solve_heat(shape, G, 1.0, 1e-3);
    for (std::size_t i = 0; i < fine.snapshots.times.size(); ++i)
        manufactured = std::max(manufactured, lp_norm(fine.snapshots.fields[i] - shape.scaled(std::cos(3 * fine.snapshots.times[i])), kInfinity));
    std::vector<double> errs;
    for (double dt : {0.1, 0.05, 0.025})
        errs.push_back(lp_norm(solve_heat(shape, G, 1.0, dt).snapshots.fields.back() - shape.scaled(std::cos(3.0)), kInfinity));
    const double order = std::min(std::log2(errs[0] / errs[1]), std::log2(errs[1] / errs[2]));
    r.pass = single < 1e-12 && manufactured < 1e-8 && order >= 3.8;
    r.detail = detail::fmt("single-mode %.3e, manufactured %.3e, order %.3f", single, manufactured, order);
    return r;
}

inline CriterionResult energy_identity(Context& ctx) {
    auto r = make_result(4, "energy identity");
    const auto start = std::chrono::steady_clock::now();
    const TorusGrid g(128);
    double worst = 0.0;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const auto res = detail::quiet_run(detail::random_small(g, seed, 0.05, true, 8), 1.0, 1e-3, 100, 2.0);
        ctx.log("energy seed " + std::to_string(seed), res);
        worst = std::max(worst, energy_identity_residual(res.diagnostics).max_abs_residual);
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    r.pass = worst < 1e-6 && r.seconds < 120.0;
    r.detail = detail::fmt("max |residual| %.3e over 5 runs, %.1f s", worst, r.seconds);
    return r;
}

inline CriterionResult mean_and_divergence(Context& ctx) {
    auto r = make_result(5, "mean-zero and solenoidality");
    const TorusGrid g(64);
    ctx.log("random moderate", detail::quiet_run(detail::random_small(g, 77, 1.0, true, 10), 1.0, 2e-3, 50, 2.0));
    ctx.log("remark15", detail::quiet_run(detail::scaled_remark15(g, 0.5), 1.0, 5e-3, 20, 2.0));
    double mean = 0.0, div = 0.0;
    for (const auto& run : ctx.runs) {
        mean = std::max(mean, run.max_abs_mean_b);
        div = std::max({div, run.max_div_u, run.max_div_b});
    }
    r.pass = mean < 1e-13 && div < 1e-8;
    r.detail = detail::fmt("%zu runs: max |mean b| %.3e, max div residual %.3e", ctx.runs.size(), mean, div);
    return r;
}

inline CriterionResult euler_limit(Context& ctx) {
    auto r = make_result(6, "Euler limit");
    const TorusGrid g(128);
    const auto res = detail::quiet_run(detail::random_small(g, 3, 1.0, false), 1.0, 2e-3, 25, kInfinity);
    ctx.log("euler", res);
    const auto& rows = res.diagnostics.rows;
    const double l0 = std::sqrt(2.0 * rows.front().energy);
    double l2 = 0.0;
    for (const auto& row : rows) l2 = std::max(l2, std::abs(std::sqrt(2.0 * row.energy) - l0) / l0);
    const double w = vorticity_bound_monitor(res.diagnostics, 0.0).w_linf_drift;
    r.pass = l2 < 1e-6 && w < 0.01;
    r.detail = detail::fmt("L2 drift %.3e, vorticity sup drift %.3e over T = 1", l2, w);
    return r;
}

inline CriterionResult picard_convergence(Context& ctx) {
    auto r = make_result(7, "Picard convergence");
    const auto start = std::chrono::steady_clock::now();
    const TorusGrid g(64);
    const DyadicFilterBank bank(g);
    const double p = kInfinity, A = 1e-3;
    const VectorField2 u0(ScalarField::zero(g), trig_mode(g, 1, 8, A));
    const VectorField2 b0(trig_mode(g, 2, 8, A), ScalarField::zero(g));
    const auto life = compute_lifespan(u0, b0, p, 10.0, bank);
    const double dt = life.T / 30;
    const auto it = picard_iterate(u0, b0, 7, life.T, dt, 1, life.T);
    const auto rep = picard_convergence_report(it, p, bank);
    double worst = 0.0;
    for (int n = 2; n <= 5; ++n) worst = std::max(worst, rep.d[n + 1] / rep.d[n]);
    RunOptions opt;
    opt.p = p;
    const auto ref = run({u0, b0, 0.0}, life.T, dt, opt);
    ctx.log("picard reference", ref);
    const double dist = picard_relative_distance(it, 6, ref.trajectory, p, bank);
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    r.pass = it.failure.empty() && worst <= 0.9 && dist < 1e-4 && r.seconds < 300.0;
    r.detail = detail::fmt("T = %.3e, max d(n+1)/d(n) %.3e for n = 2..5, iterate 6 distance %.3e, %.1f s", life.T, worst,
                           dist, r.seconds);
    return r;
}

inline CriterionResult lifespan_formula(Context&) {
    auto r = make_result(8, "lifespan formula");
    const TorusGrid g(64);
    const DyadicFilterBank bank(g);
    const double C = 10.0, a = 1.0 / (24.0 * C);
    bool ok = true;
    std::string notes;

    // branch selection
    const auto small = detail::random_small(g, 21, 1.0);
    const double s = 0.5 * a / besov_norm(small.u, BesovParams(0.0, 2.0, 1.0), bank);
    const auto rs = compute_lifespan(small.u.scaled(s), small.b.scaled(s), 2.0, C, bank);
    if (rs.branch != LifespanBranch::small_data || rs.T != lifespan_T0(rs.E0, rs.a, C)) ok = false, notes += " small-branch";
    InitialDataSpec big;
    big.kind = InitialDataKind::single_mode;
    big.n = 4;
    const auto large = make_initial_data(big, g);
    const auto rl = compute_lifespan(large.u, large.b, 2.0, C, bank);
    if (rl.branch != LifespanBranch::large_data || !rl.T1 || !rl.T2 || rl.T != std::min({rl.T0, *rl.T1, *rl.T2}))
        ok = false, notes += " large-branch";

    // monotone under scaling
    double prev = kInfinity;
    for (double c = 1e-5; c < 1e2; c *= 1.5) {
        const double T = compute_lifespan(small.u.scaled(c), small.b.scaled(c), 2.0, C, bank).T;
        if (!(T <= prev && T > 0.0)) ok = false, notes += " monotone";
        prev = T;
    }

    // find_j0 against a scan over the blocks computed one at a time
    int mismatches = 0;
    const auto u = detail::random_band_limited(g, 99, 20).scaled(0.01);
    for (double p : {2.0, kInfinity}) {
        std::vector<double> block;
        for (int j = -1; j <= bank.j_max(); ++j)
            block.push_back(lp_norm(dyadic_block(u.x(), j, bank), p) + lp_norm(dyadic_block(u.y(), j, bank), p));
        for (double aa = 1e-3; aa < 1e3; aa *= 1.7) {
            int brute = -1;
            for (int j0 = 0; brute < 0; ++j0) {
                double tail = 0.0;
                for (int j = -1; j <= bank.j_max(); ++j)
                    if (j >= j0 || (j == -1 && j0 == 0)) tail += std::pow(2.0, 2.0 / p * j) * block[j + 1];
                if (tail < aa / 4) brute = j0;
            }
            if (find_j0(u, aa, p, bank) != brute) ++mismatches;
        }
    }
    if (mismatches) ok = false;

    // two quadratures of the heat-flow integrals
    double agree = 0.0;
    const auto v = detail::random_band_limited(TorusGrid(32), 31, 8).scaled(1e-3);
    const DyadicFilterBank bank32(v.grid());
    for (double p : {2.0, kInfinity}) {
        const double T = 0.02, dt = 1e-4;
        const auto rep = verify_semigroup_smallness(v, T, 1.0, p, bank32);
        const BesovParams p1(2 / p + 2, p, 1), p2(2 / p + 1, p, 1);
        double l1 = 0.0, l2 = 0.0;
        const int n = static_cast<int>(std::lround(T / dt));
        for (int k = 0; k <= n; ++k) {
            const double w = (k == 0 || k == n) ? 0.5 * dt : dt;
            const auto f = heat_semigroup(v, k * dt);
            l1 += w * besov_norm(f, p1, bank32);
            l2 += w * std::pow(besov_norm(f, p2, bank32), 2);
        }
        const double total = l1 + std::sqrt(l2);
        agree = std::max(agree, std::abs(rep.total - total) / total);
    }
    r.pass = ok && agree < 1e-3;
    r.detail = detail::fmt("j0 mismatches %d, quadrature disagreement %.3e%s", mismatches, agree,
                           notes.empty() ? "" : (", failed:" + notes).c_str());
    return r;
}

inline const RunResult& decay_run(Context& ctx) {
    if (!ctx.decay_run) {
        const TorusGrid g(32);
        ctx.decay_run = detail::quiet_run(detail::scaled_remark15(g, 0.05), 20.0, 0.01, 10, kInfinity);
        ctx.log("decay", *ctx.decay_run);
    }
    return *ctx.decay_run;
}

inline CriterionResult decay(Context& ctx) {
    auto r = make_result(9, "small-data decay");
    const auto& rec = decay_run(ctx).diagnostics;
    const auto t = rec.column(&DiagnosticsRow::t);
    const auto fit = fit_decay_rate(t, rec.column(&DiagnosticsRow::b_l2), 2.0, 10.0);
    const double drop = rec.rows.front().b_linf / rec.rows.back().b_linf;
    r.pass = fit.rate > 0.0 && fit.r_squared > 0.99 && drop >= 100.0;
    r.detail = detail::fmt("b_l2 rate %.4g (r^2 %.6f) on [2, 10], b_linf ratio %.3e", fit.rate, fit.r_squared, drop);
    return r;
}

inline CriterionResult bootstrap(Context& ctx) {
    auto r = make_result(10, "bootstrap bound");
    const auto& rec = decay_run(ctx).diagnostics;
    const double start = bootstrap_monitor(rec).max_form.front();
    const auto rep = bootstrap_monitor(rec, 4.0 * start);
    r.pass = start > 0.0 && !rep.crossed;
    r.detail = detail::fmt("initial %.4e, peak %.4e (%.3f of initial)", start, rep.peak, rep.peak / start);
    return r;
}

inline CriterionResult gronwall(Context&) {
    auto r = make_result(11, "Gronwall/Osgood bounds");
    std::vector<double> t;
    for (int i = 0; i <= 20; ++i) t.push_back(0.15 * i);
    const auto lin = gronwall_bound(0.4, [](double x) { return 1.0 + std::cos(x); }, t, ModulusKind::linear);
    double closed = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        const double e = 0.4 * std::exp(t[i] + std::sin(t[i]));
        closed = std::max(closed, std::abs(lin.bound[i] - e) / e);
    }
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    int violations = 0;
    std::vector<double> times{0.0, 0.25, 0.5, 0.75, 1.0};
    for (int trial = 0; trial < 20; ++trial) {
        const double rho0 = 0.01 + 0.5 * U(rng), amp = 0.1 + 0.8 * U(rng), freq = 1.0 + 5.0 * U(rng);
        const std::function<double(double)> gamma = [=](double x) { return amp * (1.0 + std::sin(freq * x)); };
        ModulusParams prm;
        prm.c = 0.5 + U(rng);
        for (auto kind : {ModulusKind::linear, ModulusKind::log_plus, ModulusKind::log_frac}) {
            const auto b = gronwall_bound(rho0, gamma, times, kind, prm);
            for (std::size_t i = 1; i < times.size(); ++i)
                if (b.bound[i] < detail::rk4_comparison(rho0, gamma, kind, prm, times[i], 4000) * (1.0 - 1e-9)) ++violations;
        }
    }
    r.pass = closed < 1e-10 && violations == 0;
    r.detail = detail::fmt("closed-form error %.3e, %d violations in 20 cases x 3 kinds", closed, violations);
    return r;
}

inline CriterionResult stability(Context&) {
    auto r = make_result(12, "stability sweep");
    const TorusGrid g(32);
    const auto s = detail::random_small(g, 5, 0.5), d = detail::random_small(g, 6, 0.5);
    std::vector<double> ratios;
    for (double delta : {1e-2, 5e-3, 2.5e-3})
        ratios.push_back(stability_experiment(s.u, s.b, d.u, d.b, delta, 1.0, 0.01, 2.0, 10).weak_ratio);
    double spread = 0.0;
    for (double x : ratios) spread = std::max(spread, std::abs(x / ratios.front() - 1.0));
    r.pass = spread <= 0.2;
    r.detail = detail::fmt("weak ratios %.5g %.5g %.5g, spread %.3e", ratios[0], ratios[1], ratios[2], spread);
    return r;
}

inline CriterionResult remark_power_laws(Context&) {
    auto r = make_result(13, "remark15 power laws");
    const auto sc = remark15_scaling({4, 8, 16}, 64);
    r.pass = sc.h3_spread <= 0.2 && sc.b1inf1_spread <= 0.2;
    std::string rows;
    for (const auto& row : sc.rows) rows += detail::fmt(" n=%d:(%.4g, %.4g)", row.n, row.h3_scaled, row.b1inf1_scaled);
    r.detail = detail::fmt("H3 n^-1/2 spread %.3f, B1 n^1/2 spread %.3f;", sc.h3_spread, sc.b1inf1_spread) + rows;
    return r;
}

using Check = CriterionResult (*)(Context&);

inline const std::map<int, Check>& registry() {
    static const std::map<int, Check> checks{
        {1, filter_bank_exactness}, {2, reconstruction},   {3, heat_semigroup_check}, {4, energy_identity},
        {5, mean_and_divergence},   {6, euler_limit},      {7, picard_convergence},   {8, lifespan_formula},
        {9, decay},                 {10, bootstrap},       {11, gronwall},            {12, stability},
        {13, remark_power_laws},
    };
    return checks;
}

/// Runs the listed checks in order, printing one line each.
inline std::vector<CriterionResult> run_checks(const std::vector<int>& ids, std::FILE* out = stdout) {
    Context ctx;
    std::vector<CriterionResult> results;
    for (int id : ids) {
        const auto start = std::chrono::steady_clock::now();
        CriterionResult r;
        try {
            r = registry().at(id)(ctx);
        } catch (const std::exception& e) {
            r = make_result(id, "check " + std::to_string(id));
            r.detail = std::string("exception: ") + e.what();
        }
        if (r.seconds == 0.0) r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (out) std::fprintf(out, "[%s] %2d %s: %s\n", r.pass ? "PASS" : "FAIL", r.id, r.name.c_str(), r.detail.c_str());
        if (out) std::fflush(out);
        results.push_back(std::move(r));
    }
    return results;
}

inline const std::vector<int> kSelftestChecks{1, 2, 3, 4, 5, 6, 7, 8, 11, 13};

}  // namespace besov_mhd::selftest

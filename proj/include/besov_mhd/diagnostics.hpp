#pragma once

// Measurements on recorded runs: energy identity, decay-rate fits, bootstrap
// and vorticity monitors, and the two-trajectory stability experiment.

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include <boost/math/special_functions/lambert_w.hpp>

#include "diagnostics_record.hpp"
#include "mhd.hpp"

namespace besov_mhd {

struct EnergyIdentityReport {
    std::vector<double> residual;  // per row
    double final_residual = 0.0;
    double max_abs_residual = 0.0;
    bool absolute = false;  // zero initial energy: residuals are not normalized
};

/// (E(t) + int_0^t ||b||^2_{H^1} - E(0)) / E(0) along a record.
inline EnergyIdentityReport energy_identity_residual(const DiagnosticsRecord& rec) {
    if (rec.rows.size() < 2) throw std::invalid_argument("energy_identity_residual: needs at least two rows");
    EnergyIdentityReport rep;
    const double e0 = rec.rows.front().energy;
    rep.absolute = e0 == 0.0;
    const double scale = rep.absolute ? 1.0 : e0;
    for (const auto& r : rec.rows) {
        const double v = (r.energy + r.grad_b_l2_sq_int - e0) / scale;
        rep.residual.push_back(v);
        rep.max_abs_residual = std::max(rep.max_abs_residual, std::abs(v));
    }
    rep.final_residual = rep.residual.back();
    return rep;
}

struct DecayFit {
    double rate = 0.0;  // minus the slope of log(value) against t
    double r_squared = 0.0;
    std::size_t points = 0;
    bool truncated = false;  // a nonpositive value cut the window short
    double window_end = 0.0;
};

/// Least-squares fit of log(value) on [t_start, t_end].
inline DecayFit fit_decay_rate(const std::vector<double>& t, const std::vector<double>& value, double t_start,
                               double t_end) {
    if (t.size() != value.size()) throw std::invalid_argument("fit_decay_rate: size mismatch");
    DecayFit fit;
    fit.window_end = t_end;
    std::vector<double> x, y;
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (t[i] < t_start || t[i] > t_end) continue;
        if (!(value[i] > 0.0)) {
            fit.truncated = true;
            fit.window_end = t[i];
            break;
        }
        x.push_back(t[i]);
        y.push_back(std::log(value[i]));
    }
    fit.points = x.size();
    if (x.size() < 2) throw std::invalid_argument("fit_decay_rate: fewer than two usable points in the window");
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    const double slope = sxy / sxx;
    fit.rate = -slope;
    double ss_res = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - (my + slope * (x[i] - mx));
        ss_res += r * r;
    }
    fit.r_squared = syy > 1e-28 * n * (1.0 + my * my) ? 1.0 - ss_res / syy : 1.0;
    return fit;
}

struct BootstrapReport {
    double threshold = 4.0;
    std::vector<double> times;
    std::vector<double> sup_b0inf1;  // sup_{s <= t} ||b||_{B^0_{inf,1}}
    std::vector<double> run_b2inf1;  // int_0^t ||b||_{B^2_{inf,1}}
    std::vector<double> max_form;
    std::vector<double> sum_form;
    bool crossed = false;
    double crossing_time = std::numeric_limits<double>::infinity();  // first time max_form > threshold
    double sum_crossing_time = std::numeric_limits<double>::infinity();
    double peak = 0.0;  // largest max_form
};

inline BootstrapReport bootstrap_monitor(const DiagnosticsRecord& rec, double threshold = 4.0) {
    if (!(threshold > 0.0)) throw std::invalid_argument("bootstrap_monitor: threshold must be positive");
    BootstrapReport rep;
    rep.threshold = threshold;
    double sup = 0.0;
    for (const auto& r : rec.rows) {
        sup = std::max(sup, r.b_b0inf1);
        rep.times.push_back(r.t);
        rep.sup_b0inf1.push_back(sup);
        rep.run_b2inf1.push_back(r.run_b_b2inf1);
        const double mx = std::max(sup, r.run_b_b2inf1), sm = sup + r.run_b_b2inf1;
        rep.max_form.push_back(mx);
        rep.sum_form.push_back(sm);
        rep.peak = std::max(rep.peak, mx);
        if (mx > threshold && !rep.crossed) {
            rep.crossed = true;
            rep.crossing_time = r.t;
        }
        if (sm > threshold && std::isinf(rep.sum_crossing_time)) rep.sum_crossing_time = r.t;
    }
    return rep;
}

struct VorticityReport {
    std::vector<double> times;
    std::vector<double> w_linf;
    std::vector<double> w_b0inf1;
    /// ||u0||_{B^1_{inf,1}} + sup_{s <= t} ||b||_{B^0_{inf,1}} * int_0^t ||b||_{B^2_{inf,1}}
    std::vector<double> right_side;
    std::vector<double> ratio;
    double max_ratio = 0.0;
    /// Smallest c with w_b0inf1(t) <= c e^{c t} at every recorded time.
    double envelope_c = 0.0;
    /// Largest relative deviation of w_linf from its initial value.
    double w_linf_drift = 0.0;
};

inline VorticityReport vorticity_bound_monitor(const DiagnosticsRecord& rec, double u0_b1inf1) {
    VorticityReport rep;
    double sup = 0.0;
    const double w0 = rec.rows.empty() ? 0.0 : rec.rows.front().w_linf;
    for (const auto& r : rec.rows) {
        sup = std::max(sup, r.b_b0inf1);
        rep.times.push_back(r.t);
        rep.w_linf.push_back(r.w_linf);
        rep.w_b0inf1.push_back(r.w_b0inf1);
        const double rhs = u0_b1inf1 + sup * r.run_b_b2inf1;
        rep.right_side.push_back(rhs);
        rep.ratio.push_back(rhs > 0.0 ? r.w_linf / rhs : 0.0);
        rep.max_ratio = std::max(rep.max_ratio, rep.ratio.back());
        // c e^{c t} = w  <=>  c t = W(w t)
        const double c = r.t > 0.0 ? boost::math::lambert_w0(r.w_b0inf1 * r.t) / r.t : r.w_b0inf1;
        rep.envelope_c = std::max(rep.envelope_c, c);
        if (w0 > 0.0) rep.w_linf_drift = std::max(rep.w_linf_drift, std::abs(r.w_linf - w0) / w0);
    }
    return rep;
}

struct StabilityExperiment {
    double delta = 0.0;
    double p = 2.0;
    double constant_C = 1.0;
    RunResult base;
    RunResult perturbed;
    std::vector<double> times;
    std::vector<double> du_strong;  // ||du||_{B^{2/p+1}_{p,1}}
    std::vector<double> db_strong;  // ||db||_{B^{2/p}_{p,1}}
    std::vector<double> db_strong_dissipative;  // ||db||_{B^{2/p+2}_{p,1}}
    std::vector<double> du_weak;    // ||du||_{B^{2/p}_{p,inf}}
    std::vector<double> db_weak;    // ||db||_{B^{2/p-1}_{p,inf}}
    std::vector<double> db_weak_dissipative;  // ||db||_{B^{2/p+1}_{p,inf}}
    double strong_norm = 0.0;  // sup db + int db (dissipative) + sup du, strong indices
    double weak_norm = 0.0;    // same at the weak indices
    double strong_data = 0.0;  // ||db0||_{B^{2/p}_{p,1}} + ||du0||_{B^{2/p+1}_{p,1}}
    double weak_data = 0.0;    // ||db0||_{B^{2/p-1}_{p,1}} + ||du0||_{B^{2/p}_{p,1}} (= delta)
    double A_T = 0.0;          // C int (||u1|| + ||u2||)_{B^{2/p+1}} + (||b1|| + ||b2||)_{B^{2/p+2}}
    double strong_ratio = 0.0;  // strong_norm / delta
    double weak_ratio = 0.0;    // weak_norm / delta
    bool partial = false;       // a trajectory blew up; norms cover the common recorded times
};

/// Runs (u0, b0) and (u0, b0) + delta * (du0, db0) with the perturbation
/// normalized to unit weak data norm, and measures the difference.
inline StabilityExperiment stability_experiment(const VectorField2& u0, const VectorField2& b0, const VectorField2& du0,
                                                const VectorField2& db0, double delta, double T, double dt, double p,
                                                int record_every = 1, double constant_C = 1.0) {
    if (!(delta >= 0.0)) throw std::invalid_argument("stability_experiment: delta must be >= 0");
    const DyadicFilterBank bank(u0.grid());
    const double s = 2.0 / p;
    StabilityExperiment ex;
    ex.delta = delta;
    ex.p = p;
    ex.constant_C = constant_C;
    VectorField2 pu = VectorField2::zero(u0.grid()), pb = pu;
    if (delta > 0.0) {
        const double unit = besov_norm(db0, BesovParams(s - 1.0, p, 1.0), bank) + besov_norm(du0, BesovParams(s, p, 1.0), bank);
        if (!(unit > 0.0)) throw std::invalid_argument("stability_experiment: zero perturbation direction");
        pu = du0.scaled(delta / unit);
        pb = db0.scaled(delta / unit);
    }
    ex.weak_data = besov_norm(pb, BesovParams(s - 1.0, p, 1.0), bank) + besov_norm(pu, BesovParams(s, p, 1.0), bank);
    ex.strong_data = besov_norm(pb, BesovParams(s, p, 1.0), bank) + besov_norm(pu, BesovParams(s + 1.0, p, 1.0), bank);

    RunOptions opt;
    opt.record_every = record_every;
    opt.p = p;
    ex.base = run({u0, b0, 0.0}, T, dt, opt);
    ex.perturbed = run({u0 + pu, b0 + pb, 0.0}, T, dt, opt);
    ex.partial = ex.base.blew_up || ex.perturbed.blew_up;
    const std::size_t nt = std::min(ex.base.trajectory.size(), ex.perturbed.trajectory.size());

    std::vector<double> a_integrand;
    for (std::size_t k = 0; k < nt; ++k) {
        const auto& s1 = ex.base.trajectory[k];
        const auto& s2 = ex.perturbed.trajectory[k];
        const VectorField2 du = s2.u - s1.u, db = s2.b - s1.b;
        ex.times.push_back(s1.t);
        ex.du_strong.push_back(besov_norm(du, BesovParams(s + 1.0, p, 1.0), bank));
        ex.db_strong.push_back(besov_norm(db, BesovParams(s, p, 1.0), bank));
        ex.db_strong_dissipative.push_back(besov_norm(db, BesovParams(s + 2.0, p, 1.0), bank));
        ex.du_weak.push_back(besov_norm(du, BesovParams(s, p, kInfinity), bank));
        ex.db_weak.push_back(besov_norm(db, BesovParams(s - 1.0, p, kInfinity), bank));
        ex.db_weak_dissipative.push_back(besov_norm(db, BesovParams(s + 1.0, p, kInfinity), bank));
        const BesovParams pu1(s + 1.0, p, 1.0), pb2(s + 2.0, p, 1.0);
        a_integrand.push_back(besov_norm(s1.u, pu1, bank) + besov_norm(s2.u, pu1, bank) + besov_norm(s1.b, pb2, bank) +
                              besov_norm(s2.b, pb2, bank));
    }
    auto sup = [](const std::vector<double>& v) { return v.empty() ? 0.0 : *std::max_element(v.begin(), v.end()); };
    ex.strong_norm = sup(ex.db_strong) + detail::trapezoid(ex.times, ex.db_strong_dissipative) + sup(ex.du_strong);
    ex.weak_norm = sup(ex.db_weak) + detail::trapezoid(ex.times, ex.db_weak_dissipative) + sup(ex.du_weak);
    ex.A_T = constant_C * detail::trapezoid(ex.times, a_integrand);
    if (delta > 0.0) {
        ex.strong_ratio = ex.strong_norm / delta;
        ex.weak_ratio = ex.weak_norm / delta;
    }
    return ex;
}

/// Exponent alpha in ratio ~ delta^{-alpha}, least squares over a sweep.
inline double fitted_delta_exponent(const std::vector<double>& deltas, const std::vector<double>& ratios) {
    if (deltas.size() != ratios.size() || deltas.size() < 2) throw std::invalid_argument("fitted_delta_exponent: need two points");
    std::vector<double> x, y;
    for (std::size_t i = 0; i < deltas.size(); ++i) {
        x.push_back(std::log(deltas[i]));
        y.push_back(std::log(ratios[i]));
    }
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i] / n;
        my += y[i] / n;
    }
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    return -sxy / sxx;
}

}  // namespace besov_mhd

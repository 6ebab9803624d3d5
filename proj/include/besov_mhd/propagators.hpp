#pragma once

// Heat semigroup, forced heat equation u_t - Delta u = G, linear transport
// f_t + v . grad f = g, and measured ratios for the smoothing and transport
// estimates.

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

#include "integrator.hpp"
#include "littlewood_paley.hpp"

namespace besov_mhd {

namespace detail {

inline void to_state(const ScalarField& f, SpectralState& s) { s.fields.push_back(f.coefficients()); }
inline void to_state(const VectorField2& v, SpectralState& s) {
    s.fields.push_back(v.x().coefficients());
    s.fields.push_back(v.y().coefficients());
}

template <class Field>
constexpr std::size_t component_count() {
    return std::is_same_v<Field, VectorField2> ? 2 : 1;
}

template <class Field>
Field from_state(const TorusGrid& g, const SpectralState& s, std::size_t offset = 0) {
    if constexpr (std::is_same_v<Field, VectorField2>)
        return VectorField2(ScalarField::from_coefficients(g, s.fields[offset]),
                            ScalarField::from_coefficients(g, s.fields[offset + 1]));
    else
        return ScalarField::from_coefficients(g, s.fields[offset]);
}

inline Spectrum heat_multiply(const TorusGrid& g, const Spectrum& s, double t) {
    return apply_multiplier(g, s, [&](int r, int c) { return std::exp(-g.k_squared(r, c) * t); });
}

// ||div v||_2 / ||v||_2 straight from the coefficients.
inline double divergence_residual_spectral(const TorusGrid& g, const Spectrum& vx, const Spectrum& vy) {
    const int n = g.n(), cols = g.columns();
    double div = 0.0, norm = 0.0;
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < cols; ++c) {
            const std::size_t i = static_cast<std::size_t>(r) * cols + c;
            const double w = g.hermitian_weight(c);
            div += w * std::norm(g.derivative_k1(r) * vx[i] + g.derivative_k2(c) * vy[i]);
            norm += w * (std::norm(vx[i]) + std::norm(vy[i]));
        }
    return norm == 0.0 ? 0.0 : std::sqrt(div / norm);
}

// Dealiased spectrum of v . grad f for one scalar component given by its spectrum.
inline Spectrum advect(const TorusGrid& g, const std::vector<double>& v1, const std::vector<double>& v2,
                       const Spectrum& f) {
    const auto d1 = inverse_transform(g, derivative(g, f, 1));
    const auto d2 = inverse_transform(g, derivative(g, f, 2));
    std::vector<double> prod(d1.size());
    for (std::size_t i = 0; i < prod.size(); ++i) prod[i] = v1[i] * d1[i] + v2[i] * d2[i];
    Spectrum out = forward_transform(g, prod);
    dealias_in_place(g, out);
    return out;
}

inline double trapezoid(const std::vector<double>& t, const std::vector<double>& f) {
    double acc = 0.0;
    for (std::size_t i = 1; i < t.size(); ++i) acc += 0.5 * (t[i] - t[i - 1]) * (f[i] + f[i - 1]);
    return acc;
}

inline std::vector<double> cumulative_trapezoid(const std::vector<double>& t, const std::vector<double>& f) {
    std::vector<double> out(t.size(), 0.0);
    for (std::size_t i = 1; i < t.size(); ++i) out[i] = out[i - 1] + 0.5 * (t[i] - t[i - 1]) * (f[i] + f[i - 1]);
    return out;
}

}  // namespace detail

/// e^{t Delta} f, exact per mode.
inline ScalarField heat_semigroup(const ScalarField& f, double t) {
    if (!(t >= 0.0)) throw std::invalid_argument("heat_semigroup: t must be >= 0");
    return ScalarField::from_coefficients(f.grid(), detail::heat_multiply(f.grid(), f.coefficients(), t));
}

inline VectorField2 heat_semigroup(const VectorField2& v, double t) {
    return {heat_semigroup(v.x(), t), heat_semigroup(v.y(), t)};
}

template <class Field>
using Forcing = std::function<Field(double)>;
using VelocityField = std::function<VectorField2(double)>;

/// Solution snapshots at every step, t_k = k dt.
template <class Field>
struct PropagatorRun {
    TimeSeries<Field> snapshots;
    double dt = 0.0;
    double t_final = 0.0;
    std::string forcing_description;
};

/// u_t - Delta u = G by integrating-factor RK4; an empty G means no forcing.
template <class Field>
PropagatorRun<Field> solve_heat(const Field& f0, const Forcing<Field>& G, double T, double dt,
                                std::string description = {}) {
    const long steps = uniform_step_count(T, dt);
    const TorusGrid& g = f0.grid();
    constexpr std::size_t nc = detail::component_count<Field>();
    const IntegratingFactor ef(g, std::vector<bool>(nc, true), dt);

    auto rhs = [&](double t, const SpectralState& y) {
        SpectralState k;
        if (G) {
            detail::to_state(G(t), k);
        } else {
            k.fields.assign(y.fields.size(), Spectrum(g.spectral_size()));
        }
        return k;
    };

    PropagatorRun<Field> run;
    run.dt = dt;
    run.t_final = T;
    run.forcing_description = std::move(description);
    SpectralState y;
    detail::to_state(f0, y);
    run.snapshots.times.push_back(0.0);
    run.snapshots.fields.push_back(f0);
    for (long k = 0; k < steps; ++k) {
        const double t = dt * static_cast<double>(k);
        y = lawson_rk4_step(y, t, dt, ef, rhs);
        run.snapshots.times.push_back(dt * static_cast<double>(k + 1));
        run.snapshots.fields.push_back(detail::from_state<Field>(g, y));
    }
    return run;
}

/// f_t + v . grad f = g by RK4 with dealiased products; v must be solenoidal.
template <class Field>
PropagatorRun<Field> solve_transport(const Field& f0, const VelocityField& v, const Forcing<Field>& forcing, double T,
                                     double dt, std::string description = {}) {
    const long steps = uniform_step_count(T, dt);
    const TorusGrid& g = f0.grid();
    constexpr std::size_t nc = detail::component_count<Field>();
    const IntegratingFactor ef(g, std::vector<bool>(nc, false), dt);

    auto rhs = [&](double t, const SpectralState& y) {
        SpectralState k;
        if (forcing) {
            detail::to_state(forcing(t), k);
        } else {
            k.fields.assign(nc, Spectrum(g.spectral_size()));
        }
        if (v) {
            const VectorField2 vt = v(t);
            if (!(vt.grid() == g)) throw std::invalid_argument("solve_transport: velocity on a different grid");
            if (detail::divergence_residual_spectral(g, vt.x().coefficients(), vt.y().coefficients()) > 1e-8)
                throw std::invalid_argument("solve_transport: velocity is not divergence free");
            for (std::size_t c = 0; c < nc; ++c) {
                const Spectrum adv = detail::advect(g, vt.x().values(), vt.y().values(), y.fields[c]);
                for (std::size_t i = 0; i < adv.size(); ++i) k.fields[c][i] -= adv[i];
            }
        }
        return k;
    };

    PropagatorRun<Field> run;
    run.dt = dt;
    run.t_final = T;
    run.forcing_description = std::move(description);
    SpectralState y;
    detail::to_state(f0, y);
    run.snapshots.times.push_back(0.0);
    run.snapshots.fields.push_back(f0);
    for (long k = 0; k < steps; ++k) {
        const double t = dt * static_cast<double>(k);
        y = lawson_rk4_step(y, t, dt, ef, rhs);
        if (!detail::all_finite(y)) throw std::runtime_error("solve_transport: non-finite state");
        run.snapshots.times.push_back(dt * static_cast<double>(k + 1));
        run.snapshots.fields.push_back(detail::from_state<Field>(g, y));
    }
    return run;
}

struct SmoothingReport {
    double solution_norm = 0.0;  // Chemin-Lerner L^q_T(B^{s+2/q})
    double data_norm = 0.0;      // B^s
    double forcing_norm = 0.0;   // Chemin-Lerner L^{q1}_T(B^{s+2/q1-2})
    double ratio = 0.0;
};

/// Measured heat-smoothing constant C_1 for the data (u0, G) on [0, T].
template <class Field>
SmoothingReport smoothing_ratio_report(const Field& u0, const Forcing<Field>& G, double T, double dt, double q, double q1,
                                       const BesovParams& params, const DyadicFilterBank& bank) {
    if (!(q1 <= q)) throw std::invalid_argument("smoothing_ratio_report: requires q1 <= q");
    const auto run = solve_heat(u0, G, T, dt);
    const auto inv = [](double x) { return std::isinf(x) ? 0.0 : 1.0 / x; };
    SmoothingReport rep;
    rep.solution_norm =
        chemin_lerner_norm(run.snapshots, q, BesovParams(params.s + 2.0 * inv(q), params.p, params.r), bank);
    rep.data_norm = besov_norm(u0, params, bank);
    if (G) {
        TimeSeries<Field> gs;
        gs.times = run.snapshots.times;
        for (double t : gs.times) gs.fields.push_back(G(t));
        rep.forcing_norm =
            chemin_lerner_norm(gs, q1, BesovParams(params.s + 2.0 * inv(q1) - 2.0, params.p, params.r), bank);
    }
    const double denom = rep.data_norm + rep.forcing_norm;
    if (!(denom > 0.0)) throw std::domain_error("smoothing_ratio_report: zero data and forcing");
    rep.ratio = rep.solution_norm / denom;
    return rep;
}

struct TransportEstimateReport {
    std::vector<double> times;
    std::vector<double> norm;                // ||f(t)||_{B^s_{p,r}}
    std::vector<double> ratio_linear;        // against (1 + int V')(||f0|| + int ||g||)
    std::vector<double> ratio_exp_general;   // against the exponential form, V' = ||grad v||_{B^{2/p}_{p,r}} + ||grad v||_inf
    std::vector<double> ratio_exp_endpoint;  // same with V' = ||grad v||_{B^{2/p}_{p,1}}
    double max_ratio_linear = 0.0;
    double max_ratio_exp_general = 0.0;
    double max_ratio_exp_endpoint = 0.0;
};

/// Measured transport-estimate ratios along a solve_transport run; empty v or
/// forcing mean zero.
template <class Field>
TransportEstimateReport transport_estimate_report(const PropagatorRun<Field>& run, const VelocityField& v,
                                                  const Forcing<Field>& forcing, const BesovParams& params,
                                                  const DyadicFilterBank& bank) {
    const auto& ts = run.snapshots.times;
    const std::size_t nt = ts.size();
    std::vector<double> vp_inf(nt, 0.0), vp_gen(nt, 0.0), vp_end(nt, 0.0), gnorm(nt, 0.0);
    TransportEstimateReport rep;
    rep.times = ts;
    const BesovParams crit(2.0 / params.p, params.p, params.r), crit1(2.0 / params.p, params.p, 1.0);
    for (std::size_t i = 0; i < nt; ++i) {
        rep.norm.push_back(besov_norm(run.snapshots.fields[i], params, bank));
        if (v) {
            const VectorField2 vt = v(ts[i]);
            for (const auto* comp : {&vt.x(), &vt.y()})
                for (int axis : {1, 2}) {
                    const ScalarField d = derivative(*comp, axis);
                    vp_inf[i] += lp_norm(d, kInfinity);
                    vp_gen[i] += besov_norm(d, crit, bank);
                    vp_end[i] += besov_norm(d, crit1, bank);
                }
            vp_gen[i] += vp_inf[i];
        }
        if (forcing) gnorm[i] = besov_norm(forcing(ts[i]), params, bank);
    }
    const auto V_inf = detail::cumulative_trapezoid(ts, vp_inf);
    const auto V_gen = detail::cumulative_trapezoid(ts, vp_gen);
    const auto V_end = detail::cumulative_trapezoid(ts, vp_end);
    const auto Gint = detail::cumulative_trapezoid(ts, gnorm);
    auto exp_form = [&](const std::vector<double>& V, std::size_t i) {
        std::vector<double> w(i + 1);
        for (std::size_t k = 0; k <= i; ++k) w[k] = std::exp(-V[k]) * gnorm[k];
        const std::vector<double> tt(ts.begin(), ts.begin() + static_cast<long>(i) + 1);
        return std::exp(V[i]) * (rep.norm[0] + detail::trapezoid(tt, w));
    };
    for (std::size_t i = 0; i < nt; ++i) {
        const double lin = (1.0 + V_inf[i]) * (rep.norm[0] + Gint[i]);
        const double eg = exp_form(V_gen, i), ee = exp_form(V_end, i);
        rep.ratio_linear.push_back(lin > 0.0 ? rep.norm[i] / lin : 0.0);
        rep.ratio_exp_general.push_back(eg > 0.0 ? rep.norm[i] / eg : 0.0);
        rep.ratio_exp_endpoint.push_back(ee > 0.0 ? rep.norm[i] / ee : 0.0);
        rep.max_ratio_linear = std::max(rep.max_ratio_linear, rep.ratio_linear.back());
        rep.max_ratio_exp_general = std::max(rep.max_ratio_exp_general, rep.ratio_exp_general.back());
        rep.max_ratio_exp_endpoint = std::max(rep.max_ratio_exp_endpoint, rep.ratio_exp_endpoint.back());
    }
    return rep;
}

}  // namespace besov_mhd

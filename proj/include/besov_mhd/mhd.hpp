#pragma once

// Non-viscous MHD with magnetic diffusion on the 2-torus:
//
//   u_t + grad P = b . grad b - u . grad u,   div u = 0,
//   b_t - Delta b + u . grad b = b . grad u,   div b = 0.
//
// The nonlinear terms are evaluated in conservative form from four dealiased
// products: div(b (x) b - u (x) u) for the velocity, and curl(u1 b2 - u2 b1) for
// the magnetic field, which equals b . grad u - u . grad b for solenoidal fields.

#include <array>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "diagnostics_record.hpp"
#include "integrator.hpp"
#include "propagators.hpp"

namespace besov_mhd {

struct MHDState {
    VectorField2 u;
    VectorField2 b;
    double t = 0.0;

    static MHDState zero(const TorusGrid& g) { return {VectorField2::zero(g), VectorField2::zero(g), 0.0}; }
    const TorusGrid& grid() const { return u.grid(); }
};

struct MHDTendency {
    VectorField2 du;            // leray_project(b . grad b - u . grad u)
    VectorField2 db_nonlinear;  // b . grad u - u . grad b
    VectorField2 db_diffusion;  // Delta b
    VectorField2 db() const { return db_nonlinear + db_diffusion; }
};

namespace detail {

// Spectral nonlinear tendencies [du1, du2, db1, db2] of (u, b) given by spectra.
inline std::array<Spectrum, 4> mhd_nonlinear(const TorusGrid& g, const Spectrum& ux, const Spectrum& uy,
                                             const Spectrum& bx, const Spectrum& by) {
    const auto u1 = inverse_transform(g, ux), u2 = inverse_transform(g, uy);
    const auto b1 = inverse_transform(g, bx), b2 = inverse_transform(g, by);
    const std::size_t m = u1.size();
    std::vector<double> p11(m), p12(m), p22(m), e(m);
    for (std::size_t i = 0; i < m; ++i) {
        p11[i] = b1[i] * b1[i] - u1[i] * u1[i];
        p12[i] = b1[i] * b2[i] - u1[i] * u2[i];
        p22[i] = b2[i] * b2[i] - u2[i] * u2[i];
        e[i] = u1[i] * b2[i] - u2[i] * b1[i];
    }
    Spectrum f11 = forward_transform(g, p11), f12 = forward_transform(g, p12);
    Spectrum f22 = forward_transform(g, p22), fe = forward_transform(g, e);

    std::array<Spectrum, 4> out;
    for (auto& s : out) s.assign(g.spectral_size(), Complex{});
    const int n = g.n(), cols = g.columns();
    for (int r = 0; r < n; ++r) {
        const bool row_cut = 3 * std::abs(g.k1(r)) > n;
        const Complex i1(0.0, g.derivative_k1(r));
        for (int c = 0; c < cols; ++c) {
            if (row_cut || 3 * c > n) continue;
            const Complex i2(0.0, g.derivative_k2(c));
            const std::size_t i = static_cast<std::size_t>(r) * cols + c;
            out[0][i] = i1 * f11[i] + i2 * f12[i];
            out[1][i] = i1 * f12[i] + i2 * f22[i];
            out[2][i] = i2 * fe[i];
            out[3][i] = -i1 * fe[i];
        }
    }
    leray_in_place(g, out[0], out[1]);
    return out;
}

inline double h1_squared(const TorusGrid& g, const Spectrum& x, const Spectrum& y) {
    auto k2 = [&](int r, int c) { return g.k_squared(r, c); };
    return g.measure() * (weighted_energy(g, x, k2) + weighted_energy(g, y, k2));
}

inline double max_abs_values(const TorusGrid& g, const Spectrum& x, const Spectrum& y) {
    const auto a = inverse_transform(g, x), b = inverse_transform(g, y);
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::hypot(a[i], b[i]));
    return m;
}

}  // namespace detail

/// Right side of the system at a state; the diffusion of b is reported separately.
inline MHDTendency rhs(const MHDState& s) {
    const auto& g = s.grid();
    auto nl = detail::mhd_nonlinear(g, s.u.x().coefficients(), s.u.y().coefficients(), s.b.x().coefficients(),
                                    s.b.y().coefficients());
    auto field = [&](Spectrum& x) { return ScalarField::from_coefficients(g, std::move(x)); };
    return {VectorField2(field(nl[0]), field(nl[1])), VectorField2(field(nl[2]), field(nl[3])),
            VectorField2(laplacian(s.b.x()), laplacian(s.b.y()))};
}

/// Raised by step() when the state stops being finite.
class BlowUp : public std::runtime_error {
public:
    BlowUp(const std::string& what, MHDState last) : std::runtime_error(what), last_(std::move(last)) {}
    const MHDState& last_state() const { return last_; }

private:
    MHDState last_;
};

namespace detail {

inline SpectralState mhd_to_state(const MHDState& s) {
    SpectralState y;
    to_state(s.u, y);
    to_state(s.b, y);
    y.scalars.push_back(0.0);
    return y;
}

inline MHDState mhd_from_state(const TorusGrid& g, const SpectralState& y, double t) {
    return {from_state<VectorField2>(g, y, 0), from_state<VectorField2>(g, y, 2), t};
}

// Lawson RK4 for (u, b) plus the running integral of ||b||^2_{H^1} in scalars[0].
class MHDStepper {
public:
    MHDStepper(const TorusGrid& g, double dt) : g_(g), ef_(g, {false, false, true, true}, dt), dt_(dt) {}

    SpectralState step(const SpectralState& y, double t) const {
        return lawson_rk4_step(y, t, dt_, ef_, [&](double, const SpectralState& x) {
            auto nl = mhd_nonlinear(g_, x.fields[0], x.fields[1], x.fields[2], x.fields[3]);
            SpectralState k;
            k.fields.assign(std::make_move_iterator(nl.begin()), std::make_move_iterator(nl.end()));
            k.scalars.push_back(h1_squared(g_, x.fields[2], x.fields[3]));
            return k;
        });
    }

private:
    TorusGrid g_;
    IntegratingFactor ef_;
    double dt_;
};

}  // namespace detail

/// One integrating-factor RK4 step: e^{dt Delta} exact on b, RK4 on the nonlinear terms.
inline MHDState step(const MHDState& s, double dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("step: dt must be positive");
    const detail::MHDStepper stepper(s.grid(), dt);
    const SpectralState y = stepper.step(detail::mhd_to_state(s), s.t);
    if (!detail::all_finite(y)) throw BlowUp("non-finite state at t = " + std::to_string(s.t + dt), s);
    return detail::mhd_from_state(s.grid(), y, s.t + dt);
}

struct RunOptions {
    int record_every = 1;
    double p = 2.0;                      // integrability index of the recorded Besov norms
    bool keep_trajectory = true;         // store states at the recorded times
    double blowup_factor = 1e8;          // ||u||_inf growth that counts as blow-up
    double reproject_tolerance = 1e-8;   // relative div b drift that triggers re-projection
};

struct RunResult {
    std::vector<MHDState> trajectory;
    DiagnosticsRecord diagnostics;
    bool blew_up = false;
    std::string blowup_reason;
    double termination_time = 0.0;
    long steps = 0;
    double max_div_u = 0.0;
    double max_div_b = 0.0;
    double max_abs_mean_b = 0.0;
    int reprojections = 0;
    std::optional<MHDState> final_state;  // last finite state
};

/// Steps to T recording diagnostics every record_every steps (and at the final
/// time). Blow-up ends the run early and is reported in the result.
inline RunResult run(const MHDState& initial, double T, double dt, const RunOptions& opt = {}) {
    if (!(dt > 0.0) || !(T >= 0.0)) throw std::invalid_argument("run: requires dt > 0 and T >= 0");
    if (opt.record_every < 1) throw std::invalid_argument("run: record_every must be >= 1");
    const TorusGrid& g = initial.grid();
    const long steps = T == 0.0 ? 0 : uniform_step_count(T, dt);

    RunResult res;
    DiagnosticsRecorder recorder(g, opt.p, dt);
    SpectralState y = detail::mhd_to_state(initial);
    const double t0 = initial.t;
    double t = t0;

    auto monitor = [&](const SpectralState& x) {
        res.max_div_u = std::max(res.max_div_u, detail::divergence_residual_spectral(g, x.fields[0], x.fields[1]));
        res.max_div_b = std::max(res.max_div_b, detail::divergence_residual_spectral(g, x.fields[2], x.fields[3]));
        res.max_abs_mean_b = std::max({res.max_abs_mean_b, std::abs(x.fields[2][0]), std::abs(x.fields[3][0])});
    };
    auto record = [&](const SpectralState& x, double time) {
        const MHDState s = detail::mhd_from_state(g, x, time);
        recorder.add(s.u, s.b, time, x.scalars[0]);
        if (opt.keep_trajectory) res.trajectory.push_back(s);
    };

    monitor(y);
    record(y, t);
    const double u_ref = std::max(detail::max_abs_values(g, y.fields[0], y.fields[1]),
                                  detail::max_abs_values(g, y.fields[2], y.fields[3]));
    const detail::MHDStepper stepper(g, dt);
    for (long k = 0; k < steps; ++k) {
        SpectralState next = stepper.step(y, t);
        const double t_next = t0 + dt * static_cast<double>(k + 1);
        std::string reason;
        if (!detail::all_finite(next)) {
            reason = "non-finite state";
        } else if (u_ref > 0.0) {
            const double u_inf = detail::max_abs_values(g, next.fields[0], next.fields[1]);
            if (u_inf > opt.blowup_factor * u_ref) reason = "velocity sup norm exceeded the blow-up factor";
        }
        if (!reason.empty()) {
            res.blew_up = true;
            res.blowup_reason = reason + " at t = " + std::to_string(t_next);
            res.termination_time = t_next;
            if (recorder.record().rows.back().t != t) record(y, t);
            break;
        }
        if (detail::divergence_residual_spectral(g, next.fields[2], next.fields[3]) > opt.reproject_tolerance) {
            detail::leray_in_place(g, next.fields[2], next.fields[3]);
            ++res.reprojections;
        }
        y = std::move(next);
        t = t_next;
        ++res.steps;
        monitor(y);
        if ((k + 1) % opt.record_every == 0 || k + 1 == steps) record(y, t);
    }
    if (!res.blew_up) res.termination_time = t;
    res.final_state = detail::mhd_from_state(g, y, t);
    res.diagnostics = recorder.take();
    return res;
}

}  // namespace besov_mhd

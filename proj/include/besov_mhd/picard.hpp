#pragma once

// Picard approximation scheme for the MHD system.
//
// Iterate 0 is the heat flow of the data. Iterate n+1 starts from
// (S_{n+1} u0, S_{n+1} b0) and solves
//
//   u_t + u^n . grad u = b^n . grad b^n + (grad div / -Delta)(b^n . grad b^n - u^n . grad u^n),
//   b_t - Delta b      = b^n . grad u^n - u^n . grad b^n,
//
// All iterates are advanced together as one lower-triangular system, so
// iterate n+1 sees the stage values of iterate n.

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "integrator.hpp"
#include "mhd.hpp"
#include "propagators.hpp"

namespace besov_mhd {

struct PicardIterates {
    std::vector<double> times;
    std::vector<std::vector<VectorField2>> u;  // u[n][k] at times[k]
    std::vector<std::vector<VectorField2>> b;
    /// Index m of the data S_m used by each iterate; -1 for the full data of iterate 0.
    std::vector<int> truncation_levels;
    int failed_iterate = -1;
    std::string failure;
    std::string warning;

    std::size_t size() const { return u.size(); }
    TimeSeries<VectorField2> u_series(std::size_t n) const { return {times, u.at(n)}; }
    TimeSeries<VectorField2> b_series(std::size_t n) const { return {times, b.at(n)}; }
};

namespace detail {

struct PicardCoefficients {
    std::vector<double> u1, u2, b1, b2;
    std::vector<double> du[2][2], db[2][2];  // du[i][j] = d_j u_i at collocation points
};

inline PicardCoefficients picard_coefficients(const TorusGrid& g, const SpectralState& x, std::size_t base) {
    PicardCoefficients c;
    c.u1 = inverse_transform(g, x.fields[base]);
    c.u2 = inverse_transform(g, x.fields[base + 1]);
    c.b1 = inverse_transform(g, x.fields[base + 2]);
    c.b2 = inverse_transform(g, x.fields[base + 3]);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            c.du[i][j] = inverse_transform(g, derivative(g, x.fields[base + i], j + 1));
            c.db[i][j] = inverse_transform(g, derivative(g, x.fields[base + 2 + i], j + 1));
        }
    return c;
}

inline Spectrum dealiased_forward(const TorusGrid& g, const std::vector<double>& v) {
    Spectrum s = forward_transform(g, v);
    dealias_in_place(g, s);
    return s;
}

// Nonlinear right side of iterate m >= 1 given the coefficients of iterate m - 1.
inline void picard_rhs(const TorusGrid& g, const PicardCoefficients& c, const Spectrum& umx, const Spectrum& umy,
                       Spectrum* out) {
    const std::size_t m = c.u1.size();
    std::vector<double> bb[2], uu[2], induction[2];
    for (int i = 0; i < 2; ++i) {
        bb[i].resize(m);
        uu[i].resize(m);
        induction[i].resize(m);
        for (std::size_t k = 0; k < m; ++k) {
            bb[i][k] = c.b1[k] * c.db[i][0][k] + c.b2[k] * c.db[i][1][k];
            uu[i][k] = c.u1[k] * c.du[i][0][k] + c.u2[k] * c.du[i][1][k];
            const double bu = c.b1[k] * c.du[i][0][k] + c.b2[k] * c.du[i][1][k];
            const double ub = c.u1[k] * c.db[i][0][k] + c.u2[k] * c.db[i][1][k];
            induction[i][k] = bu - ub;
        }
    }
    const Spectrum BB[2] = {dealiased_forward(g, bb[0]), dealiased_forward(g, bb[1])};
    const Spectrum UU[2] = {dealiased_forward(g, uu[0]), dealiased_forward(g, uu[1])};
    Spectrum dx(BB[0].size()), dy(BB[0].size()), px, py;
    for (std::size_t k = 0; k < dx.size(); ++k) {
        dx[k] = BB[0][k] - UU[0][k];
        dy[k] = BB[1][k] - UU[1][k];
    }
    grad_div_over_minus_laplacian(g, dx, dy, px, py);
    const Spectrum adv[2] = {advect(g, c.u1, c.u2, umx), advect(g, c.u1, c.u2, umy)};
    for (int i = 0; i < 2; ++i) {
        const Spectrum& p = i == 0 ? px : py;
        out[i].resize(dx.size());
        for (std::size_t k = 0; k < dx.size(); ++k) out[i][k] = -adv[i][k] + BB[i][k] + p[k];
        out[2 + i] = dealiased_forward(g, induction[i]);
    }
}

}  // namespace detail

/// Iterates 0..n_max of the Picard scheme on [0, T], stored every record_every
/// steps. A T beyond the supplied lifespan only sets a warning.
inline PicardIterates picard_iterate(const VectorField2& u0, const VectorField2& b0, int n_max, double T, double dt,
                                     int record_every = 1,
                                     double lifespan = std::numeric_limits<double>::infinity()) {
    if (n_max < 0) throw std::invalid_argument("picard_iterate: n_max must be >= 0");
    if (record_every < 1) throw std::invalid_argument("picard_iterate: record_every must be >= 1");
    if (!(u0.grid() == b0.grid())) throw std::invalid_argument("picard_iterate: data on different grids");
    const TorusGrid& g = u0.grid();
    const long steps = uniform_step_count(T, dt);
    const DyadicFilterBank bank(g);
    const std::size_t count = static_cast<std::size_t>(n_max) + 1;

    PicardIterates out;
    if (T > lifespan)
        out.warning = "T = " + std::to_string(T) + " exceeds the lifespan estimate " + std::to_string(lifespan);
    out.u.resize(count);
    out.b.resize(count);

    SpectralState y;
    std::vector<bool> diffusive;
    for (std::size_t m = 0; m < count; ++m) {
        const int level = m == 0 ? -1 : static_cast<int>(m);
        out.truncation_levels.push_back(level);
        const VectorField2 ud = m == 0 ? u0 : low_freq_cutoff(u0, level, bank);
        const VectorField2 bd = m == 0 ? b0 : low_freq_cutoff(b0, level, bank);
        detail::to_state(ud, y);
        detail::to_state(bd, y);
        const bool heat = m == 0;
        diffusive.insert(diffusive.end(), {heat, heat, true, true});
    }
    const IntegratingFactor ef(g, diffusive, dt);

    auto rhs = [&](double, const SpectralState& x) {
        SpectralState k;
        k.fields.assign(x.fields.size(), Spectrum(g.spectral_size()));
        for (std::size_t m = 1; m < count; ++m) {
            const auto c = detail::picard_coefficients(g, x, 4 * (m - 1));
            detail::picard_rhs(g, c, x.fields[4 * m], x.fields[4 * m + 1], &k.fields[4 * m]);
        }
        return k;
    };

    auto store = [&](const SpectralState& x, double t) {
        out.times.push_back(t);
        for (std::size_t m = 0; m < count; ++m) {
            out.u[m].push_back(detail::from_state<VectorField2>(g, x, 4 * m));
            out.b[m].push_back(detail::from_state<VectorField2>(g, x, 4 * m + 2));
        }
    };

    store(y, 0.0);
    for (long s = 0; s < steps; ++s) {
        SpectralState next = lawson_rk4_step(y, dt * static_cast<double>(s), dt, ef, rhs);
        if (!detail::all_finite(next)) {
            for (std::size_t m = 0; m < count && out.failed_iterate < 0; ++m)
                for (std::size_t f = 4 * m; f < 4 * m + 4; ++f) {
                    SpectralState one;
                    one.fields.push_back(next.fields[f]);
                    if (!detail::all_finite(one)) {
                        out.failed_iterate = static_cast<int>(m);
                        break;
                    }
                }
            out.failure = "iterate " + std::to_string(out.failed_iterate) + " became non-finite at t = " +
                          std::to_string(dt * static_cast<double>(s + 1));
            break;
        }
        y = std::move(next);
        if ((s + 1) % record_every == 0 || s + 1 == steps) store(y, dt * static_cast<double>(s + 1));
    }
    return out;
}

struct PicardConvergenceReport {
    double p = 2.0;
    /// d_n = sup_t [ ||u^{n+1} - u^n||_{B^{2/p+1}_{p,1}} + ||b^{n+1} - b^n||_{B^{2/p}_{p,1}} ], n = 0 .. size-2.
    std::vector<double> d;
    /// sup_t [ ||u^n||_{B^{2/p+1}_{p,1}} + ||b^n||_{B^{2/p}_{p,1}} ].
    std::vector<double> h1;
    /// sup_t ||b^n||_{B^{2/p}_{p,1}}.
    std::vector<double> b_sup;
    /// ||b^n||_{L^2_T(B^{2/p+1}_{p,1})} + ||b^n||_{L^1_T(B^{2/p+2}_{p,1})}.
    std::vector<double> b_AT;
};

inline PicardConvergenceReport picard_convergence_report(const PicardIterates& it, double p,
                                                         const DyadicFilterBank& bank) {
    if (it.size() < 2) throw std::invalid_argument("picard_convergence_report: needs at least two iterates");
    const double s = 2.0 / p;
    const BesovParams pu(s + 1.0, p, 1.0), pb(s, p, 1.0), pb1(s + 1.0, p, 1.0), pb2(s + 2.0, p, 1.0);
    PicardConvergenceReport rep;
    rep.p = p;
    const std::size_t nt = it.times.size();
    for (std::size_t n = 0; n < it.size(); ++n) {
        double h = 0.0, bs = 0.0;
        for (std::size_t k = 0; k < nt; ++k) {
            const double bn = besov_norm(it.b[n][k], pb, bank);
            h = std::max(h, besov_norm(it.u[n][k], pu, bank) + bn);
            bs = std::max(bs, bn);
        }
        rep.h1.push_back(h);
        rep.b_sup.push_back(bs);
        const auto series = it.b_series(n);
        rep.b_AT.push_back(time_lq_besov_norm(series, 2.0, pb1, bank) + time_lq_besov_norm(series, 1.0, pb2, bank));
        if (n + 1 < it.size()) {
            double d = 0.0;
            for (std::size_t k = 0; k < nt; ++k)
                d = std::max(d, besov_norm(it.u[n + 1][k] - it.u[n][k], pu, bank) +
                                    besov_norm(it.b[n + 1][k] - it.b[n][k], pb, bank));
            rep.d.push_back(d);
        }
    }
    return rep;
}

/// sup_t of the distance of iterate n to a trajectory recorded at the same
/// times, in the d_n norm, relative to the sup of the trajectory's norm.
inline double picard_relative_distance(const PicardIterates& it, std::size_t n, const std::vector<MHDState>& traj,
                                       double p, const DyadicFilterBank& bank) {
    if (traj.size() != it.times.size()) throw std::invalid_argument("picard_relative_distance: time grids differ");
    const BesovParams pu(2.0 / p + 1.0, p, 1.0), pb(2.0 / p, p, 1.0);
    double dist = 0.0, norm = 0.0;
    for (std::size_t k = 0; k < traj.size(); ++k) {
        if (std::abs(traj[k].t - it.times[k]) > 1e-9) throw std::invalid_argument("picard_relative_distance: time mismatch");
        dist = std::max(dist, besov_norm(it.u[n][k] - traj[k].u, pu, bank) + besov_norm(it.b[n][k] - traj[k].b, pb, bank));
        norm = std::max(norm, besov_norm(traj[k].u, pu, bank) + besov_norm(traj[k].b, pb, bank));
    }
    return norm > 0.0 ? dist / norm : dist;
}

}  // namespace besov_mhd

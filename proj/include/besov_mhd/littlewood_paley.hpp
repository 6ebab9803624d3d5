#pragma once

// Dyadic Littlewood-Paley decomposition on the 2-torus, nonhomogeneous Besov
// norms and Chemin-Lerner space-time norms.
//
// Blocks follow the periodic convention: Delta_{-1} u is the mean, Delta_j for
// j >= 0 multiplies by phi(2^{-j} xi), Delta_j = 0 for j <= -2. The only lattice
// points with 0 < |xi| < 4/3 are the |xi| = 1 modes; the share chi(xi) of those
// modes is assigned to block 0 so that the blocks sum to the identity.

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "spectral.hpp"

namespace besov_mhd {

/// Smooth radial profiles of the dyadic partition.
namespace lp_profile {

inline constexpr double kInner = 3.0 / 4.0;
inline constexpr double kOuter = 4.0 / 3.0;
inline constexpr double kAnnulusMax = 8.0 / 3.0;

inline double theta(double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; }

// C-infinity step: 0 for t <= 0, 1 for t >= 1.
inline double smooth_step(double t) {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    const double a = theta(t), b = theta(1.0 - t);
    return a / (a + b);
}

/// chi(r): 1 on r <= 3/4, 0 on r >= 4/3, nonincreasing in between.
inline double chi(double r) { return 1.0 - smooth_step((r - kInner) / (kOuter - kInner)); }

/// phi(r) = chi(r/2) - chi(r), supported in 3/4 <= r <= 8/3.
inline double phi(double r) { return chi(0.5 * r) - chi(r); }

}  // namespace lp_profile

/// Besov indices (s, p, r); p and r may be kInfinity.
struct BesovParams {
    double s = 0.0;
    double p = 2.0;
    double r = 1.0;

    BesovParams() = default;
    BesovParams(double s_, double p_, double r_) : s(s_), p(p_), r(r_) {
        if (!(p >= 1.0) || !(r >= 1.0)) throw std::invalid_argument("BesovParams: p and r must be >= 1");
    }
};

/// Filter values sampled on the stored half-plane of a grid.
class DyadicFilterBank {
public:
    explicit DyadicFilterBank(const TorusGrid& grid) : grid_(grid) {
        const double max_xi = std::sqrt(2.0) * grid.n() / 2.0;
        j_max_ = 0;
        while (std::ldexp(lp_profile::kAnnulusMax, j_max_) <= max_xi) ++j_max_;

        const int n = grid.n(), cols = grid.columns();
        const std::size_t m = grid.spectral_size();
        chi_.assign(m, 0.0);
        phi_.assign(j_max_ + 1, std::vector<double>(m, 0.0));
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < cols; ++c) {
                const std::size_t i = static_cast<std::size_t>(r) * cols + c;
                const double xi = std::sqrt(grid.k_squared(r, c));
                chi_[i] = lp_profile::chi(xi);
                for (int j = 0; j <= j_max_; ++j) phi_[j][i] = lp_profile::phi(std::ldexp(xi, -j));
            }

        blocks_.assign(j_max_ + 2, std::vector<double>(m, 0.0));
        blocks_[0][0] = 1.0;  // j = -1: the mean
        for (int j = 0; j <= j_max_; ++j) blocks_[j + 1] = phi_[j];
        for (std::size_t i = 1; i < m; ++i) blocks_[1][i] += chi_[i];
    }

    const TorusGrid& grid() const { return grid_; }
    int j_max() const { return j_max_; }
    const std::vector<double>& chi_values() const { return chi_; }
    /// phi(2^{-j} xi) for 0 <= j <= j_max.
    const std::vector<double>& phi_values(int j) const { return phi_.at(j); }

    /// Multiplier realizing Delta_j on the grid, -1 <= j <= j_max.
    const std::vector<double>& block_filter(int j) const { return blocks_.at(j + 1); }

private:
    TorusGrid grid_;
    int j_max_ = 0;
    std::vector<double> chi_;
    std::vector<std::vector<double>> phi_;
    std::vector<std::vector<double>> blocks_;
};

inline DyadicFilterBank build_filter_bank(const TorusGrid& grid) { return DyadicFilterBank(grid); }

namespace detail {

inline Spectrum filtered(const Spectrum& s, const std::vector<double>& filter) {
    Spectrum out(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) out[i] = s[i] * filter[i];
    return out;
}

inline void check_bank(const TorusGrid& g, const DyadicFilterBank& bank) {
    if (!(g == bank.grid())) throw std::invalid_argument("filter bank built for a different grid");
}

}  // namespace detail

/// Delta_j f.
inline ScalarField dyadic_block(const ScalarField& f, int j, const DyadicFilterBank& bank) {
    detail::check_bank(f.grid(), bank);
    if (j < -1 || j > bank.j_max()) return ScalarField::zero(f.grid());
    return ScalarField::from_coefficients(f.grid(), detail::filtered(f.coefficients(), bank.block_filter(j)));
}

/// S_j f = sum of Delta_{j'} f over j' < j.
inline ScalarField low_freq_cutoff(const ScalarField& f, int j, const DyadicFilterBank& bank) {
    detail::check_bank(f.grid(), bank);
    const int top = std::min(j - 1, bank.j_max());
    std::vector<double> filter(f.grid().spectral_size(), 0.0);
    for (int jj = -1; jj <= top; ++jj) {
        const auto& b = bank.block_filter(jj);
        for (std::size_t i = 0; i < filter.size(); ++i) filter[i] += b[i];
    }
    return ScalarField::from_coefficients(f.grid(), detail::filtered(f.coefficients(), filter));
}

inline VectorField2 low_freq_cutoff(const VectorField2& v, int j, const DyadicFilterBank& bank) {
    return {low_freq_cutoff(v.x(), j, bank), low_freq_cutoff(v.y(), j, bank)};
}

/// ||Delta_j f||_{L^p} for j = -1 .. j_max (index j + 1).
inline std::vector<double> block_norms(const ScalarField& f, double p, const DyadicFilterBank& bank) {
    detail::check_bank(f.grid(), bank);
    const auto& g = f.grid();
    std::vector<double> out(bank.j_max() + 2, 0.0);
    for (int j = -1; j <= bank.j_max(); ++j) {
        const auto& filter = bank.block_filter(j);
        if (p == 2.0) {
            // Discrete Parseval: identical to the collocation quadrature.
            const int cols = g.columns();
            const double e = detail::weighted_energy(g, f.coefficients(), [&](int r, int c) {
                const double w = filter[static_cast<std::size_t>(r) * cols + c];
                return w * w;
            });
            out[j + 1] = std::sqrt(g.measure() * e);
        } else {
            const Spectrum s = detail::filtered(f.coefficients(), filter);
            bool any = false;
            for (const auto& c : s)
                if (c != Complex{}) {
                    any = true;
                    break;
                }
            out[j + 1] = any ? detail::lp_norm_of_values(g, detail::inverse_transform(g, s), p) : 0.0;
        }
    }
    return out;
}

/// Component-sum block norms of a vector field.
inline std::vector<double> block_norms(const VectorField2& v, double p, const DyadicFilterBank& bank) {
    auto a = block_norms(v.x(), p, bank);
    const auto b = block_norms(v.y(), p, bank);
    for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
    return a;
}

/// l^r combination of 2^{js} n_j, with n_j indexed from j = -1.
inline double besov_from_blocks(const std::vector<double>& blocks, double s, double r) {
    double acc = 0.0;
    for (std::size_t idx = 0; idx < blocks.size(); ++idx) {
        const int j = static_cast<int>(idx) - 1;
        const double term = std::pow(2.0, j * s) * blocks[idx];
        if (std::isinf(r))
            acc = std::max(acc, term);
        else if (r == 1.0)
            acc += term;
        else
            acc += std::pow(term, r);
    }
    return (std::isinf(r) || r == 1.0) ? acc : std::pow(acc, 1.0 / r);
}

inline double besov_norm(const ScalarField& f, const BesovParams& params, const DyadicFilterBank& bank) {
    return besov_from_blocks(block_norms(f, params.p, bank), params.s, params.r);
}

/// Sum of component norms.
inline double besov_norm(const VectorField2& v, const BesovParams& params, const DyadicFilterBank& bank) {
    return besov_norm(v.x(), params, bank) + besov_norm(v.y(), params, bank);
}

/// Time-indexed fields on a common grid.
template <class Field>
struct TimeSeries {
    std::vector<double> times;
    std::vector<Field> fields;
};

namespace detail {

// Trapezoidal L^q norm of samples g(t_i); q = inf takes the max.
inline double temporal_lq(const std::vector<double>& t, const std::vector<double>& g, double q) {
    if (std::isinf(q)) return *std::max_element(g.begin(), g.end());
    double acc = 0.0;
    for (std::size_t i = 1; i < t.size(); ++i)
        acc += 0.5 * (t[i] - t[i - 1]) * (std::pow(g[i], q) + std::pow(g[i - 1], q));
    return std::pow(acc, 1.0 / q);
}

template <class Field>
void check_series(const TimeSeries<Field>& series, double q) {
    if (series.fields.empty()) throw std::invalid_argument("chemin_lerner_norm: empty series");
    if (series.fields.size() != series.times.size()) throw std::invalid_argument("time series: size mismatch");
    if (!(q >= 1.0)) throw std::invalid_argument("temporal exponent q must be >= 1");
}

}  // namespace detail

/// Chemin-Lerner norm: temporal L^q of each block first, then the weighted l^r sum.
template <class Field>
double chemin_lerner_norm(const TimeSeries<Field>& series, double q, const BesovParams& params,
                          const DyadicFilterBank& bank) {
    detail::check_series(series, q);
    const std::size_t nt = series.fields.size();
    std::vector<std::vector<double>> per_time(nt);
    for (std::size_t i = 0; i < nt; ++i) per_time[i] = block_norms(series.fields[i], params.p, bank);
    std::vector<double> blocks(per_time[0].size());
    std::vector<double> g(nt);
    for (std::size_t b = 0; b < blocks.size(); ++b) {
        for (std::size_t i = 0; i < nt; ++i) g[i] = per_time[i][b];
        blocks[b] = detail::temporal_lq(series.times, g, q);
    }
    return besov_from_blocks(blocks, params.s, params.r);
}

/// L^q_T(B^s_{p,r}): temporal L^q of the Besov norm.
template <class Field>
double time_lq_besov_norm(const TimeSeries<Field>& series, double q, const BesovParams& params,
                          const DyadicFilterBank& bank) {
    detail::check_series(series, q);
    std::vector<double> g(series.fields.size());
    for (std::size_t i = 0; i < g.size(); ++i) g[i] = besov_norm(series.fields[i], params, bank);
    return detail::temporal_lq(series.times, g, q);
}

}  // namespace besov_mhd

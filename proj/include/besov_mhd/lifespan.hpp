#pragma once

// Explicit local existence time from the data: data size E0, dyadic tail index
// j0, the candidate times T0, T1, T2 and the selected lifespan.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "littlewood_paley.hpp"
#include "propagators.hpp"

namespace besov_mhd {

enum class LifespanBranch { small_data, large_data };

inline std::string to_string(LifespanBranch b) { return b == LifespanBranch::small_data ? "small-data" : "large-data"; }

struct LifespanReport {
    double p = 2.0;
    double C = 10.0;
    double a = 0.0;
    double E0 = 0.0;
    double u_low = 0.0;  // ||u0||_{B^{2/p-1}_{p,1}}, the branch test
    double u_mid = 0.0;  // ||u0||_{B^{2/p}_{p,1}}, the T1 and T2 denominators
    std::optional<int> j0;
    double T0 = 0.0;
    std::optional<double> T1;
    std::optional<double> T2;
    double T = 0.0;
    LifespanBranch branch = LifespanBranch::small_data;
};

/// ||b0||_{B^{2/p}_{p,1}} + ||u0||_{B^{2/p+1}_{p,1}}.
inline double compute_E0(const VectorField2& u0, const VectorField2& b0, double p, const DyadicFilterBank& bank) {
    return besov_norm(b0, BesovParams(2.0 / p, p, 1.0), bank) + besov_norm(u0, BesovParams(2.0 / p + 1.0, p, 1.0), bank);
}

/// sum_{j >= j0} 2^{(2/p) j} ||Delta_j u0||_{L^p}, with the j = -1 block added for j0 = 0.
inline double dyadic_tail(const std::vector<double>& blocks, int j0, double p) {
    double acc = 0.0;
    for (std::size_t idx = 0; idx < blocks.size(); ++idx) {
        const int j = static_cast<int>(idx) - 1;
        if (j >= j0 || (j == -1 && j0 == 0)) acc += std::pow(2.0, (2.0 / p) * j) * blocks[idx];
    }
    return acc;
}

/// Smallest j0 >= 0 whose dyadic tail of u0 is below a / 4.
inline int find_j0(const VectorField2& u0, double a, double p, const DyadicFilterBank& bank) {
    if (!(a > 0.0)) throw std::invalid_argument("find_j0: a must be positive");
    const auto blocks = block_norms(u0, p, bank);
    for (int j0 = 0;; ++j0)
        if (dyadic_tail(blocks, j0, p) < a / 4.0) return j0;
}

namespace detail {

inline double inverse_or_inf(double x) { return x > 0.0 ? 1.0 / x : std::numeric_limits<double>::infinity(); }

}  // namespace detail

/// min{1, 1/(96 C E0)^2, 1/(96 C a)^2, 1/(72 C E0), ln 2/(12 C E0)}.
inline double lifespan_T0(double E0, double a, double C) {
    using detail::inverse_or_inf;
    const double x = inverse_or_inf(96.0 * C * E0), y = inverse_or_inf(96.0 * C * a);
    return std::min({1.0, x * x, y * y, inverse_or_inf(72.0 * C * E0), std::numbers::ln2 * inverse_or_inf(12.0 * C * E0)});
}

inline LifespanReport compute_lifespan(const VectorField2& u0, const VectorField2& b0, double p, double C,
                                       const DyadicFilterBank& bank) {
    if (!(C > 0.0)) throw std::invalid_argument("compute_lifespan: C must be positive");
    LifespanReport rep;
    rep.p = p;
    rep.C = C;
    rep.a = 1.0 / (24.0 * C);
    rep.E0 = compute_E0(u0, b0, p, bank);
    const auto blocks = block_norms(u0, p, bank);
    rep.u_low = besov_from_blocks(blocks, 2.0 / p - 1.0, 1.0);
    rep.u_mid = besov_from_blocks(blocks, 2.0 / p, 1.0);
    rep.T0 = lifespan_T0(rep.E0, rep.a, C);
    if (rep.u_low <= rep.a) {
        rep.branch = LifespanBranch::small_data;
        rep.T = rep.T0;
        return rep;
    }
    rep.branch = LifespanBranch::large_data;
    rep.j0 = find_j0(u0, rep.a, p, bank);
    const double scale = std::pow(2.0, -2.0 * *rep.j0);
    rep.T1 = (rep.a / 4.0) * scale / rep.u_mid;
    rep.T2 = (rep.a * rep.a / 16.0) * scale / (rep.u_mid * rep.u_mid);
    rep.T = std::min({rep.T0, *rep.T1, *rep.T2});
    return rep;
}

struct SemigroupSmallnessReport {
    double l1_norm = 0.0;  // ||e^{t Delta} u0||_{L^1_T(B^{2/p+2}_{p,1})}
    double l2_norm = 0.0;  // ||e^{t Delta} u0||_{L^2_T(B^{2/p+1}_{p,1})}
    double total = 0.0;
    double a = 0.0;
    bool pass = false;
};

/// Time integrals of the exact heat flow by adaptive Gauss-Kronrod quadrature.
inline SemigroupSmallnessReport verify_semigroup_smallness(const VectorField2& u0, double T, double a, double p,
                                                           const DyadicFilterBank& bank) {
    if (!(T > 0.0)) throw std::invalid_argument("verify_semigroup_smallness: T must be positive");
    using boost::math::quadrature::gauss_kronrod;
    const BesovParams p1(2.0 / p + 2.0, p, 1.0), p2(2.0 / p + 1.0, p, 1.0);
    SemigroupSmallnessReport rep;
    rep.a = a;
    // Integrate over s = t / T in [0, 1] with the integrand scaled to O(1).
    const double n1 = besov_norm(u0, p1, bank), n2 = besov_norm(u0, p2, bank);
    if (n1 > 0.0) {
        auto l1 = [&](double s) { return besov_norm(heat_semigroup(u0, s * T), p1, bank) / n1; };
        auto l2 = [&](double s) {
            const double v = besov_norm(heat_semigroup(u0, s * T), p2, bank) / n2;
            return v * v;
        };
        rep.l1_norm = n1 * T * gauss_kronrod<double, 31>::integrate(l1, 0.0, 1.0, 15, 1e-10);
        rep.l2_norm = n2 * std::sqrt(T * gauss_kronrod<double, 31>::integrate(l2, 0.0, 1.0, 15, 1e-10));
    }
    rep.total = rep.l1_norm + rep.l2_norm;
    rep.pass = rep.total <= a;
    return rep;
}

}  // namespace besov_mhd

#pragma once

// Spectral differential operators, Leray projection, dealiasing and L^p norms
// on the 2-torus.

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "field.hpp"

namespace besov_mhd {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

namespace detail {

// Applies a per-mode multiplier m(row, col) to a spectrum.
template <class Multiplier>
Spectrum apply_multiplier(const TorusGrid& grid, const Spectrum& in, Multiplier&& m) {
    Spectrum out(in.size());
    const int n = grid.n(), cols = grid.columns();
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < cols; ++c) {
            const std::size_t i = static_cast<std::size_t>(r) * cols + c;
            out[i] = in[i] * m(r, c);
        }
    return out;
}

inline Spectrum derivative(const TorusGrid& grid, const Spectrum& in, int axis) {
    if (axis == 1)
        return apply_multiplier(grid, in, [&](int r, int) { return Complex(0.0, grid.derivative_k1(r)); });
    return apply_multiplier(grid, in, [&](int, int c) { return Complex(0.0, grid.derivative_k2(c)); });
}

inline Spectrum laplacian(const TorusGrid& grid, const Spectrum& in) {
    return apply_multiplier(grid, in, [&](int r, int c) { return Complex(-grid.k_squared(r, c), 0.0); });
}

// v - k (k . v) / |k|^2 per mode, with derivative wavenumbers; k = 0 passes through.
inline void leray_in_place(const TorusGrid& grid, Spectrum& vx, Spectrum& vy) {
    const int n = grid.n(), cols = grid.columns();
    for (int r = 0; r < n; ++r) {
        const double a = grid.derivative_k1(r);
        for (int c = 0; c < cols; ++c) {
            const double b = grid.derivative_k2(c);
            const double k2 = a * a + b * b;
            if (k2 == 0.0) continue;
            const std::size_t i = static_cast<std::size_t>(r) * cols + c;
            const Complex dot = (a * vx[i] + b * vy[i]) / k2;
            vx[i] -= a * dot;
            vy[i] -= b * dot;
        }
    }
}

// grad div (-Delta)^{-1} per mode: (ik)(ik . v)/|k|^2 = -k (k . v)/|k|^2.
inline void grad_div_over_minus_laplacian(const TorusGrid& grid, const Spectrum& vx, const Spectrum& vy, Spectrum& ox,
                                          Spectrum& oy) {
    const int n = grid.n(), cols = grid.columns();
    ox.assign(vx.size(), Complex{});
    oy.assign(vy.size(), Complex{});
    for (int r = 0; r < n; ++r) {
        const double a = grid.derivative_k1(r);
        for (int c = 0; c < cols; ++c) {
            const double b = grid.derivative_k2(c);
            const double k2 = a * a + b * b;
            if (k2 == 0.0) continue;
            const std::size_t i = static_cast<std::size_t>(r) * cols + c;
            const Complex dot = (a * vx[i] + b * vy[i]) / k2;
            ox[i] = -a * dot;
            oy[i] = -b * dot;
        }
    }
}

inline void dealias_in_place(const TorusGrid& grid, Spectrum& s) {
    const int n = grid.n(), cols = grid.columns();
    for (int r = 0; r < n; ++r) {
        const bool row_cut = 3 * std::abs(grid.k1(r)) > n;
        for (int c = 0; c < cols; ++c)
            if (row_cut || 3 * c > n) s[static_cast<std::size_t>(r) * cols + c] = 0.0;
    }
}

// Sum over the full spectrum of w(k) |c_k|^2.
template <class Weight>
double weighted_energy(const TorusGrid& grid, const Spectrum& s, Weight&& w) {
    const int n = grid.n(), cols = grid.columns();
    double acc = 0.0;
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < cols; ++c)
            acc += grid.hermitian_weight(c) * w(r, c) * std::norm(s[static_cast<std::size_t>(r) * cols + c]);
    return acc;
}

inline double lp_norm_of_values(const TorusGrid& grid, const std::vector<double>& v, double p) {
    if (!(p >= 1.0)) throw std::invalid_argument("lp_norm: p must be >= 1");
    if (std::isinf(p)) {
        double m = 0.0;
        for (double x : v) m = std::max(m, std::abs(x));
        return m;
    }
    double acc = 0.0;
    if (p == 1.0)
        for (double x : v) acc += std::abs(x);
    else if (p == 2.0)
        for (double x : v) acc += x * x;
    else
        for (double x : v) acc += std::pow(std::abs(x), p);
    return std::pow(grid.measure() * acc / static_cast<double>(v.size()), 1.0 / p);
}

}  // namespace detail

inline ScalarField transform_forward(const ScalarField& f) { return ScalarField::from_values(f.grid(), f.values()); }
inline ScalarField transform_inverse(const ScalarField& f) {
    return ScalarField::from_coefficients(f.grid(), f.coefficients());
}

/// Spectral derivative along axis 1 (x1) or 2 (x2); Nyquist mode zeroed.
inline ScalarField derivative(const ScalarField& f, int axis) {
    if (axis != 1 && axis != 2) throw std::invalid_argument("derivative: axis must be 1 or 2");
    return ScalarField::from_coefficients(f.grid(), detail::derivative(f.grid(), f.coefficients(), axis));
}

inline ScalarField laplacian(const ScalarField& f) {
    return ScalarField::from_coefficients(f.grid(), detail::laplacian(f.grid(), f.coefficients()));
}

inline VectorField2 gradient(const ScalarField& f) { return {derivative(f, 1), derivative(f, 2)}; }

inline ScalarField divergence(const VectorField2& v) {
    const auto& g = v.grid();
    Spectrum a = detail::derivative(g, v.x().coefficients(), 1);
    const Spectrum b = detail::derivative(g, v.y().coefficients(), 2);
    for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
    return ScalarField::from_coefficients(g, std::move(a));
}

/// Leray projection onto divergence-free fields. The mean (k = 0) is kept.
inline VectorField2 leray_project(const VectorField2& v) {
    Spectrum x = v.x().coefficients(), y = v.y().coefficients();
    detail::leray_in_place(v.grid(), x, y);
    return {ScalarField::from_coefficients(v.grid(), std::move(x)), ScalarField::from_coefficients(v.grid(), std::move(y))};
}

/// Scalar curl d1 v2 - d2 v1.
inline ScalarField curl2d(const VectorField2& v) {
    const auto& g = v.grid();
    Spectrum a = detail::derivative(g, v.y().coefficients(), 1);
    const Spectrum b = detail::derivative(g, v.x().coefficients(), 2);
    for (std::size_t i = 0; i < a.size(); ++i) a[i] -= b[i];
    return ScalarField::from_coefficients(g, std::move(a));
}

/// 2/3-rule truncation: modes with max(|k1|, |k2|) > n/3 are removed.
inline ScalarField dealias(const ScalarField& f) {
    Spectrum s = f.coefficients();
    detail::dealias_in_place(f.grid(), s);
    return ScalarField::from_coefficients(f.grid(), std::move(s));
}

inline VectorField2 dealias(const VectorField2& v) { return {dealias(v.x()), dealias(v.y())}; }

/// Discrete L^p norm with the torus measure (2 pi)^2 included; p = kInfinity
/// takes the maximum over collocation points.
inline double lp_norm(const ScalarField& f, double p) { return detail::lp_norm_of_values(f.grid(), f.values(), p); }

/// Sum of component norms.
inline double lp_norm(const VectorField2& v, double p) { return lp_norm(v.x(), p) + lp_norm(v.y(), p); }

/// L^2 norm from the coefficients (discrete Parseval).
inline double spectral_l2(const ScalarField& f) {
    return std::sqrt(f.grid().measure() * detail::weighted_energy(f.grid(), f.coefficients(), [](int, int) { return 1.0; }));
}

inline double spectral_l2(const VectorField2& v) {
    const double a = spectral_l2(v.x()), b = spectral_l2(v.y());
    return std::sqrt(a * a + b * b);
}

/// Homogeneous H^1 seminorm (sum |k|^2 |c_k|^2 times measure)^(1/2); vector
/// fields combine components in l^2.
inline double homogeneous_h1(const ScalarField& f) {
    const auto& g = f.grid();
    return std::sqrt(g.measure() * detail::weighted_energy(g, f.coefficients(), [&](int r, int c) { return g.k_squared(r, c); }));
}

inline double homogeneous_h1(const VectorField2& v) {
    const double a = homogeneous_h1(v.x()), b = homogeneous_h1(v.y());
    return std::sqrt(a * a + b * b);
}

/// Inhomogeneous Sobolev norm with weight (1 + |k|^2)^s.
inline double sobolev_norm(const ScalarField& f, double s) {
    const auto& g = f.grid();
    return std::sqrt(g.measure() *
                     detail::weighted_energy(g, f.coefficients(), [&](int r, int c) { return std::pow(1.0 + g.k_squared(r, c), s); }));
}

inline double sobolev_norm(const VectorField2& v, double s) {
    const double a = sobolev_norm(v.x(), s), b = sobolev_norm(v.y(), s);
    return std::sqrt(a * a + b * b);
}

/// Relative divergence residual ||div v||_2 / ||v||_2 (0 for the zero field).
inline double divergence_residual(const VectorField2& v) {
    const double norm = spectral_l2(v);
    if (norm == 0.0) return 0.0;
    return spectral_l2(divergence(v)) / norm;
}

}  // namespace besov_mhd

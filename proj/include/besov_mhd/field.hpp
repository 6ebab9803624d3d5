#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fft.hpp"

namespace besov_mhd {

using Complex = std::complex<double>;
using Spectrum = std::vector<Complex>;

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Uniform n x n collocation grid on the torus [0, 2pi)^2.
///
/// Spectral data uses the half-plane layout of a real-to-complex transform:
/// row i1 in [0, n) carries wavenumber k1 (wrapped to [-n/2, n/2)), column m2 in
/// [0, n/2] carries k2 = m2. The mode (-k1, -k2) is the complex conjugate of
/// (k1, k2) and is not stored.
class TorusGrid {
public:
    explicit TorusGrid(int n_points) : n_(n_points) {
        if (n_points < 8 || (n_points & (n_points - 1)) != 0) {
            throw std::invalid_argument("TorusGrid: n_points must be a power of two >= 8, got " +
                                        std::to_string(n_points));
        }
    }

    int n() const { return n_; }
    int columns() const { return n_ / 2 + 1; }
    std::size_t size() const { return static_cast<std::size_t>(n_) * n_; }
    std::size_t spectral_size() const { return static_cast<std::size_t>(n_) * columns(); }
    double length() const { return kTwoPi; }
    double measure() const { return kTwoPi * kTwoPi; }
    double spacing() const { return kTwoPi / n_; }
    double coordinate(int i) const { return spacing() * i; }

    int k1(int row) const { return row <= n_ / 2 ? row : row - n_; }
    int k2(int col) const { return col; }
    bool nyquist(int k) const { return k == n_ / 2 || k == -n_ / 2; }

    // Wavenumber used by first derivatives: Nyquist modes are mapped to zero so
    // derivatives of real fields stay real.
    double derivative_k1(int row) const { return nyquist(k1(row)) ? 0.0 : k1(row); }
    double derivative_k2(int col) const { return nyquist(k2(col)) ? 0.0 : k2(col); }

    double k_squared(int row, int col) const {
        const double a = k1(row), b = k2(col);
        return a * a + b * b;
    }

    // Multiplicity of a stored half-plane coefficient in the full spectrum.
    double hermitian_weight(int col) const { return (col == 0 || col == n_ / 2) ? 1.0 : 2.0; }

    // Storage index of the full-lattice mode (k1, k2), plus whether the stored
    // value must be conjugated. Modes outside the resolved lattice return false.
    bool locate(int k1v, int k2v, std::size_t& index, bool& conjugate) const {
        const int h = n_ / 2;
        auto wrap = [&](int k) { return ((k % n_) + n_) % n_; };
        if (k1v < -h || k1v > h || k2v < -h || k2v > h) return false;
        conjugate = false;
        int r = wrap(k1v), c = k2v;
        if (c < 0) {
            c = -c;
            r = wrap(-k1v);
            conjugate = true;
        }
        if (c > h) return false;
        index = static_cast<std::size_t>(r) * columns() + c;
        return true;
    }

    friend bool operator==(const TorusGrid& a, const TorusGrid& b) { return a.n_ == b.n_; }

private:
    int n_;
};

namespace detail {

// Forward transform normalized by n^2 so the (0,0) coefficient is the mean.
inline Spectrum forward_transform(const TorusGrid& grid, const std::vector<double>& values) {
    Spectrum out(grid.spectral_size());
    detail::FftPlan::for_size(grid.n()).forward(values.data(), out.data());
    const double scale = 1.0 / static_cast<double>(grid.size());
    for (auto& c : out) c *= scale;
    return out;
}

inline std::vector<double> inverse_transform(const TorusGrid& grid, const Spectrum& coeffs) {
    std::vector<double> out(grid.size());
    detail::FftPlan::for_size(grid.n()).inverse(coeffs.data(), out.data());
    return out;
}

}  // namespace detail

/// Real scalar field on the torus, held in collocation and spectral form.
///
/// Instances are immutable; every operation returns a new field.
class ScalarField {
public:
    static ScalarField from_values(const TorusGrid& grid, std::vector<double> values) {
        if (values.size() != grid.size()) throw std::invalid_argument("ScalarField: value array size mismatch");
        Spectrum coeffs = detail::forward_transform(grid, values);
        return ScalarField(grid, std::move(values), std::move(coeffs));
    }

    static ScalarField from_coefficients(const TorusGrid& grid, Spectrum coeffs) {
        if (coeffs.size() != grid.spectral_size())
            throw std::invalid_argument("ScalarField: coefficient array size mismatch");
        std::vector<double> values = detail::inverse_transform(grid, coeffs);
        return ScalarField(grid, std::move(values), std::move(coeffs));
    }

    template <class F>
    static ScalarField from_function(const TorusGrid& grid, F&& f) {
        std::vector<double> v(grid.size());
        const int n = grid.n();
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) v[static_cast<std::size_t>(i) * n + j] = f(grid.coordinate(i), grid.coordinate(j));
        return from_values(grid, std::move(v));
    }

    static ScalarField zero(const TorusGrid& grid) {
        return ScalarField(grid, std::vector<double>(grid.size(), 0.0), Spectrum(grid.spectral_size()));
    }

    static ScalarField constant(const TorusGrid& grid, double c) {
        Spectrum s(grid.spectral_size());
        s[0] = c;
        return ScalarField(grid, std::vector<double>(grid.size(), c), std::move(s));
    }

    const TorusGrid& grid() const { return grid_; }
    const std::vector<double>& values() const { return values_; }
    const Spectrum& coefficients() const { return coeffs_; }

    double value(int i1, int i2) const { return values_[static_cast<std::size_t>(i1) * grid_.n() + i2]; }

    /// Coefficient of the full-lattice mode (k1, k2); zero if unresolved.
    Complex coefficient(int k1, int k2) const {
        std::size_t idx;
        bool conj;
        if (!grid_.locate(k1, k2, idx, conj)) return {0.0, 0.0};
        return conj ? std::conj(coeffs_[idx]) : coeffs_[idx];
    }

    double mean() const { return coeffs_[0].real(); }

    ScalarField operator-() const { return scaled(-1.0); }

    ScalarField scaled(double c) const {
        std::vector<double> v(values_);
        Spectrum s(coeffs_);
        for (auto& x : v) x *= c;
        for (auto& x : s) x *= c;
        return ScalarField(grid_, std::move(v), std::move(s));
    }

    friend ScalarField operator*(double c, const ScalarField& f) { return f.scaled(c); }
    friend ScalarField operator*(const ScalarField& f, double c) { return f.scaled(c); }

    friend ScalarField operator+(const ScalarField& a, const ScalarField& b) { return combine(a, 1.0, b, 1.0); }
    friend ScalarField operator-(const ScalarField& a, const ScalarField& b) { return combine(a, 1.0, b, -1.0); }

    /// alpha * a + beta * b without any transform.
    static ScalarField combine(const ScalarField& a, double alpha, const ScalarField& b, double beta) {
        if (!(a.grid_ == b.grid_)) throw std::invalid_argument("ScalarField: grid mismatch");
        std::vector<double> v(a.values_.size());
        Spectrum s(a.coeffs_.size());
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = alpha * a.values_[i] + beta * b.values_[i];
        for (std::size_t i = 0; i < s.size(); ++i) s[i] = alpha * a.coeffs_[i] + beta * b.coeffs_[i];
        return ScalarField(a.grid_, std::move(v), std::move(s));
    }

    /// Pointwise product, not dealiased.
    friend ScalarField pointwise_product(const ScalarField& a, const ScalarField& b) {
        std::vector<double> v(a.values_.size());
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = a.values_[i] * b.values_[i];
        return from_values(a.grid_, std::move(v));
    }

private:
    ScalarField(const TorusGrid& grid, std::vector<double> values, Spectrum coeffs)
        : grid_(grid), values_(std::move(values)), coeffs_(std::move(coeffs)) {}

    TorusGrid grid_;
    std::vector<double> values_;
    Spectrum coeffs_;
};

/// Planar vector field (x, y components on one grid).
class VectorField2 {
public:
    VectorField2(ScalarField x, ScalarField y) : x_(std::move(x)), y_(std::move(y)) {
        if (!(x_.grid() == y_.grid())) throw std::invalid_argument("VectorField2: components on different grids");
    }

    static VectorField2 zero(const TorusGrid& grid) { return {ScalarField::zero(grid), ScalarField::zero(grid)}; }

    const ScalarField& x() const { return x_; }
    const ScalarField& y() const { return y_; }
    const ScalarField& operator[](int axis) const { return axis == 0 ? x_ : y_; }
    const TorusGrid& grid() const { return x_.grid(); }

    VectorField2 scaled(double c) const { return {x_.scaled(c), y_.scaled(c)}; }
    friend VectorField2 operator*(double c, const VectorField2& v) { return v.scaled(c); }
    friend VectorField2 operator+(const VectorField2& a, const VectorField2& b) { return {a.x_ + b.x_, a.y_ + b.y_}; }
    friend VectorField2 operator-(const VectorField2& a, const VectorField2& b) { return {a.x_ - b.x_, a.y_ - b.y_}; }

private:
    ScalarField x_;
    ScalarField y_;
};

}  // namespace besov_mhd

#pragma once

// Lawson (integrating-factor) fourth-order Runge-Kutta on spectral states.
//
// The stiff part is the heat operator Delta applied to the components flagged
// as diffusive; it is integrated exactly per mode. Components that are not
// diffusive are advanced by classical RK4. Scalars ride along as plain ODE
// variables, which lets time integrals of stage quantities be accumulated with
// the same order as the fields.

#include <cmath>
#include <stdexcept>
#include <vector>

#include "field.hpp"

namespace besov_mhd {

struct SpectralState {
    std::vector<Spectrum> fields;
    std::vector<double> scalars;
};

namespace detail {

// y += a * x
inline void axpy(SpectralState& y, double a, const SpectralState& x) {
    for (std::size_t f = 0; f < y.fields.size(); ++f) {
        auto& yf = y.fields[f];
        const auto& xf = x.fields[f];
        for (std::size_t i = 0; i < yf.size(); ++i) yf[i] += a * xf[i];
    }
    for (std::size_t s = 0; s < y.scalars.size(); ++s) y.scalars[s] += a * x.scalars[s];
}

inline bool all_finite(const SpectralState& y) {
    for (const auto& f : y.fields)
        for (const auto& c : f)
            if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return false;
    for (double s : y.scalars)
        if (!std::isfinite(s)) return false;
    return true;
}

}  // namespace detail

/// Per-mode factors e^{-|k|^2 h} and e^{-|k|^2 h/2}.
class IntegratingFactor {
public:
    IntegratingFactor(const TorusGrid& grid, std::vector<bool> diffusive, double h)
        : diffusive_(std::move(diffusive)), h_(h) {
        const int n = grid.n(), cols = grid.columns();
        full_.resize(grid.spectral_size());
        half_.resize(grid.spectral_size());
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < cols; ++c) {
                const std::size_t i = static_cast<std::size_t>(r) * cols + c;
                const double k2 = grid.k_squared(r, c);
                full_[i] = std::exp(-k2 * h);
                half_[i] = std::exp(-k2 * 0.5 * h);
            }
    }

    double step() const { return h_; }

    void apply(SpectralState& y, bool half) const {
        const auto& m = half ? half_ : full_;
        for (std::size_t f = 0; f < y.fields.size(); ++f) {
            if (!diffusive_.at(f)) continue;
            auto& yf = y.fields[f];
            for (std::size_t i = 0; i < yf.size(); ++i) yf[i] *= m[i];
        }
    }

private:
    std::vector<bool> diffusive_;
    double h_;
    std::vector<double> full_;
    std::vector<double> half_;
};

/// One Lawson-RK4 step of y' = Delta_D y + N(t, y), where Delta_D acts on the
/// diffusive components. rhs(t, y) returns N(t, y) with the shape of y and
/// observes the stage states, which approximate y at the stage times.
template <class Rhs>
SpectralState lawson_rk4_step(const SpectralState& y, double t, double h, const IntegratingFactor& ef, Rhs&& rhs) {
    if (std::abs(ef.step() - h) > 1e-14 * std::abs(h)) throw std::invalid_argument("integrating factor built for another step");
    const SpectralState k1 = rhs(t, y);

    SpectralState ey_half = y;
    ef.apply(ey_half, true);
    SpectralState ey = y;
    ef.apply(ey, false);

    SpectralState ya = y;
    detail::axpy(ya, 0.5 * h, k1);
    ef.apply(ya, true);
    const SpectralState k2 = rhs(t + 0.5 * h, ya);

    SpectralState yb = ey_half;
    detail::axpy(yb, 0.5 * h, k2);
    const SpectralState k3 = rhs(t + 0.5 * h, yb);

    SpectralState ek3 = k3;
    ef.apply(ek3, true);
    SpectralState yc = ey;
    detail::axpy(yc, h, ek3);
    const SpectralState k4 = rhs(t + h, yc);

    SpectralState ek1 = k1;
    ef.apply(ek1, false);
    SpectralState mid = k2;
    detail::axpy(mid, 1.0, k3);
    ef.apply(mid, true);

    SpectralState out = std::move(ey);
    detail::axpy(out, h / 6.0, ek1);
    detail::axpy(out, h / 3.0, mid);
    detail::axpy(out, h / 6.0, k4);
    return out;
}

/// Number of uniform steps of size dt covering [0, T]; T must be a multiple of dt.
inline long uniform_step_count(double T, double dt) {
    if (!(T > 0.0) || !(dt > 0.0)) throw std::invalid_argument("T and dt must be positive");
    if (dt > T * (1.0 + 1e-12)) throw std::invalid_argument("dt must not exceed T");
    const double q = T / dt;
    const long steps = std::lround(q);
    if (std::abs(q - static_cast<double>(steps)) > 1e-8 * q) throw std::invalid_argument("T must be a multiple of dt");
    return steps;
}

}  // namespace besov_mhd

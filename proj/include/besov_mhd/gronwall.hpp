#pragma once

// Osgood-type comparison bounds for rho' <= gamma(t) mu(rho), rho(0) = rho0.

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>

#include "propagators.hpp"

namespace besov_mhd {

enum class ModulusKind {
    linear,    // mu(r) = r
    log_plus,  // mu(r) = c r (1 + ln(e + r))
    log_frac,  // mu(r) = r + r ln(e + c / r)
    general,   // user mu, bound by inverting M(x) = int_x^a dr / mu(r)
};

inline std::string to_string(ModulusKind k) {
    switch (k) {
        case ModulusKind::linear: return "linear";
        case ModulusKind::log_plus: return "log-plus";
        case ModulusKind::log_frac: return "log-frac";
        case ModulusKind::general: return "general";
    }
    return "unknown";
}

struct ModulusParams {
    double c = 1.0;
    double a = 1.0;        // upper end of the range of rho, general kind only
    double C = 1.0;        // prefactor of the displayed log-frac form
    std::function<double(double)> mu;  // general kind only
};

inline double modulus_value(ModulusKind kind, const ModulusParams& prm, double r) {
    constexpr double e = std::numbers::e;
    switch (kind) {
        case ModulusKind::linear: return r;
        case ModulusKind::log_plus: return prm.c * r * (1.0 + std::log(e + r));
        case ModulusKind::log_frac: return r > 0.0 ? r + r * std::log(e + prm.c / r) : 0.0;
        case ModulusKind::general: return prm.mu(r);
    }
    return 0.0;
}

struct GronwallSeries {
    std::vector<double> times;
    std::vector<double> Gamma;  // int_0^t gamma
    std::vector<double> bound;
    /// log-frac only: C rho0 e^Gamma / (c - rho0 (e^Gamma - e)); NaN where the denominator is <= 0.
    std::vector<double> displayed_form;
    bool truncated = false;
    double truncation_time = std::numeric_limits<double>::infinity();
    /// general kind: the bound reached the top of the range a.
    bool saturated = false;
};

namespace detail {

inline double osgood_M(const ModulusParams& prm, double x) {
    using boost::math::quadrature::gauss_kronrod;
    if (x >= prm.a) return 0.0;
    return gauss_kronrod<double, 31>::integrate([&](double r) { return 1.0 / prm.mu(r); }, x, prm.a, 15, 1e-12);
}

inline GronwallSeries gronwall_from_Gamma(double rho0, std::vector<double> times, std::vector<double> Gamma,
                                          ModulusKind kind, const ModulusParams& prm) {
    if (!(rho0 >= 0.0)) throw std::invalid_argument("gronwall_bound: rho0 must be >= 0");
    if (kind == ModulusKind::general && (!prm.mu || !(prm.a > rho0)))
        throw std::invalid_argument("gronwall_bound: general kind needs mu and a > rho0");
    constexpr double e = std::numbers::e;
    GronwallSeries out;
    out.times = std::move(times);
    out.Gamma = std::move(Gamma);
    const double M0 = kind == ModulusKind::general && rho0 > 0.0 ? osgood_M(prm, rho0) : 0.0;
    for (std::size_t i = 0; i < out.times.size(); ++i) {
        const double G = out.Gamma[i];
        double b = 0.0;
        switch (kind) {
            case ModulusKind::linear: b = rho0 * std::exp(G); break;
            case ModulusKind::log_plus:
                b = rho0 * std::exp((1.0 + std::log(e + rho0)) * std::expm1(prm.c * G));
                break;
            case ModulusKind::log_frac: {
                b = rho0 > 0.0 ? rho0 * std::exp((1.0 + std::log(e + prm.c / rho0)) * G) : 0.0;
                const double denom = prm.c - rho0 * (std::exp(G) - e);
                if (denom > 0.0) {
                    out.displayed_form.push_back(prm.C * rho0 * std::exp(G) / denom);
                } else {
                    out.displayed_form.push_back(std::numeric_limits<double>::quiet_NaN());
                    if (!out.truncated) {
                        out.truncated = true;
                        out.truncation_time = out.times[i];
                    }
                }
                break;
            }
            case ModulusKind::general: {
                if (rho0 == 0.0) break;
                const double target = M0 - G;
                if (target <= 0.0) {
                    b = prm.a;
                    out.saturated = true;
                    break;
                }
                auto f = [&](double x) { return osgood_M(prm, x) - target; };
                boost::math::tools::eps_tolerance<double> tol(48);
                std::uintmax_t iters = 200;
                const auto [lo, hi] = boost::math::tools::bisect(f, rho0, prm.a, tol, iters);
                b = hi;
                (void)lo;
                break;
            }
        }
        out.bound.push_back(b);
    }
    return out;
}

}  // namespace detail

/// Bound from samples gamma(t_i); the time integral is the cumulative trapezoid.
inline GronwallSeries gronwall_bound(double rho0, const std::vector<double>& times, const std::vector<double>& gamma,
                                     ModulusKind kind, const ModulusParams& prm = {}) {
    if (times.size() != gamma.size()) throw std::invalid_argument("gronwall_bound: size mismatch");
    for (double g : gamma)
        if (!(g >= 0.0)) throw std::invalid_argument("gronwall_bound: gamma must be >= 0");
    return detail::gronwall_from_Gamma(rho0, times, detail::cumulative_trapezoid(times, gamma), kind, prm);
}

/// Bound for a callable gamma; int_0^t gamma by adaptive Gauss-Kronrod on each interval.
inline GronwallSeries gronwall_bound(double rho0, const std::function<double(double)>& gamma,
                                     const std::vector<double>& times, ModulusKind kind, const ModulusParams& prm = {}) {
    using boost::math::quadrature::gauss_kronrod;
    std::vector<double> G(times.size(), 0.0);
    double prev = 0.0, acc = 0.0;
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (times[i] < prev) throw std::invalid_argument("gronwall_bound: times must be nondecreasing from 0");
        if (times[i] > prev) acc += gauss_kronrod<double, 31>::integrate(gamma, prev, times[i], 15, 1e-13);
        G[i] = acc;
        prev = times[i];
    }
    return detail::gronwall_from_Gamma(rho0, times, std::move(G), kind, prm);
}

}  // namespace besov_mhd

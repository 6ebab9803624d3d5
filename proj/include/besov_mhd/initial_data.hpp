#pragma once

// Initial-data library and the smallness checks of the global theory.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "littlewood_paley.hpp"
#include "mhd.hpp"
#include "snapshot_io.hpp"

namespace besov_mhd {

enum class InitialDataKind { remark15, single_mode, random_solenoidal, file };

inline std::string to_string(InitialDataKind k) {
    switch (k) {
        case InitialDataKind::remark15: return "remark15";
        case InitialDataKind::single_mode: return "single-mode";
        case InitialDataKind::random_solenoidal: return "random-solenoidal";
        case InitialDataKind::file: return "file";
    }
    return "unknown";
}

inline InitialDataKind parse_initial_data_kind(const std::string& s) {
    if (s == "remark15") return InitialDataKind::remark15;
    if (s == "single-mode") return InitialDataKind::single_mode;
    if (s == "random-solenoidal") return InitialDataKind::random_solenoidal;
    if (s == "file") return InitialDataKind::file;
    throw std::invalid_argument("unknown initial data kind '" + s + "'");
}

struct InitialDataSpec {
    InitialDataKind kind = InitialDataKind::remark15;
    int n = 4;
    /// remark15: multiplier of the family's amplitudes; single-mode: amplitude;
    /// random: target of ||u||_{B^1_{inf,1}} + ||b||_{B^0_{inf,1}}.
    double scale = 1.0;
    int band_min = 1;
    int band_max = 4;
    std::uint64_t seed = 0;
    bool with_magnetic = true;
    std::filesystem::path path;
};

/// a sin(n x_axis) or a cos(n x_axis), built from its two Fourier coefficients.
inline ScalarField trig_mode(const TorusGrid& g, int axis, int n, double a, bool cosine = false) {
    Spectrum s(g.spectral_size());
    const Complex c = cosine ? Complex(a / 2.0, 0.0) : Complex(0.0, -a / 2.0);
    const int cols = g.columns();
    if (axis == 1) {
        s[static_cast<std::size_t>(n) * cols] = c;
        s[static_cast<std::size_t>(g.n() - n) * cols] = std::conj(c);
    } else {
        s[static_cast<std::size_t>(n)] = c;
    }
    return ScalarField::from_coefficients(g, std::move(s));
}

/// u0 = n^{-7/2}/10 (sin n x2, sin n x1), b0 = n^{-5/2}/10 (sin n x2, sin n x1).
inline MHDState remark15_data(const TorusGrid& g, int n, double scale = 1.0) {
    const double au = scale / (10.0 * std::pow(n, 3.5)), ab = scale / (10.0 * std::pow(n, 2.5));
    auto pair = [&](double a) { return VectorField2(trig_mode(g, 2, n, a), trig_mode(g, 1, n, a)); };
    return {pair(au), pair(ab), 0.0};
}

/// ||u||_{B^1_{inf,1}} + ||b||_{B^0_{inf,1}}.
inline double critical_smallness(const VectorField2& u, const VectorField2& b, const DyadicFilterBank& bank) {
    return besov_norm(u, BesovParams(1.0, kInfinity, 1.0), bank) + besov_norm(b, BesovParams(0.0, kInfinity, 1.0), bank);
}

namespace detail {

inline VectorField2 random_band_field(const TorusGrid& g, std::mt19937_64& rng, int lo, int hi) {
    std::normal_distribution<double> N(0.0, 1.0);
    const int cols = g.columns();
    auto component = [&] {
        Spectrum s(g.spectral_size());
        for (int r = 0; r < g.n(); ++r)
            for (int c = 0; c < cols; ++c) {
                const int k1 = g.k1(r);
                const int m = std::max(std::abs(k1), c);
                const Complex z(N(rng), N(rng));
                if (m < lo || m > hi || (c == 0 && k1 <= 0)) continue;
                s[static_cast<std::size_t>(r) * cols + c] = z;
            }
        for (int k1 = 1; k1 < g.n() / 2; ++k1)
            s[static_cast<std::size_t>(g.n() - k1) * cols] = std::conj(s[static_cast<std::size_t>(k1) * cols]);
        return ScalarField::from_coefficients(g, std::move(s));
    };
    ScalarField x = component();
    ScalarField y = component();
    return leray_project(VectorField2(std::move(x), std::move(y)));
}

inline void check_resolved(const TorusGrid& g, int n) {
    if (n < 1) throw std::invalid_argument("initial data: mode number must be >= 1");
    if (3 * n > g.n()) throw std::invalid_argument("initial data: mode " + std::to_string(n) +
                                                   " is beyond the dealiasing cutoff of a " + std::to_string(g.n()) + " grid");
}

}  // namespace detail

inline void write_state_file(const std::filesystem::path& path, const MHDState& s) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
    write_snapshot(os, s.u);
    write_snapshot(os, s.b);
    if (!os) throw std::runtime_error("write failed: " + path.string());
}

/// A state file holds two vector snapshots, u then b.
inline MHDState read_state_file(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open " + path.string());
    auto u = read_snapshot(is), b = read_snapshot(is);
    if (!std::holds_alternative<VectorField2>(u) || !std::holds_alternative<VectorField2>(b))
        throw std::runtime_error(path.string() + ": expected two vector snapshots");
    return {std::get<VectorField2>(u), std::get<VectorField2>(b), 0.0};
}

inline MHDState make_initial_data(const InitialDataSpec& spec, const TorusGrid& g) {
    switch (spec.kind) {
        case InitialDataKind::remark15: {
            detail::check_resolved(g, spec.n);
            MHDState s = remark15_data(g, spec.n, spec.scale);
            if (!spec.with_magnetic) s.b = VectorField2::zero(g);
            return s;
        }
        case InitialDataKind::single_mode: {
            detail::check_resolved(g, spec.n);
            const int n = spec.n;
            const double a = spec.scale;
            VectorField2 u(trig_mode(g, 2, n, a), trig_mode(g, 1, n, a));
            VectorField2 b(trig_mode(g, 2, n, a, true), ScalarField::zero(g));
            return {std::move(u), spec.with_magnetic ? std::move(b) : VectorField2::zero(g), 0.0};
        }
        case InitialDataKind::random_solenoidal: {
            if (spec.band_min < 1 || spec.band_max < spec.band_min)
                throw std::invalid_argument("initial data: band must satisfy 1 <= band_min <= band_max");
            detail::check_resolved(g, spec.band_max);
            std::mt19937_64 rng(spec.seed);
            VectorField2 u = detail::random_band_field(g, rng, spec.band_min, spec.band_max);
            VectorField2 b = detail::random_band_field(g, rng, spec.band_min, spec.band_max);
            const DyadicFilterBank bank(g);
            const double nu = besov_norm(u, BesovParams(1.0, kInfinity, 1.0), bank);
            const double nb = besov_norm(b, BesovParams(0.0, kInfinity, 1.0), bank);
            const double target = spec.with_magnetic ? spec.scale / 2.0 : spec.scale;
            u = u.scaled(target / nu);
            b = spec.with_magnetic ? b.scaled(target / nb) : VectorField2::zero(g);
            return {std::move(u), std::move(b), 0.0};
        }
        case InitialDataKind::file: {
            MHDState s = read_state_file(spec.path);
            if (!(s.u.grid() == g)) throw std::invalid_argument("initial data: file grid differs from the configured grid");
            return s;
        }
    }
    throw std::invalid_argument("initial data: unknown kind");
}

struct SmallnessThresholds {
    double epsilon = 0.05;  // bound on ||u0||_{B^1_{inf,1}} + ||b0||_{B^0_{inf,1}}
    double C = 1.0;
    double c = 1.0;
    double s = 4.0;  // Sobolev index, s > 2
};

struct SmallnessReport {
    double mean_b = 0.0;  // |int b0 dx|
    double critical = 0.0;  // ||u0||_{B^1_{inf,1}} + ||b0||_{B^0_{inf,1}}
    double l2_sum = 0.0;  // ||u0||_{L^2} + ||b0||_{L^2}
    double E0 = 0.0;
    double theta = 0.0;
    double theta_bar = 0.0;
    double C_E0 = 0.0;  // C (||u0||_{H^s} + ||b0||_{H^{s-1}})
    double sobolev_bound = 0.0;  // min{1/(8C^2), (c theta_bar/(C_E0+1))^{1/theta_bar}, (||b0||_{B^0_{inf,1}}/C_E0)^{1/theta_bar}}
    bool mean_zero = false;
    bool critical_small = false;
    bool sobolev_small = false;
};

inline SmallnessReport check_smallness_conditions(const MHDState& st, double p, const SmallnessThresholds& th = {}) {
    if (!(th.s > 2.0)) throw std::invalid_argument("check_smallness_conditions: s must exceed 2");
    const TorusGrid& g = st.grid();
    const DyadicFilterBank bank(g);
    SmallnessReport r;
    r.mean_b = g.measure() * std::hypot(st.b.x().mean(), st.b.y().mean());
    r.critical = critical_smallness(st.u, st.b, bank);
    r.l2_sum = spectral_l2(st.u) + spectral_l2(st.b);
    r.E0 = besov_norm(st.b, BesovParams(2.0 / p, p, 1.0), bank) + besov_norm(st.u, BesovParams(2.0 / p + 1.0, p, 1.0), bank);
    r.theta = 1.0 - 2.0 / th.s;
    r.theta_bar = 1.0 - 1.0 / (th.s - 1.0);
    r.C_E0 = th.C * (sobolev_norm(st.u, th.s) + sobolev_norm(st.b, th.s - 1.0));
    const double b0 = besov_norm(st.b, BesovParams(0.0, kInfinity, 1.0), bank);
    const double third = r.C_E0 > 0.0 ? std::pow(b0 / r.C_E0, 1.0 / r.theta_bar) : std::numeric_limits<double>::infinity();
    r.sobolev_bound = std::min({1.0 / (8.0 * th.C * th.C),
                                std::pow(th.c * r.theta_bar / (r.C_E0 + 1.0), 1.0 / r.theta_bar), third});
    r.mean_zero = r.mean_b < 1e-13;
    r.critical_small = r.critical <= th.epsilon * (1.0 + 1e-12);
    r.sobolev_small = r.l2_sum <= r.sobolev_bound;
    return r;
}

struct RemarkScalingRow {
    int n = 0;
    double h3 = 0.0;       // ||u0||_{H^3}
    double b1inf1 = 0.0;   // ||u0||_{B^1_{inf,1}}
    double h3_scaled = 0.0;      // h3 n^{-1/2}
    double b1inf1_scaled = 0.0;  // b1inf1 n^{1/2}
};

struct RemarkScaling {
    std::vector<RemarkScalingRow> rows;
    double h3_spread = 0.0;  // max / min - 1 of h3_scaled
    double b1inf1_spread = 0.0;
};

/// Measures the velocity of the remark15 family against the rates
/// ||u0||_{H^3} ~ n^{1/2} and ||u0||_{B^1_{inf,1}} ~ n^{-1/2}.
inline RemarkScaling remark15_scaling(const std::vector<int>& ns, int n_points) {
    const TorusGrid g(n_points);
    const DyadicFilterBank bank(g);
    RemarkScaling out;
    double hmin = std::numeric_limits<double>::infinity(), hmax = 0.0, bmin = hmin, bmax = 0.0;
    for (int n : ns) {
        detail::check_resolved(g, n);
        const auto s = remark15_data(g, n);
        RemarkScalingRow r;
        r.n = n;
        r.h3 = sobolev_norm(s.u, 3.0);
        r.b1inf1 = besov_norm(s.u, BesovParams(1.0, kInfinity, 1.0), bank);
        r.h3_scaled = r.h3 / std::sqrt(n);
        r.b1inf1_scaled = r.b1inf1 * std::sqrt(n);
        hmin = std::min(hmin, r.h3_scaled);
        hmax = std::max(hmax, r.h3_scaled);
        bmin = std::min(bmin, r.b1inf1_scaled);
        bmax = std::max(bmax, r.b1inf1_scaled);
        out.rows.push_back(r);
    }
    out.h3_spread = hmax / hmin - 1.0;
    out.b1inf1_spread = bmax / bmin - 1.0;
    return out;
}

}  // namespace besov_mhd

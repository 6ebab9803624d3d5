#pragma once

// Per-time diagnostics rows recorded along a nonlinear run, and their CSV form.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <filesystem>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "littlewood_paley.hpp"

namespace besov_mhd {

struct DiagnosticsRow {
    double t = 0.0;
    double energy = 0.0;            // (||u||^2 + ||b||^2) / 2
    double b_l2 = 0.0;
    double b_linf = 0.0;            // max pointwise |b|
    double w_linf = 0.0;            // ||curl u||_inf
    double w_b0inf1 = 0.0;          // ||curl u||_{B^0_{inf,1}}
    double b_b0inf1 = 0.0;          // ||b||_{B^0_{inf,1}}
    double run_b_b2inf1 = 0.0;      // int_0^t ||b||_{B^2_{inf,1}}, trapezoid over rows
    double grad_b_l2_sq_int = 0.0;  // int_0^t ||b||_{H^1 hom}^2
    double besov_u = 0.0;           // ||u||_{B^{1+2/p}_{p,1}}
    double besov_b = 0.0;           // ||b||_{B^{2/p}_{p,1}}
    double cfl = 0.0;               // dt n ||u||_inf
};

struct DiagnosticsRecord {
    double p = 2.0;
    std::vector<DiagnosticsRow> rows;
    /// ||b||_{B^2_{inf,1}} at each row, the integrand of run_b_b2inf1.
    std::vector<double> b_b2inf1;

    std::vector<double> column(double DiagnosticsRow::*member) const {
        std::vector<double> out;
        out.reserve(rows.size());
        for (const auto& r : rows) out.push_back(r.*member);
        return out;
    }
};

inline constexpr const char* kDiagnosticsHeader =
    "t,energy,b_l2,b_linf,w_linf,w_b0inf1,b_b0inf1,run_b_b2inf1,grad_b_l2_sq_int,besov_u,besov_b,cfl";

inline double max_magnitude(const VectorField2& v) {
    const auto& x = v.x().values();
    const auto& y = v.y().values();
    double m = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) m = std::max(m, std::hypot(x[i], y[i]));
    return m;
}

/// Appends rows; running integrals accumulate between consecutive calls.
class DiagnosticsRecorder {
public:
    DiagnosticsRecorder(const TorusGrid& grid, double p, double dt) : bank_(grid), dt_(dt) { record_.p = p; }

    const DyadicFilterBank& bank() const { return bank_; }

    void add(const VectorField2& u, const VectorField2& b, double t, double grad_b_l2_sq_int) {
        const double p = record_.p;
        DiagnosticsRow row;
        row.t = t;
        const double ul2 = spectral_l2(u);
        row.b_l2 = spectral_l2(b);
        row.energy = 0.5 * (ul2 * ul2 + row.b_l2 * row.b_l2);
        row.b_linf = max_magnitude(b);
        const ScalarField w = curl2d(u);
        row.w_linf = lp_norm(w, kInfinity);
        row.w_b0inf1 = besov_norm(w, BesovParams(0.0, kInfinity, 1.0), bank_);
        const auto bb = block_norms(b, kInfinity, bank_);
        row.b_b0inf1 = besov_from_blocks(bb, 0.0, 1.0);
        const double b2 = besov_from_blocks(bb, 2.0, 1.0);
        row.run_b_b2inf1 = record_.rows.empty()
                               ? 0.0
                               : record_.rows.back().run_b_b2inf1 +
                                     0.5 * (t - record_.rows.back().t) * (b2 + record_.b_b2inf1.back());
        row.grad_b_l2_sq_int = grad_b_l2_sq_int;
        row.besov_u = besov_norm(u, BesovParams(1.0 + 2.0 / p, p, 1.0), bank_);
        row.besov_b = besov_norm(b, BesovParams(2.0 / p, p, 1.0), bank_);
        row.cfl = dt_ * u.grid().n() * max_magnitude(u);
        record_.rows.push_back(row);
        record_.b_b2inf1.push_back(b2);
    }

    const DiagnosticsRecord& record() const { return record_; }
    DiagnosticsRecord take() { return std::move(record_); }

private:
    DyadicFilterBank bank_;
    double dt_;
    DiagnosticsRecord record_;
};

inline void write_diagnostics_csv(std::ostream& os, const DiagnosticsRecord& rec) {
    os << kDiagnosticsHeader << '\n';
    char buf[32];
    for (const auto& r : rec.rows) {
        const double cols[] = {r.t,        r.energy,       r.b_l2,         r.b_linf,
                               r.w_linf,   r.w_b0inf1,     r.b_b0inf1,     r.run_b_b2inf1,
                               r.grad_b_l2_sq_int, r.besov_u, r.besov_b,   r.cfl};
        for (std::size_t i = 0; i < std::size(cols); ++i) {
            std::snprintf(buf, sizeof buf, "%.17g", cols[i]);
            if (i) os << ',';
            os << buf;
        }
        os << '\n';
    }
}

inline void write_diagnostics_csv(const std::filesystem::path& path, const DiagnosticsRecord& rec) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
    write_diagnostics_csv(os, rec);
    if (!os) throw std::runtime_error("write failed: " + path.string());
}

/// Parses the CSV form; the b_b2inf1 integrand is not stored and comes back empty.
inline DiagnosticsRecord read_diagnostics_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || line != kDiagnosticsHeader) throw std::runtime_error("diagnostics CSV: bad header");
    DiagnosticsRecord rec;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        double v[12];
        std::istringstream ls(line);
        std::string cell;
        int k = 0;
        while (std::getline(ls, cell, ',')) {
            if (k >= 12) throw std::runtime_error("diagnostics CSV: too many columns");
            char* end = nullptr;
            v[k] = std::strtod(cell.c_str(), &end);
            if (end == cell.c_str() || *end != '\0') throw std::runtime_error("diagnostics CSV: bad number '" + cell + "'");
            ++k;
        }
        if (k != 12) throw std::runtime_error("diagnostics CSV: expected 12 columns");
        rec.rows.push_back({v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7], v[8], v[9], v[10], v[11]});
    }
    return rec;
}

inline DiagnosticsRecord read_diagnostics_csv(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open " + path.string());
    return read_diagnostics_csv(is);
}

}  // namespace besov_mhd

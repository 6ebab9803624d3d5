#pragma once

// Experiment configuration shared by the command-line subcommands.

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "initial_data.hpp"

namespace besov_mhd {

struct ExperimentConfig {
    int resolution = 64;
    double dt = 1e-3;
    double t_max = 1.0;
    int record_every = 10;
    std::string p = "2";  // integrability index; "inf" selects p = infinity
    double s = 4.0;
    std::string initial_data = "remark15";
    int mode = 4;
    double scale = 1.0;
    /// When positive, data are rescaled so ||u0||_{B^1_{inf,1}} + ||b0||_{B^0_{inf,1}} equals it.
    double smallness = 0.0;
    int band_min = 1;
    int band_max = 4;
    bool magnetic = true;
    std::string data_file;
    std::uint64_t seed = 0;
    double constant_C = 10.0;
    std::string output_dir = ".";
    int snapshot_every = 0;  // recorded rows between snapshots; 0 writes initial and final only

    int picard_iterates = 6;
    double threshold = 4.0;
    double epsilon = 0.05;
    double fit_start = 2.0;
    double fit_end = 10.0;
    std::string deltas = "1e-2,5e-3,2.5e-3";
    std::uint64_t perturbation_seed = 1;
    double stability_C = 1.0;

    bool parallel = false;
    bool deterministic = false;
    int threads = 1;
};

inline double parse_p(const std::string& s) {
    if (s == "inf" || s == "infinity" || s == "Inf") return kInfinity;
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != s.size() || !(v >= 1.0)) throw std::invalid_argument("p must be a number >= 1 or 'inf', got '" + s + "'");
    return v;
}

inline std::vector<double> parse_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || item.find_first_not_of(" \t", used) != std::string::npos)
            throw std::invalid_argument("bad number '" + item + "' in list '" + s + "'");
        out.push_back(v);
    }
    return out;
}

inline void validate(const ExperimentConfig& c) {
    auto fail = [](const std::string& m) { throw std::invalid_argument(m); };
    if (c.resolution < 8 || (c.resolution & (c.resolution - 1)) != 0) fail("resolution must be a power of two >= 8");
    if (!(c.dt > 0.0)) fail("dt must be positive");
    if (!(c.t_max >= 0.0)) fail("tmax must be >= 0");
    if (c.record_every < 1) fail("record_every must be >= 1");
    parse_p(c.p);
    parse_initial_data_kind(c.initial_data);
    if (!(c.constant_C > 0.0)) fail("constant_C must be positive");
    if (c.snapshot_every < 0) fail("snapshot_every must be >= 0");
    if (c.picard_iterates < 1) fail("picard_iterates must be >= 1");
    if (!(c.threshold > 0.0)) fail("threshold must be positive");
    if (!(c.s > 2.0)) fail("s must exceed 2");
    if (!(c.fit_end > c.fit_start)) fail("fit_end must exceed fit_start");
    for (double d : parse_list(c.deltas))
        if (!(d > 0.0)) fail("deltas must be positive");
    if (c.threads < 1) fail("threads must be >= 1");
}

inline InitialDataSpec initial_data_spec(const ExperimentConfig& c) {
    InitialDataSpec sp;
    sp.kind = parse_initial_data_kind(c.initial_data);
    sp.n = c.mode;
    sp.scale = c.scale;
    sp.band_min = c.band_min;
    sp.band_max = c.band_max;
    sp.seed = c.seed;
    sp.with_magnetic = c.magnetic;
    sp.path = c.data_file;
    return sp;
}

/// Initial data of a configuration, rescaled to the configured smallness if set.
inline MHDState configured_initial_data(const ExperimentConfig& c) {
    const TorusGrid g(c.resolution);
    MHDState s = make_initial_data(initial_data_spec(c), g);
    if (c.smallness > 0.0) {
        const DyadicFilterBank bank(g);
        const double now = critical_smallness(s.u, s.b, bank);
        if (!(now > 0.0)) throw std::invalid_argument("cannot rescale zero data to a positive smallness");
        s.u = s.u.scaled(c.smallness / now);
        s.b = s.b.scaled(c.smallness / now);
    }
    return s;
}

/// Thread cap from BESOV_MHD_THREADS; unset means 1.
inline int threads_from_environment() {
    const char* v = std::getenv("BESOV_MHD_THREADS");
    if (!v || !*v) return 1;
    char* end = nullptr;
    const long n = std::strtol(v, &end, 10);
    if (*end != '\0' || n < 1) throw std::invalid_argument(std::string("BESOV_MHD_THREADS must be a positive integer, got '") + v + "'");
    return static_cast<int>(n);
}

}  // namespace besov_mhd

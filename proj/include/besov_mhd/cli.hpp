#pragma once

// Command-line front end: CLI11 options, INI config file, environment.

#include <cstddef>
#include <iostream>
#include <iterator>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"

namespace besov_mhd {

inline constexpr const char* kCommands[] = {"simulate", "picard", "lifespan", "decay-study", "stability", "selftest"};

inline constexpr const char* kCommandHelp[] = {
    "run the MHD solver and write diagnostics.csv and state snapshots",
    "compare Picard iterates with the nonlinear solution up to the lifespan",
    "evaluate the lifespan formula for the initial data",
    "long run with decay-rate fits, bootstrap and vorticity monitors",
    "perturbation sweep over --deltas with the stability norms",
    "run the built-in numerical checks",
};

/// Binds every configuration key as a long option; the same names are the
/// keys of the INI config file.
inline void bind_options(CLI::App& app, ExperimentConfig& c) {
    app.set_config("--config", "", "INI-style key = value configuration file");
    app.allow_config_extras(CLI::config_extras_mode::error);
    app.add_option("--resolution", c.resolution, "grid points per side (power of two)");
    app.add_option("--dt", c.dt, "time step");
    app.add_option("--tmax,--t_max", c.t_max, "final time");
    app.add_option("--record-every,--record_every", c.record_every, "steps between diagnostics rows");
    app.add_option("--p", c.p, "integrability index of the Besov norms, or inf");
    app.add_option("--s", c.s, "Sobolev index of the smallness check");
    app.add_option("--initial-data,--initial_data", c.initial_data, "remark15 | single-mode | random-solenoidal | file");
    app.add_option("--mode", c.mode, "mode number of remark15 and single-mode data");
    app.add_option("--scale", c.scale, "amplitude multiplier of the initial data");
    app.add_option("--smallness", c.smallness, "rescale data to this value of ||u0||_B1 + ||b0||_B0 (0 keeps scale)");
    app.add_option("--band-min,--band_min", c.band_min, "lowest wavenumber of random data");
    app.add_option("--band-max,--band_max", c.band_max, "highest wavenumber of random data");
    app.add_option("--magnetic", c.magnetic, "include the magnetic field in generated data");
    app.add_option("--data-file,--data_file", c.data_file, "state file for file data");
    app.add_option("--seed", c.seed, "seed of random data");
    app.add_option("--constant-C,--constant_C", c.constant_C, "constant C of the lifespan and smallness formulas");
    app.add_option("--output-dir,--output_dir", c.output_dir, "directory for CSV, snapshots and reports");
    app.add_option("--snapshot-every,--snapshot_every", c.snapshot_every, "recorded rows between snapshots (0: initial and final only)");
    app.add_option("--picard-iterates,--picard_iterates", c.picard_iterates, "highest Picard iterate");
    app.add_option("--threshold", c.threshold, "bootstrap threshold");
    app.add_option("--epsilon", c.epsilon, "smallness threshold of ||u0||_B1 + ||b0||_B0");
    app.add_option("--fit-start,--fit_start", c.fit_start, "start of the decay-fit window");
    app.add_option("--fit-end,--fit_end", c.fit_end, "end of the decay-fit window");
    app.add_option("--deltas", c.deltas, "comma-separated perturbation sizes");
    app.add_option("--perturbation-seed,--perturbation_seed", c.perturbation_seed, "seed of the perturbation direction");
    app.add_option("--stability-C,--stability_C", c.stability_C, "constant in A(T)");
    app.add_flag("--parallel", c.parallel, "run independent sweep members concurrently");
    app.add_flag("--deterministic", c.deterministic, "force sequential execution");
}

/// Full program: parse, run, map failures to exit codes. Blow-up is a result,
/// not a failure, and exits 0.
inline int cli_main(int argc, char** argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    CLI::App app{"Pseudo-spectral 2D MHD with magnetic diffusion and Littlewood-Paley diagnostics", "besov-mhd"};
    ExperimentConfig c;
    bind_options(app, c);
    app.require_subcommand(1, 1);
    for (std::size_t i = 0; i < std::size(kCommands); ++i) app.add_subcommand(kCommands[i], kCommandHelp[i])->fallthrough();
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    }
    const std::string command = app.get_subcommands().front()->get_name();
    try {
        c.threads = threads_from_environment();
        return run_command(command, c, out);
    } catch (const std::exception& e) {
        err << "besov-mhd " << command << ": " << e.what() << '\n';
        return 1;
    }
}

}  // namespace besov_mhd

// anscy: experiment runner for the AN multi-cell secrecy model.
//
//   anscy run <experiment> [--config file] [--trials N] [--seed S]
//             [--out path] [--no-mc] [--vector-channels] [--timing]
//   anscy presets list
//
// Exit codes: 0 success, 2 all sweep points infeasible, 1 error.
// ANSCY_THREADS caps the worker count.

#include <CLI11.hpp>
#include <iostream>

#include "anscy/experiments.hpp"

int main(int argc, char** argv) {
    CLI::App app{"artificial-noise cellular secrecy experiments"};
    app.require_subcommand(1);

    auto* run = app.add_subcommand("run", "run an experiment preset");
    std::string experiment, config_path, out_path;
    long trials = 100000;
    std::uint64_t seed = 1;
    bool no_mc = false, vector_channels = false, timing = false;
    run->add_option("experiment", experiment, "preset name (see `anscy presets list`)")
        ->required();
    run->add_option("--config", config_path, "key=value file overriding preset parameters");
    run->add_option("--trials", trials, "Monte Carlo trials per sweep point");
    run->add_option("--seed", seed, "master RNG seed");
    run->add_option("--out", out_path, "output CSV path (default <experiment>.csv)");
    run->add_flag("--no-mc", no_mc, "skip Monte Carlo columns");
    run->add_flag("--vector-channels", vector_channels,
                  "sample full complex channel vectors (slow cross-check)");
    run->add_flag("--timing", timing, "append a wall_ms column (not byte-reproducible)");

    auto* presets = app.add_subcommand("presets", "preset utilities");
    auto* list = presets->add_subcommand("list", "list experiment presets");

    CLI11_PARSE(app, argc, argv);

    try {
        if (presets->parsed() || list->parsed()) {
            for (const auto& name : anscy::experiments::preset_names()) {
                const auto spec = anscy::experiments::make_preset(name);
                std::cout << name << "  -  " << spec.description << "\n";
            }
            return 0;
        }
        auto spec = anscy::experiments::make_preset(experiment);
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            if (!in) throw std::invalid_argument("cannot open config file: " + config_path);
            anscy::load_config_into(spec.cfg, in, config_path);
        }
        spec.trials = trials;
        spec.seed = seed;
        spec.no_mc = no_mc;
        spec.vector_channels = vector_channels;
        spec.timing = timing;
        if (!out_path.empty()) spec.out_path = out_path;
        const auto summary = anscy::experiments::run_experiment(spec);
        std::cout << "wrote " << summary.csv_path << " (" << summary.rows << " rows)\n";
        if (summary.throughput_run && summary.feasible_rows == 0) {
            std::cerr << "all sweep points infeasible under the outage constraints\n";
            return 2;
        }
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

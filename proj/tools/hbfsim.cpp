// SPDX-License-Identifier: Apache-2.0
//
// hbfsim: run beam-alignment, spectral-efficiency and power sweeps.
//
//   hbfsim <ba-sweep|se-sweep|power-sweep|validate> [--config FILE] [--out DIR]
//          [--seed N] [--trials N] [--threads N]
//
// The output directory defaults to $HBF_OUT_DIR, then run.output_dir, then
// ./results. Exit status: 0 success, 1 configuration error, 2 runtime error.

#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "hbf/runner.hpp"

namespace {

constexpr int kConfigError = 1;
constexpr int kRuntimeError = 2;

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Hybrid beamforming link-level simulator", "hbfsim"};
    app.set_version_flag("--version", hbf::version());

    std::string command;
    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    int trials = 0;
    int threads = -1;

    app.add_option("command", command, "ba-sweep, se-sweep, power-sweep or validate")
        ->required()
        ->check(CLI::IsMember({"ba-sweep", "se-sweep", "power-sweep", "validate"}));
    app.add_option("--config", config_path, "YAML scenario file (defaults apply when omitted)");
    app.add_option("--out", out_dir, "output directory");
    auto* seed_opt = app.add_option("--seed", seed, "base seed");
    app.add_option("--trials", trials, "Monte Carlo trials per point")->check(CLI::PositiveNumber);
    app.add_option("--threads", threads, "worker threads (0 = all cores)")
        ->check(CLI::NonNegativeNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kConfigError;
    }

    hbf::RunConfig config;
    try {
        if (!config_path.empty())
            config = hbf::parse_config_file(config_path);
        if (*seed_opt)
            config.seed = seed;
        if (trials > 0) {
            config.ba.trials = trials;
            config.se.trials = trials;
        }
        if (threads >= 0)
            config.threads = threads;
    } catch (const hbf::ConfigError& e) {
        std::cerr << "hbfsim: " << e.what() << '\n';
        return kConfigError;
    }

    std::string dir = out_dir;
    if (dir.empty())
        if (const char* env = std::getenv("HBF_OUT_DIR"); env && *env)
            dir = env;
    if (dir.empty())
        dir = config.output_dir.empty() ? "results" : config.output_dir;

    try {
        const auto manifest = hbf::run(hbf::command_from_string(command), config, dir);
        if (manifest.outputs.empty())
            std::cout << fmt::format("{}: configuration ok (hash {})\n", command,
                                     manifest.config_hash);
        for (const auto& p : manifest.outputs)
            std::cout << fmt::format("{}: wrote {} in {:.1f} s\n", command, p.string(),
                                     manifest.duration_s);
    } catch (const hbf::ConfigError& e) {
        std::cerr << "hbfsim: " << e.what() << '\n';
        return kConfigError;
    } catch (const std::exception& e) {
        std::cerr << "hbfsim: " << e.what() << '\n';
        return kRuntimeError;
    }
    return 0;
}

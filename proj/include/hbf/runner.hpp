// SPDX-License-Identifier: Apache-2.0
//
// Sweep dispatch and result files.
//
//   ba-sweep     ba_sweep.csv     architecture,scheme,slots,snr_bbf_db,p_d,std_err,
//                                 trials,unconverged,seed
//   se-sweep     se_sweep.csv     architecture,scheme,p,snr_bbf_db,r_sum,std_err,
//                                 trials,redraws,seed
//   power-sweep  power_sweep.csv  option,architecture,waveform,scheme,backoff_db,
//                                 p_rad0_dbm,p_rad_dbm,p_max_dbm,p_cons_dbm,eta_eff,
//                                 saturated,trials,std_err,seed
//   validate     no output
//
// Each command also writes <command>.manifest.json. Rows are ordered by
// architecture (or option), series, then axis value. Files are written only
// after the whole sweep succeeded, through a temporary file and a rename.
//
// Seeds: the ba-sweep uses derive_seed(seed, {ba_sweep tag}) and the se-sweep
// derive_seed(seed, {se_sweep tag}); every architecture reuses that seed. The
// seed column holds the base seed.

#pragma once

#include <chrono>
#include <filesystem>
#include <string>
#include <vector>

#include "hbf/config.hpp"

namespace hbf {

enum class Command { BaSweep, SeSweep, PowerSweep, Validate };

std::string_view to_string(Command command);
Command command_from_string(std::string_view name);

struct RunManifest {
    std::string command;
    std::string config_hash;
    std::uint64_t seed = 0;
    std::string version;
    std::vector<std::filesystem::path> outputs;
    double duration_s = 0.0;
};

std::string ba_sweep_csv(const std::vector<SweepResult>& results, double snr_bbf_db);
std::string se_sweep_csv(const std::vector<SweepResult>& results,
                         std::span<const SchemeSpec> schemes);
std::string power_sweep_csv(const PowerSweepConfig& config, std::uint64_t seed);

// Runs one command and writes its CSV and manifest under `output_dir`.
RunManifest run(Command command, const RunConfig& config, const std::filesystem::path& output_dir);

// Replaces `path` with `contents` via a temporary sibling file.
void write_atomically(const std::filesystem::path& path, const std::string& contents);

std::string manifest_json(const RunManifest& manifest);

const char* version();

} // namespace hbf

// SPDX-License-Identifier: Apache-2.0
//
// Declarative run configuration (YAML). Every section and key is optional;
// an empty document yields the default scenario. Unknown keys are rejected.
//
//   array:       bs_antennas, bs_rf_chains, ue_antennas, ue_rf_chains,
//                architecture, users
//   paths:       list of {strength, rice_factor}; rice_factor may be .inf
//   link:        carrier_hz, bandwidth_hz, noise_psd_dbm_hz, max_delay_s,
//                doppler_hz, min_separation
//   run:         seed, trials, threads, output_dir
//   ba_sweep:    architectures, slots, snr_bbf_db, trials, angles,
//                delay_resolved, fading_samples
//   se_sweep:    architectures, schemes, snr_bbf_db, trials, angles,
//                selection, ba_slots, pilot_noise_scale, max_redraws
//   power_sweep: reference_radiated_dbm, max_power_dbm, max_efficiency,
//                profiles, options
//
// Numeric grids are either a list or {start, stop, step} (stop inclusive).
// A scheme is "BST", "BZF" or {scheme: BZF, p: 2}. A power profile is
// {architecture, waveform} with an optional backoff_db override.

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "hbf/evaluate.hpp"
#include "hbf/power.hpp"
#include "hbf/scenario.hpp"

namespace hbf {

struct BaSweepConfig {
    std::vector<Architecture> architectures{Architecture::FC, Architecture::OSPS};
    std::vector<int> slots{10, 20, 30, 40, 50, 60, 70, 80, 90, 100};
    double snr_bbf_db = -20.0;
    int trials = 200;
    AngleMode angles = AngleMode::OnGrid;
    MeasurementModel measurement;
};

struct SeSweepConfig {
    std::vector<Architecture> architectures{Architecture::FC, Architecture::OSPS};
    std::vector<SchemeSpec> schemes{
        {Scheme::BST, 1}, {Scheme::BZF, 1}, {Scheme::BZF, 2}, {Scheme::BZF, 3}};
    std::vector<double> snr_bbf_db{-20, -10, 0, 10, 20, 30, 40};
    int trials = 500;
    AngleMode angles = AngleMode::OffGrid;
    SeOptions options;
};

struct PowerSweepConfig {
    std::vector<double> reference_radiated_dbm;
    PAModel pa = reference_pa();
    std::vector<BackoffProfile> profiles;
    std::vector<int> options{1, 2};

    PowerSweepConfig();
};

struct RunConfig {
    Scenario scenario;
    std::uint64_t seed = 1;
    int threads = 1;
    std::string output_dir; // empty: caller decides
    BaSweepConfig ba;
    SeSweepConfig se;
    PowerSweepConfig power;
};

RunConfig parse_config_string(const std::string& text, const std::string& source = "<string>");
RunConfig parse_config_file(const std::filesystem::path& path);

// Canonical YAML rendering of a fully resolved configuration.
std::string dump_config(const RunConfig& config);

// 64-bit FNV-1a, printed as 16 hex digits.
std::string fnv1a_hex(const std::string& bytes);

} // namespace hbf

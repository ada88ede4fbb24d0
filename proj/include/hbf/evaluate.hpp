// SPDX-License-Identifier: Apache-2.0
//
// Monte Carlo sweeps: detection probability against the number of beacon
// slots, and downlink sum spectral efficiency against SNR_BBF.
//
// SE trial streams come from make_rng(seed, {point, trial, attempt}). All
// schemes of one sweep share a trial's users, fading and beam selections, so
// scheme comparisons use common random numbers. A trial is redrawn (attempt
// + 1) when any scheme hits a scheduling violation or an ill-conditioned
// zero-forcing problem; redraws are counted per point.

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "hbf/beam_align.hpp"
#include "hbf/link_budget.hpp"
#include "hbf/precode.hpp"
#include "hbf/scenario.hpp"

namespace hbf {

// SINR of every stream; `channels` holds the full N x M channel of each UE.
RVector sinr_per_ue(std::span<const CMatrix> channels, const PrecoderSet& precoders,
                    const ArrayConfig& config, const LinkBudget& budget);

struct SchemeSpec {
    Scheme scheme = Scheme::BST;
    int beams_per_user = 1;

    std::string label() const; // "BST", "BZF p=2"
    bool operator==(const SchemeSpec&) const = default;
};

enum class SelectionSource { Genie, BeamAlignment };

std::string_view to_string(SelectionSource source);
SelectionSource selection_source_from_string(std::string_view name);

struct SeOptions {
    SelectionSource selection = SelectionSource::Genie;
    int ba_slots = 70;        // beacon slots per UE when selection = BeamAlignment
    // Effective-channel estimation error variance in units of N0 B / P_k, the
    // per-entry error of one orthogonal uplink pilot at the per-user power.
    // Zero gives perfect effective CSI.
    double pilot_noise_scale = 1.0;
    int max_redraws = 1000; // per trial
    int threads = 1;
};

struct SweepPoint {
    double axis = 0.0;
    double value = 0.0;
    double std_error = 0.0;
    int trials = 0;
    int redraws = 0; // SE: redrawn trials; BA: NNLS solves that hit the iteration cap
};

struct SweepResult {
    std::string metric;     // "p_d" or "r_sum"
    std::string axis;       // "slots" or "snr_bbf_db"
    std::string scheme;     // "NNLS" for BA sweeps
    Architecture architecture = Architecture::FC;
    std::uint64_t seed = 0;
    std::vector<SweepPoint> points;
};

// Sum SE of every scheme on every SNR point; one result per scheme, in the
// order given.
std::vector<SweepResult> sum_spectral_efficiency(const Scenario& scenario,
                                                 std::span<const SchemeSpec> schemes,
                                                 std::span<const double> snr_grid_db, int trials,
                                                 std::uint64_t seed, const SeOptions& options = {});

// Detection probability on a grid of beacon slot counts. Point i uses seed
// derive_seed(seed, {stream::ba_sweep, i}).
SweepResult ba_sweep(const Scenario& scenario, std::span<const int> slot_grid, double snr_bbf_db,
                     int trials, std::uint64_t seed, int threads = 1);

} // namespace hbf

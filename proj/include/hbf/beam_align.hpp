// SPDX-License-Identifier: Apache-2.0
//
// Initial beam acquisition from pseudo-random beacons.
//
// Over T beacon slots the BS sounds every RF chain with a random-phase beam
// and each UE RF chain listens through a random-phase combiner. The UE turns
// the M_RF * N_RF * T received powers into a non-negative least squares
// problem for the N x M beam-domain power map Gamma and declares the largest
// entry its strongest AoA/AoD pair.
//
// Row (t, i, j) of the sensing matrix is stored at (t * M_RF + i) * N_RF + j
// and column (n, m) of vec(Gamma) at n + N * m. Beam indices are 0-based.

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "hbf/array_channel.hpp"
#include "hbf/nnls.hpp"
#include "hbf/scenario.hpp"

namespace hbf {

struct BeaconCodebook {
    int slots = 0;
    std::uint64_t seed = 0;
    std::vector<CMatrix> bs; // per slot, D x M_RF, squared column norm D
    std::vector<CMatrix> ue; // per slot, N x N_RF, squared column norm N
};

struct MeasurementSet {
    RVector powers;
    RMatrix sensing;
    double noise_floor = 0.0;
};

struct BeamPair {
    int ue_beam = 0;
    int bs_beam = 0;
    bool operator==(const BeamPair&) const = default;
};

BeaconCodebook generate_beacon_codebook(const ArrayConfig& config, int slots, std::uint64_t seed);

RMatrix build_sensing_matrix(const BeaconCodebook& codebook, const ArrayConfig& config,
                             double total_power);

// One received power per (slot, BS chain, UE chain). Every fading sample
// redraws the path gains and adds z ~ CN(0, noise_power) before squaring, so
// E[q] = B vec(Gamma) + noise_power for delay-resolved measurements.
MeasurementSet synthesize_measurements(std::span<const MultipathComponent> paths,
                                       const BeaconCodebook& codebook, const ArrayConfig& config,
                                       double total_power, double noise_power, Rng& rng,
                                       const MeasurementModel& model = {});

// N x M map from a column-major vec(Gamma).
RMatrix unvec_gamma(const RVector& x, int ue_antennas, int bs_antennas);

RMatrix estimate_gamma(const MeasurementSet& measurements, const ArrayConfig& config,
                       const NnlsOptions& options = {}, NnlsResult* solve = nullptr);

// Largest entry; ties go to the smallest UE beam, then the smallest BS beam.
// Empty when no entry is strictly positive.
std::optional<BeamPair> detect_strongest(const RMatrix& gamma);

BeamPair true_strongest(std::span<const MultipathComponent> paths);

struct DetectionEstimate {
    double probability = 0.0;
    double std_error = 0.0;
    int trials = 0;
    int unconverged = 0; // solves that hit the iteration cap
};

// Fraction of independent trials whose detected pair equals the grid cell of
// the probed user's strongest path. Trial i draws its user, fading and noise
// from make_rng(seed, {i}) and its codebook from derive_seed(seed, {codebook, i}).
DetectionEstimate detection_probability(const Scenario& scenario, int slots, double snr_bbf_db,
                                        int trials, std::uint64_t seed, int threads = 1);

} // namespace hbf

// SPDX-License-Identifier: Apache-2.0
//
// Downlink precoders built from beam-alignment output.
//
// Every UE listens along one DFT beam. The BS serves UE k along its top-p
// AoD beams; the D x (p K) analog support stacks those beams (unit-norm
// rescaled DFT columns) and a (p K) x K baseband matrix mixes them into one
// unit-norm precoder column per stream.
//
//   BST: p = 1, baseband = identity.
//   BZF: baseband = right pseudo-inverse of the measured effective channel,
//        columns scaled to unit precoder norm.
//
// With OSPS, stream k leaves through subarray k only, so each stream sees its
// own K x (p K) effective channel. For FC all streams share one.

#pragma once

#include <optional>
#include <span>
#include <vector>

#include "hbf/array_channel.hpp"

namespace hbf {

enum class Scheme { BST, BZF };

std::string_view to_string(Scheme scheme);

struct BeamSelection {
    int ue_beam = 0;
    std::vector<int> bs_beams; // ordered by non-increasing statistic
    bool padded = false;       // fewer than p strictly positive entries
};

// v = F_N e_beam; unit norm.
CVector ue_combiner(int beam, int ue_antennas);

// Top-p entries of row `ue_beam` of the beam-domain statistics. Ties go to the
// smaller index; missing beams are filled with the smallest unused indices.
BeamSelection top_p_beam_set(const RMatrix& gamma, int ue_beam, int p);

// D x (p K) matrix of unit-norm DFT beams, user-major.
CMatrix analog_support(std::span<const BeamSelection> selections, const ArrayConfig& config);

struct PrecoderSet {
    Scheme scheme = Scheme::BST;
    int beams_per_user = 1;
    CMatrix support;  // D x (p K)
    CMatrix baseband; // (p K) x K
    CMatrix precoder; // D x K, unit-norm columns
    std::vector<CVector> combiners;
};

// M x K weights actually applied at the antennas: column k of `precoder`
// placed on the antennas of RF chain k (the whole array for FC).
CMatrix antenna_weights(const PrecoderSet& precoders, const ArrayConfig& config);

PrecoderSet bst_precoder(std::span<const BeamSelection> selections, const ArrayConfig& config);

struct EffectiveChannel {
    // One K x (p K) matrix for FC; one per stream (subarray) for OSPS.
    std::vector<CMatrix> per_stream;
    double noise_variance = 0.0;
    int pilot_subslots = 0;

    const CMatrix& for_stream(int k) const
    {
        return per_stream.size() == 1 ? per_stream.front() : per_stream[k];
    }
};

// Entries v_k^H H_k u_c over the current fading realization of every user,
// plus CN(0, noise_variance) estimation error per entry.
EffectiveChannel effective_channel(std::span<const CVector> combiners,
                                   std::span<const PathList> users, const CMatrix& support,
                                   const ArrayConfig& config, double noise_variance, Rng& rng);

struct ZeroForcing {
    CMatrix baseband; // (p K) x K
    RVector scaling;  // diagonal of Delta
    double condition = 1.0; // of H H^H, worst stream
};

// A = H^H (H H^H)^{-1} Delta with Delta making every |support * a_k| = 1.
// Throws IllConditionedError when cond(H H^H) exceeds `max_condition`.
ZeroForcing bzf_baseband(const EffectiveChannel& channel, const CMatrix& support,
                         double max_condition = 1e12);

// K x K matrix [H_k' a_k]: the coefficient stream k reaches user k' with.
CMatrix stream_gains(const EffectiveChannel& channel, const CMatrix& baseband);

// U = support * baseband. Throws DimensionError when a column norm is off by
// more than 1e-9.
PrecoderSet compose_precoder(Scheme scheme, const CMatrix& support, const CMatrix& baseband,
                             std::vector<CVector> combiners, int beams_per_user);

} // namespace hbf

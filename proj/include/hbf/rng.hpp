// SPDX-License-Identifier: Apache-2.0
//
// Reproducible random streams.
//
// Every random stream in a run is derived from one 64-bit base seed and a
// short list of counters (sweep tag, point index, trial index, ...). The
// derivation folds each counter into the state with the SplitMix64 finalizer,
// so streams for different counter tuples are independent and can be created
// in any order on any thread.

#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

#include "hbf/types.hpp"

namespace hbf {

using Rng = std::mt19937_64;

std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> counters);
Rng make_rng(std::uint64_t base, std::initializer_list<std::uint64_t> counters);

// Circularly-symmetric complex Gaussian with E|z|^2 = variance.
cdouble complex_gaussian(Rng& rng, double variance = 1.0);
// exp(j*phi) with phi uniform in [0, 2*pi).
cdouble random_phase(Rng& rng);

// Stream tags used by the sweeps.
namespace stream {
inline constexpr std::uint64_t ba_sweep = 0xBA;
inline constexpr std::uint64_t se_sweep = 0x5E;
inline constexpr std::uint64_t codebook = 0xC0DE;
inline constexpr std::uint64_t pilot = 0x9170;
inline constexpr std::uint64_t selection = 0x5E1E;
} // namespace stream

} // namespace hbf

// SPDX-License-Identifier: Apache-2.0
//
// Link scenario: array layout, per-user multipath profile and link budget
// constants, plus the random placement of scheduled users.

#pragma once

#include <vector>

#include "hbf/array_channel.hpp"

namespace hbf {

struct PathProfile {
    double strength = 1.0;
    double rice_factor = 0.0;
};

enum class AngleMode { OnGrid, OffGrid };

// How one beacon power measurement is formed at the UE.
struct MeasurementModel {
    // The PN correlator separates components at distinct delays, so they add
    // in power. When false the components add coherently before squaring.
    bool delay_resolved = true;
    // Independent fading realizations (and noise samples) averaged into one
    // power measurement.
    int fading_samples = 2;
};

std::string_view to_string(AngleMode mode);
AngleMode angle_mode_from_string(std::string_view name);

struct Scenario {
    ArrayConfig array{32, 2, 16, 1, Architecture::FC};
    std::vector<PathProfile> paths{{1.0, 100.0}, {0.6, 10.0}, {0.6, 0.0}};
    double carrier_hz = 40e9;
    double bandwidth_hz = 0.8e9;
    double noise_psd = 3.981071705534973e-21; // W/Hz, -174 dBm/Hz
    double max_delay_s = 100e-9;
    double doppler_hz = 0.0;
    AngleMode angles = AngleMode::OnGrid;
    // Minimum spacing of the scheduled users' strongest AoDs, in BS grid
    // steps. Zero selects ceil(M/16).
    int min_separation = 0;
    MeasurementModel measurement;

    double noise_power() const { return noise_psd * bandwidth_hz; }
    double total_strength() const;
    int separation_steps() const;
};

// Multipath components of one user: angles drawn on (or off) the grids, one
// component per profile entry, no two components on the same grid cell.
// Gains are left at zero; call refade() per coherence block.
PathList draw_user(const Scenario& scenario, Rng& rng);

// `count` users whose strongest AoDs are pairwise at least
// separation_steps() apart.
std::vector<PathList> draw_users(const Scenario& scenario, int count, Rng& rng);

} // namespace hbf

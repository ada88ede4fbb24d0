// SPDX-License-Identifier: Apache-2.0
//
// Power-amplifier arithmetic for the two transmitter architectures.
//
// A PA driven at radiated power P_rad <= P_max consumes
//   P_cons = sqrt(P_max) * sqrt(P_rad) / eta_max,
// so its efficiency P_rad / P_cons grows with sqrt(P_rad). Larger input
// backoff lowers the usable radiated power (Option I, shared PA) or demands a
// bigger PA (Option II, one PA per architecture).

#pragma once

#include <string_view>

#include "hbf/types.hpp"

namespace hbf {

enum class Waveform { SC, OFDM };

std::string_view to_string(Waveform waveform);
Waveform waveform_from_string(std::string_view name);

struct PAModel {
    double max_power = 0.0;    // W, saturation output
    double max_efficiency = 0.0;
};

// 6 dBm saturation power, 30 % peak efficiency.
PAModel reference_pa();

struct BackoffProfile {
    Architecture architecture = Architecture::OSPS;
    Waveform waveform = Waveform::SC;
    double backoff_db = 0.0; // alpha_off in dB, <= 0

    double backoff() const; // linear
};

// Backoff that keeps the PA input below the waveform's peak:
//   (OSPS, SC) -7.5 dB, (FC, SC) -9.5 dB, OFDM -12 dB.
double backoff_for(Architecture architecture, Waveform waveform);
BackoffProfile backoff_profile(Architecture architecture, Waveform waveform);
// (OSPS, SC), the reference of both options.
BackoffProfile reference_profile();

struct DividerCombiner {
    double divider = 1.0;  // alpha_div
    double combiner = 1.0; // alpha_com
};

// FC: (1/M, 1/M_RF). OSPS: (M_RF/M, 1).
DividerCombiner divider_combiner_factors(const ArrayConfig& config);

// Sum power of the beamformed signal for unit-norm analog weights and
// per-stream symbol power `symbol_power`. With `boost_fc` the FC input is
// scaled by M_RF to offset its combiner loss.
double beamformed_sum_power(const ArrayConfig& config, double symbol_power, bool boost_fc = false);

// Throws SaturationError when radiated_power exceeds the PA's P_max.
double pa_consumed(double radiated_power, const PAModel& pa);
double pa_efficiency(double radiated_power, const PAModel& pa);

struct PowerPoint {
    double reference_radiated = 0.0; // P_rad,0, W
    double radiated = 0.0;           // P_rad, W
    double max_power = 0.0;          // P_max of the PA used, W
    double consumed = 0.0;           // P_cons, W
    double efficiency = 0.0;         // eta_eff

    bool saturated() const { return radiated > max_power * (1.0 + 1e-12); }
};

// (alpha_off / alpha_off,0) * P_rad,0, without the saturation check.
double option1_radiated(double reference_radiated, const BackoffProfile& profile,
                        const BackoffProfile& reference);

// Option I: same PA, P_rad = option1_radiated(...). Throws SaturationError
// when P_rad exceeds P_max,0.
PowerPoint option1_evaluate(double reference_radiated, const BackoffProfile& profile,
                            const BackoffProfile& reference, const PAModel& pa0);

// Option II: P_rad = P_rad,0 on a PA with P_max = (alpha_off,0 / alpha_off) * P_max,0
// and peak efficiency `max_efficiency`. No saturation check.
PowerPoint option2_evaluate(double reference_radiated, const BackoffProfile& profile,
                            const BackoffProfile& reference, const PAModel& pa0,
                            double max_efficiency);

double watts_to_dbm(double watts);
double dbm_to_watts(double dbm);

} // namespace hbf

// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>

namespace hbf {

struct LinkBudget {
    double total_power = 0.0; // W, radiated
    double noise_power = 0.0; // W, N0 * B

    // Equal split over the RF chains.
    double per_user_power(int rf_chains) const { return total_power / rf_chains; }
};

// Total radiated power giving the requested SNR before beamforming,
//   SNR_BBF = P_tot * sum(gamma) / (N0 B).
// -inf dB maps to zero power.
double p_tot_for_snr(double snr_bbf_db, std::span<const double> strengths, double noise_power);
double snr_bbf_db(double total_power, std::span<const double> strengths, double noise_power);

double db_to_linear(double db);
double linear_to_db(double linear);

} // namespace hbf

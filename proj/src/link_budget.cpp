// SPDX-License-Identifier: Apache-2.0

#include "hbf/link_budget.hpp"

#include <cmath>
#include <numeric>

#include "hbf/types.hpp"

namespace hbf {

double db_to_linear(double db)
{
    return std::pow(10.0, db / 10.0);
}

double linear_to_db(double linear)
{
    return 10.0 * std::log10(linear);
}

double p_tot_for_snr(double snr_bbf_db, std::span<const double> strengths, double noise_power)
{
    const double sum = std::accumulate(strengths.begin(), strengths.end(), 0.0);
    if (!(sum > 0.0))
        throw ConfigError("SNR_BBF needs a positive total path strength");
    return db_to_linear(snr_bbf_db) * noise_power / sum;
}

double snr_bbf_db(double total_power, std::span<const double> strengths, double noise_power)
{
    const double sum = std::accumulate(strengths.begin(), strengths.end(), 0.0);
    return linear_to_db(total_power * sum / noise_power);
}

} // namespace hbf

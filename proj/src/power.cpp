// SPDX-License-Identifier: Apache-2.0

#include "hbf/power.hpp"

#include <cmath>
#include <string>

#include "hbf/link_budget.hpp"

namespace hbf {

std::string_view to_string(Waveform waveform)
{
    return waveform == Waveform::SC ? "SC" : "OFDM";
}

Waveform waveform_from_string(std::string_view name)
{
    if (name == "SC" || name == "sc")
        return Waveform::SC;
    if (name == "OFDM" || name == "ofdm")
        return Waveform::OFDM;
    throw ConfigError("unknown waveform '" + std::string(name) + "' (expected SC or OFDM)");
}

PAModel reference_pa()
{
    return {dbm_to_watts(6.0), 0.3};
}

double BackoffProfile::backoff() const
{
    return db_to_linear(backoff_db);
}

double backoff_for(Architecture architecture, Waveform waveform)
{
    if (waveform == Waveform::OFDM)
        return -12.0;
    return architecture == Architecture::OSPS ? -7.5 : -9.5;
}

BackoffProfile backoff_profile(Architecture architecture, Waveform waveform)
{
    return {architecture, waveform, backoff_for(architecture, waveform)};
}

BackoffProfile reference_profile()
{
    return backoff_profile(Architecture::OSPS, Waveform::SC);
}

DividerCombiner divider_combiner_factors(const ArrayConfig& config)
{
    const double m = config.bs_antennas();
    const double m_rf = config.bs_rf_chains();
    if (config.architecture() == Architecture::FC)
        return {1.0 / m, 1.0 / m_rf};
    return {m_rf / m, 1.0};
}

double beamformed_sum_power(const ArrayConfig& config, double symbol_power, bool boost_fc)
{
    if (!(symbol_power > 0.0))
        throw ConfigError("symbol power must be positive");
    const auto [divider, combiner] = divider_combiner_factors(config);
    const double m_rf = config.bs_rf_chains();
    // tr(x x^H U^H U) with unit-modulus weights on every driven antenna:
    // FC drives M antennas per stream, OSPS M/M_RF.
    const double driven = config.architecture() == Architecture::FC
                              ? config.bs_antennas()
                              : static_cast<double>(config.subarray_size());
    double input = symbol_power;
    if (boost_fc && config.architecture() == Architecture::FC)
        input *= m_rf;
    return combiner * divider * m_rf * input * driven;
}

double pa_consumed(double radiated_power, const PAModel& pa)
{
    if (radiated_power < 0.0)
        throw ConfigError("radiated power must be non-negative");
    if (radiated_power > pa.max_power * (1.0 + 1e-12))
        throw SaturationError("radiated power " + std::to_string(watts_to_dbm(radiated_power)) +
                              " dBm exceeds the PA saturation power " +
                              std::to_string(watts_to_dbm(pa.max_power)) + " dBm");
    return std::sqrt(pa.max_power) * std::sqrt(radiated_power) / pa.max_efficiency;
}

double pa_efficiency(double radiated_power, const PAModel& pa)
{
    if (radiated_power == 0.0)
        return 0.0;
    return radiated_power / pa_consumed(radiated_power, pa);
}

double option1_radiated(double reference_radiated, const BackoffProfile& profile,
                        const BackoffProfile& reference)
{
    return profile.backoff() / reference.backoff() * reference_radiated;
}

PowerPoint option1_evaluate(double reference_radiated, const BackoffProfile& profile,
                            const BackoffProfile& reference, const PAModel& pa0)
{
    PowerPoint pt;
    pt.reference_radiated = reference_radiated;
    pt.radiated = option1_radiated(reference_radiated, profile, reference);
    pt.max_power = pa0.max_power;
    pt.consumed = pa_consumed(pt.radiated, pa0);
    pt.efficiency = std::sqrt(pt.radiated) * pa0.max_efficiency / std::sqrt(pa0.max_power);
    return pt;
}

PowerPoint option2_evaluate(double reference_radiated, const BackoffProfile& profile,
                            const BackoffProfile& reference, const PAModel& pa0,
                            double max_efficiency)
{
    if (!(profile.backoff() > 0.0) || !(reference.backoff() > 0.0))
        throw ConfigError("backoff must be positive");
    if (!(max_efficiency > 0.0 && max_efficiency <= 1.0))
        throw ConfigError("PA peak efficiency must lie in (0, 1]");
    PowerPoint pt;
    pt.reference_radiated = reference_radiated;
    pt.radiated = reference_radiated;
    pt.max_power = reference.backoff() / profile.backoff() * pa0.max_power;
    pt.consumed = std::sqrt(pt.max_power) * std::sqrt(pt.radiated) / max_efficiency;
    pt.efficiency = std::sqrt(pt.radiated) * max_efficiency * std::sqrt(profile.backoff()) /
                    std::sqrt(pa0.max_power * reference.backoff());
    return pt;
}

double watts_to_dbm(double watts)
{
    return linear_to_db(watts) + 30.0;
}

double dbm_to_watts(double dbm)
{
    return db_to_linear(dbm - 30.0);
}

} // namespace hbf

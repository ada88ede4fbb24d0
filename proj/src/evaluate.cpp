// SPDX-License-Identifier: Apache-2.0

#include "hbf/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "hbf/parallel.hpp"

namespace hbf {

RVector sinr_per_ue(std::span<const CMatrix> channels, const PrecoderSet& precoders,
                    const ArrayConfig& config, const LinkBudget& budget)
{
    const auto k_count = static_cast<Eigen::Index>(channels.size());
    if (precoders.precoder.cols() != k_count ||
        static_cast<Eigen::Index>(precoders.combiners.size()) != k_count)
        throw DimensionError("one precoder column and one combiner per UE are required");
    if (!(budget.noise_power > 0.0))
        throw ConfigError("noise power must be positive");
    const CMatrix w = antenna_weights(precoders, config);
    const double p_k = budget.per_user_power(config.bs_rf_chains());

    RVector sinr(k_count);
    for (Eigen::Index k = 0; k < k_count; ++k) {
        if (channels[k].rows() != config.ue_antennas() || channels[k].cols() != config.bs_antennas())
            throw DimensionError("channel of UE " + std::to_string(k) + " is not N x M");
        const RVector g = (precoders.combiners[k].adjoint() * channels[k] * w).cwiseAbs2().transpose();
        const double signal = p_k * g(k);
        const double interference = p_k * (g.sum() - g(k));
        sinr(k) = signal / (interference + budget.noise_power);
    }
    return sinr;
}

std::string SchemeSpec::label() const
{
    if (scheme == Scheme::BST)
        return "BST";
    return "BZF p=" + std::to_string(beams_per_user);
}

std::string_view to_string(SelectionSource source)
{
    return source == SelectionSource::Genie ? "genie" : "beam_alignment";
}

SelectionSource selection_source_from_string(std::string_view name)
{
    if (name == "genie")
        return SelectionSource::Genie;
    if (name == "beam_alignment")
        return SelectionSource::BeamAlignment;
    throw ConfigError("unknown selection source '" + std::string(name) +
                      "' (expected genie or beam_alignment)");
}

namespace {

struct UserView {
    int ue_beam = 0;
    RMatrix statistics;
};

// Receive beam and beam-domain statistics of every user, or nothing when the
// beam alignment found no positive entry.
std::optional<std::vector<UserView>> select_beams(const Scenario& scenario,
                                                  std::span<const PathList> users,
                                                  const SeOptions& options, double total_power,
                                                  std::uint64_t codebook_seed, Rng& rng)
{
    const ArrayConfig& config = scenario.array;
    std::vector<UserView> views;
    for (std::size_t k = 0; k < users.size(); ++k) {
        UserView view;
        if (options.selection == SelectionSource::Genie) {
            view.ue_beam = users[k][strongest_path(users[k])].aoa_index;
            view.statistics = beamspace_statistics(users[k], config);
        } else {
            const BeaconCodebook cb =
                generate_beacon_codebook(config, options.ba_slots, derive_seed(codebook_seed, {k}));
            const MeasurementSet ms = synthesize_measurements(
                users[k], cb, config, total_power, scenario.noise_power(), rng, scenario.measurement);
            view.statistics = estimate_gamma(ms, config);
            const auto pair = detect_strongest(view.statistics);
            if (!pair)
                return std::nullopt;
            view.ue_beam = pair->ue_beam;
        }
        views.push_back(std::move(view));
    }
    return views;
}

} // namespace

std::vector<SweepResult> sum_spectral_efficiency(const Scenario& scenario,
                                                 std::span<const SchemeSpec> schemes,
                                                 std::span<const double> snr_grid_db, int trials,
                                                 std::uint64_t seed, const SeOptions& options)
{
    if (trials < 1)
        throw ConfigError("sum_spectral_efficiency needs at least one trial");
    if (schemes.empty())
        throw ConfigError("no precoding schemes requested");
    for (const auto& s : schemes)
        if (s.beams_per_user < 1 || (s.scheme == Scheme::BST && s.beams_per_user != 1))
            throw ConfigError("invalid scheme " + s.label());
    if (options.pilot_noise_scale < 0.0)
        throw ConfigError("pilot_noise_scale must be non-negative");

    const ArrayConfig& config = scenario.array;
    const int k_count = config.users();
    std::vector<double> strengths;
    for (const auto& p : scenario.paths)
        strengths.push_back(p.strength);
    const auto scheme_count = static_cast<int>(schemes.size());

    std::vector<SweepResult> results(scheme_count);
    for (int s = 0; s < scheme_count; ++s) {
        results[s].metric = "r_sum";
        results[s].axis = "snr_bbf_db";
        results[s].scheme = schemes[s].label();
        results[s].architecture = config.architecture();
        results[s].seed = seed;
    }

    for (std::size_t point = 0; point < snr_grid_db.size(); ++point) {
        LinkBudget budget;
        budget.noise_power = scenario.noise_power();
        budget.total_power = p_tot_for_snr(snr_grid_db[point], strengths, budget.noise_power);
        const double p_k = budget.per_user_power(config.bs_rf_chains());
        double pilot_variance = 0.0;
        if (options.pilot_noise_scale > 0.0) {
            if (!(p_k > 0.0))
                throw ConfigError("noisy effective-channel estimation needs positive power");
            pilot_variance = options.pilot_noise_scale * budget.noise_power / p_k;
        }

        // rates[trial * schemes + s]
        std::vector<double> rates(static_cast<std::size_t>(trials) * scheme_count, 0.0);
        std::vector<int> redraws(trials, 0);
        parallel_for(trials, options.threads, [&](int trial) {
            for (int attempt = 0;; ++attempt) {
                if (attempt > options.max_redraws)
                    throw Error("trial " + std::to_string(trial) + " exceeded " +
                                std::to_string(options.max_redraws) + " redraws");
                const std::uint64_t p = point, t = trial, a = attempt;
                Rng rng = make_rng(seed, {stream::se_sweep, p, t, a});
                std::vector<PathList> users = draw_users(scenario, k_count, rng);
                for (auto& u : users)
                    u = refade(u, rng);
                const auto views = select_beams(scenario, users, options, budget.total_power,
                                                derive_seed(seed, {stream::codebook, p, t, a}), rng);
                if (!views)
                    continue;

                std::vector<CMatrix> channels;
                std::vector<CVector> combiners;
                for (int k = 0; k < k_count; ++k) {
                    channels.push_back(
                        channel_matrix(users[k], config.ue_antennas(), config.bs_antennas()));
                    combiners.push_back(ue_combiner((*views)[k].ue_beam, config.ue_antennas()));
                }

                std::vector<double> sums(scheme_count, 0.0);
                bool ok = true;
                for (int s = 0; s < scheme_count && ok; ++s) {
                    std::vector<BeamSelection> selections;
                    for (const auto& v : *views)
                        selections.push_back(
                            top_p_beam_set(v.statistics, v.ue_beam, schemes[s].beams_per_user));
                    try {
                        PrecoderSet pre;
                        if (schemes[s].scheme == Scheme::BST) {
                            pre = bst_precoder(selections, config);
                        } else {
                            const CMatrix support = analog_support(selections, config);
                            Rng pilot = make_rng(seed, {stream::pilot, p, t, a,
                                                        static_cast<std::uint64_t>(s)});
                            const EffectiveChannel eff = effective_channel(
                                combiners, users, support, config, pilot_variance, pilot);
                            const ZeroForcing zf = bzf_baseband(eff, support);
                            pre = compose_precoder(Scheme::BZF, support, zf.baseband, combiners,
                                                   schemes[s].beams_per_user);
                        }
                        const RVector sinr = sinr_per_ue(channels, pre, config, budget);
                        for (Eigen::Index k = 0; k < sinr.size(); ++k)
                            sums[s] += std::log2(1.0 + sinr(k));
                    } catch (const SchedulingError&) {
                        ok = false;
                    } catch (const IllConditionedError&) {
                        ok = false;
                    }
                }
                if (!ok) {
                    ++redraws[trial];
                    continue;
                }
                std::copy(sums.begin(), sums.end(),
                          rates.begin() + static_cast<std::ptrdiff_t>(trial) * scheme_count);
                return;
            }
        });

        int total_redraws = 0;
        for (int r : redraws)
            total_redraws += r;
        for (int s = 0; s < scheme_count; ++s) {
            double mean = 0.0;
            for (int t = 0; t < trials; ++t)
                mean += rates[static_cast<std::size_t>(t) * scheme_count + s];
            mean /= trials;
            double var = 0.0;
            for (int t = 0; t < trials; ++t) {
                const double d = rates[static_cast<std::size_t>(t) * scheme_count + s] - mean;
                var += d * d;
            }
            var = trials > 1 ? var / (trials - 1) : 0.0;
            results[s].points.push_back(
                {snr_grid_db[point], mean, std::sqrt(var / trials), trials, total_redraws});
        }
    }
    return results;
}

SweepResult ba_sweep(const Scenario& scenario, std::span<const int> slot_grid, double snr_bbf_db,
                     int trials, std::uint64_t seed, int threads)
{
    SweepResult result;
    result.metric = "p_d";
    result.axis = "slots";
    result.scheme = "NNLS";
    result.architecture = scenario.array.architecture();
    result.seed = seed;
    for (std::size_t i = 0; i < slot_grid.size(); ++i) {
        const DetectionEstimate est = detection_probability(
            scenario, slot_grid[i], snr_bbf_db, trials, derive_seed(seed, {stream::ba_sweep, i}),
            threads);
        result.points.push_back({static_cast<double>(slot_grid[i]), est.probability, est.std_error,
                                 est.trials, est.unconverged});
    }
    return result;
}

} // namespace hbf

// SPDX-License-Identifier: Apache-2.0

#include "hbf/beam_align.hpp"

#include <cmath>

#include "hbf/link_budget.hpp"
#include "hbf/parallel.hpp"

namespace hbf {

BeaconCodebook generate_beacon_codebook(const ArrayConfig& config, int slots, std::uint64_t seed)
{
    if (slots < 1)
        throw ConfigError("beacon codebook needs at least one slot");
    BeaconCodebook cb;
    cb.slots = slots;
    cb.seed = seed;
    cb.bs.reserve(slots);
    cb.ue.reserve(slots);
    Rng rng(seed);
    const int d = config.subarray_size();
    for (int t = 0; t < slots; ++t) {
        CMatrix u(d, config.bs_rf_chains());
        for (Eigen::Index c = 0; c < u.cols(); ++c)
            for (Eigen::Index r = 0; r < u.rows(); ++r)
                u(r, c) = random_phase(rng);
        CMatrix v(config.ue_antennas(), config.ue_rf_chains());
        for (Eigen::Index c = 0; c < v.cols(); ++c)
            for (Eigen::Index r = 0; r < v.rows(); ++r)
                v(r, c) = random_phase(rng);
        cb.bs.push_back(std::move(u));
        cb.ue.push_back(std::move(v));
    }
    return cb;
}

RMatrix build_sensing_matrix(const BeaconCodebook& codebook, const ArrayConfig& config,
                             double total_power)
{
    const int n = config.ue_antennas();
    const int m = config.bs_antennas();
    const int d = config.subarray_size();
    const int chains = config.bs_rf_chains();
    const int ue_chains = config.ue_rf_chains();
    if (static_cast<int>(codebook.bs.size()) != codebook.slots ||
        static_cast<int>(codebook.ue.size()) != codebook.slots)
        throw DimensionError("codebook slot count mismatch");

    const CMatrix fn = dft_dictionary(n, n);
    const CMatrix fd = dft_dictionary(d, m);
    const double per_chain = total_power / chains;

    RMatrix sensing(static_cast<Eigen::Index>(codebook.slots) * chains * ue_chains,
                    static_cast<Eigen::Index>(n) * m);
    for (int t = 0; t < codebook.slots; ++t) {
        const CMatrix& u = codebook.bs[t];
        const CMatrix& v = codebook.ue[t];
        if (u.rows() != d || u.cols() != chains || v.rows() != n || v.cols() != ue_chains)
            throw DimensionError("codebook slot " + std::to_string(t) +
                                 " does not match the array configuration");
        const RMatrix tx = (fd.adjoint() * u).cwiseAbs2(); // M x M_RF
        const RMatrix rx = (fn.adjoint() * v).cwiseAbs2(); // N x N_RF
        for (int i = 0; i < chains; ++i) {
            for (int j = 0; j < ue_chains; ++j) {
                const Eigen::Index row = (static_cast<Eigen::Index>(t) * chains + i) * ue_chains + j;
                for (int mm = 0; mm < m; ++mm)
                    sensing.row(row).segment(static_cast<Eigen::Index>(mm) * n, n) =
                        (per_chain * tx(mm, i)) * rx.col(j).transpose();
            }
        }
    }
    return sensing;
}

MeasurementSet synthesize_measurements(std::span<const MultipathComponent> paths,
                                       const BeaconCodebook& codebook, const ArrayConfig& config,
                                       double total_power, double noise_power, Rng& rng,
                                       const MeasurementModel& model)
{
    if (!(noise_power > 0.0))
        throw ConfigError("measurement noise power must be positive");
    if (model.fading_samples < 1)
        throw ConfigError("fading_samples must be at least 1");
    const int n = config.ue_antennas();
    const int m = config.bs_antennas();
    const int chains = config.bs_rf_chains();
    const int ue_chains = config.ue_rf_chains();
    const double amplitude = std::sqrt(total_power / chains);
    const double weight = 1.0 / model.fading_samples;

    MeasurementSet out;
    out.noise_floor = noise_power;
    out.sensing = build_sensing_matrix(codebook, config, total_power);
    out.powers = RVector::Zero(out.sensing.rows());

    // Per-path responses of every (BS chain, UE chain) pair are fixed within a
    // slot; only the gains change between fading samples.
    const int l_count = static_cast<int>(paths.size());
    CMatrix response(l_count, chains * ue_chains);
    for (int t = 0; t < codebook.slots; ++t) {
        for (int l = 0; l < l_count; ++l) {
            const CVector rx = array_response_sine(paths[l].aoa_sine, n);
            const CVector tx = array_response_sine(paths[l].aod_sine, m);
            for (int i = 0; i < chains; ++i) {
                const cdouble departure =
                    tx.segment(config.chain_offset(i), config.subarray_size()).dot(codebook.bs[t].col(i));
                for (int j = 0; j < ue_chains; ++j)
                    response(l, i * ue_chains + j) = codebook.ue[t].col(j).dot(rx) * departure;
            }
        }
        for (int a = 0; a < model.fading_samples; ++a) {
            const PathList faded = refade(paths, rng);
            for (int c = 0; c < chains * ue_chains; ++c) {
                double power = 0.0;
                if (model.delay_resolved) {
                    for (int l = 0; l < l_count; ++l)
                        power += std::norm(amplitude * faded[l].gain * response(l, c));
                    power += std::norm(complex_gaussian(rng, noise_power));
                } else {
                    cdouble y = complex_gaussian(rng, noise_power);
                    for (int l = 0; l < l_count; ++l)
                        y += amplitude * faded[l].gain * response(l, c);
                    power = std::norm(y);
                }
                out.powers(static_cast<Eigen::Index>(t) * chains * ue_chains + c) += weight * power;
            }
        }
    }
    return out;
}

RMatrix unvec_gamma(const RVector& x, int ue_antennas, int bs_antennas)
{
    if (x.size() != static_cast<Eigen::Index>(ue_antennas) * bs_antennas)
        throw DimensionError("vec(Gamma) has the wrong length");
    return Eigen::Map<const RMatrix>(x.data(), ue_antennas, bs_antennas);
}

RMatrix estimate_gamma(const MeasurementSet& measurements, const ArrayConfig& config,
                       const NnlsOptions& options, NnlsResult* solve)
{
    NnlsResult r = nnls(measurements.sensing, measurements.powers, measurements.noise_floor, options);
    RMatrix gamma = unvec_gamma(r.x, config.ue_antennas(), config.bs_antennas());
    if (solve)
        *solve = std::move(r);
    return gamma;
}

std::optional<BeamPair> detect_strongest(const RMatrix& gamma)
{
    std::optional<BeamPair> best;
    double best_value = 0.0;
    for (Eigen::Index n = 0; n < gamma.rows(); ++n) {
        for (Eigen::Index m = 0; m < gamma.cols(); ++m) {
            if (gamma(n, m) > best_value) {
                best_value = gamma(n, m);
                best = BeamPair{static_cast<int>(n), static_cast<int>(m)};
            }
        }
    }
    return best;
}

BeamPair true_strongest(std::span<const MultipathComponent> paths)
{
    const int l = strongest_path(paths);
    if (l < 0)
        throw ConfigError("user has no multipath components");
    return {paths[l].aoa_index, paths[l].aod_index};
}

DetectionEstimate detection_probability(const Scenario& scenario, int slots, double snr_bbf_db,
                                        int trials, std::uint64_t seed, int threads)
{
    if (trials < 1)
        throw ConfigError("detection_probability needs at least one trial");
    std::vector<double> strengths;
    for (const auto& p : scenario.paths)
        strengths.push_back(p.strength);
    const double noise = scenario.noise_power();
    const double power = p_tot_for_snr(snr_bbf_db, strengths, noise);
    const ArrayConfig& config = scenario.array;

    std::vector<char> hit(trials, 0);
    std::vector<char> capped(trials, 0);
    parallel_for(trials, threads, [&](int trial) {
        Rng rng = make_rng(seed, {static_cast<std::uint64_t>(trial)});
        const PathList user = draw_user(scenario, rng);
        const BeaconCodebook cb = generate_beacon_codebook(
            config, slots, derive_seed(seed, {stream::codebook, static_cast<std::uint64_t>(trial)}));
        const MeasurementSet ms =
            synthesize_measurements(user, cb, config, power, noise, rng, scenario.measurement);
        NnlsResult solve;
        const RMatrix gamma = estimate_gamma(ms, config, {}, &solve);
        const auto detected = detect_strongest(gamma);
        hit[trial] = detected && *detected == true_strongest(user);
        capped[trial] = solve.iterations >= NnlsOptions{}.max_iterations;
    });

    DetectionEstimate est;
    est.trials = trials;
    int hits = 0;
    for (int i = 0; i < trials; ++i) {
        hits += hit[i];
        est.unconverged += capped[i];
    }
    est.probability = static_cast<double>(hits) / trials;
    est.std_error = std::sqrt(est.probability * (1.0 - est.probability) / trials);
    return est;
}

} // namespace hbf

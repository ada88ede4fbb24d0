// SPDX-License-Identifier: Apache-2.0

#include "hbf/precode.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <Eigen/SVD>

namespace hbf {

namespace {

constexpr double kUnitNormTolerance = 1e-9;

} // namespace

std::string_view to_string(Scheme scheme)
{
    return scheme == Scheme::BST ? "BST" : "BZF";
}

CVector ue_combiner(int beam, int ue_antennas)
{
    if (beam < 0 || beam >= ue_antennas)
        throw DimensionError("UE beam index " + std::to_string(beam) + " outside [0, " +
                             std::to_string(ue_antennas) + ")");
    return dft_dictionary(ue_antennas, ue_antennas).col(beam);
}

BeamSelection top_p_beam_set(const RMatrix& gamma, int ue_beam, int p)
{
    if (ue_beam < 0 || ue_beam >= gamma.rows())
        throw DimensionError("UE beam index outside the statistics matrix");
    if (p < 1 || p > gamma.cols())
        throw ConfigError("beams per user must lie in [1, M]");

    const RVector row = gamma.row(ue_beam).transpose();
    std::vector<int> order(row.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return row(a) > row(b); });

    BeamSelection sel;
    sel.ue_beam = ue_beam;
    for (int i = 0; i < p && row(order[i]) > 0.0; ++i)
        sel.bs_beams.push_back(order[i]);
    if (static_cast<int>(sel.bs_beams.size()) < p) {
        sel.padded = true;
        for (int m = 0; static_cast<int>(sel.bs_beams.size()) < p; ++m)
            if (std::find(sel.bs_beams.begin(), sel.bs_beams.end(), m) == sel.bs_beams.end())
                sel.bs_beams.push_back(m);
    }
    return sel;
}

CMatrix analog_support(std::span<const BeamSelection> selections, const ArrayConfig& config)
{
    if (selections.empty())
        throw DimensionError("analog support needs at least one user");
    const int p = static_cast<int>(selections.front().bs_beams.size());
    const int d = config.subarray_size();
    const int m = config.bs_antennas();
    const CMatrix fd = dft_dictionary(d, m) * std::sqrt(static_cast<double>(m) / d);

    CMatrix support(d, p * static_cast<Eigen::Index>(selections.size()));
    for (std::size_t k = 0; k < selections.size(); ++k) {
        const auto& beams = selections[k].bs_beams;
        if (static_cast<int>(beams.size()) != p)
            throw DimensionError("every user needs the same number of beams");
        for (int i = 0; i < p; ++i) {
            if (beams[i] < 0 || beams[i] >= m)
                throw DimensionError("BS beam index " + std::to_string(beams[i]) + " outside [0, " +
                                     std::to_string(m) + ")");
            support.col(static_cast<Eigen::Index>(k) * p + i) = fd.col(beams[i]);
        }
    }
    return support;
}

CMatrix antenna_weights(const PrecoderSet& precoders, const ArrayConfig& config)
{
    const auto k_count = precoders.precoder.cols();
    if (k_count > config.users())
        throw DimensionError("more streams than RF chains");
    CMatrix w = CMatrix::Zero(config.bs_antennas(), k_count);
    for (Eigen::Index k = 0; k < k_count; ++k)
        w.col(k).segment(config.chain_offset(static_cast<int>(k)), config.subarray_size()) =
            precoders.precoder.col(k);
    return w;
}

PrecoderSet bst_precoder(std::span<const BeamSelection> selections, const ArrayConfig& config)
{
    std::vector<int> aods;
    std::vector<CVector> combiners;
    for (const auto& sel : selections) {
        if (sel.bs_beams.size() != 1)
            throw ConfigError("BST uses exactly one beam per user");
        aods.push_back(sel.bs_beams.front());
        combiners.push_back(ue_combiner(sel.ue_beam, config.ue_antennas()));
    }
    for (std::size_t a = 0; a < aods.size(); ++a)
        for (std::size_t b = a + 1; b < aods.size(); ++b)
            if (aods[a] == aods[b])
                throw SchedulingError("users " + std::to_string(a) + " and " + std::to_string(b) +
                                      " share BS beam " + std::to_string(aods[a]));
    const CMatrix support = analog_support(selections, config);
    const auto k = static_cast<Eigen::Index>(selections.size());
    return compose_precoder(Scheme::BST, support, CMatrix::Identity(k, k), std::move(combiners), 1);
}

EffectiveChannel effective_channel(std::span<const CVector> combiners,
                                   std::span<const PathList> users, const CMatrix& support,
                                   const ArrayConfig& config, double noise_variance, Rng& rng)
{
    if (combiners.size() != users.size())
        throw DimensionError("one combiner per user is required");
    if (support.rows() != config.subarray_size())
        throw DimensionError("analog support does not match the subarray size");
    if (noise_variance < 0.0)
        throw ConfigError("effective-channel noise variance must be non-negative");

    const auto k_count = static_cast<Eigen::Index>(users.size());
    const int sheets = config.architecture() == Architecture::OSPS ? static_cast<int>(k_count) : 1;

    // Row k of V^H H_k over the full array.
    CMatrix rows(k_count, config.bs_antennas());
    for (Eigen::Index k = 0; k < k_count; ++k) {
        const CMatrix h = channel_matrix(users[k], config.ue_antennas(), config.bs_antennas());
        rows.row(k) = combiners[k].adjoint() * h;
    }

    EffectiveChannel out;
    out.noise_variance = noise_variance;
    out.pilot_subslots = static_cast<int>(support.cols());
    for (int s = 0; s < sheets; ++s) {
        const int offset = config.chain_offset(s);
        CMatrix h = rows.middleCols(offset, config.subarray_size()) * support;
        if (noise_variance > 0.0)
            for (Eigen::Index c = 0; c < h.cols(); ++c)
                for (Eigen::Index r = 0; r < h.rows(); ++r)
                    h(r, c) += complex_gaussian(rng, noise_variance);
        out.per_stream.push_back(std::move(h));
    }
    return out;
}

ZeroForcing bzf_baseband(const EffectiveChannel& channel, const CMatrix& support,
                         double max_condition)
{
    if (channel.per_stream.empty())
        throw DimensionError("empty effective channel");
    const CMatrix& first = channel.per_stream.front();
    const auto k_count = first.rows();
    if (first.cols() != support.cols() || first.cols() < k_count)
        throw DimensionError("effective channel must be K x (p K) with p K >= K");
    if (channel.per_stream.size() != 1 &&
        static_cast<Eigen::Index>(channel.per_stream.size()) != k_count)
        throw DimensionError("OSPS effective channel needs one matrix per stream");

    ZeroForcing zf;
    zf.baseband.resize(first.cols(), k_count);
    zf.scaling.resize(k_count);
    zf.condition = 1.0;

    for (std::size_t s = 0; s < channel.per_stream.size(); ++s) {
        const CMatrix& h = channel.per_stream[s];
        const CMatrix gram = h * h.adjoint();
        const RVector sv = Eigen::JacobiSVD<CMatrix>(gram).singularValues();
        const double cond = sv(sv.size() - 1) > 0.0 ? sv(0) / sv(sv.size() - 1)
                                                    : std::numeric_limits<double>::infinity();
        zf.condition = std::max(zf.condition, cond);
        if (!(cond <= max_condition))
            throw IllConditionedError("effective channel Gram matrix is ill-conditioned", cond);
        const CMatrix pinv = h.adjoint() * gram.ldlt().solve(CMatrix::Identity(k_count, k_count));

        // FC: every stream comes from the shared channel. OSPS: stream s only.
        const Eigen::Index first_col = channel.per_stream.size() == 1 ? 0 : static_cast<Eigen::Index>(s);
        const Eigen::Index last_col = channel.per_stream.size() == 1 ? k_count : first_col + 1;
        for (Eigen::Index k = first_col; k < last_col; ++k) {
            const double norm = (support * pinv.col(k)).norm();
            if (!(norm > 0.0))
                throw IllConditionedError("zero-forcing column vanishes on the analog support", cond);
            zf.scaling(k) = 1.0 / norm;
            zf.baseband.col(k) = pinv.col(k) / norm;
        }
    }
    return zf;
}

CMatrix stream_gains(const EffectiveChannel& channel, const CMatrix& baseband)
{
    const auto k_count = baseband.cols();
    CMatrix g(k_count, k_count);
    for (Eigen::Index k = 0; k < k_count; ++k)
        g.col(k) = channel.for_stream(static_cast<int>(k)) * baseband.col(k);
    return g;
}

PrecoderSet compose_precoder(Scheme scheme, const CMatrix& support, const CMatrix& baseband,
                             std::vector<CVector> combiners, int beams_per_user)
{
    if (support.cols() != baseband.rows())
        throw DimensionError("analog support and baseband are not conformable");
    PrecoderSet set;
    set.scheme = scheme;
    set.beams_per_user = beams_per_user;
    set.support = support;
    set.baseband = baseband;
    set.precoder = support * baseband;
    set.combiners = std::move(combiners);
    for (Eigen::Index k = 0; k < set.precoder.cols(); ++k) {
        const double norm = set.precoder.col(k).norm();
        if (std::abs(norm - 1.0) > kUnitNormTolerance)
            throw DimensionError("precoder column " + std::to_string(k) + " has norm " +
                                 std::to_string(norm));
    }
    return set;
}

} // namespace hbf

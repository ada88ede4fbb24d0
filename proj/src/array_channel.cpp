// SPDX-License-Identifier: Apache-2.0

#include "hbf/array_channel.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace hbf {

namespace {

constexpr double pi = std::numbers::pi;

} // namespace

std::string_view to_string(Architecture arch)
{
    return arch == Architecture::FC ? "FC" : "OSPS";
}

Architecture architecture_from_string(std::string_view name)
{
    if (name == "FC")
        return Architecture::FC;
    if (name == "OSPS")
        return Architecture::OSPS;
    throw ConfigError("unknown architecture '" + std::string(name) + "' (expected FC or OSPS)");
}

ArrayConfig::ArrayConfig(int bs_antennas, int bs_rf_chains, int ue_antennas, int ue_rf_chains,
                         Architecture architecture)
    : bs_antennas_(bs_antennas), bs_rf_chains_(bs_rf_chains), ue_antennas_(ue_antennas),
      ue_rf_chains_(ue_rf_chains), architecture_(architecture)
{
    if (bs_antennas < 1 || bs_rf_chains < 1 || ue_antennas < 1 || ue_rf_chains < 1)
        throw ConfigError("antenna and RF chain counts must be positive");
    if (bs_rf_chains > bs_antennas)
        throw ConfigError("bs_rf_chains exceeds bs_antennas");
    if (architecture == Architecture::OSPS && bs_antennas % bs_rf_chains != 0)
        throw ConfigError("OSPS needs bs_antennas (" + std::to_string(bs_antennas) +
                          ") divisible by bs_rf_chains (" + std::to_string(bs_rf_chains) + ")");
}

int ArrayConfig::subarray_size() const
{
    return architecture_ == Architecture::FC ? bs_antennas_ : bs_antennas_ / bs_rf_chains_;
}

int ArrayConfig::chain_offset(int chain) const
{
    return architecture_ == Architecture::FC ? 0 : chain * subarray_size();
}

ArrayConfig ArrayConfig::with_architecture(Architecture arch) const
{
    return {bs_antennas_, bs_rf_chains_, ue_antennas_, ue_rf_chains_, arch};
}

CVector array_response(double angle, int count)
{
    return array_response_sine(std::sin(angle), count);
}

CVector array_response_sine(double sine, int count)
{
    CVector a(count);
    for (int i = 0; i < count; ++i)
        a(i) = std::polar(1.0, pi * i * sine);
    return a;
}

double grid_sine(int index, int grid_size)
{
    return 2.0 * index / grid_size - 1.0;
}

int nearest_grid_index(double sine, int grid_size)
{
    const long k = std::lround((sine + 1.0) * grid_size / 2.0);
    return static_cast<int>(((k % grid_size) + grid_size) % grid_size);
}

double grid_distance(double sine_a, double sine_b, int grid_size)
{
    const double d = std::fmod(std::abs(sine_a - sine_b) * grid_size / 2.0, grid_size);
    return std::min(d, grid_size - d);
}

CMatrix dft_dictionary(int rows, int cols)
{
    if (rows < 1 || cols < rows)
        throw DimensionError("dft_dictionary: need 1 <= rows <= cols, got " + std::to_string(rows) +
                             "x" + std::to_string(cols));
    CMatrix f(rows, cols);
    const double scale = 1.0 / std::sqrt(static_cast<double>(cols));
    for (int c = 0; c < cols; ++c)
        for (int r = 0; r < rows; ++r)
            f(r, c) = std::polar(scale, 2.0 * pi * r * (static_cast<double>(c) / cols - 0.5));
    return f;
}

cdouble sample_path_gain(double strength, double rice_factor, Rng& rng)
{
    if (std::isinf(rice_factor))
        return {std::sqrt(strength), 0.0};
    const double los = std::sqrt(rice_factor / (1.0 + rice_factor));
    const double nlos = 1.0 / std::sqrt(1.0 + rice_factor);
    return std::sqrt(strength) * (los + nlos * complex_gaussian(rng));
}

PathList refade(std::span<const MultipathComponent> paths, Rng& rng)
{
    PathList out(paths.begin(), paths.end());
    for (auto& p : out)
        p.gain = p.static_phase * sample_path_gain(p.strength, p.rice_factor, rng);
    return out;
}

CMatrix channel_matrix(std::span<const MultipathComponent> paths, int ue_antennas, int bs_antennas,
                       double time_ref)
{
    CMatrix h = CMatrix::Zero(ue_antennas, bs_antennas);
    for (const auto& p : paths) {
        const cdouble coeff = p.gain * std::polar(1.0, 2.0 * pi * p.doppler * time_ref);
        h.noalias() += coeff * array_response_sine(p.aoa_sine, ue_antennas) *
                       array_response_sine(p.aod_sine, bs_antennas).adjoint();
    }
    return h;
}

CMatrix chain_block(const CMatrix& channel, const ArrayConfig& config, int chain)
{
    if (channel.rows() != config.ue_antennas() || channel.cols() != config.bs_antennas())
        throw DimensionError("channel is not N x M for this array");
    return channel.middleCols(config.chain_offset(chain), config.subarray_size());
}

std::vector<CMatrix> beamspace_transform(const CMatrix& channel, const ArrayConfig& config)
{
    if (channel.rows() != config.ue_antennas() || channel.cols() != config.bs_antennas())
        throw DimensionError("beamspace_transform: channel is " + std::to_string(channel.rows()) +
                             "x" + std::to_string(channel.cols()) + ", array expects " +
                             std::to_string(config.ue_antennas()) + "x" +
                             std::to_string(config.bs_antennas()));
    const CMatrix fn = dft_dictionary(config.ue_antennas(), config.ue_antennas());
    const CMatrix fd = dft_dictionary(config.subarray_size(), config.bs_antennas());
    const int sheets = config.architecture() == Architecture::FC ? 1 : config.bs_rf_chains();
    std::vector<CMatrix> out;
    out.reserve(sheets);
    for (int i = 0; i < sheets; ++i)
        out.push_back(fn.adjoint() * chain_block(channel, config, i) * fd);
    return out;
}

RMatrix beamspace_statistics(std::span<const MultipathComponent> paths, const ArrayConfig& config)
{
    const int n = config.ue_antennas();
    const int m = config.bs_antennas();
    const CMatrix fn = dft_dictionary(n, n);
    const CMatrix fd = dft_dictionary(config.subarray_size(), m);
    RMatrix gamma = RMatrix::Zero(n, m);
    for (const auto& p : paths) {
        const RVector rx = (fn.adjoint() * array_response_sine(p.aoa_sine, n)).cwiseAbs2();
        const RVector tx =
            (fd.adjoint() * array_response_sine(p.aod_sine, config.subarray_size())).cwiseAbs2();
        gamma.noalias() += p.strength * rx * tx.transpose();
    }
    return gamma;
}

RMatrix grid_statistics(std::span<const MultipathComponent> paths, const ArrayConfig& config)
{
    const int n = config.ue_antennas();
    const int m = config.bs_antennas();
    RMatrix gamma = RMatrix::Zero(n, m);
    for (const auto& p : paths)
        gamma(p.aoa_index, p.aod_index) += p.strength * n * m;
    return gamma;
}

int strongest_path(std::span<const MultipathComponent> paths)
{
    int best = -1;
    double best_strength = -std::numeric_limits<double>::infinity();
    for (int l = 0; l < static_cast<int>(paths.size()); ++l) {
        if (paths[l].strength > best_strength) {
            best_strength = paths[l].strength;
            best = l;
        }
    }
    return best;
}

} // namespace hbf

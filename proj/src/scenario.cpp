// SPDX-License-Identifier: Apache-2.0

#include "hbf/scenario.hpp"

#include <cmath>
#include <numbers>

namespace hbf {

std::string_view to_string(AngleMode mode)
{
    return mode == AngleMode::OnGrid ? "on_grid" : "off_grid";
}

AngleMode angle_mode_from_string(std::string_view name)
{
    if (name == "on_grid")
        return AngleMode::OnGrid;
    if (name == "off_grid")
        return AngleMode::OffGrid;
    throw ConfigError("unknown angle mode '" + std::string(name) +
                      "' (expected on_grid or off_grid)");
}

double Scenario::total_strength() const
{
    double sum = 0.0;
    for (const auto& p : paths)
        sum += p.strength;
    return sum;
}

int Scenario::separation_steps() const
{
    if (min_separation > 0)
        return min_separation;
    return (array.bs_antennas() + 15) / 16;
}

PathList draw_user(const Scenario& scenario, Rng& rng)
{
    const int n = scenario.array.ue_antennas();
    const int m = scenario.array.bs_antennas();
    if (static_cast<long>(scenario.paths.size()) > static_cast<long>(n) * m)
        throw ConfigError("more paths than beam-grid cells");

    std::uniform_int_distribution<int> aoa_grid(0, n - 1);
    std::uniform_int_distribution<int> aod_grid(0, m - 1);
    std::uniform_real_distribution<double> sine(-1.0, 1.0);
    std::uniform_real_distribution<double> delay(0.0, scenario.max_delay_s);

    PathList paths;
    paths.reserve(scenario.paths.size());
    for (const auto& profile : scenario.paths) {
        MultipathComponent p;
        p.strength = profile.strength;
        p.rice_factor = profile.rice_factor;
        bool taken = true;
        while (taken) {
            if (scenario.angles == AngleMode::OnGrid) {
                p.aoa_index = aoa_grid(rng);
                p.aod_index = aod_grid(rng);
                p.aoa_sine = grid_sine(p.aoa_index, n);
                p.aod_sine = grid_sine(p.aod_index, m);
            } else {
                p.aoa_sine = sine(rng);
                p.aod_sine = sine(rng);
                p.aoa_index = nearest_grid_index(p.aoa_sine, n);
                p.aod_index = nearest_grid_index(p.aod_sine, m);
            }
            taken = false;
            for (const auto& q : paths)
                taken = taken || (q.aoa_index == p.aoa_index && q.aod_index == p.aod_index);
        }
        p.delay = delay(rng);
        p.doppler = scenario.doppler_hz;
        p.static_phase =
            std::polar(1.0, -2.0 * std::numbers::pi * std::fmod(scenario.carrier_hz * p.delay, 1.0));
        paths.push_back(p);
    }
    return paths;
}

std::vector<PathList> draw_users(const Scenario& scenario, int count, Rng& rng)
{
    const int m = scenario.array.bs_antennas();
    const double spacing = scenario.separation_steps();
    if (count * spacing > m)
        throw ConfigError("cannot place " + std::to_string(count) + " users " +
                          std::to_string(static_cast<int>(spacing)) + " grid steps apart on " +
                          std::to_string(m) + " beams");
    std::vector<PathList> users;
    users.reserve(count);
    while (static_cast<int>(users.size()) < count) {
        PathList candidate = draw_user(scenario, rng);
        const auto& strongest = candidate[strongest_path(candidate)];
        bool ok = true;
        for (const auto& u : users) {
            const auto& other = u[strongest_path(u)];
            ok = ok && grid_distance(strongest.aod_sine, other.aod_sine, m) >= spacing - 1e-9;
        }
        if (ok)
            users.push_back(std::move(candidate));
    }
    return users;
}

} // namespace hbf

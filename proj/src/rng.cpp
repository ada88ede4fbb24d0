// SPDX-License-Identifier: Apache-2.0

#include "hbf/rng.hpp"

#include <cmath>
#include <numbers>

namespace hbf {

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> counters)
{
    std::uint64_t state = splitmix64(base);
    for (std::uint64_t c : counters)
        state = splitmix64(state ^ splitmix64(c + 0x632BE59BD9B4E019ULL));
    return state;
}

Rng make_rng(std::uint64_t base, std::initializer_list<std::uint64_t> counters)
{
    return Rng(derive_seed(base, counters));
}

cdouble complex_gaussian(Rng& rng, double variance)
{
    std::normal_distribution<double> normal(0.0, std::sqrt(variance / 2.0));
    const double re = normal(rng);
    const double im = normal(rng);
    return {re, im};
}

cdouble random_phase(Rng& rng)
{
    std::uniform_real_distribution<double> uniform(0.0, 2.0 * std::numbers::pi);
    return std::polar(1.0, uniform(rng));
}

} // namespace hbf

// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>

#include "hbf/power.hpp"

using namespace hbf;

namespace {

const std::vector<double> kTabulatedMilliwatts{0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0};

} // namespace

TEST_CASE("divider and combiner factors")
{
    const ArrayConfig fc(32, 2, 16, 1, Architecture::FC);
    const auto f = divider_combiner_factors(fc);
    CHECK(f.divider == doctest::Approx(1.0 / 32));
    CHECK(f.combiner == doctest::Approx(0.5));
    const auto o = divider_combiner_factors(fc.with_architecture(Architecture::OSPS));
    CHECK(o.divider == doctest::Approx(2.0 / 32));
    CHECK(o.combiner == 1.0);

    const ArrayConfig single(32, 1, 16, 1, Architecture::FC);
    const auto a = divider_combiner_factors(single);
    const auto b = divider_combiner_factors(single.with_architecture(Architecture::OSPS));
    CHECK(a.divider == doctest::Approx(b.divider));
    CHECK(a.combiner == doctest::Approx(b.combiner));
}

TEST_CASE("beamformed sum power")
{
    const ArrayConfig fc(32, 2, 16, 1, Architecture::FC);
    const ArrayConfig osps = fc.with_architecture(Architecture::OSPS);
    CHECK(beamformed_sum_power(fc, 1.0) == doctest::Approx(1.0));
    CHECK(beamformed_sum_power(osps, 1.0) == doctest::Approx(2.0));
    CHECK(beamformed_sum_power(fc, 1.0, true) == doctest::Approx(2.0));
    for (double eps : {0.1, 1.0, 3.7})
        CHECK(beamformed_sum_power(fc, eps, true) ==
              doctest::Approx(beamformed_sum_power(osps, eps)));
}

TEST_CASE("PA consumption")
{
    const PAModel pa = reference_pa();
    CHECK(watts_to_dbm(pa.max_power) == doctest::Approx(6.0));
    CHECK(pa.max_efficiency == 0.3);
    CHECK(pa_consumed(pa.max_power, pa) == doctest::Approx(pa.max_power / 0.3));
    CHECK(pa_consumed(pa.max_power, pa) * 1e3 == doctest::Approx(13.27).epsilon(1e-3));
    CHECK(pa_efficiency(pa.max_power, pa) == doctest::Approx(0.3));
    CHECK(pa_efficiency(pa.max_power / 4, pa) == doctest::Approx(0.15));
    CHECK(pa_consumed(0.0, pa) == 0.0);
    CHECK_THROWS_AS(pa_consumed(pa.max_power * 1.01, pa), SaturationError);
    CHECK_NOTHROW(pa_consumed(pa.max_power * (1 + 1e-14), pa));
}

TEST_CASE("backoff table")
{
    CHECK(backoff_for(Architecture::OSPS, Waveform::SC) == -7.5);
    CHECK(backoff_for(Architecture::FC, Waveform::SC) == -9.5);
    CHECK(backoff_for(Architecture::OSPS, Waveform::OFDM) == -12.0);
    CHECK(backoff_for(Architecture::FC, Waveform::OFDM) == -12.0);
    CHECK(reference_profile().backoff_db == -7.5);
    CHECK(reference_profile().backoff() == doctest::Approx(std::pow(10.0, -0.75)));
    CHECK(waveform_from_string("ofdm") == Waveform::OFDM);
    CHECK(to_string(Waveform::SC) == "SC");
    CHECK_THROWS_AS(waveform_from_string("fbmc"), ConfigError);
}

TEST_CASE("option I")
{
    const PAModel pa = reference_pa();
    const BackoffProfile ref = reference_profile();
    const BackoffProfile fc = backoff_profile(Architecture::FC, Waveform::SC);
    for (double mw : kTabulatedMilliwatts) {
        const double p0 = mw * 1e-3;
        CHECK(option1_radiated(p0, ref, ref) == p0);
        CHECK(std::abs(watts_to_dbm(option1_radiated(p0, fc, ref)) - watts_to_dbm(p0) + 2.0) < 1e-12);
    }
    const PowerPoint zero = option1_evaluate(1e-3, fc, ref, pa);
    CHECK(watts_to_dbm(zero.radiated) == doctest::Approx(-2.0));
    CHECK(zero.consumed == doctest::Approx(std::sqrt(pa.max_power * zero.radiated) / 0.3));
    CHECK(zero.efficiency == doctest::Approx(zero.radiated / zero.consumed));

    const PowerPoint full = option1_evaluate(pa.max_power, ref, ref, pa);
    CHECK(full.efficiency == doctest::Approx(0.3));
    CHECK_THROWS_AS(option1_evaluate(4e-3, ref, ref, pa), SaturationError);

    double last = 0.0;
    for (double mw : kTabulatedMilliwatts) {
        const PowerPoint pt = option1_evaluate(mw * 1e-3, fc, ref, pa);
        CHECK(pt.efficiency > last);
        CHECK(pt.efficiency <= pa.max_efficiency);
        last = pt.efficiency;
    }
}

TEST_CASE("option II")
{
    const PAModel pa = reference_pa();
    const BackoffProfile ref = reference_profile();
    const BackoffProfile fc = backoff_profile(Architecture::FC, Waveform::SC);
    const BackoffProfile ofdm = backoff_profile(Architecture::OSPS, Waveform::OFDM);

    const PowerPoint same = option2_evaluate(2e-3, ref, ref, pa, pa.max_efficiency);
    const PowerPoint one = option1_evaluate(2e-3, ref, ref, pa);
    CHECK(same.efficiency == doctest::Approx(one.efficiency).epsilon(1e-14));
    CHECK(same.max_power == doctest::Approx(pa.max_power));

    const PowerPoint fc_pt = option2_evaluate(2e-3, fc, ref, pa, pa.max_efficiency);
    CHECK(watts_to_dbm(fc_pt.max_power) == doctest::Approx(8.0));
    CHECK(fc_pt.radiated == 2e-3);

    BackoffProfile halved = ref;
    halved.backoff_db = ref.backoff_db - 10.0 * std::log10(2.0);
    const PowerPoint h = option2_evaluate(2e-3, halved, ref, pa, pa.max_efficiency);
    CHECK(h.efficiency == doctest::Approx(same.efficiency / std::sqrt(2.0)).epsilon(1e-12));

    for (double mw : kTabulatedMilliwatts) {
        const double p = mw * 1e-3;
        const PowerPoint ref_pt = option2_evaluate(p, ref, ref, pa, pa.max_efficiency);
        const double a = ref_pt.efficiency;
        const double b = option2_evaluate(p, fc, ref, pa, pa.max_efficiency).efficiency;
        const double c = option2_evaluate(p, ofdm, ref, pa, pa.max_efficiency).efficiency;
        CHECK(a > b);
        CHECK(b > c);
        if (!ref_pt.saturated())
            CHECK(a <= pa.max_efficiency * (1 + 1e-12));
    }
    CHECK(option2_evaluate(5e-3, ref, ref, pa, 0.3).saturated());
}

TEST_CASE("dBm conversion")
{
    CHECK(watts_to_dbm(1e-3) == doctest::Approx(0.0));
    CHECK(dbm_to_watts(30.0) == doctest::Approx(1.0));
    CHECK(watts_to_dbm(dbm_to_watts(-3.0103)) == doctest::Approx(-3.0103));
}

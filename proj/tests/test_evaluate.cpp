// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "hbf/evaluate.hpp"
#include "oracles.hpp"

using namespace hbf;

namespace {

MultipathComponent grid_path(int n, int m, cdouble gain)
{
    MultipathComponent p;
    p.strength = std::norm(gain);
    p.rice_factor = std::numeric_limits<double>::infinity();
    p.aoa_index = n;
    p.aod_index = m;
    p.aoa_sine = grid_sine(n, 16);
    p.aod_sine = grid_sine(m, 32);
    p.gain = gain;
    return p;
}

} // namespace

TEST_CASE("link budget")
{
    const std::vector<double> strengths{1.0, 0.6, 0.6};
    CHECK(p_tot_for_snr(0.0, strengths, 1.0) == doctest::Approx(1.0 / 2.2));
    CHECK(p_tot_for_snr(-std::numeric_limits<double>::infinity(), strengths, 1.0) == 0.0);
    for (double x : {-20.0, -3.3, 0.0, 17.5, 40.0})
        CHECK(std::abs(snr_bbf_db(p_tot_for_snr(x, strengths, 4e-12), strengths, 4e-12) - x) < 1e-12);
    CHECK(linear_to_db(db_to_linear(7.0)) == doctest::Approx(7.0));
    const LinkBudget budget{2.0, 1.0};
    CHECK(budget.per_user_power(2) == 1.0);
}

TEST_CASE("SINR")
{
    SUBCASE("single user is SNR")
    {
        const ArrayConfig one(32, 1, 16, 1, Architecture::FC);
        const PathList paths{grid_path(4, 10, {0.8, 0.6})};
        const std::vector<CMatrix> h{channel_matrix(paths, 16, 32)};
        std::vector<BeamSelection> sel{{4, {10}, false}};
        const PrecoderSet bst = bst_precoder(sel, one);
        const LinkBudget budget{0.01, 0.5};
        const RVector sinr = sinr_per_ue(h, bst, one, budget);
        const double direct = 0.01 * std::norm(oracle::inner(bst.combiners[0], h[0] * bst.precoder.col(0))) / 0.5;
        CHECK(sinr(0) == doctest::Approx(direct).epsilon(1e-12));
        // Aligned on-grid beams collect N M.
        CHECK(sinr(0) == doctest::Approx(0.01 * 16 * 32 / 0.5).epsilon(1e-12));
    }

    SUBCASE("orthogonal interferer contributes nothing")
    {
        const ArrayConfig fc(32, 2, 16, 1, Architecture::FC);
        const std::vector<CMatrix> h{channel_matrix(PathList{grid_path(2, 5, 1.0)}, 16, 32),
                                     channel_matrix(PathList{grid_path(9, 20, 1.0)}, 16, 32)};
        std::vector<BeamSelection> sel{{2, {5}, false}, {9, {20}, false}};
        const PrecoderSet bst = bst_precoder(sel, fc);
        const RVector sinr = sinr_per_ue(h, bst, fc, LinkBudget{2.0, 1.0});
        CHECK(sinr(0) == doctest::Approx(16.0 * 32.0).epsilon(1e-10));
        CHECK(sinr(1) == doctest::Approx(16.0 * 32.0).epsilon(1e-10));
    }

    SUBCASE("zero forcing with perfect effective CSI")
    {
        Scenario sc;
        sc.angles = AngleMode::OffGrid;
        Rng rng(4);
        for (auto arch : {Architecture::FC, Architecture::OSPS}) {
            const ArrayConfig config = sc.array.with_architecture(arch);
            sc.array = config;
            int used = 0;
            for (int rep = 0; rep < 20; ++rep) {
                auto users = draw_users(sc, 2, rng);
                for (auto& u : users)
                    u = refade(u, rng);
                std::vector<CMatrix> h;
                std::vector<BeamSelection> sel;
                std::vector<CVector> combiners;
                for (const auto& u : users) {
                    h.push_back(channel_matrix(u, 16, 32));
                    const auto& s = u[strongest_path(u)];
                    sel.push_back({s.aoa_index, {s.aod_index}, false});
                    combiners.push_back(ue_combiner(s.aoa_index, 16));
                }
                const CMatrix support = analog_support(sel, config);
                const EffectiveChannel eff = effective_channel(combiners, users, support, config, 0.0, rng);
                ZeroForcing zf;
                try {
                    zf = bzf_baseband(eff, support);
                } catch (const IllConditionedError&) {
                    continue; // the sweep redraws such trials
                }
                const PrecoderSet set = compose_precoder(Scheme::BZF, support, zf.baseband, combiners, 1);
                const CMatrix w = antenna_weights(set, config);
                for (int k = 0; k < 2; ++k) {
                    const RVector g = (combiners[k].adjoint() * h[k] * w).cwiseAbs2().transpose();
                    CHECK(g(1 - k) <= 1e-18 * g(k) + 1e-30);
                }
                const RVector sinr = sinr_per_ue(h, set, config, LinkBudget{1.0, 1.0});
                for (int k = 0; k < 2; ++k) {
                    const double alone =
                        0.5 * std::norm(oracle::inner(combiners[k], h[k] * w.col(k)));
                    CHECK(sinr(k) == doctest::Approx(alone).epsilon(1e-9));
                }
                ++used;
            }
            CHECK(used >= 18);
        }
    }

    SUBCASE("dimension checks")
    {
        const ArrayConfig fc(32, 2, 16, 1, Architecture::FC);
        std::vector<BeamSelection> sel{{0, {1}, false}, {1, {2}, false}};
        const PrecoderSet bst = bst_precoder(sel, fc);
        const std::vector<CMatrix> one{CMatrix::Zero(16, 32)};
        CHECK_THROWS_AS(sinr_per_ue(one, bst, fc, LinkBudget{1, 1}), DimensionError);
        const std::vector<CMatrix> wrong{CMatrix::Zero(16, 31), CMatrix::Zero(16, 31)};
        CHECK_THROWS_AS(sinr_per_ue(wrong, bst, fc, LinkBudget{1, 1}), DimensionError);
    }
}

TEST_CASE("scheme labels")
{
    CHECK(SchemeSpec{Scheme::BST, 1}.label() == "BST");
    CHECK(SchemeSpec{Scheme::BZF, 2}.label() == "BZF p=2");
    CHECK(to_string(SelectionSource::BeamAlignment) == "beam_alignment");
    CHECK(selection_source_from_string("genie") == SelectionSource::Genie);
    CHECK_THROWS_AS(selection_source_from_string("oracle"), ConfigError);
}

TEST_CASE("sum spectral efficiency sweep")
{
    Scenario sc;
    sc.angles = AngleMode::OffGrid;
    const std::vector<SchemeSpec> schemes{{Scheme::BST, 1}, {Scheme::BZF, 1}, {Scheme::BZF, 2}};
    const std::vector<double> grid{-10.0, 10.0, 30.0};
    const auto res = sum_spectral_efficiency(sc, schemes, grid, 60, 17);
    REQUIRE(res.size() == 3);
    for (const auto& r : res) {
        CHECK(r.metric == "r_sum");
        CHECK(r.axis == "snr_bbf_db");
        CHECK(r.seed == 17);
        REQUIRE(r.points.size() == 3);
        for (std::size_t i = 0; i < 3; ++i) {
            CHECK(r.points[i].axis == grid[i]);
            CHECK(r.points[i].value >= 0.0);
            CHECK(r.points[i].trials == 60);
            CHECK(r.points[i].std_error > 0.0);
        }
    }
    CHECK(res[0].scheme == "BST");
    CHECK(res[2].scheme == "BZF p=2");
    // BZF keeps growing with SNR.
    CHECK(res[1].points[2].value > res[1].points[1].value);
    CHECK(res[1].points[1].value > res[1].points[0].value);

    SeOptions two;
    two.threads = 2;
    const auto again = sum_spectral_efficiency(sc, schemes, grid, 60, 17, two);
    for (std::size_t s = 0; s < res.size(); ++s)
        for (std::size_t i = 0; i < 3; ++i)
            CHECK(again[s].points[i].value == res[s].points[i].value);

    // Perfect effective CSI is at least as good at high SNR.
    SeOptions perfect;
    perfect.pilot_noise_scale = 0.0;
    const std::vector<SchemeSpec> zf{{Scheme::BZF, 1}};
    const std::vector<double> high{30.0};
    const auto clean = sum_spectral_efficiency(sc, zf, high, 60, 17, perfect);
    CHECK(clean[0].points[0].value >= res[1].points[2].value - 1e-9);
}

TEST_CASE("sum SE with beam-alignment selections")
{
    Scenario sc;
    SeOptions opts;
    opts.selection = SelectionSource::BeamAlignment;
    opts.ba_slots = 60;
    const std::vector<SchemeSpec> schemes{{Scheme::BST, 1}};
    const std::vector<double> grid{20.0};
    const auto res = sum_spectral_efficiency(sc, schemes, grid, 10, 2, opts);
    REQUIRE(res.size() == 1);
    CHECK(res[0].points[0].value > 0.0);
}

TEST_CASE("beam-alignment sweep")
{
    Scenario sc;
    const std::vector<int> slots{20, 60};
    const SweepResult r = ba_sweep(sc, slots, -20.0, 10, 3);
    CHECK(r.metric == "p_d");
    CHECK(r.axis == "slots");
    CHECK(r.scheme == "NNLS");
    REQUIRE(r.points.size() == 2);
    CHECK(r.points[1].axis == 60.0);
    const DetectionEstimate direct =
        detection_probability(sc, 60, -20.0, 10, derive_seed(3, {stream::ba_sweep, 1}));
    CHECK(r.points[1].value == direct.probability);
    CHECK(r.points[1].std_error == direct.std_error);
}

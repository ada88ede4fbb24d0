// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "hbf/config.hpp"
#include "hbf/runner.hpp"

using namespace hbf;
namespace fs = std::filesystem;

namespace {

std::string error_of(const std::string& yaml)
{
    try {
        parse_config_string(yaml, "test.yaml");
    } catch (const ConfigError& e) {
        return e.what();
    }
    return {};
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int count_lines(const std::string& s)
{
    return static_cast<int>(std::count(s.begin(), s.end(), '\n'));
}

fs::path scratch_dir(const std::string& name)
{
    const fs::path dir = fs::temp_directory_path() / ("hbf_test_" + name);
    fs::remove_all(dir);
    return dir;
}

} // namespace

TEST_CASE("empty configuration gives the default scenario")
{
    for (const char* text : {"", "\n", "# nothing\n"}) {
        const RunConfig cfg = parse_config_string(text);
        const Scenario& sc = cfg.scenario;
        CHECK(sc.array.bs_antennas() == 32);
        CHECK(sc.array.bs_rf_chains() == 2);
        CHECK(sc.array.ue_antennas() == 16);
        CHECK(sc.array.ue_rf_chains() == 1);
        REQUIRE(sc.paths.size() == 3);
        CHECK(sc.paths[0].strength == 1.0);
        CHECK(sc.paths[0].rice_factor == 100.0);
        CHECK(sc.paths[2].rice_factor == 0.0);
        CHECK(sc.carrier_hz == 40e9);
        CHECK(sc.bandwidth_hz == 0.8e9);
        CHECK(cfg.seed == 1);
        CHECK(cfg.ba.slots.size() == 10);
        CHECK(cfg.ba.trials == 200);
        CHECK(cfg.se.schemes.size() == 4);
        CHECK(cfg.power.reference_radiated_dbm.size() == 8);
        CHECK(dump_config(cfg) == dump_config(RunConfig{}));
    }
}

TEST_CASE("configuration errors")
{
    const std::string div = error_of("array:\n  bs_antennas: 30\n  bs_rf_chains: 4\n"
                                     "  architecture: OSPS\n");
    CHECK(div.find("divis") != std::string::npos);

    const std::string unknown = error_of("array:\n  bs_antennas: 32\n  foo: 1\n");
    CHECK(unknown.find("'foo'") != std::string::npos);
    CHECK(unknown.find("test.yaml:3") != std::string::npos);

    CHECK(error_of("bar: 1\n").find("'bar'") != std::string::npos);
    CHECK(error_of("array: [1, 2\n").find("test.yaml:") != std::string::npos);
    CHECK(!error_of("array:\n  bs_antennas: many\n").empty());
    CHECK(!error_of("se_sweep:\n  schemes: [MRT]\n").empty());
    CHECK(!error_of("power_sweep:\n  options: [3]\n").empty());
    CHECK(!error_of("run:\n  trials: 0\n").empty());
    CHECK(!error_of("paths:\n  - {strength: 0, rice_factor: 1}\n").empty());
    CHECK_THROWS_AS(parse_config_file("/nonexistent/hbf.yaml"), ConfigError);
}

TEST_CASE("configuration values")
{
    const RunConfig cfg = parse_config_string(R"(
array:
  bs_antennas: 64
  bs_rf_chains: 4
  users: 4
paths:
  - {strength: 1.0, rice_factor: .inf}
  - {strength: 0.5, rice_factor: 0}
link:
  noise_psd_dbm_hz: -170
run:
  seed: 9
  trials: 40
  output_dir: out
ba_sweep:
  architectures: [OSPS]
  slots: {start: 20, stop: 60, step: 20}
  fading_samples: 3
se_sweep:
  schemes: [BST, {scheme: BZF, p: 2}]
  snr_bbf_db: [0, 20]
  trials: 11
  selection: beam_alignment
power_sweep:
  profiles:
    - {architecture: FC, waveform: OFDM, backoff_db: -10}
  options: [2]
)");
    CHECK(cfg.scenario.array.bs_antennas() == 64);
    CHECK(cfg.scenario.array.bs_rf_chains() == 4);
    CHECK(std::isinf(cfg.scenario.paths[0].rice_factor));
    CHECK(cfg.scenario.noise_psd == doctest::Approx(1e-20));
    CHECK(cfg.seed == 9);
    CHECK(cfg.output_dir == "out");
    CHECK(cfg.ba.trials == 40);
    CHECK(cfg.se.trials == 11);
    CHECK(cfg.ba.slots == std::vector<int>{20, 40, 60});
    CHECK(cfg.ba.architectures == std::vector<Architecture>{Architecture::OSPS});
    CHECK(cfg.ba.measurement.fading_samples == 3);
    CHECK(cfg.se.schemes == std::vector<SchemeSpec>{{Scheme::BST, 1}, {Scheme::BZF, 2}});
    CHECK(cfg.se.options.selection == SelectionSource::BeamAlignment);
    REQUIRE(cfg.power.profiles.size() == 1);
    CHECK(cfg.power.profiles[0].backoff_db == -10.0);
    CHECK(cfg.power.options == std::vector<int>{2});

    // The canonical dump parses back to itself.
    const std::string dumped = dump_config(cfg);
    CHECK(dump_config(parse_config_string(dumped)) == dumped);
    CHECK(fnv1a_hex(dumped) != fnv1a_hex(dump_config(RunConfig{})));

    CHECK_THROWS_AS(parse_config_string("array:\n  users: 3\n"), ConfigError);
}

TEST_CASE("FNV-1a hash")
{
    CHECK(fnv1a_hex("") == "cbf29ce484222325");
    CHECK(fnv1a_hex("a") == "af63dc4c8601ec8c");
}

TEST_CASE("commands")
{
    CHECK(command_from_string("ba-sweep") == Command::BaSweep);
    CHECK(to_string(Command::PowerSweep) == "power-sweep");
    CHECK_THROWS_AS(command_from_string("plot"), ConfigError);
    CHECK(std::string(version()).size() >= 5);
}

TEST_CASE("validate writes nothing")
{
    const fs::path dir = scratch_dir("validate");
    const RunManifest m = run(Command::Validate, RunConfig{}, dir);
    CHECK(m.outputs.empty());
    CHECK(m.config_hash.size() == 16);
    CHECK_FALSE(fs::exists(dir));
}

TEST_CASE("power sweep output")
{
    const fs::path dir = scratch_dir("power");
    const RunManifest m = run(Command::PowerSweep, RunConfig{}, dir);
    REQUIRE(m.outputs.size() == 1);
    const std::string csv = slurp(m.outputs[0]);
    // 2 options x 3 profiles x 8 points.
    CHECK(count_lines(csv) == 1 + 48);
    CHECK(csv.rfind("option,architecture,waveform,scheme,backoff_db,", 0) == 0);
    CHECK(csv.find("I,FC,SC,PA,-9.5,0,-2,") != std::string::npos);

    const auto manifest = nlohmann::json::parse(slurp(dir / "power-sweep.manifest.json"));
    CHECK(manifest["command"] == "power-sweep");
    CHECK(manifest["seed"] == 1);
    CHECK(manifest["config_hash"] == m.config_hash);
    CHECK(manifest.contains("backoff_source"));
    CHECK_FALSE(fs::exists(dir / "power_sweep.csv.tmp"));
}

TEST_CASE("sweeps are reproducible")
{
    RunConfig cfg;
    cfg.ba.slots = {20, 40};
    cfg.ba.trials = 6;
    cfg.se.trials = 8;
    cfg.se.snr_bbf_db = {0, 20};
    const fs::path a = scratch_dir("repro_a"), b = scratch_dir("repro_b");
    for (auto cmd : {Command::BaSweep, Command::SeSweep}) {
        const auto ma = run(cmd, cfg, a);
        cfg.threads = 2;
        const auto mb = run(cmd, cfg, b);
        cfg.threads = 1;
        const std::string csv_a = slurp(ma.outputs[0]);
        CHECK(csv_a == slurp(mb.outputs[0]));
        if (cmd == Command::BaSweep) {
            CHECK(count_lines(csv_a) == 1 + 2 * 2);
            CHECK(csv_a.find("FC,NNLS,20,-20,") != std::string::npos);
        } else {
            CHECK(count_lines(csv_a) == 1 + 2 * 4 * 2);
            CHECK(csv_a.find("OSPS,BZF,3,20,") != std::string::npos);
        }
    }
    cfg.seed = 2;
    const auto other = run(Command::SeSweep, cfg, b);
    CHECK(slurp(other.outputs[0]) != slurp(a / "se_sweep.csv"));
}

TEST_CASE("atomic writes replace the file")
{
    const fs::path dir = scratch_dir("atomic");
    fs::create_directories(dir);
    write_atomically(dir / "x.csv", "one\n");
    write_atomically(dir / "x.csv", "two\n");
    CHECK(slurp(dir / "x.csv") == "two\n");
    CHECK_THROWS_AS(write_atomically(dir / "missing" / "x.csv", "z"), Error);
}

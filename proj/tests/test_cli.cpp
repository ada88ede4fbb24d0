// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

const fs::path kRoot = fs::temp_directory_path() / "hbf_cli_test";

int hbfsim(const std::string& args, const std::string& env = {})
{
    const std::string cmd = env + (env.empty() ? "" : " ") + "'" HBFSIM_PATH "' " + args +
                            " >" + (kRoot / "stdout.txt").string() + " 2>" +
                            (kRoot / "stderr.txt").string();
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write(const fs::path& p, const std::string& text)
{
    std::ofstream(p, std::ios::binary) << text;
}

std::vector<std::string> lines(const std::string& text)
{
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);)
        out.push_back(line);
    return out;
}

struct Fresh {
    Fresh()
    {
        fs::remove_all(kRoot);
        fs::create_directories(kRoot);
    }
};

} // namespace

TEST_CASE_FIXTURE(Fresh, "exit codes")
{
    CHECK(hbfsim("--version") == 0);
    CHECK(slurp(kRoot / "stdout.txt").find('.') != std::string::npos);
    CHECK(hbfsim("validate") == 0);
    CHECK(slurp(kRoot / "stdout.txt").find("configuration ok") != std::string::npos);
    CHECK(hbfsim("plot") == 1);
    CHECK(hbfsim("validate --trials 0") == 1);

    write(kRoot / "bad.yaml", "array:\n  foo: 1\n");
    CHECK(hbfsim("validate --config " + (kRoot / "bad.yaml").string()) == 1);
    CHECK(slurp(kRoot / "stderr.txt").find("unknown key 'foo'") != std::string::npos);
    CHECK(hbfsim("validate --config " + (kRoot / "missing.yaml").string()) == 1);

    write(kRoot / "blocker", "x");
    CHECK(hbfsim("power-sweep --out " + (kRoot / "blocker" / "sub").string()) == 2);
}

TEST_CASE_FIXTURE(Fresh, "output directory precedence")
{
    const fs::path env_dir = kRoot / "from_env";
    const fs::path flag_dir = kRoot / "from_flag";
    CHECK(hbfsim("power-sweep", "HBF_OUT_DIR='" + env_dir.string() + "'") == 0);
    CHECK(fs::exists(env_dir / "power_sweep.csv"));
    CHECK(fs::exists(env_dir / "power-sweep.manifest.json"));
    CHECK(hbfsim("power-sweep --out " + flag_dir.string(), "HBF_OUT_DIR='" + env_dir.string() + "'") ==
          0);
    CHECK(fs::exists(flag_dir / "power_sweep.csv"));

    const fs::path cfg_dir = kRoot / "from_config";
    write(kRoot / "out.yaml", "run:\n  output_dir: " + cfg_dir.string() + "\n");
    CHECK(hbfsim("power-sweep --config " + (kRoot / "out.yaml").string(), "HBF_OUT_DIR=") == 0);
    CHECK(fs::exists(cfg_dir / "power_sweep.csv"));
}

TEST_CASE_FIXTURE(Fresh, "sweep files")
{
    const std::string out = (kRoot / "a").string();
    REQUIRE(hbfsim("ba-sweep --trials 2 --out " + out) == 0);
    const auto ba = lines(slurp(kRoot / "a" / "ba_sweep.csv"));
    CHECK(ba.size() == 1 + 20);
    CHECK(ba[0] == "architecture,scheme,slots,snr_bbf_db,p_d,std_err,trials,unconverged,seed");

    REQUIRE(hbfsim("se-sweep --trials 2 --out " + out) == 0);
    const auto se = lines(slurp(kRoot / "a" / "se_sweep.csv"));
    CHECK(se[0] == "architecture,scheme,p,snr_bbf_db,r_sum,std_err,trials,redraws,seed");
    std::set<std::string> series;
    for (std::size_t i = 1; i < se.size(); ++i) {
        std::vector<std::string> fields;
        std::istringstream row(se[i]);
        for (std::string cell; std::getline(row, cell, ',');)
            fields.push_back(cell);
        REQUIRE(fields.size() == 9);
        series.insert(fields[0] + "/" + fields[1] + "/" + fields[2]);
    }
    CHECK(series.size() == 8);
    CHECK(se.size() == 1 + 8 * 7);

    const std::string again = (kRoot / "b").string();
    REQUIRE(hbfsim("se-sweep --trials 2 --out " + again) == 0);
    REQUIRE(hbfsim("ba-sweep --trials 2 --threads 2 --out " + again) == 0);
    CHECK(slurp(kRoot / "a" / "se_sweep.csv") == slurp(kRoot / "b" / "se_sweep.csv"));
    CHECK(slurp(kRoot / "a" / "ba_sweep.csv") == slurp(kRoot / "b" / "ba_sweep.csv"));

    REQUIRE(hbfsim("se-sweep --trials 2 --seed 5 --out " + again) == 0);
    CHECK(slurp(kRoot / "a" / "se_sweep.csv") != slurp(kRoot / "b" / "se_sweep.csv"));
}

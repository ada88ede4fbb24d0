// SPDX-License-Identifier: Apache-2.0

#include "hbf/runner.hpp"

#include <fstream>

#include <fmt/format.h>
#include <json.hpp>

#include "hbf/link_budget.hpp"

#ifndef HBF_VERSION
#define HBF_VERSION "0.0.0"
#endif

namespace hbf {

const char* version()
{
    return HBF_VERSION;
}

std::string_view to_string(Command command)
{
    switch (command) {
    case Command::BaSweep:
        return "ba-sweep";
    case Command::SeSweep:
        return "se-sweep";
    case Command::PowerSweep:
        return "power-sweep";
    case Command::Validate:
        return "validate";
    }
    return "?";
}

Command command_from_string(std::string_view name)
{
    for (auto c : {Command::BaSweep, Command::SeSweep, Command::PowerSweep, Command::Validate})
        if (to_string(c) == name)
            return c;
    throw ConfigError("unknown command '" + std::string(name) + "'");
}

std::string ba_sweep_csv(const std::vector<SweepResult>& results, double snr_bbf_db)
{
    std::string csv = "architecture,scheme,slots,snr_bbf_db,p_d,std_err,trials,unconverged,seed\n";
    for (const auto& r : results)
        for (const auto& p : r.points)
            csv += fmt::format("{},{},{},{},{},{},{},{},{}\n", to_string(r.architecture), r.scheme,
                               static_cast<int>(p.axis), snr_bbf_db, p.value, p.std_error,
                               p.trials, p.redraws, r.seed);
    return csv;
}

std::string se_sweep_csv(const std::vector<SweepResult>& results,
                         std::span<const SchemeSpec> schemes)
{
    std::string csv = "architecture,scheme,p,snr_bbf_db,r_sum,std_err,trials,redraws,seed\n";
    for (std::size_t i = 0; i < results.size(); ++i) {
        const auto& r = results[i];
        const auto& s = schemes[i % schemes.size()];
        for (const auto& p : r.points)
            csv += fmt::format("{},{},{},{},{},{},{},{},{}\n", to_string(r.architecture),
                               to_string(s.scheme), s.beams_per_user, p.axis, p.value,
                               p.std_error, p.trials, p.redraws, r.seed);
    }
    return csv;
}

std::string power_sweep_csv(const PowerSweepConfig& config, std::uint64_t seed)
{
    std::string csv = "option,architecture,waveform,scheme,backoff_db,p_rad0_dbm,p_rad_dbm,"
                      "p_max_dbm,p_cons_dbm,eta_eff,saturated,trials,std_err,seed\n";
    const BackoffProfile reference = reference_profile();
    for (int option : config.options) {
        for (const auto& profile : config.profiles) {
            for (double p0_dbm : config.reference_radiated_dbm) {
                const double p0 = dbm_to_watts(p0_dbm);
                PowerPoint pt;
                if (option == 1) {
                    pt.reference_radiated = p0;
                    pt.radiated = option1_radiated(p0, profile, reference);
                    pt.max_power = config.pa.max_power;
                    if (!pt.saturated())
                        pt = option1_evaluate(p0, profile, reference, config.pa);
                } else {
                    pt = option2_evaluate(p0, profile, reference, config.pa,
                                          config.pa.max_efficiency);
                }
                const bool sat = pt.saturated();
                csv += fmt::format("{},{},{},PA,{},{},{},{},{},{},{},0,0,{}\n",
                                   option == 1 ? "I" : "II", to_string(profile.architecture),
                                   to_string(profile.waveform), profile.backoff_db, p0_dbm,
                                   watts_to_dbm(pt.radiated), watts_to_dbm(pt.max_power),
                                   sat ? std::string() : fmt::format("{}", watts_to_dbm(pt.consumed)),
                                   sat ? std::string() : fmt::format("{}", pt.efficiency),
                                   sat ? 1 : 0, seed);
            }
        }
    }
    return csv;
}

void write_atomically(const std::filesystem::path& path, const std::string& contents)
{
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw Error("cannot write " + tmp.string());
        out << contents;
        out.flush();
        if (!out)
            throw Error("failed writing " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

std::string manifest_json(const RunManifest& m)
{
    nlohmann::ordered_json j;
    j["command"] = m.command;
    j["config_hash"] = m.config_hash;
    j["seed"] = m.seed;
    j["version"] = m.version;
    j["outputs"] = nlohmann::json::array();
    for (const auto& p : m.outputs)
        j["outputs"].push_back(p.string());
    j["duration_s"] = m.duration_s;
    if (m.command == "power-sweep")
        j["backoff_source"] =
            "PAPR bounds at the 0.9999 quantile: OSPS SC 7.5 dB, FC SC 9.5 dB, OFDM 12 dB";
    return j.dump(2) + "\n";
}

RunManifest run(Command command, const RunConfig& config, const std::filesystem::path& output_dir)
{
    const auto start = std::chrono::steady_clock::now();
    RunManifest manifest;
    manifest.command = std::string(to_string(command));
    manifest.config_hash = fnv1a_hex(dump_config(config));
    manifest.seed = config.seed;
    manifest.version = version();

    std::string csv;
    std::string name;
    switch (command) {
    case Command::Validate:
        break;
    case Command::BaSweep: {
        std::vector<SweepResult> results;
        const std::uint64_t seed = derive_seed(config.seed, {stream::ba_sweep});
        for (auto arch : config.ba.architectures) {
            Scenario sc = config.scenario;
            sc.array = sc.array.with_architecture(arch);
            sc.angles = config.ba.angles;
            sc.measurement = config.ba.measurement;
            results.push_back(ba_sweep(sc, config.ba.slots, config.ba.snr_bbf_db, config.ba.trials,
                                       seed, config.threads));
        }
        for (auto& r : results)
            r.seed = config.seed;
        csv = ba_sweep_csv(results, config.ba.snr_bbf_db);
        name = "ba_sweep.csv";
        break;
    }
    case Command::SeSweep: {
        std::vector<SweepResult> results;
        const std::uint64_t seed = derive_seed(config.seed, {stream::se_sweep});
        SeOptions options = config.se.options;
        options.threads = config.threads;
        for (auto arch : config.se.architectures) {
            Scenario sc = config.scenario;
            sc.array = sc.array.with_architecture(arch);
            sc.angles = config.se.angles;
            sc.measurement = config.ba.measurement;
            auto part = sum_spectral_efficiency(sc, config.se.schemes, config.se.snr_bbf_db,
                                                config.se.trials, seed, options);
            results.insert(results.end(), part.begin(), part.end());
        }
        for (auto& r : results)
            r.seed = config.seed;
        csv = se_sweep_csv(results, config.se.schemes);
        name = "se_sweep.csv";
        break;
    }
    case Command::PowerSweep:
        csv = power_sweep_csv(config.power, config.seed);
        name = "power_sweep.csv";
        break;
    }

    if (command != Command::Validate) {
        std::filesystem::create_directories(output_dir);
        const auto csv_path = output_dir / name;
        write_atomically(csv_path, csv);
        manifest.outputs.push_back(csv_path);
        manifest.duration_s =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        write_atomically(output_dir / (manifest.command + ".manifest.json"),
                         manifest_json(manifest));
    } else {
        manifest.duration_s =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
    return manifest;
}

} // namespace hbf

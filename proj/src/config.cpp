// SPDX-License-Identifier: Apache-2.0

#include "hbf/config.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <yaml-cpp/yaml.h>

#include "hbf/link_budget.hpp"

namespace hbf {

PowerSweepConfig::PowerSweepConfig()
{
    // 0.5 mW to 4 mW in 0.5 mW steps.
    for (int i = 1; i <= 8; ++i)
        reference_radiated_dbm.push_back(watts_to_dbm(0.5e-3 * i));
    for (auto arch : {Architecture::OSPS, Architecture::FC})
        profiles.push_back(backoff_profile(arch, Waveform::SC));
    profiles.push_back(backoff_profile(Architecture::OSPS, Waveform::OFDM));
}

namespace {

class Reader {
public:
    explicit Reader(std::string source) : source_(std::move(source)) {}

    [[noreturn]] void fail(const YAML::Node& node, const std::string& message) const
    {
        const auto mark = node.Mark();
        if (mark.line >= 0)
            throw ConfigError(fmt::format("{}:{}: {}", source_, mark.line + 1, message));
        throw ConfigError(fmt::format("{}: {}", source_, message));
    }

    // Rejects keys outside `allowed`; a null node is an empty map.
    void expect_map(const YAML::Node& node, const std::string& where,
                    std::initializer_list<const char*> allowed) const
    {
        if (!node || node.IsNull())
            return;
        if (!node.IsMap())
            fail(node, fmt::format("'{}' must be a mapping", where));
        const std::set<std::string> keys(allowed.begin(), allowed.end());
        for (const auto& kv : node) {
            const auto key = kv.first.as<std::string>();
            if (!keys.contains(key))
                fail(kv.first, fmt::format("unknown key '{}' in '{}'", key, where));
        }
    }

    template <typename T>
    T scalar(const YAML::Node& node, const std::string& where) const
    {
        if (!node.IsScalar())
            fail(node, fmt::format("'{}' must be a scalar", where));
        try {
            return node.as<T>();
        } catch (const YAML::Exception&) {
            fail(node, fmt::format("'{}' has an invalid value '{}'", where, node.Scalar()));
        }
    }

    template <typename T>
    void get(const YAML::Node& map, const char* key, const std::string& where, T& out) const
    {
        if (!map || map.IsNull())
            return;
        const YAML::Node node = map[key];
        if (node)
            out = scalar<T>(node, where + "." + key);
    }

    std::vector<double> grid(const YAML::Node& node, const std::string& where) const
    {
        std::vector<double> values;
        if (node.IsSequence()) {
            for (const auto& v : node)
                values.push_back(scalar<double>(v, where));
        } else if (node.IsMap()) {
            expect_map(node, where, {"start", "stop", "step"});
            if (!node["start"] || !node["stop"] || !node["step"])
                fail(node, fmt::format("'{}' needs start, stop and step", where));
            const double start = scalar<double>(node["start"], where + ".start");
            const double stop = scalar<double>(node["stop"], where + ".stop");
            const double step = scalar<double>(node["step"], where + ".step");
            if (!(step > 0.0) || stop < start)
                fail(node, fmt::format("'{}' needs step > 0 and stop >= start", where));
            const auto count = static_cast<int>(std::floor((stop - start) / step + 1e-9)) + 1;
            for (int i = 0; i < count; ++i)
                values.push_back(start + i * step);
        } else if (node.IsScalar()) {
            values.push_back(scalar<double>(node, where));
        } else {
            fail(node, fmt::format("'{}' must be a list or {{start, stop, step}}", where));
        }
        if (values.empty())
            fail(node, fmt::format("'{}' is empty", where));
        return values;
    }

    std::vector<Architecture> architectures(const YAML::Node& node, const std::string& where) const
    {
        std::vector<Architecture> out;
        if (!node.IsSequence() || node.size() == 0)
            fail(node, fmt::format("'{}' must be a non-empty list", where));
        for (const auto& v : node) {
            try {
                out.push_back(architecture_from_string(scalar<std::string>(v, where)));
            } catch (const ConfigError& e) {
                fail(v, e.what());
            }
        }
        return out;
    }

    template <typename F>
    auto convert(const YAML::Node& node, const std::string& where, F&& f) const
    {
        const auto text = scalar<std::string>(node, where);
        try {
            return f(text);
        } catch (const ConfigError& e) {
            fail(node, e.what());
        }
    }

private:
    std::string source_;
};

void parse_array(const Reader& r, const YAML::Node& node, Scenario& sc)
{
    r.expect_map(node, "array",
                 {"bs_antennas", "bs_rf_chains", "ue_antennas", "ue_rf_chains", "architecture",
                  "users"});
    int m = sc.array.bs_antennas(), m_rf = sc.array.bs_rf_chains();
    int n = sc.array.ue_antennas(), n_rf = sc.array.ue_rf_chains();
    Architecture arch = sc.array.architecture();
    r.get(node, "bs_antennas", "array", m);
    r.get(node, "bs_rf_chains", "array", m_rf);
    r.get(node, "ue_antennas", "array", n);
    r.get(node, "ue_rf_chains", "array", n_rf);
    if (node && node["architecture"])
        arch = r.convert(node["architecture"], "array.architecture",
                         [](const std::string& s) { return architecture_from_string(s); });
    try {
        sc.array = ArrayConfig(m, m_rf, n, n_rf, arch);
    } catch (const ConfigError& e) {
        r.fail(node, e.what());
    }
    if (node && node["users"]) {
        const int users = r.scalar<int>(node["users"], "array.users");
        if (users != m_rf)
            r.fail(node["users"],
                   fmt::format("array.users must equal bs_rf_chains ({}), got {}", m_rf, users));
    }
}

void parse_paths(const Reader& r, const YAML::Node& node, Scenario& sc)
{
    if (!node || node.IsNull())
        return;
    if (!node.IsSequence() || node.size() == 0)
        r.fail(node, "'paths' must be a non-empty list");
    sc.paths.clear();
    for (const auto& p : node) {
        r.expect_map(p, "paths[]", {"strength", "rice_factor"});
        if (!p["strength"])
            r.fail(p, "every path needs a strength");
        PathProfile profile;
        profile.strength = r.scalar<double>(p["strength"], "paths[].strength");
        profile.rice_factor = 0.0;
        r.get(p, "rice_factor", "paths[]", profile.rice_factor);
        if (!(profile.strength >= 0.0) || !std::isfinite(profile.strength))
            r.fail(p, "path strength must be a finite non-negative number");
        if (!(profile.rice_factor >= 0.0))
            r.fail(p, "rice_factor must be non-negative");
        sc.paths.push_back(profile);
    }
}

void parse_link(const Reader& r, const YAML::Node& node, Scenario& sc)
{
    r.expect_map(node, "link",
                 {"carrier_hz", "bandwidth_hz", "noise_psd_dbm_hz", "max_delay_s", "doppler_hz",
                  "min_separation"});
    double psd_dbm = linear_to_db(sc.noise_psd) + 30.0;
    r.get(node, "carrier_hz", "link", sc.carrier_hz);
    r.get(node, "bandwidth_hz", "link", sc.bandwidth_hz);
    r.get(node, "noise_psd_dbm_hz", "link", psd_dbm);
    r.get(node, "max_delay_s", "link", sc.max_delay_s);
    r.get(node, "doppler_hz", "link", sc.doppler_hz);
    r.get(node, "min_separation", "link", sc.min_separation);
    if (node && node["noise_psd_dbm_hz"])
        sc.noise_psd = db_to_linear(psd_dbm - 30.0);
    if (!(sc.carrier_hz > 0.0) || !(sc.bandwidth_hz > 0.0))
        r.fail(node, "carrier_hz and bandwidth_hz must be positive");
    if (!(sc.max_delay_s >= 0.0) || sc.min_separation < 0)
        r.fail(node, "max_delay_s and min_separation must be non-negative");
}

SchemeSpec parse_scheme(const Reader& r, const YAML::Node& node)
{
    const auto scheme_from = [](const std::string& s) {
        if (s == "BST")
            return Scheme::BST;
        if (s == "BZF")
            return Scheme::BZF;
        throw ConfigError("unknown scheme '" + s + "' (expected BST or BZF)");
    };
    SchemeSpec spec;
    if (node.IsScalar()) {
        spec.scheme = r.convert(node, "se_sweep.schemes[]", scheme_from);
    } else {
        r.expect_map(node, "se_sweep.schemes[]", {"scheme", "p"});
        if (!node["scheme"])
            r.fail(node, "scheme entry needs 'scheme'");
        spec.scheme = r.convert(node["scheme"], "se_sweep.schemes[].scheme", scheme_from);
        r.get(node, "p", "se_sweep.schemes[]", spec.beams_per_user);
    }
    if (spec.beams_per_user < 1 || (spec.scheme == Scheme::BST && spec.beams_per_user != 1))
        r.fail(node, "BST needs p = 1 and BZF needs p >= 1");
    return spec;
}

void parse_ba(const Reader& r, const YAML::Node& node, BaSweepConfig& ba)
{
    r.expect_map(node, "ba_sweep",
                 {"architectures", "slots", "snr_bbf_db", "trials", "angles", "delay_resolved",
                  "fading_samples"});
    if (!node || node.IsNull())
        return;
    if (node["architectures"])
        ba.architectures = r.architectures(node["architectures"], "ba_sweep.architectures");
    if (node["slots"]) {
        ba.slots.clear();
        for (double v : r.grid(node["slots"], "ba_sweep.slots")) {
            if (v < 1.0 || v != std::floor(v))
                r.fail(node["slots"], "ba_sweep.slots must be positive integers");
            ba.slots.push_back(static_cast<int>(v));
        }
    }
    r.get(node, "snr_bbf_db", "ba_sweep", ba.snr_bbf_db);
    r.get(node, "trials", "ba_sweep", ba.trials);
    if (node["angles"])
        ba.angles = r.convert(node["angles"], "ba_sweep.angles",
                              [](const std::string& s) { return angle_mode_from_string(s); });
    r.get(node, "delay_resolved", "ba_sweep", ba.measurement.delay_resolved);
    r.get(node, "fading_samples", "ba_sweep", ba.measurement.fading_samples);
    if (ba.trials < 1 || ba.measurement.fading_samples < 1)
        r.fail(node, "ba_sweep.trials and ba_sweep.fading_samples must be at least 1");
}

void parse_se(const Reader& r, const YAML::Node& node, SeSweepConfig& se)
{
    r.expect_map(node, "se_sweep",
                 {"architectures", "schemes", "snr_bbf_db", "trials", "angles", "selection",
                  "ba_slots", "pilot_noise_scale", "max_redraws"});
    if (!node || node.IsNull())
        return;
    if (node["architectures"])
        se.architectures = r.architectures(node["architectures"], "se_sweep.architectures");
    if (node["schemes"]) {
        if (!node["schemes"].IsSequence() || node["schemes"].size() == 0)
            r.fail(node["schemes"], "se_sweep.schemes must be a non-empty list");
        se.schemes.clear();
        for (const auto& s : node["schemes"])
            se.schemes.push_back(parse_scheme(r, s));
    }
    if (node["snr_bbf_db"])
        se.snr_bbf_db = r.grid(node["snr_bbf_db"], "se_sweep.snr_bbf_db");
    r.get(node, "trials", "se_sweep", se.trials);
    if (node["angles"])
        se.angles = r.convert(node["angles"], "se_sweep.angles",
                              [](const std::string& s) { return angle_mode_from_string(s); });
    if (node["selection"])
        se.options.selection =
            r.convert(node["selection"], "se_sweep.selection",
                      [](const std::string& s) { return selection_source_from_string(s); });
    r.get(node, "ba_slots", "se_sweep", se.options.ba_slots);
    r.get(node, "pilot_noise_scale", "se_sweep", se.options.pilot_noise_scale);
    r.get(node, "max_redraws", "se_sweep", se.options.max_redraws);
    if (se.trials < 1 || se.options.ba_slots < 1 || se.options.max_redraws < 0 ||
        !(se.options.pilot_noise_scale >= 0.0))
        r.fail(node, "se_sweep: trials and ba_slots must be positive, max_redraws and "
                     "pilot_noise_scale non-negative");
}

void parse_power(const Reader& r, const YAML::Node& node, PowerSweepConfig& pw)
{
    r.expect_map(node, "power_sweep",
                 {"reference_radiated_dbm", "max_power_dbm", "max_efficiency", "profiles",
                  "options"});
    if (!node || node.IsNull())
        return;
    if (node["reference_radiated_dbm"])
        pw.reference_radiated_dbm =
            r.grid(node["reference_radiated_dbm"], "power_sweep.reference_radiated_dbm");
    double max_dbm = watts_to_dbm(pw.pa.max_power);
    r.get(node, "max_power_dbm", "power_sweep", max_dbm);
    pw.pa.max_power = dbm_to_watts(max_dbm);
    r.get(node, "max_efficiency", "power_sweep", pw.pa.max_efficiency);
    if (!(pw.pa.max_efficiency > 0.0 && pw.pa.max_efficiency <= 1.0))
        r.fail(node, "power_sweep.max_efficiency must lie in (0, 1]");
    if (node["profiles"]) {
        const YAML::Node list = node["profiles"];
        if (!list.IsSequence() || list.size() == 0)
            r.fail(list, "power_sweep.profiles must be a non-empty list");
        pw.profiles.clear();
        for (const auto& p : list) {
            r.expect_map(p, "power_sweep.profiles[]", {"architecture", "waveform", "backoff_db"});
            if (!p["architecture"] || !p["waveform"])
                r.fail(p, "a power profile needs architecture and waveform");
            const auto arch = r.convert(p["architecture"], "architecture", [](const std::string& s) {
                return architecture_from_string(s);
            });
            const auto wave = r.convert(p["waveform"], "waveform",
                                        [](const std::string& s) { return waveform_from_string(s); });
            BackoffProfile profile = backoff_profile(arch, wave);
            r.get(p, "backoff_db", "power_sweep.profiles[]", profile.backoff_db);
            if (!(profile.backoff_db <= 0.0))
                r.fail(p, "backoff_db must be <= 0");
            pw.profiles.push_back(profile);
        }
    }
    if (node["options"]) {
        const YAML::Node list = node["options"];
        if (!list.IsSequence() || list.size() == 0)
            r.fail(list, "power_sweep.options must be a non-empty list");
        pw.options.clear();
        for (const auto& o : list) {
            const int option = r.scalar<int>(o, "power_sweep.options[]");
            if (option != 1 && option != 2)
                r.fail(o, "power_sweep.options entries must be 1 or 2");
            pw.options.push_back(option);
        }
    }
}

void parse_run(const Reader& r, const YAML::Node& node, RunConfig& cfg)
{
    r.expect_map(node, "run", {"seed", "trials", "threads", "output_dir"});
    if (!node || node.IsNull())
        return;
    r.get(node, "seed", "run", cfg.seed);
    r.get(node, "threads", "run", cfg.threads);
    r.get(node, "output_dir", "run", cfg.output_dir);
    if (node["trials"]) {
        const int trials = r.scalar<int>(node["trials"], "run.trials");
        if (trials < 1)
            r.fail(node["trials"], "run.trials must be at least 1");
        cfg.ba.trials = trials;
        cfg.se.trials = trials;
    }
    if (cfg.threads < 0)
        r.fail(node, "run.threads must be non-negative");
}

} // namespace

RunConfig parse_config_string(const std::string& text, const std::string& source)
{
    YAML::Node root;
    try {
        root = YAML::Load(text);
    } catch (const YAML::ParserException& e) {
        throw ConfigError(fmt::format("{}:{}: {}", source, e.mark.line + 1, e.msg));
    }
    const Reader r(source);
    RunConfig cfg;
    if (!root || root.IsNull())
        return cfg;
    r.expect_map(root, "<top level>",
                 {"array", "paths", "link", "run", "ba_sweep", "se_sweep", "power_sweep"});
    parse_array(r, root["array"], cfg.scenario);
    parse_paths(r, root["paths"], cfg.scenario);
    parse_link(r, root["link"], cfg.scenario);
    // Sweep sections after run so their own trial counts win.
    parse_run(r, root["run"], cfg);
    parse_ba(r, root["ba_sweep"], cfg.ba);
    parse_se(r, root["se_sweep"], cfg.se);
    parse_power(r, root["power_sweep"], cfg.power);
    if (cfg.scenario.total_strength() <= 0.0)
        throw ConfigError(source + ": the path strengths must not all be zero");
    for (auto arch : cfg.ba.architectures)
        (void)cfg.scenario.array.with_architecture(arch);
    for (auto arch : cfg.se.architectures)
        (void)cfg.scenario.array.with_architecture(arch);
    return cfg;
}

RunConfig parse_config_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ConfigError("cannot open config file " + path.string());
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config_string(text.str(), path.string());
}

std::string dump_config(const RunConfig& cfg)
{
    const Scenario& sc = cfg.scenario;
    YAML::Emitter out;
    out.SetDoublePrecision(17);
    out << YAML::BeginMap;
    out << YAML::Key << "array" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "bs_antennas" << YAML::Value << sc.array.bs_antennas();
    out << YAML::Key << "bs_rf_chains" << YAML::Value << sc.array.bs_rf_chains();
    out << YAML::Key << "ue_antennas" << YAML::Value << sc.array.ue_antennas();
    out << YAML::Key << "ue_rf_chains" << YAML::Value << sc.array.ue_rf_chains();
    out << YAML::Key << "architecture" << YAML::Value
        << std::string(to_string(sc.array.architecture()));
    out << YAML::EndMap;

    out << YAML::Key << "paths" << YAML::Value << YAML::BeginSeq;
    for (const auto& p : sc.paths)
        out << YAML::Flow << YAML::BeginMap << YAML::Key << "strength" << YAML::Value << p.strength
            << YAML::Key << "rice_factor" << YAML::Value << p.rice_factor << YAML::EndMap;
    out << YAML::EndSeq;

    out << YAML::Key << "link" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "carrier_hz" << YAML::Value << sc.carrier_hz;
    out << YAML::Key << "bandwidth_hz" << YAML::Value << sc.bandwidth_hz;
    out << YAML::Key << "noise_psd_dbm_hz" << YAML::Value << linear_to_db(sc.noise_psd) + 30.0;
    out << YAML::Key << "max_delay_s" << YAML::Value << sc.max_delay_s;
    out << YAML::Key << "doppler_hz" << YAML::Value << sc.doppler_hz;
    out << YAML::Key << "min_separation" << YAML::Value << sc.separation_steps();
    out << YAML::EndMap;

    out << YAML::Key << "run" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "seed" << YAML::Value << cfg.seed;
    out << YAML::EndMap;

    const auto archs = [&](const std::vector<Architecture>& list) {
        out << YAML::Flow << YAML::BeginSeq;
        for (auto a : list)
            out << std::string(to_string(a));
        out << YAML::EndSeq;
    };

    out << YAML::Key << "ba_sweep" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "architectures" << YAML::Value;
    archs(cfg.ba.architectures);
    out << YAML::Key << "slots" << YAML::Value << YAML::Flow << cfg.ba.slots;
    out << YAML::Key << "snr_bbf_db" << YAML::Value << cfg.ba.snr_bbf_db;
    out << YAML::Key << "trials" << YAML::Value << cfg.ba.trials;
    out << YAML::Key << "angles" << YAML::Value << std::string(to_string(cfg.ba.angles));
    out << YAML::Key << "delay_resolved" << YAML::Value << cfg.ba.measurement.delay_resolved;
    out << YAML::Key << "fading_samples" << YAML::Value << cfg.ba.measurement.fading_samples;
    out << YAML::EndMap;

    out << YAML::Key << "se_sweep" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "architectures" << YAML::Value;
    archs(cfg.se.architectures);
    out << YAML::Key << "schemes" << YAML::Value << YAML::BeginSeq;
    for (const auto& s : cfg.se.schemes)
        out << YAML::Flow << YAML::BeginMap << YAML::Key << "scheme" << YAML::Value
            << std::string(to_string(s.scheme)) << YAML::Key << "p" << YAML::Value
            << s.beams_per_user << YAML::EndMap;
    out << YAML::EndSeq;
    out << YAML::Key << "snr_bbf_db" << YAML::Value << YAML::Flow << cfg.se.snr_bbf_db;
    out << YAML::Key << "trials" << YAML::Value << cfg.se.trials;
    out << YAML::Key << "angles" << YAML::Value << std::string(to_string(cfg.se.angles));
    out << YAML::Key << "selection" << YAML::Value
        << std::string(to_string(cfg.se.options.selection));
    out << YAML::Key << "ba_slots" << YAML::Value << cfg.se.options.ba_slots;
    out << YAML::Key << "pilot_noise_scale" << YAML::Value << cfg.se.options.pilot_noise_scale;
    out << YAML::Key << "max_redraws" << YAML::Value << cfg.se.options.max_redraws;
    out << YAML::EndMap;

    out << YAML::Key << "power_sweep" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "reference_radiated_dbm" << YAML::Value << YAML::Flow
        << cfg.power.reference_radiated_dbm;
    out << YAML::Key << "max_power_dbm" << YAML::Value << watts_to_dbm(cfg.power.pa.max_power);
    out << YAML::Key << "max_efficiency" << YAML::Value << cfg.power.pa.max_efficiency;
    out << YAML::Key << "profiles" << YAML::Value << YAML::BeginSeq;
    for (const auto& p : cfg.power.profiles)
        out << YAML::Flow << YAML::BeginMap << YAML::Key << "architecture" << YAML::Value
            << std::string(to_string(p.architecture)) << YAML::Key << "waveform" << YAML::Value
            << std::string(to_string(p.waveform)) << YAML::Key << "backoff_db" << YAML::Value
            << p.backoff_db << YAML::EndMap;
    out << YAML::EndSeq;
    out << YAML::Key << "options" << YAML::Value << YAML::Flow << cfg.power.options;
    out << YAML::EndMap;

    out << YAML::EndMap;
    return std::string(out.c_str()) + "\n";
}

std::string fnv1a_hex(const std::string& bytes)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return fmt::format("{:016x}", h);
}

} // namespace hbf

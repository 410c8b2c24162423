// SPDX-License-Identifier: Apache-2.0
#include "mmhet/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace mmhet {

namespace {

std::string trim(const std::string &s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::string fmt(double x) {
    char buf[64];
    auto r = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, r.ptr);
}

// "tier2" -> "tier.2"; other names unchanged.
std::string normalize_section(std::string s) {
    if (s.rfind("tier", 0) == 0 && s.size() > 4 && std::isdigit(static_cast<unsigned char>(s[4])))
        s.insert(4, ".");
    return s;
}

bool parse_number(const std::string &s, double &out) {
    if (s.empty()) return false;
    const char *b = s.data(), *e = s.data() + s.size();
    if (*b == '+') ++b;
    auto r = std::from_chars(b, e, out);
    return r.ec == std::errc() && r.ptr == e;
}

ConfigValue parse_scalar(const std::string &raw, int line) {
    std::string s = trim(raw);
    if (s.size() >= 2 && (s.front() == '"' || s.front() == '\'') && s.back() == s.front())
        return {s.substr(1, s.size() - 2)};
    if (s == "true") return {true};
    if (s == "false") return {false};
    double d;
    if (parse_number(s, d)) return {d};
    if (!s.empty() && s.find_first_of(" \t,[]=") == std::string::npos) return {s};
    throw ConfigError("line " + std::to_string(line) + ": cannot parse value '" + s + "'");
}

ConfigValue parse_value(const std::string &raw, int line) {
    std::string s = trim(raw);
    if (s.empty()) throw ConfigError("line " + std::to_string(line) + ": missing value");
    if (s.front() != '[') return parse_scalar(s, line);
    if (s.back() != ']') throw ConfigError("line " + std::to_string(line) + ": unterminated list");
    std::vector<ConfigValue> items;
    std::string body = s.substr(1, s.size() - 2);
    std::stringstream ss(body);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (trim(item).empty()) continue;
        items.push_back(parse_scalar(item, line));
    }
    return {items};
}

std::string strip_comment(const std::string &line) {
    char quote = 0;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (quote) {
            if (c == quote) quote = 0;
        } else if (c == '"' || c == '\'') {
            quote = c;
        } else if (c == '#' || c == ';') {
            return line.substr(0, i);
        }
    }
    return line;
}

}  // namespace

double ConfigValue::number(const std::string &key) const {
    if (auto p = std::get_if<double>(&v)) return *p;
    throw ConfigError(key + " must be a number");
}

const std::string &ConfigValue::string(const std::string &key) const {
    if (auto p = std::get_if<std::string>(&v)) return *p;
    throw ConfigError(key + " must be a string");
}

bool ConfigValue::boolean(const std::string &key) const {
    if (auto p = std::get_if<bool>(&v)) return *p;
    throw ConfigError(key + " must be true or false");
}

std::vector<double> ConfigValue::numbers(const std::string &key) const {
    if (auto p = std::get_if<double>(&v)) return {*p};
    auto l = std::get_if<std::vector<ConfigValue>>(&v);
    if (!l) throw ConfigError(key + " must be a list of numbers");
    std::vector<double> out;
    for (const auto &x : *l) out.push_back(x.number(key));
    return out;
}

std::vector<std::string> ConfigValue::strings(const std::string &key) const {
    if (auto p = std::get_if<std::string>(&v)) return {*p};
    auto l = std::get_if<std::vector<ConfigValue>>(&v);
    if (!l) throw ConfigError(key + " must be a list of strings");
    std::vector<std::string> out;
    for (const auto &x : *l) out.push_back(x.string(key));
    return out;
}

std::string ConfigValue::render() const {
    if (auto p = std::get_if<double>(&v)) return fmt(*p);
    if (auto p = std::get_if<std::string>(&v)) return "\"" + *p + "\"";
    if (auto p = std::get_if<bool>(&v)) return *p ? "true" : "false";
    const auto &l = std::get<std::vector<ConfigValue>>(v);
    std::string s = "[";
    for (std::size_t i = 0; i < l.size(); ++i) s += (i ? ", " : "") + l[i].render();
    return s + "]";
}

const ConfigSection *ConfigDocument::find(const std::string &name) const {
    for (const auto &[n, sec] : sections)
        if (n == name) return &sec;
    return nullptr;
}

ConfigSection &ConfigDocument::section(const std::string &name) {
    for (auto &[n, sec] : sections)
        if (n == name) return sec;
    sections.emplace_back(name, ConfigSection{});
    return sections.back().second;
}

ConfigDocument parse_config(const std::string &text) {
    ConfigDocument doc;
    std::istringstream in(text);
    std::string raw;
    std::string current;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        std::string s = trim(strip_comment(raw));
        if (s.empty()) continue;
        if (s.front() == '[') {
            if (s.back() != ']') throw ConfigError("line " + std::to_string(line) + ": bad section header");
            current = normalize_section(trim(s.substr(1, s.size() - 2)));
            if (current.empty()) throw ConfigError("line " + std::to_string(line) + ": empty section name");
            doc.section(current);
            continue;
        }
        auto eq = s.find('=');
        if (eq == std::string::npos) throw ConfigError("line " + std::to_string(line) + ": expected key = value");
        if (current.empty()) throw ConfigError("line " + std::to_string(line) + ": key outside any section");
        std::string key = trim(s.substr(0, eq));
        if (key.empty()) throw ConfigError("line " + std::to_string(line) + ": empty key");
        doc.section(current)[key] = parse_value(s.substr(eq + 1), line);
    }
    return doc;
}

ConfigDocument load_config(const std::string &path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot read config file '" + path + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_config(ss.str());
}

namespace {

const std::map<std::string, std::set<std::string>> kKeys = {
    {"scenario", {"preset", "antennas", "mmwave_nlos_blocked", "window_radius_m", "uhf_fading",
                  "roa_reference_power_w"}},
    {"blockage", {"intensity_per_m2", "eta_m"}},
    {"bands", {"uhf_bandwidth_hz", "uhf_intercept", "uhf_carrier_hz", "mmwave_bandwidth_hz", "mmwave_intercept",
               "mmwave_carrier_hz", "mmwave_noise_power_w", "mmwave_noise_figure_db"}},
    {"pathloss", {"uhf_alpha_los", "uhf_alpha_nlos", "mmwave_alpha_los", "mmwave_alpha_nlos"}},
    {"unified_uhf", {"alpha_mu", "rho_mu", "rho_mu_db", "d_los_m"}},
    {"policy", {"gua_biases", "gua_exponents"}},
    {"sweep", {"key", "values", "metrics", "engines", "policies", "theta", "probes"}},
    {"mc", {"trials", "seed", "threads"}},
    {"quad", {"rel_tol", "abs_tol", "max_evals", "hermite_nodes", "rate_grid_points", "derivative_rel_step",
              "level_rule_split", "table_step"}},
    {"validate", {"coverage_tol", "coverage_mean_tol", "rate_rel_tol", "assoc_tol", "cdf_tol", "use_unified"}},
};
const std::set<std::string> kTierKeys = {"band", "intensity_per_m2", "intensity_ratio_to_blockage", "power_w",
                                         "tx_antennas", "assoc_bias", "los_shadow_rho", "los_shadow_db",
                                         "nlos_shadow_rho", "nlos_shadow_db"};

// Index of a "tier.N" section (1-based), or 0.
std::size_t tier_number(const std::string &name) {
    if (name.rfind("tier.", 0) != 0) return 0;
    std::size_t n = 0;
    auto r = std::from_chars(name.data() + 5, name.data() + name.size(), n);
    if (r.ec != std::errc() || r.ptr != name.data() + name.size() || n == 0)
        throw ConfigError("bad tier section name '" + name + "'");
    return n;
}

void check_keys(const ConfigDocument &doc) {
    for (const auto &[name, sec] : doc.sections) {
        const std::set<std::string> *allowed = nullptr;
        if (tier_number(name)) {
            allowed = &kTierKeys;
        } else {
            auto it = kKeys.find(name);
            if (it == kKeys.end()) throw ConfigError("unknown section [" + name + "]");
            allowed = &it->second;
        }
        for (const auto &[k, v] : sec)
            if (!allowed->count(k)) throw ConfigError("unknown key '" + k + "' in [" + name + "]");
    }
}

const ConfigValue *get(const ConfigDocument &doc, const std::string &sec, const std::string &key) {
    const ConfigSection *s = doc.find(sec);
    if (!s) return nullptr;
    auto it = s->find(key);
    return it == s->end() ? nullptr : &it->second;
}

template <class F> void with(const ConfigDocument &doc, const std::string &sec, const std::string &key, F &&f) {
    if (const ConfigValue *v = get(doc, sec, key)) f(*v, sec + "." + key);
}

Band parse_band(const std::string &s) {
    if (s == "uhf") return Band::Uhf;
    if (s == "mmwave") return Band::MmWave;
    throw ConfigError("band must be \"uhf\" or \"mmwave\", got '" + s + "'");
}

int as_int(double x, const std::string &key) {
    if (x != std::floor(x) || std::abs(x) > 1e9) throw ConfigError(key + " must be an integer");
    return static_cast<int>(x);
}

}  // namespace

Scenario build_scenario(const ConfigDocument &doc) {
    check_keys(doc);
    std::string preset = "none";
    with(doc, "scenario", "preset", [&](const ConfigValue &v, const std::string &k) { preset = v.string(k); });
    Antennas ant = Antennas::Miso;
    with(doc, "scenario", "antennas", [&](const ConfigValue &v, const std::string &k) {
        const auto &a = v.string(k);
        if (a == "siso") ant = Antennas::Siso;
        else if (a == "miso") ant = Antennas::Miso;
        else throw ConfigError(k + " must be \"siso\" or \"miso\"");
    });

    Scenario s;
    if (preset == "table2") {
        s = table2_scenario(ant, 1.0);
    } else if (preset == "classic") {
        s = classic_scenario();
    } else if (preset == "none") {
        s.uhf_band = {Band::Uhf, 1e8, free_space_intercept(kUhfCarrierHz), 0.0};
        s.mmwave_band = {Band::MmWave, 1e9, free_space_intercept(kMmWaveCarrierHz),
                         default_noise_power(1e9, kDefaultNoiseFigureDb)};
    } else {
        throw ConfigError("scenario.preset must be \"table2\", \"classic\" or \"none\"");
    }
    s.roa_reference_power_w.reset();

    with(doc, "scenario", "mmwave_nlos_blocked",
         [&](const ConfigValue &v, const std::string &k) { s.mmwave_nlos_blocked = v.boolean(k); });
    with(doc, "scenario", "window_radius_m",
         [&](const ConfigValue &v, const std::string &k) { s.window_radius_m = v.number(k); });
    with(doc, "scenario", "uhf_fading", [&](const ConfigValue &v, const std::string &k) {
        const auto &f = v.string(k);
        if (f == "chi2_2t") s.uhf_fading = FadingConvention::Chi2TwoT;
        else if (f == "gamma_t") s.uhf_fading = FadingConvention::GammaT;
        else throw ConfigError(k + " must be \"chi2_2t\" or \"gamma_t\"");
    });
    with(doc, "scenario", "roa_reference_power_w",
         [&](const ConfigValue &v, const std::string &k) { s.roa_reference_power_w = v.number(k); });

    with(doc, "blockage", "intensity_per_m2",
         [&](const ConfigValue &v, const std::string &k) { s.blockage.intensity_per_m2 = v.number(k); });
    with(doc, "blockage", "eta_m", [&](const ConfigValue &v, const std::string &k) { s.blockage.eta_m = v.number(k); });

    bool noise_given = false, noise_recompute = false;
    double noise_figure = kDefaultNoiseFigureDb;
    with(doc, "bands", "uhf_carrier_hz", [&](const ConfigValue &v, const std::string &k) {
        s.uhf_band.intercept = free_space_intercept(v.number(k));
    });
    with(doc, "bands", "mmwave_carrier_hz", [&](const ConfigValue &v, const std::string &k) {
        s.mmwave_band.intercept = free_space_intercept(v.number(k));
    });
    with(doc, "bands", "uhf_bandwidth_hz",
         [&](const ConfigValue &v, const std::string &k) { s.uhf_band.bandwidth_hz = v.number(k); });
    with(doc, "bands", "uhf_intercept",
         [&](const ConfigValue &v, const std::string &k) { s.uhf_band.intercept = v.number(k); });
    with(doc, "bands", "mmwave_bandwidth_hz", [&](const ConfigValue &v, const std::string &k) {
        s.mmwave_band.bandwidth_hz = v.number(k);
        noise_recompute = s.mmwave_band.noise_power_w > 0.0;
    });
    with(doc, "bands", "mmwave_intercept",
         [&](const ConfigValue &v, const std::string &k) { s.mmwave_band.intercept = v.number(k); });
    with(doc, "bands", "mmwave_noise_figure_db", [&](const ConfigValue &v, const std::string &k) {
        noise_figure = v.number(k);
        noise_recompute = true;
    });
    with(doc, "bands", "mmwave_noise_power_w", [&](const ConfigValue &v, const std::string &k) {
        s.mmwave_band.noise_power_w = v.number(k);
        noise_given = true;
    });
    if (noise_recompute && !noise_given) {
        if (!(s.mmwave_band.bandwidth_hz > 0.0)) throw ConfigError("bands.mmwave_bandwidth_hz must be positive");
        s.mmwave_band.noise_power_w = default_noise_power(s.mmwave_band.bandwidth_hz, noise_figure);
    }

    with(doc, "pathloss", "uhf_alpha_los",
         [&](const ConfigValue &v, const std::string &k) { s.uhf_pathloss.alpha_los = v.number(k); });
    with(doc, "pathloss", "uhf_alpha_nlos",
         [&](const ConfigValue &v, const std::string &k) { s.uhf_pathloss.alpha_nlos = v.number(k); });
    with(doc, "pathloss", "mmwave_alpha_los",
         [&](const ConfigValue &v, const std::string &k) { s.mmwave_pathloss.alpha_los = v.number(k); });
    with(doc, "pathloss", "mmwave_alpha_nlos",
         [&](const ConfigValue &v, const std::string &k) { s.mmwave_pathloss.alpha_nlos = v.number(k); });

    if (doc.find("unified_uhf")) {
        UnifiedUhf u;
        if (s.unified_uhf) u = *s.unified_uhf;
        u.alpha_mu = s.uhf_pathloss.alpha_los;
        with(doc, "unified_uhf", "alpha_mu", [&](const ConfigValue &v, const std::string &k) { u.alpha_mu = v.number(k); });
        with(doc, "unified_uhf", "rho_mu", [&](const ConfigValue &v, const std::string &k) { u.rho_mu = v.number(k); });
        with(doc, "unified_uhf", "rho_mu_db",
             [&](const ConfigValue &v, const std::string &k) { u.rho_mu = shadow_rho_from_db(v.number(k)); });
        with(doc, "unified_uhf", "d_los_m", [&](const ConfigValue &v, const std::string &k) { u.d_los_m = v.number(k); });
        s.unified_uhf = u;
    }

    // Tier sections in numeric order; N beyond the preset's tiers appends.
    std::vector<std::pair<std::size_t, const ConfigSection *>> tiers;
    for (const auto &[name, sec] : doc.sections)
        if (std::size_t n = tier_number(name)) tiers.emplace_back(n, &sec);
    std::sort(tiers.begin(), tiers.end(), [](auto &a, auto &b) { return a.first < b.first; });
    for (const auto &[n, sec] : tiers) {
        if (n > s.tiers.size() + 1)
            throw ConfigError("tier." + std::to_string(n) + " leaves a gap in the tier numbering");
        if (n == s.tiers.size() + 1) s.tiers.emplace_back();
        TierConfig &t = s.tiers[n - 1];
        const std::string pre = "tier." + std::to_string(n) + ".";
        for (const auto &[k, v] : *sec) {
            const std::string key = pre + k;
            if (k == "band") t.band = parse_band(v.string(key));
            else if (k == "intensity_per_m2") t.intensity_per_m2 = v.number(key);
            else if (k == "intensity_ratio_to_blockage") t.intensity_per_m2 = v.number(key) * s.blockage.intensity_per_m2;
            else if (k == "power_w") t.power_w = v.number(key);
            else if (k == "tx_antennas") t.tx_antennas = as_int(v.number(key), key);
            else if (k == "assoc_bias") t.assoc_bias = v.number(key);
            else if (k == "los_shadow_rho") t.los_shadow_rho = v.number(key);
            else if (k == "los_shadow_db") t.los_shadow_rho = shadow_rho_from_db(v.number(key));
            else if (k == "nlos_shadow_rho") t.nlos_shadow_rho = v.number(key);
            else if (k == "nlos_shadow_db") t.nlos_shadow_rho = shadow_rho_from_db(v.number(key));
        }
        if (sec->count("intensity_per_m2") && sec->count("intensity_ratio_to_blockage"))
            throw ConfigError(pre + "intensity_per_m2 and intensity_ratio_to_blockage are mutually exclusive");
    }
    return validate_scenario(std::move(s));
}

void apply_override(ConfigDocument &doc, const std::string &dotted_key, const ConfigValue &value) {
    auto dot = dotted_key.rfind('.');
    if (dot == std::string::npos || dot == 0 || dot + 1 == dotted_key.size())
        throw ConfigError("override key '" + dotted_key + "' must look like section.key");
    std::string sec = normalize_section(dotted_key.substr(0, dot));
    std::string key = dotted_key.substr(dot + 1);
    ConfigSection &s = doc.section(sec);
    static const std::vector<std::set<std::string>> kAlternatives = {
        {"intensity_per_m2", "intensity_ratio_to_blockage"},
        {"los_shadow_rho", "los_shadow_db"},
        {"nlos_shadow_rho", "nlos_shadow_db"},
        {"rho_mu", "rho_mu_db"},
        {"uhf_intercept", "uhf_carrier_hz"},
        {"mmwave_intercept", "mmwave_carrier_hz"},
    };
    for (const auto &alts : kAlternatives)
        if (alts.count(key))
            for (const auto &a : alts)
                if (a != key) s.erase(a);
    s[key] = value;
}

RunConfig resolve_config(const ConfigDocument &doc) {
    check_keys(doc);
    RunConfig rc;
    rc.doc = doc;
    auto &sw = rc.sweep;
    with(doc, "sweep", "key", [&](const ConfigValue &v, const std::string &k) { sw.key = v.string(k); });
    with(doc, "sweep", "values", [&](const ConfigValue &v, const std::string &k) { sw.values = v.numbers(k); });
    with(doc, "sweep", "metrics", [&](const ConfigValue &v, const std::string &k) { sw.metrics = v.strings(k); });
    with(doc, "sweep", "engines", [&](const ConfigValue &v, const std::string &k) { sw.engines = v.strings(k); });
    with(doc, "sweep", "policies", [&](const ConfigValue &v, const std::string &k) { sw.policies = v.strings(k); });
    with(doc, "sweep", "theta", [&](const ConfigValue &v, const std::string &k) { sw.theta = v.number(k); });
    with(doc, "sweep", "probes", [&](const ConfigValue &v, const std::string &k) { sw.probes = v.numbers(k); });
    if (!sw.key.empty() && sw.values.empty()) throw ConfigError("sweep.values must be non-empty when sweep.key is set");
    for (double x : sw.values)
        if (!std::isfinite(x) || x < 0.0) throw ConfigError("sweep.values must be finite and >= 0");
    if (!(sw.theta > 0.0)) throw ConfigError("sweep.theta must be positive");
    for (const auto &m : sw.metrics)
        if (m != "coverage" && m != "rate" && m != "assoc" && m != "cdf")
            throw ConfigError("sweep.metrics entries must be coverage, rate, assoc or cdf");
    for (auto &e : sw.engines) {
        if (e == "montecarlo") e = "mc";
        if (e != "analysis" && e != "mc" && e != "unified")
            throw ConfigError("sweep.engines entries must be analysis, mc or unified");
    }
    for (const auto &p : sw.policies) policy_from_name(p);
    for (double x : sw.probes)
        if (!(x > 0.0)) throw ConfigError("sweep.probes must be positive");

    with(doc, "mc", "trials", [&](const ConfigValue &v, const std::string &k) {
        double t = v.number(k);
        if (t < 1 || t != std::floor(t)) throw ConfigError(k + " must be a positive integer");
        rc.mc.trials = static_cast<std::int64_t>(t);
    });
    with(doc, "mc", "seed", [&](const ConfigValue &v, const std::string &k) {
        double t = v.number(k);
        if (t < 0 || t != std::floor(t) || t > 9.007199254740992e15) throw ConfigError(k + " must be a non-negative integer");
        rc.mc.seed = static_cast<std::uint64_t>(t);
    });
    with(doc, "mc", "threads", [&](const ConfigValue &v, const std::string &k) {
        rc.mc.threads = as_int(v.number(k), k);
        if (rc.mc.threads < 0) throw ConfigError(k + " must be >= 0");
    });

    with(doc, "quad", "rel_tol", [&](const ConfigValue &v, const std::string &k) { rc.quad.rel_tol = v.number(k); });
    with(doc, "quad", "abs_tol", [&](const ConfigValue &v, const std::string &k) { rc.quad.abs_tol = v.number(k); });
    with(doc, "quad", "max_evals",
         [&](const ConfigValue &v, const std::string &k) { rc.quad.max_evals = static_cast<std::int64_t>(v.number(k)); });
    with(doc, "quad", "hermite_nodes",
         [&](const ConfigValue &v, const std::string &k) { rc.analysis.hermite_nodes = as_int(v.number(k), k); });
    with(doc, "quad", "rate_grid_points",
         [&](const ConfigValue &v, const std::string &k) { rc.analysis.rate_grid_points = as_int(v.number(k), k); });
    with(doc, "quad", "derivative_rel_step",
         [&](const ConfigValue &v, const std::string &k) { rc.analysis.derivative_rel_step = v.number(k); });
    with(doc, "quad", "level_rule_split",
         [&](const ConfigValue &v, const std::string &k) { rc.analysis.level_rule_split = as_int(v.number(k), k); });
    with(doc, "quad", "table_step",
         [&](const ConfigValue &v, const std::string &k) { rc.analysis.table_step = v.number(k); });
    try {
        rc.quad.validate();
    } catch (const DomainError &e) {
        throw ConfigError(std::string("quad: ") + e.what());
    }

    auto &vd = rc.validate;
    with(doc, "validate", "coverage_tol", [&](const ConfigValue &v, const std::string &k) { vd.coverage_tol = v.number(k); });
    with(doc, "validate", "coverage_mean_tol",
         [&](const ConfigValue &v, const std::string &k) { vd.coverage_mean_tol = v.number(k); });
    with(doc, "validate", "rate_rel_tol", [&](const ConfigValue &v, const std::string &k) { vd.rate_rel_tol = v.number(k); });
    with(doc, "validate", "assoc_tol", [&](const ConfigValue &v, const std::string &k) { vd.assoc_tol = v.number(k); });
    with(doc, "validate", "cdf_tol", [&](const ConfigValue &v, const std::string &k) { vd.cdf_tol = v.number(k); });
    with(doc, "validate", "use_unified", [&](const ConfigValue &v, const std::string &k) { vd.use_unified = v.boolean(k); });

    with(doc, "policy", "gua_biases", [&](const ConfigValue &v, const std::string &k) { rc.gua_biases = v.numbers(k); });
    with(doc, "policy", "gua_exponents",
         [&](const ConfigValue &v, const std::string &k) { rc.gua_exponents = v.numbers(k); });
    return rc;
}

AssociationPolicy make_policy(const std::string &name, const RunConfig &rc) {
    AssociationPolicy p = policy_from_name(name);
    if (p.kind == PolicyKind::GuaBias) {
        p.biases = rc.gua_biases;
        p.exponents = rc.gua_exponents;
    }
    return p;
}

std::string describe_scenario(const Scenario &s) {
    std::ostringstream o;
    auto band = [](Band b) { return b == Band::Uhf ? "uhf" : "mmwave"; };
    o << "# scenario: window_radius_m=" << fmt(s.window_radius_m)
      << " mmwave_nlos_blocked=" << (s.mmwave_nlos_blocked ? "true" : "false")
      << " uhf_fading=" << (s.uhf_fading == FadingConvention::GammaT ? "gamma_t" : "chi2_2t")
      << " roa_reference_power_w=" << fmt(s.roa_reference_power_w.value_or(1.0)) << "\n";
    o << "# blockage: intensity_per_m2=" << fmt(s.blockage.intensity_per_m2) << " eta_m=" << fmt(s.blockage.eta_m)
      << "\n";
    o << "# bands: uhf_bandwidth_hz=" << fmt(s.uhf_band.bandwidth_hz) << " uhf_intercept=" << fmt(s.uhf_band.intercept)
      << " mmwave_bandwidth_hz=" << fmt(s.mmwave_band.bandwidth_hz)
      << " mmwave_intercept=" << fmt(s.mmwave_band.intercept)
      << " mmwave_noise_power_w=" << fmt(s.mmwave_band.noise_power_w) << "\n";
    o << "# pathloss: uhf_alpha_los=" << fmt(s.uhf_pathloss.alpha_los) << " uhf_alpha_nlos="
      << fmt(s.uhf_pathloss.alpha_nlos) << " mmwave_alpha_los=" << fmt(s.mmwave_pathloss.alpha_los)
      << " mmwave_alpha_nlos=" << fmt(s.mmwave_pathloss.alpha_nlos) << "\n";
    if (s.unified_uhf)
        o << "# unified_uhf: alpha_mu=" << fmt(s.unified_uhf->alpha_mu) << " rho_mu=" << fmt(s.unified_uhf->rho_mu)
          << " d_los_m=" << fmt(s.unified_uhf->d_los_m) << "\n";
    for (std::size_t i = 0; i < s.tiers.size(); ++i) {
        const auto &t = s.tiers[i];
        o << "# tier." << i + 1 << ": band=" << band(t.band) << " intensity_per_m2=" << fmt(t.intensity_per_m2)
          << " power_w=" << fmt(t.power_w) << " tx_antennas=" << t.tx_antennas << " assoc_bias=" << fmt(t.assoc_bias)
          << " los_shadow_rho=" << fmt(t.los_shadow_rho) << " nlos_shadow_rho=" << fmt(t.nlos_shadow_rho) << "\n";
    }
    return o.str();
}

}  // namespace mmhet

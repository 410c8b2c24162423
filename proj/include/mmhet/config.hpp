// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "mmhet/analysis.hpp"
#include "mmhet/association.hpp"
#include "mmhet/model.hpp"
#include "mmhet/numerics.hpp"

namespace mmhet {

// Bad or unreadable configuration.
class ConfigError : public DomainError {
  public:
    using DomainError::DomainError;
};

// A parsed value: number, string, boolean or a list of scalars.
struct ConfigValue {
    std::variant<double, std::string, bool, std::vector<ConfigValue>> v;

    double number(const std::string &key) const;
    const std::string &string(const std::string &key) const;
    bool boolean(const std::string &key) const;
    std::vector<double> numbers(const std::string &key) const;
    std::vector<std::string> strings(const std::string &key) const;
    std::string render() const;
};

using ConfigSection = std::map<std::string, ConfigValue>;

// Sections in order of appearance, each a key/value map. Tier sections are
// stored as "tier.1", "tier.2", ...
struct ConfigDocument {
    std::vector<std::pair<std::string, ConfigSection>> sections;

    const ConfigSection *find(const std::string &name) const;
    ConfigSection &section(const std::string &name);  // created when missing
};

ConfigDocument parse_config(const std::string &text);
ConfigDocument load_config(const std::string &path);

struct SweepSpec {
    std::string key;                 // e.g. "tier.2.intensity_ratio_to_blockage"; empty means no sweep
    std::vector<double> values;
    std::vector<std::string> metrics{"coverage"};
    std::vector<std::string> engines{"analysis", "mc"};  // also "unified"
    std::vector<std::string> policies{"coa"};
    double theta = 1.0;
    std::vector<double> probes;      // cdf probe points (linear association gain)
};

struct McSpec {
    std::int64_t trials = 100000;
    std::uint64_t seed = 1;
    int threads = 0;
};

struct ValidateSpec {
    double coverage_tol = 0.05;   // per point, absolute
    double coverage_mean_tol = 0.03;
    double rate_rel_tol = 0.05;
    double assoc_tol = 0.01;      // plus 3 SE
    double cdf_tol = 0.01;        // plus 3 SE
    bool use_unified = false;     // analysis side uses the unified-channel path
};

struct RunConfig {
    ConfigDocument doc;
    SweepSpec sweep;
    McSpec mc;
    QuadSpec quad;
    AnalysisOptions analysis;
    ValidateSpec validate;
    std::vector<double> gua_biases, gua_exponents;  // [policy] table for gua
};

RunConfig resolve_config(const ConfigDocument &doc);

// Sets one dotted key ("section.key" or "tier.N.key"; "tierN.key" also
// accepted). Replaces alternative spellings of the same quantity.
void apply_override(ConfigDocument &doc, const std::string &dotted_key, const ConfigValue &value);

// Scenario described by the document, validated.
Scenario build_scenario(const ConfigDocument &doc);

AssociationPolicy make_policy(const std::string &name, const RunConfig &rc);

// The resolved scenario as "# " comment lines.
std::string describe_scenario(const Scenario &s);

}  // namespace mmhet

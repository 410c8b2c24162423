// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mmhet/geometry.hpp"
#include "mmhet/model.hpp"

namespace mmhet {

enum class PolicyKind { GuaBias, Coa, Roa };

// Per-tier association parameters after resolution against a scenario:
// metric = exponent * (log_bias + ln G - ln L).
struct TierAssoc {
    double log_bias = 0.0;
    double exponent = 1.0;
};

struct AssociationPolicy {
    PolicyKind kind = PolicyKind::Coa;
    std::vector<double> biases;     // GUA only; empty means TierConfig::assoc_bias
    std::vector<double> exponents;  // GUA only; empty means all 1

    static AssociationPolicy coa() { return {PolicyKind::Coa, {}, {}}; }
    static AssociationPolicy roa() { return {PolicyKind::Roa, {}, {}}; }
    static AssociationPolicy gua(std::vector<double> biases = {}, std::vector<double> exponents = {}) {
        return {PolicyKind::GuaBias, std::move(biases), std::move(exponents)};
    }

    std::vector<TierAssoc> resolve(const Scenario &s) const;
    std::string name() const;
};

AssociationPolicy policy_from_name(const std::string &name);

double association_metric(const BsPoint &bs, double shadow, const AssociationPolicy &policy,
                          const Scenario &s);
double association_metric(const BsPoint &bs, double shadow, const TierAssoc &ta, const Scenario &s);

struct Candidate {
    BsPoint point;
    double shadow = 1.0;
};

// True if (m1, d1, t1) beats (m2, d2, t2): larger metric, then smaller
// distance, then lower tier.
inline bool better_candidate(double m1, double d1, int t1, double m2, double d2, int t2) {
    if (m1 != m2) return m1 > m2;
    if (d1 != d2) return d1 < d2;
    return t1 < t2;
}

// Index of the serving candidate; nullopt is a coverage hole.
std::optional<std::size_t> select_serving(std::span<const Candidate> realization,
                                          const AssociationPolicy &policy, const Scenario &s);

}  // namespace mmhet

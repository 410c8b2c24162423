// SPDX-License-Identifier: Apache-2.0
#include "mmhet/association.hpp"

#include <cmath>

#include "mmhet/channel.hpp"

namespace mmhet {

std::vector<TierAssoc> AssociationPolicy::resolve(const Scenario &s) const {
    std::vector<TierAssoc> out(s.tiers.size());
    const double w_mu = s.uhf_band.bandwidth_hz;
    const double p_ref = s.roa_reference_power_w.value_or(1.0);
    for (std::size_t m = 0; m < s.tiers.size(); ++m) {
        const auto &t = s.tiers[m];
        switch (kind) {
        case PolicyKind::Coa:
            out[m] = {std::log(t.power_w), 1.0};
            break;
        case PolicyKind::Roa:
            out[m] = {std::log(t.power_w / p_ref), s.band(t.band).bandwidth_hz / w_mu};
            break;
        case PolicyKind::GuaBias: {
            double b = biases.empty() ? t.assoc_bias : biases.at(m);
            double e = exponents.empty() ? 1.0 : exponents.at(m);
            if (!(b > 0.0) || !(e > 0.0)) throw DomainError("GUA biases and exponents must be positive");
            out[m] = {std::log(b), e};
            break;
        }
        }
    }
    return out;
}

std::string AssociationPolicy::name() const {
    switch (kind) {
    case PolicyKind::Coa: return "coa";
    case PolicyKind::Roa: return "roa";
    case PolicyKind::GuaBias: return "gua";
    }
    return "?";
}

AssociationPolicy policy_from_name(const std::string &name) {
    if (name == "coa") return AssociationPolicy::coa();
    if (name == "roa") return AssociationPolicy::roa();
    if (name == "gua") return AssociationPolicy::gua();
    throw DomainError("unknown policy '" + name + "' (expected coa, roa or gua)");
}

double association_metric(const BsPoint &bs, double shadow, const TierAssoc &ta, const Scenario &s) {
    if (!(shadow > 0.0)) throw DomainError("association_metric: shadow must be positive");
    const auto &t = s.tiers.at(bs.tier);
    return ta.exponent * (ta.log_bias + std::log(shadow) - log_path_loss(bs.distance_m, bs.is_los, t, s));
}

double association_metric(const BsPoint &bs, double shadow, const AssociationPolicy &policy,
                          const Scenario &s) {
    return association_metric(bs, shadow, policy.resolve(s).at(bs.tier), s);
}

std::optional<std::size_t> select_serving(std::span<const Candidate> realization,
                                          const AssociationPolicy &policy, const Scenario &s) {
    auto ta = policy.resolve(s);
    std::optional<std::size_t> best;
    double bm = 0.0;
    for (std::size_t i = 0; i < realization.size(); ++i) {
        const auto &c = realization[i];
        if (s.nlos_suppressed(s.tiers.at(c.point.tier).band) && !c.point.is_los) continue;
        double m = association_metric(c.point, c.shadow, ta[c.point.tier], s);
        if (!best) {
            best = i;
            bm = m;
            continue;
        }
        const auto &b = realization[*best].point;
        if (better_candidate(m, c.point.distance_m, c.point.tier, bm, b.distance_m, b.tier)) {
            best = i;
            bm = m;
        }
    }
    return best;
}

}  // namespace mmhet

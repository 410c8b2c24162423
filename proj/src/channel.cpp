// SPDX-License-Identifier: Apache-2.0
#include "mmhet/channel.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace mmhet {

double path_loss(double r, bool is_los, const TierConfig &tier, const Scenario &s) {
    if (!(r > 0.0)) throw DomainError("path_loss: distance must be positive");
    const auto &pl = s.pathloss(tier.band);
    return s.band(tier.band).intercept * std::pow(r, is_los ? pl.alpha_los : pl.alpha_nlos);
}

double log_path_loss(double r, bool is_los, const TierConfig &tier, const Scenario &s) {
    if (!(r > 0.0)) throw DomainError("path_loss: distance must be positive");
    const auto &pl = s.pathloss(tier.band);
    return std::log(s.band(tier.band).intercept) +
           (is_los ? pl.alpha_los : pl.alpha_nlos) * std::log(r);
}

double shadow_sigma(const TierConfig &tier, bool is_los) {
    return std::numbers::sqrt2 * (is_los ? tier.los_shadow_rho : tier.nlos_shadow_rho);
}

double sample_shadow(const TierConfig &tier, bool is_los, RngStream &rng) {
    double sigma = shadow_sigma(tier, is_los);
    if (sigma == 0.0) return 1.0;
    return std::exp(sigma * rng.normal());
}

double sample_serving_fade(Band band, int T, FadingConvention conv, RngStream &rng) {
    if (T < 1) throw DomainError("antenna count must be >= 1");
    if (band == Band::MmWave) return T * rng.exponential();
    double g = rng.gamma(static_cast<double>(T));
    return conv == FadingConvention::Chi2TwoT ? 2.0 * g : g;
}

double sample_interf_fade(RngStream &rng) { return rng.exponential(); }

double sinr(const Link &serving, std::span<const Link> interferers, const Scenario &s) {
    const auto &st = s.tiers.at(serving.point.tier);
    if (s.nlos_suppressed(st.band) && !serving.point.is_los)
        throw DomainError("sinr: serving link is a suppressed NLOS mmWave link");
    double signal = st.power_w * serving.gains.fade * serving.gains.shadow / serving.gains.path_loss;
    double interference = 0.0;
    for (const auto &l : interferers) {
        const auto &t = s.tiers.at(l.point.tier);
        if (t.band != st.band) throw DomainError("sinr: interferer from the other band");
        if (s.nlos_suppressed(t.band) && !l.point.is_los) continue;
        interference += t.power_w * l.gains.fade * l.gains.shadow / l.gains.path_loss;
    }
    double noise = st.band == Band::MmWave ? s.mmwave_band.noise_power_w : 0.0;
    double denom = interference + noise;
    if (denom == 0.0) return std::numeric_limits<double>::infinity();
    return signal / denom;
}

}  // namespace mmhet

// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>

#include "mmhet/geometry.hpp"
#include "mmhet/model.hpp"

namespace mmhet {

struct LinkGains {
    double path_loss = 1.0;
    double shadow = 1.0;
    double fade = 1.0;
};

struct Link {
    BsPoint point;
    LinkGains gains;
};

double path_loss(double r, bool is_los, const TierConfig &tier, const Scenario &s);
double log_path_loss(double r, bool is_los, const TierConfig &tier, const Scenario &s);

double shadow_sigma(const TierConfig &tier, bool is_los);  // sqrt(2) rho
double sample_shadow(const TierConfig &tier, bool is_los, RngStream &rng);
double sample_serving_fade(Band band, int T, FadingConvention conv, RngStream &rng);
double sample_interf_fade(RngStream &rng);

// SIR for UHF, SINR for mmWave. An empty UHF interferer list yields +inf.
double sinr(const Link &serving, std::span<const Link> interferers, const Scenario &s);

}  // namespace mmhet

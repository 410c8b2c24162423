// SPDX-License-Identifier: Apache-2.0
#include "mmhet/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <numbers>

namespace mmhet {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

RngStream::RngStream(std::uint64_t seed, std::uint64_t index, std::uint64_t substream)
    : eng_(splitmix64(splitmix64(splitmix64(seed) ^ index) ^ (substream * 0xd1b54a32d192ed03ULL))) {}

namespace {
constexpr double kMinRadius = 1e-9;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}  // namespace

void sample_ppp(double intensity, double radius, RngStream &rng, std::vector<PolarPoint> &out) {
    out.clear();
    if (!(intensity > 0.0)) return;
    const double area_rate = std::numbers::pi * intensity;
    const double cap = area_rate * radius * radius;
    double acc = 0.0;
    for (;;) {
        acc += rng.exponential();
        if (acc > cap) break;
        double r = std::sqrt(acc / area_rate);
        double th = kTwoPi * rng.uniform();
        if (r < kMinRadius) continue;
        out.push_back({r, th});
    }
}

std::vector<PolarPoint> sample_ppp(double intensity, double radius, RngStream &rng) {
    std::vector<PolarPoint> out;
    sample_ppp(intensity, radius, rng, out);
    return out;
}

void sample_los_ppp(double intensity, double radius, const BlockageParams &b, RngStream &rng,
                    std::vector<PolarPoint> &out) {
    const double a = b.decay();
    if (a <= 0.0) {
        sample_ppp(intensity, radius, rng, out);
        return;
    }
    out.clear();
    if (!(intensity > 0.0)) return;
    // Over the whole plane the LOS points number Poisson(2 pi lambda / a^2)
    // with i.i.d. Gamma(2, 1/a) distances; the window only filters them.
    const double mean = kTwoPi * intensity / (a * a);
    const auto n = std::poisson_distribution<std::int64_t>(mean)(rng.engine());
    for (std::int64_t i = 0; i < n; ++i) {
        double r = (rng.exponential() + rng.exponential()) / a;
        double th = kTwoPi * rng.uniform();
        if (r > radius || r < kMinRadius) continue;
        out.push_back({r, th});
    }
    std::sort(out.begin(), out.end(),
              [](const PolarPoint &x, const PolarPoint &y) { return x.distance_m < y.distance_m; });
}

std::vector<PolarPoint> sample_los_ppp(double intensity, double radius, const BlockageParams &b,
                                       RngStream &rng) {
    std::vector<PolarPoint> out;
    sample_los_ppp(intensity, radius, b, rng, out);
    return out;
}

double los_probability(double r, const BlockageParams &b) {
    if (b.intensity_per_m2 == 0.0 || r == 0.0) return 1.0;
    return std::exp(-b.decay() * r);
}

bool sample_los(double r, const BlockageParams &b, RngStream &rng) {
    if (b.intensity_per_m2 == 0.0 || b.eta_m == 0.0) return true;
    return rng.uniform() < los_probability(r, b);
}

}  // namespace mmhet

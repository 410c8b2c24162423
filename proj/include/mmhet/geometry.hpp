// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "mmhet/model.hpp"

namespace mmhet {

// Deterministic stream keyed by (seed, index, substream). Distinct keys are
// mixed through splitmix64 before seeding the engine.
class RngStream {
  public:
    RngStream(std::uint64_t seed, std::uint64_t index, std::uint64_t substream = 0);

    double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(eng_); }
    double normal() { return normal_(eng_); }
    double exponential() { return std::exponential_distribution<double>(1.0)(eng_); }
    double gamma(double shape) { return std::gamma_distribution<double>(shape, 1.0)(eng_); }
    std::mt19937_64 &engine() { return eng_; }

  private:
    std::mt19937_64 eng_;
    std::normal_distribution<double> normal_;
};

std::uint64_t splitmix64(std::uint64_t x);

struct PolarPoint {
    double distance_m;
    double angle_rad;
};

struct BsPoint {
    int tier = 0;  // 0-based; the mmWave tier is last
    double distance_m = 1.0;
    double angle_rad = 0.0;
    bool is_los = true;
};

// Homogeneous PPP on a disk, generated by radial arrivals so the output is
// sorted and a larger radius only appends points.
std::vector<PolarPoint> sample_ppp(double intensity, double radius, RngStream &rng);
void sample_ppp(double intensity, double radius, RngStream &rng, std::vector<PolarPoint> &out);

// The LOS part of a PPP after independent blockage thinning, sampled directly
// (intensity lambda * exp(-eta beta r)). Sorted; a larger radius only adds
// points.
std::vector<PolarPoint> sample_los_ppp(double intensity, double radius, const BlockageParams &b,
                                       RngStream &rng);
void sample_los_ppp(double intensity, double radius, const BlockageParams &b, RngStream &rng,
                    std::vector<PolarPoint> &out);

double los_probability(double r, const BlockageParams &b);
bool sample_los(double r, const BlockageParams &b, RngStream &rng);

}  // namespace mmhet

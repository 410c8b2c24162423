// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "mmhet/association.hpp"
#include "mmhet/model.hpp"

namespace mmhet {

struct TrialResult {
    int serving_tier = -1;  // -1: coverage hole
    int serving_slot = -1;  // position of the serving BS within its tier's sample
    double sinr = 0.0;      // meaningful only when serving_tier >= 0
    bool covered = false;
    double rate_nats = 0.0;
    double best_metric = -std::numeric_limits<double>::infinity();  // ln of max Psi
};

TrialResult run_trial(const Scenario &s, const AssociationPolicy &policy, double theta, std::uint64_t seed,
                      std::uint64_t trial_index);

// Trials in index order; identical for any thread count. threads = 0 uses
// every hardware thread.
std::vector<TrialResult> run_trials(const Scenario &s, const AssociationPolicy &policy, double theta,
                                    std::int64_t trials, std::uint64_t seed, int threads = 0);

struct RateEstimate {
    MetricEstimate total;                 // nats/s
    std::vector<MetricEstimate> per_tier; // conditional on serving tier
};

struct AssocEstimate {
    std::vector<MetricEstimate> per_tier;
    MetricEstimate hole;
};

MetricEstimate coverage_from(const std::vector<TrialResult> &r, double theta);
RateEstimate rate_from(const std::vector<TrialResult> &r, std::size_t tiers);
AssocEstimate assoc_from(const std::vector<TrialResult> &r, std::size_t tiers);
std::vector<MetricEstimate> cdf_from(const std::vector<TrialResult> &r, const std::vector<double> &probes);

MetricEstimate estimate_coverage(const Scenario &s, const AssociationPolicy &policy, double theta,
                                 std::int64_t trials, std::uint64_t seed, int threads = 0);
RateEstimate estimate_rate(const Scenario &s, const AssociationPolicy &policy, std::int64_t trials,
                           std::uint64_t seed, int threads = 0);
AssocEstimate estimate_assoc_prob(const Scenario &s, const AssociationPolicy &policy, std::int64_t trials,
                                  std::uint64_t seed, int threads = 0);
std::vector<MetricEstimate> empirical_best_assoc_cdf(const Scenario &s, const AssociationPolicy &policy,
                                                     const std::vector<double> &probes, std::int64_t trials,
                                                     std::uint64_t seed, int threads = 0);

}  // namespace mmhet

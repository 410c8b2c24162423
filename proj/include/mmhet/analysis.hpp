// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <vector>

#include "mmhet/association.hpp"
#include "mmhet/model.hpp"
#include "mmhet/numerics.hpp"

namespace mmhet {

struct AnalysisOptions {
    int hermite_nodes = kDefaultHermiteNodes;
    int rate_grid_points = 64;
    double rate_s_min = 1e-6;
    double rate_s_max = 1e6;
    // Relative finite-difference step for the Gamma-fading derivative series.
    double derivative_rel_step = 0.05;
    // Each adapted panel of the serving-level rule is split this many times.
    int level_rule_split = 2;
    // Spacing in ln(b) of the interference tables (b = eta beta t).
    double table_step = 0.125;
};

// Resolved per-tier constants used by the analytic engine.
struct TierModel {
    double intensity = 0.0;
    double power = 1.0;
    int antennas = 1;
    Band band = Band::Uhf;
    double log_bias = 0.0;   // ln omega'
    double exponent = 1.0;   // association exponent e
    double log_psi = 0.0;    // ln(omega' / nu)
    double log_c = 0.0;      // ln(P / omega'), mean received power per unit base gain
    double alpha_los = 4.0, alpha_nlos = 4.0;
    double sigma_los = 0.0, sigma_nlos = 0.0;  // std of ln G
    bool has_nlos = true;
    double noise = 0.0;
};

class AnalysisContext {
  public:
    AnalysisContext(Scenario s, AssociationPolicy p, QuadSpec q = {}, AnalysisOptions o = {});
    ~AnalysisContext();
    AnalysisContext(AnalysisContext &&) noexcept;

    const Scenario &scenario() const { return scenario_; }
    const AssociationPolicy &policy() const { return policy_; }
    const QuadSpec &quad() const { return quad_; }
    const AnalysisOptions &options() const { return opts_; }
    const std::vector<TierModel> &tiers() const { return tiers_; }
    double decay() const { return decay_; }
    std::size_t mmwave_index() const { return tiers_.size() - 1; }

    // Conditional Laplace kernel of tier m:
    // E[exp(-s (I + noise) / mean serving power) | serving tier m].
    double kernel(std::size_t m, double s) const;
    // Same kernel interpolated from the logarithmic s-grid.
    double kernel_interpolated(std::size_t m, double s) const;
    // Tier association probability from the level integral.
    double phi(std::size_t m) const;
    // Sum of quadrature error estimates behind the phi values.
    double phi_error() const;
    // Integrand evaluations spent on the serving-level rules.
    std::uint64_t evaluations() const;
    void precompute() const;

  private:
    struct Cache;
    Scenario scenario_;
    AssociationPolicy policy_;
    QuadSpec quad_;
    AnalysisOptions opts_;
    std::vector<TierModel> tiers_;
    double decay_ = 0.0;
    std::unique_ptr<Cache> cache_;
};

// Expected area / pi of tier-m positions whose base gain omega' G / L exceeds x.
double a_m(double x, std::size_t m, const AnalysisContext &ctx);
// pi sum_k lambda_k A_k at association level z (metric = ln Psi).
double association_tail(double z, const AnalysisContext &ctx);
double best_assoc_cdf(double x, const AnalysisContext &ctx);
// x with best_assoc_cdf(x) = p, 0 < p < 1.
double best_assoc_quantile(double p, const AnalysisContext &ctx);
double hole_probability(const AnalysisContext &ctx);
double tier_assoc_prob(std::size_t m, const AnalysisContext &ctx);
double serving_distance_cdf(double x, const AnalysisContext &ctx);

// Inhomogeneous intensity of tier k in the normalized-distance form.
double lambda_intensity(std::size_t k, double q, double s, double r, const AnalysisContext &ctx);

// Coverage kernels: b_m(theta) for UHF tier m, b_M(theta) for the mmWave tier.
double b_m(double theta, std::size_t m, const AnalysisContext &ctx);
double b_M(double theta, const AnalysisContext &ctx);
// The same kernels evaluated through the normalized-distance intensity form.
double b_m_lambda_form(double theta, std::size_t m, const AnalysisContext &ctx);
double b_M_lambda_form(double theta, const AnalysisContext &ctx);

double coverage_probability(double theta, const AnalysisContext &ctx);
double coverage_probability_lambda_form(double theta, const AnalysisContext &ctx);

double unified_phi(std::size_t m, const AnalysisContext &ctx);
double unified_b_m(double theta, std::size_t m, const AnalysisContext &ctx);
double unified_b_M(double theta, const AnalysisContext &ctx);
double unified_coverage(double theta, const AnalysisContext &ctx);

struct RateBreakdown {
    double total = 0.0;              // nats/s
    std::vector<double> per_tier;    // conditional C_m, nats/s
    std::vector<double> phi;
};
RateBreakdown link_rate(const AnalysisContext &ctx);

double coa_coverage(double theta, const Scenario &s, const QuadSpec &q = {});
RateBreakdown coa_rate(const Scenario &s, const QuadSpec &q = {});
double roa_coverage(double theta, const Scenario &s, const QuadSpec &q = {});
RateBreakdown roa_rate(const Scenario &s, const QuadSpec &q = {});

}  // namespace mmhet

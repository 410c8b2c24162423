// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace mmhet {

class DomainError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

// Quadrature budget exhausted; carries the best estimate reached.
class NonConvergence : public std::runtime_error {
  public:
    NonConvergence(const std::string &what, double estimate, double bound)
        : std::runtime_error(what), estimate_(estimate), bound_(bound) {}
    double estimate() const { return estimate_; }
    double bound() const { return bound_; }

  private:
    double estimate_;
    double bound_;
};

enum class Band { Uhf, MmWave };
enum class FadingConvention { Chi2TwoT, GammaT };

struct BandParams {
    Band tag = Band::Uhf;
    double bandwidth_hz = 1e8;
    double intercept = 1.0;    // nu, linear
    double noise_power_w = 0.0;
};

struct TierConfig {
    double intensity_per_m2 = 0.0;
    double power_w = 1.0;
    int tx_antennas = 1;
    double assoc_bias = 1.0;
    double los_shadow_rho = 0.0;   // natural-log scale
    double nlos_shadow_rho = 0.0;
    Band band = Band::Uhf;
};

struct BlockageParams {
    double intensity_per_m2 = 0.0;  // beta
    double eta_m = 19.1;
    double decay() const { return intensity_per_m2 * eta_m; }  // eta*beta, 1/m
};

struct PathLossParams {
    double alpha_los = 4.0;
    double alpha_nlos = 4.0;
};

struct UnifiedUhf {
    double alpha_mu = 4.0;
    double rho_mu = 0.0;
    double d_los_m = 1.0;
};

struct Scenario {
    std::vector<TierConfig> tiers;
    BandParams uhf_band;
    BandParams mmwave_band{Band::MmWave, 1e9, 1.0, 0.0};
    BlockageParams blockage;
    PathLossParams uhf_pathloss;
    PathLossParams mmwave_pathloss;
    bool mmwave_nlos_blocked = false;
    std::optional<UnifiedUhf> unified_uhf;
    double window_radius_m = 15000.0;
    FadingConvention uhf_fading = FadingConvention::GammaT;
    // ROA scales the mean received power by this before raising it to the
    // bandwidth exponent. Filled by validate_scenario when absent.
    std::optional<double> roa_reference_power_w;

    const BandParams &band(Band b) const { return b == Band::Uhf ? uhf_band : mmwave_band; }
    const PathLossParams &pathloss(Band b) const {
        return b == Band::Uhf ? uhf_pathloss : mmwave_pathloss;
    }
    std::size_t mmwave_index() const { return tiers.size() - 1; }
    // NLOS mmWave links are dropped entirely.
    bool nlos_suppressed(Band b) const { return b == Band::MmWave && mmwave_nlos_blocked; }
};

struct MetricEstimate {
    double value = 0.0;
    double error = 0.0;
    std::uint64_t count = 0;
};

Scenario validate_scenario(Scenario s);

double default_noise_power(double bandwidth_hz, double noise_figure_db);
double shadow_rho_from_db(double sigma_db);
// (4 pi f / c)^2
double free_space_intercept(double carrier_hz);

inline constexpr double kUhfCarrierHz = 2e9;
inline constexpr double kMmWaveCarrierHz = 73e9;
inline constexpr double kDefaultNoiseFigureDb = 10.0;

enum class Antennas { Siso, Miso };

// Two-tier macro UHF + mmWave picocell network with the parameter table of
// the reference simulation setup. UHF links use the unified exponent 3.76.
Scenario table2_scenario(Antennas antennas, double intensity_ratio_to_blockage);

// Single UHF tier, SISO, no shadowing, no blockage, exponent alpha, plus an
// empty mmWave tier.
Scenario classic_scenario(double alpha = 4.0, double intensity = 1e-6);

}  // namespace mmhet

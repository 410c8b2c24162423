// SPDX-License-Identifier: Apache-2.0
#include "mmhet/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace mmhet {

namespace {

void require(bool ok, const std::string &msg) {
    if (!ok) throw DomainError(msg);
}

bool finite_nonneg(double x) { return std::isfinite(x) && x >= 0.0; }
bool finite_pos(double x) { return std::isfinite(x) && x > 0.0; }

void check_pathloss(const PathLossParams &p, const char *name) {
    std::string n(name);
    require(std::isfinite(p.alpha_los) && p.alpha_los > 2.0, n + ".alpha_los must exceed 2");
    require(std::isfinite(p.alpha_nlos) && p.alpha_nlos >= p.alpha_los,
            n + ".alpha_nlos must be >= alpha_los");
}

void check_band(const BandParams &b, const char *name) {
    std::string n(name);
    require(finite_pos(b.bandwidth_hz), n + ".bandwidth_hz must be positive");
    require(finite_pos(b.intercept), n + ".intercept must be positive");
    require(finite_nonneg(b.noise_power_w), n + ".noise_power_w must be nonnegative");
}

}  // namespace

Scenario validate_scenario(Scenario s) {
    require(!s.tiers.empty(), "tiers must be non-empty");
    s.uhf_band.tag = Band::Uhf;
    s.mmwave_band.tag = Band::MmWave;
    check_band(s.uhf_band, "uhf_band");
    check_band(s.mmwave_band, "mmwave_band");
    require(s.uhf_band.noise_power_w == 0.0, "uhf_band.noise_power_w must be 0 (SIR model)");
    check_pathloss(s.uhf_pathloss, "uhf_pathloss");
    check_pathloss(s.mmwave_pathloss, "mmwave_pathloss");
    require(finite_nonneg(s.blockage.intensity_per_m2), "blockage.intensity_per_m2 must be >= 0");
    require(finite_nonneg(s.blockage.eta_m), "blockage.eta_m must be >= 0");
    require(finite_pos(s.window_radius_m), "window_radius_m must be positive");

    std::size_t n_mm = 0;
    for (std::size_t i = 0; i < s.tiers.size(); ++i) {
        const auto &t = s.tiers[i];
        std::string n = "tier" + std::to_string(i + 1);
        require(finite_nonneg(t.intensity_per_m2), n + ".intensity_per_m2 must be >= 0");
        require(finite_pos(t.power_w), n + ".power_w must be positive");
        require(t.tx_antennas >= 1, n + ".tx_antennas must be >= 1");
        require(finite_pos(t.assoc_bias), n + ".assoc_bias must be positive");
        require(finite_nonneg(t.los_shadow_rho), n + ".los_shadow_rho must be >= 0");
        require(finite_nonneg(t.nlos_shadow_rho), n + ".nlos_shadow_rho must be >= 0");
        if (t.band == Band::MmWave) ++n_mm;
    }
    require(n_mm == 1, "exactly one tier must use the mmwave band");
    std::stable_partition(s.tiers.begin(), s.tiers.end(),
                          [](const TierConfig &t) { return t.band == Band::Uhf; });

    if (s.unified_uhf) {
        const auto &u = *s.unified_uhf;
        require(std::isfinite(u.alpha_mu) && u.alpha_mu > 2.0, "unified_uhf.alpha_mu must exceed 2");
        require(finite_nonneg(u.rho_mu), "unified_uhf.rho_mu must be >= 0");
        require(finite_pos(u.d_los_m), "unified_uhf.d_los_m must be positive");
    }
    if (!s.roa_reference_power_w)
        s.roa_reference_power_w = s.mmwave_band.noise_power_w > 0.0 ? s.mmwave_band.noise_power_w : 1.0;
    require(finite_pos(*s.roa_reference_power_w), "roa_reference_power_w must be positive");
    return s;
}

double default_noise_power(double bandwidth_hz, double noise_figure_db) {
    if (!(bandwidth_hz > 0.0)) throw DomainError("bandwidth_hz must be positive");
    double dbm = -174.0 + 10.0 * std::log10(bandwidth_hz) + noise_figure_db;
    return std::pow(10.0, (dbm - 30.0) / 10.0);
}

double shadow_rho_from_db(double sigma_db) {
    if (!(sigma_db >= 0.0)) throw DomainError("sigma_db must be >= 0");
    return std::numbers::ln10 / 10.0 * sigma_db;
}

double free_space_intercept(double carrier_hz) {
    constexpr double c = 299792458.0;
    double g = 4.0 * std::numbers::pi * carrier_hz / c;
    return g * g;
}

Scenario table2_scenario(Antennas antennas, double ratio) {
    bool miso = antennas == Antennas::Miso;
    Scenario s;
    s.blockage = {5.5e-5, 19.1};
    s.uhf_band = {Band::Uhf, 1e8, free_space_intercept(kUhfCarrierHz), 0.0};
    s.mmwave_band = {Band::MmWave, 1e9, free_space_intercept(kMmWaveCarrierHz),
                     default_noise_power(1e9, kDefaultNoiseFigureDb)};
    s.uhf_pathloss = {3.76, 3.76};
    s.mmwave_pathloss = {2.1, 6.75};
    s.mmwave_nlos_blocked = true;

    TierConfig macro;
    macro.intensity_per_m2 = 1e-6;
    macro.power_w = 20.0;
    macro.tx_antennas = miso ? 4 : 1;
    macro.los_shadow_rho = shadow_rho_from_db(13.0);
    macro.nlos_shadow_rho = shadow_rho_from_db(13.0);
    macro.band = Band::Uhf;

    TierConfig pico;
    pico.intensity_per_m2 = ratio * s.blockage.intensity_per_m2;
    pico.power_w = 1.0;
    pico.tx_antennas = miso ? 2 : 1;
    pico.los_shadow_rho = shadow_rho_from_db(9.6);
    pico.nlos_shadow_rho = shadow_rho_from_db(15.8);
    pico.band = Band::MmWave;

    s.tiers = {macro, pico};
    return validate_scenario(s);
}

Scenario classic_scenario(double alpha, double intensity) {
    Scenario s;
    s.uhf_band = {Band::Uhf, 1e8, 1.0, 0.0};
    s.mmwave_band = {Band::MmWave, 1e9, 1.0, 0.0};
    s.uhf_pathloss = {alpha, alpha};
    s.mmwave_pathloss = {alpha, alpha};
    TierConfig t;
    t.intensity_per_m2 = intensity;
    t.band = Band::Uhf;
    TierConfig mm;
    mm.intensity_per_m2 = 0.0;
    mm.band = Band::MmWave;
    s.tiers = {t, mm};
    return validate_scenario(s);
}

}  // namespace mmhet

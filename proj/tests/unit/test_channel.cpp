// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <vector>

#include "mmhet/channel.hpp"

using namespace mmhet;

namespace {
Scenario two_band(double a_los = 2.1, double a_nlos = 6.75) {
    Scenario s;
    TierConfig u;
    u.intensity_per_m2 = 1e-6;
    TierConfig m = u;
    m.band = Band::MmWave;
    s.tiers = {u, u, m};
    s.uhf_pathloss = {a_los, a_los};
    s.mmwave_pathloss = {a_los, a_nlos};
    return validate_scenario(s);
}

template <class F> std::pair<double, double> moments(int n, F &&draw) {
    double s = 0, ss = 0;
    for (int i = 0; i < n; ++i) {
        double x = draw();
        s += x;
        ss += x * x;
    }
    double m = s / n;
    return {m, ss / n - m * m};
}
}  // namespace

TEST_CASE("path_loss") {
    Scenario s = two_band();
    CHECK(path_loss(10.0, true, s.tiers[0], s) == doctest::Approx(125.8925).epsilon(1e-6));
    CHECK(path_loss(10.0, false, s.tiers[2], s) == doctest::Approx(5623413.25).epsilon(1e-6));
    s.mmwave_band.intercept = 7.5;
    CHECK(path_loss(1.0, false, s.tiers[2], s) == 7.5);
    CHECK(path_loss(1.0, true, s.tiers[2], s) == 7.5);
    CHECK(log_path_loss(10.0, false, s.tiers[2], s) == doctest::Approx(std::log(7.5 * 5623413.25)));
    CHECK_THROWS_AS(path_loss(0.0, true, s.tiers[0], s), DomainError);
    for (double r : {1.0, 3.0, 70.0}) CHECK(path_loss(r, false, s.tiers[2], s) >= path_loss(r, true, s.tiers[2], s));
}

TEST_CASE("sample_shadow") {
    TierConfig t;
    RngStream rng(1, 0);
    CHECK(sample_shadow(t, true, rng) == 1.0);
    t.los_shadow_rho = 1.0;
    auto m = moments(1000000, [&] { return std::pow(sample_shadow(t, true, rng), 0.5); });
    CHECK(m.first == doctest::Approx(1.2840).epsilon(0.005));

    std::vector<double> v(200001);
    for (auto &x : v) x = sample_shadow(t, true, rng);
    std::nth_element(v.begin(), v.begin() + 100000, v.end());
    CHECK(v[100000] == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("sample_serving_fade") {
    RngStream rng(2, 0);
    auto chi = moments(1000000, [&] { return sample_serving_fade(Band::Uhf, 1, FadingConvention::Chi2TwoT, rng); });
    CHECK(chi.first == doctest::Approx(2.0).epsilon(0.01));
    auto mm = moments(1000000, [&] { return sample_serving_fade(Band::MmWave, 2, FadingConvention::Chi2TwoT, rng); });
    CHECK(mm.first == doctest::Approx(2.0).epsilon(0.02));
    CHECK(mm.second == doctest::Approx(4.0).epsilon(0.02));
    auto g = moments(1000000, [&] { return sample_serving_fade(Band::Uhf, 4, FadingConvention::GammaT, rng); });
    CHECK(g.first == doctest::Approx(4.0).epsilon(0.01));
    CHECK_THROWS_AS(sample_serving_fade(Band::Uhf, 0, FadingConvention::GammaT, rng), DomainError);
}

TEST_CASE("sample_interf_fade") {
    RngStream rng(3, 0);
    const int n = 1000000;
    double tail = 0;
    auto m = moments(n, [&] {
        double h = sample_interf_fade(rng);
        tail += h > 1.0;
        return h;
    });
    CHECK(m.first == doctest::Approx(1.0).epsilon(0.01));
    CHECK(m.second == doctest::Approx(1.0).epsilon(0.02));
    CHECK(tail / n == doctest::Approx(std::exp(-1.0)).epsilon(0.005 / 0.3679));
}

TEST_CASE("sinr examples") {
    SUBCASE("mmWave SNR") {
        Scenario s = two_band();
        s.mmwave_band.noise_power_w = 1e-10;
        Link serv{{2, 1.0, 0.0, true}, {1.0, 1.0, 2e-10}};
        CHECK(sinr(serv, {}, s) == doctest::Approx(2.0));
    }
    SUBCASE("UHF symmetry") {
        Scenario s = two_band();
        Link a{{0, 50.0, 0.0, true}, {path_loss(50.0, true, s.tiers[0], s), 1.7, 0.4}};
        Link b{{1, 50.0, 1.0, true}, a.gains};
        std::vector<Link> in{b};
        CHECK(sinr(a, in, s) == doctest::Approx(1.0));
    }
    SUBCASE("UHF power law") {
        Scenario s = two_band();
        Link a{{0, 100.0, 0.0, true}, {path_loss(100.0, true, s.tiers[0], s), 1.0, 1.0}};
        Link b{{0, 200.0, 0.0, true}, {path_loss(200.0, true, s.tiers[0], s), 1.0, 1.0}};
        std::vector<Link> in{b};
        CHECK(sinr(a, in, s) == doctest::Approx(4.28709).epsilon(1e-5));
    }
    SUBCASE("UHF without interferers") {
        Scenario s = two_band();
        Link a{{0, 100.0, 0.0, true}, {10.0, 1.0, 1.0}};
        CHECK(std::isinf(sinr(a, {}, s)));
    }
}

TEST_CASE("sinr errors and filtering") {
    Scenario s = two_band();
    Link u{{0, 100.0, 0.0, true}, {1.0, 1.0, 1.0}};
    Link m{{2, 100.0, 0.0, true}, {1.0, 1.0, 1.0}};
    std::vector<Link> cross{m};
    CHECK_THROWS_AS(sinr(u, cross, s), DomainError);

    s.mmwave_band.noise_power_w = 0.5;
    s.mmwave_nlos_blocked = true;
    Link nlos{{2, 10.0, 0.0, false}, {1.0, 1.0, 100.0}};
    std::vector<Link> in{nlos};
    CHECK(sinr(m, in, s) == doctest::Approx(2.0));
    CHECK_THROWS_AS(sinr(nlos, {}, s), DomainError);
}

TEST_CASE("sinr properties") {
    Scenario s = two_band();
    s.mmwave_band.noise_power_w = 1e-3;
    Link a{{0, 80.0, 0.0, true}, {path_loss(80.0, true, s.tiers[0], s), 1.3, 2.0}};
    std::vector<Link> in{{{1, 120.0, 0.0, true}, {path_loss(120.0, true, s.tiers[1], s), 0.7, 0.9}},
                         {{0, 300.0, 0.0, true}, {path_loss(300.0, true, s.tiers[0], s), 2.2, 1.4}}};
    double base = sinr(a, in, s);
    Scenario scaled = s;
    for (auto &t : scaled.tiers) t.power_w *= 37.0;
    CHECK(sinr(a, in, scaled) == doctest::Approx(base).epsilon(1e-12));

    auto more = in;
    more[0].gains.fade *= 2.0;
    CHECK(sinr(a, more, s) < base);

    Link m{{2, 30.0, 0.0, true}, {path_loss(30.0, true, s.tiers[2], s), 1.0, 1.0}};
    double lo = sinr(m, {}, s);
    s.mmwave_band.noise_power_w *= 2.0;
    CHECK(sinr(m, {}, s) < lo);
    CHECK(sinr(a, in, s) == base);
}

// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "mmhet/numerics.hpp"

using namespace mmhet;

TEST_CASE("integrate_semiinfinite") {
    CHECK(integrate_semiinfinite([](double x) { return std::exp(-x); }).value == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(integrate_semiinfinite([](double x) { return x * std::exp(-x * x); }).value ==
          doctest::Approx(0.5).epsilon(1e-8));
    // (pi / a) / sin(pi / a) at a = 2.1
    auto slow = integrate_semiinfinite([](double x) { return 1.0 / (1.0 + std::pow(x, 2.1)); });
    CHECK(slow.value == doctest::Approx(1.500191).epsilon(1e-6));
    const double exact = (std::numbers::pi / 2.1) / std::sin(std::numbers::pi / 2.1);
    CHECK(slow.value == doctest::Approx(exact).epsilon(1e-7));
}

TEST_CASE("integration is linear") {
    Fn f = [](double x) { return std::exp(-2.0 * x); };
    Fn g = [](double x) { return 1.0 / (1.0 + x * x * x); };
    double a = integrate_semiinfinite(f).value, b = integrate_semiinfinite(g).value;
    double ab = integrate_semiinfinite([&](double x) { return 3.0 * f(x) - 0.5 * g(x); }).value;
    CHECK(ab == doctest::Approx(3.0 * a - 0.5 * b).epsilon(1e-7));
}

TEST_CASE("finite and real-line integration") {
    CHECK(integrate([](double x) { return std::sin(x); }, 0.0, std::numbers::pi).value == doctest::Approx(2.0));
    auto gauss = integrate_real_line([](double x) { return std::exp(-0.5 * (x - 3) * (x - 3)); }, 3.0, 1.0);
    CHECK(gauss.value == doctest::Approx(std::sqrt(2 * std::numbers::pi)).epsilon(1e-8));

    MetricEstimate est;
    NodeRule rule = adapted_real_line_rule([](double x) { return std::exp(-x * x); }, 0.0, 1.0, QuadSpec{}, 2, &est);
    CHECK(est.value == doctest::Approx(std::sqrt(std::numbers::pi)).epsilon(1e-8));
    CHECK(rule.apply([](double x) { return std::exp(-x * x); }) == doctest::Approx(std::sqrt(std::numbers::pi)).epsilon(1e-8));
    CHECK(rule.apply([](double x) { return x * x * std::exp(-x * x); }) ==
          doctest::Approx(0.5 * std::sqrt(std::numbers::pi)).epsilon(1e-6));
}

TEST_CASE("budget exhaustion throws NonConvergence") {
    QuadSpec tight{1e-14, 1e-300, 100};
    CHECK_THROWS_AS(integrate([](double x) { return std::sin(1.0 / x); }, 1e-6, 1.0, tight), NonConvergence);
    try {
        integrate([](double x) { return std::sin(1.0 / x); }, 1e-6, 1.0, tight);
    } catch (const NonConvergence &e) {
        CHECK(std::isfinite(e.estimate()));
        CHECK(e.bound() > 0.0);
    }
}

TEST_CASE("QuadSpec validation") {
    CHECK_THROWS_AS((QuadSpec{0.0, 1e-10, 1000}).validate(), DomainError);
    CHECK_THROWS_AS((QuadSpec{1e-7, 1e-10, 50}).validate(), DomainError);
    CHECK_NOTHROW(QuadSpec{}.validate());
    CHECK(QuadSpec{}.tightened(0.1).rel_tol == doctest::Approx(1e-8));
}

TEST_CASE("Gauss-Hermite moments") {
    for (int n : {8, 24, 48}) {
        const auto &gh = gauss_hermite(n);
        double m0 = 0, m2 = 0, m4 = 0, m1 = 0;
        for (std::size_t i = 0; i < gh.x.size(); ++i) {
            double x = gh.x[i];
            m0 += gh.w[i];
            m1 += gh.w[i] * x;
            m2 += gh.w[i] * x * x;
            m4 += gh.w[i] * x * x * x * x;
        }
        CHECK(m0 == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(m1 == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
        CHECK(m2 == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(m4 == doctest::Approx(3.0).epsilon(1e-12));
    }
}

TEST_CASE("lognormal_expectation") {
    CHECK(lognormal_expectation([](double g) { return g; }, 1.0 / std::numbers::sqrt2) ==
          doctest::Approx(1.6487213).epsilon(1e-7));
    CHECK(lognormal_expectation([](double g) { return std::sqrt(g); }, 1.0) == doctest::Approx(1.2840254).epsilon(1e-7));
    CHECK(lognormal_expectation([](double g) { return g * g + 3.0; }, 0.0) == 4.0);
    for (double s : {-2.0, -0.7, 0.5, 1.0, 2.0}) {
        Fn g = [s](double x) { return std::pow(x, s); };
        double a = lognormal_expectation(g, 0.8, 24), b = lognormal_expectation(g, 0.8, 48);
        CHECK(a == doctest::Approx(b).epsilon(1e-6));
        CHECK(b == doctest::Approx(std::exp(s * s * 0.64)).epsilon(1e-8));
    }
}

TEST_CASE("nth_derivative") {
    CHECK(nth_derivative([](double t) { return t * t * t; }, 2.0, 2) == doctest::Approx(12.0).epsilon(1e-6));
    CHECK(nth_derivative([](double t) { return std::exp(-t); }, 1.0, 3) == doctest::Approx(-std::exp(-1.0)).epsilon(1e-6));
    CHECK(nth_derivative([](double t) { return std::cos(t); }, 0.7, 0) == std::cos(0.7));
    CHECK(nth_derivative([](double t) { return std::sin(t); }, 0.4, 1) == doctest::Approx(std::cos(0.4)).epsilon(1e-9));
    for (int n = 1; n <= 6; ++n) {
        double sign = n % 2 ? -1.0 : 1.0;
        CHECK(nth_derivative([](double t) { return std::exp(-t); }, 1.5, n, {0.05, 1e-5}) ==
              doctest::Approx(sign * std::exp(-1.5)).epsilon(1e-4));
    }
}

TEST_CASE("interpolators") {
    std::vector<double> x{0, 1, 2, 3, 4, 5}, y{0, 0.1, 0.5, 0.9, 0.95, 1.0};
    MonotoneCubic pc(x, y);
    for (std::size_t i = 0; i < x.size(); ++i) CHECK(pc(x[i]) == doctest::Approx(y[i]));
    double prev = -1;
    for (double t = 0; t <= 5; t += 0.01) {
        double v = pc(t);
        CHECK(v >= prev - 1e-15);
        prev = v;
    }
    CHECK(pc.x_min() == 0.0);
    CHECK(pc.x_max() == 5.0);

    const double h = 0.05;
    std::vector<double> ys;
    for (int i = 0; i <= 200; ++i) ys.push_back(std::sin(i * h));
    UniformSpline sp(ys, 0.0, h);
    double err = 0;
    for (double t = 1.0; t < 9.0; t += 0.013) err = std::max(err, std::abs(sp(t) - std::sin(t)));
    CHECK(err < 1e-6);
}

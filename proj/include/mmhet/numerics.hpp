// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "mmhet/model.hpp"

namespace mmhet {

struct QuadSpec {
    double rel_tol = 1e-7;
    double abs_tol = 1e-10;
    std::int64_t max_evals = 200000;
    void validate() const;
    QuadSpec tightened(double factor) const;  // tolerances times factor
};

using Fn = std::function<double(double)>;

// Adaptive 15-point Gauss-Kronrod on [a, b]; throws NonConvergence when the
// evaluation budget runs out before the tolerance is met.
MetricEstimate integrate(const Fn &f, double a, double b, const QuadSpec &spec = {});

// Integral over [0, inf) through x = scale * t / (1 - t).
MetricEstimate integrate_semiinfinite(const Fn &f, const QuadSpec &spec = {}, double scale = 1.0);

// Integral over the real line, split at center, each half mapped as above.
MetricEstimate integrate_real_line(const Fn &f, double center, double scale, const QuadSpec &spec = {});

// Fixed weighted nodes; sum w_i g(x_i) approximates the integral of g.
struct NodeRule {
    std::vector<double> x;
    std::vector<double> w;
    template <class G> double apply(G &&g) const {
        double s = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) s += w[i] * g(x[i]);
        return s;
    }
};

// Adapts on f over the real line, then returns the Kronrod nodes of every
// final panel, each panel split into `split` equal parts.
NodeRule adapted_real_line_rule(const Fn &f, double center, double scale, const QuadSpec &spec,
                                int split = 1, MetricEstimate *estimate = nullptr);

// Probabilists' Gauss-Hermite: E[g(Z)], Z ~ N(0,1), is sum w_i g(x_i).
struct GaussHermite {
    std::vector<double> x;
    std::vector<double> w;
};
const GaussHermite &gauss_hermite(int nodes);

inline constexpr int kDefaultHermiteNodes = 24;

// E[g(G)] with G = exp(sqrt(2) rho Z).
double lognormal_expectation(const Fn &g, double rho, int nodes = kDefaultHermiteNodes);

struct DerivativeStep {
    double rel = 1e-3;
    double abs = 1e-5;
};

// n-th derivative from central differences, one Richardson refinement.
double nth_derivative(const Fn &f, double x0, int n, DerivativeStep step = {});

// Shape-preserving piecewise cubic through (x_i, y_i), x strictly increasing.
class MonotoneCubic {
  public:
    MonotoneCubic(std::vector<double> x, std::vector<double> y);
    double operator()(double x) const;
    double x_min() const { return lo_; }
    double x_max() const { return hi_; }

  private:
    struct Impl;
    std::shared_ptr<const Impl> impl_;
    double lo_, hi_;
};

// Cubic B-spline on a uniform grid (fourth-order accurate).
class UniformSpline {
  public:
    UniformSpline() = default;
    UniformSpline(std::vector<double> y, double x0, double step);
    double operator()(double x) const;

  private:
    struct Impl;
    std::shared_ptr<const Impl> impl_;
};

}  // namespace mmhet

// SPDX-License-Identifier: Apache-2.0
#include "mmhet/numerics.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <boost/math/interpolators/cardinal_cubic_b_spline.hpp>
#include <boost/math/interpolators/pchip.hpp>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <queue>

namespace mmhet {

void QuadSpec::validate() const {
    if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) throw DomainError("quad tolerances must be positive");
    if (max_evals < 100) throw DomainError("quad max_evals must be >= 100");
}

QuadSpec QuadSpec::tightened(double factor) const {
    QuadSpec q = *this;
    q.rel_tol *= factor;
    q.abs_tol *= factor;
    return q;
}

namespace {

// 15-point Kronrod abscissae/weights and the embedded 7-point Gauss weights.
constexpr double kXgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                            0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                            0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                            0.207784955007898467600689403773245, 0.0};
constexpr double kWgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                            0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                            0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                            0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                           0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
    double a, b, value, error;
    bool operator<(const Panel &o) const { return error < o.error; }
};

Panel gk15(const Fn &f, double a, double b) {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    double fc = f(c);
    double rk = fc * kWgk[7];
    double rg = fc * kWg[3];
    for (int j = 0; j < 7; ++j) {
        double dx = h * kXgk[j];
        double s = f(c - dx) + f(c + dx);
        rk += kWgk[j] * s;
        if (j % 2 == 1) rg += kWg[j / 2] * s;
    }
    return {a, b, rk * h, std::abs((rk - rg) * h)};
}

struct Adaptive {
    double value = 0.0, error = 0.0;
    std::int64_t evals = 0;
    std::vector<Panel> panels;
};

Adaptive adapt(const Fn &f, const std::vector<double> &breaks, const QuadSpec &spec) {
    spec.validate();
    std::priority_queue<Panel> heap;
    std::vector<Panel> frozen;
    Adaptive out;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        Panel p = gk15(f, breaks[i], breaks[i + 1]);
        out.evals += 15;
        heap.push(p);
    }
    auto totals = [&] {
        double v = 0.0, e = 0.0;
        auto copy = heap;
        while (!copy.empty()) {
            v += copy.top().value;
            e += copy.top().error;
            copy.pop();
        }
        for (const auto &p : frozen) {
            v += p.value;
            e += p.error;
        }
        return std::pair{v, e};
    };
    auto [v, e] = totals();
    std::int64_t since_resum = 0;
    while (!heap.empty()) {
        if (e <= std::max(spec.rel_tol * std::abs(v), spec.abs_tol)) break;
        if (out.evals + 30 > spec.max_evals) {
            out.value = v;
            out.error = e;
            throw NonConvergence("quadrature budget exhausted", v, e);
        }
        Panel p = heap.top();
        heap.pop();
        double mid = 0.5 * (p.a + p.b);
        if (!(mid > p.a && mid < p.b) || (p.b - p.a) < 1e-14 * (std::abs(p.a) + std::abs(p.b))) {
            frozen.push_back(p);
            if (heap.empty()) break;
            continue;
        }
        Panel l = gk15(f, p.a, mid), r = gk15(f, mid, p.b);
        out.evals += 30;
        v += l.value + r.value - p.value;
        e += l.error + r.error - p.error;
        heap.push(l);
        heap.push(r);
        // Running sums drift; resum from scratch now and then.
        if (++since_resum == 64) {
            std::tie(v, e) = totals();
            since_resum = 0;
        }
    }
    std::tie(v, e) = totals();
    if (e > std::max(spec.rel_tol * std::abs(v), spec.abs_tol) && e > 1e-13 * std::abs(v))
        throw NonConvergence("quadrature tolerance not reachable", v, e);
    out.value = v;
    out.error = e;
    while (!heap.empty()) {
        out.panels.push_back(heap.top());
        heap.pop();
    }
    out.panels.insert(out.panels.end(), frozen.begin(), frozen.end());
    std::sort(out.panels.begin(), out.panels.end(), [](const Panel &x, const Panel &y) { return x.a < y.a; });
    return out;
}

// x = center + sign(t) * scale * |t| / (1 - |t|) for t in (-1, 1).
struct LineMap {
    double center, scale;
    double x(double t) const { return center + scale * t / (1.0 - std::abs(t)); }
    double jac(double t) const {
        double d = 1.0 - std::abs(t);
        return scale / (d * d);
    }
};

Fn mapped(const Fn &f, LineMap m) {
    return [&f, m](double t) {
        double d = 1.0 - std::abs(t);
        if (d <= 0.0) return 0.0;
        double v = f(m.x(t));
        return v == 0.0 ? 0.0 : v * m.jac(t);
    };
}

MetricEstimate to_estimate(const Adaptive &a) { return {a.value, a.error, static_cast<std::uint64_t>(a.evals)}; }

}  // namespace

MetricEstimate integrate(const Fn &f, double a, double b, const QuadSpec &spec) {
    if (a == b) return {0.0, 0.0, 0};
    if (a > b) {
        auto r = integrate(f, b, a, spec);
        r.value = -r.value;
        return r;
    }
    return to_estimate(adapt(f, {a, b}, spec));
}

MetricEstimate integrate_semiinfinite(const Fn &f, const QuadSpec &spec, double scale) {
    LineMap m{0.0, scale};
    auto g = mapped(f, m);
    return to_estimate(adapt(g, {0.0, 0.5, 1.0}, spec));
}

MetricEstimate integrate_real_line(const Fn &f, double center, double scale, const QuadSpec &spec) {
    LineMap m{center, scale};
    auto g = mapped(f, m);
    return to_estimate(adapt(g, {-1.0, -0.5, 0.0, 0.5, 1.0}, spec));
}

NodeRule adapted_real_line_rule(const Fn &f, double center, double scale, const QuadSpec &spec, int split,
                                MetricEstimate *estimate) {
    LineMap m{center, scale};
    auto g = mapped(f, m);
    Adaptive a = adapt(g, {-1.0, -0.5, 0.0, 0.5, 1.0}, spec);
    if (estimate) *estimate = to_estimate(a);
    NodeRule rule;
    split = std::max(split, 1);
    for (const auto &p : a.panels) {
        double w = (p.b - p.a) / split;
        for (int s = 0; s < split; ++s) {
            double pa = p.a + s * w, pb = pa + w;
            double c = 0.5 * (pa + pb), h = 0.5 * (pb - pa);
            auto push = [&](double t, double wt) {
                if (1.0 - std::abs(t) <= 0.0) return;
                rule.x.push_back(m.x(t));
                rule.w.push_back(wt * h * m.jac(t));
            };
            push(c, kWgk[7]);
            for (int j = 0; j < 7; ++j) {
                push(c - h * kXgk[j], kWgk[j]);
                push(c + h * kXgk[j], kWgk[j]);
            }
        }
    }
    return rule;
}

const GaussHermite &gauss_hermite(int nodes) {
    if (nodes < 1 || nodes > 200) throw DomainError("gauss_hermite: nodes must be in [1, 200]");
    static std::mutex mu;
    static std::map<int, GaussHermite> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(nodes);
    if (it != cache.end()) return it->second;
    // Golub-Welsch on the Jacobi matrix of the probabilists' Hermite polynomials.
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(nodes, nodes);
    for (int k = 1; k < nodes; ++k) J(k, k - 1) = J(k - 1, k) = std::sqrt(static_cast<double>(k));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
    GaussHermite gh;
    for (int i = 0; i < nodes; ++i) {
        gh.x.push_back(es.eigenvalues()(i));
        double v = es.eigenvectors()(0, i);
        gh.w.push_back(v * v);
    }
    // Symmetrize to remove eigen-solver round-off.
    for (int i = 0; i < nodes / 2; ++i) {
        int j = nodes - 1 - i;
        double x = 0.5 * (gh.x[j] - gh.x[i]);
        double w = 0.5 * (gh.w[i] + gh.w[j]);
        gh.x[i] = -x;
        gh.x[j] = x;
        gh.w[i] = gh.w[j] = w;
    }
    if (nodes % 2 == 1) gh.x[nodes / 2] = 0.0;
    double sw = 0.0;
    for (double w : gh.w) sw += w;
    for (double &w : gh.w) w /= sw;
    return cache.emplace(nodes, std::move(gh)).first->second;
}

double lognormal_expectation(const Fn &g, double rho, int nodes) {
    if (!(rho >= 0.0)) throw DomainError("lognormal_expectation: rho must be >= 0");
    if (nodes < 4) throw DomainError("lognormal_expectation: nodes must be >= 4");
    if (rho == 0.0) return g(1.0);
    const auto &gh = gauss_hermite(nodes);
    const double sigma = std::numbers::sqrt2 * rho;
    double s = 0.0;
    for (std::size_t i = 0; i < gh.x.size(); ++i) s += gh.w[i] * g(std::exp(sigma * gh.x[i]));
    return s;
}

namespace {
double central_difference(const Fn &f, double x0, int n, double h) {
    double s = 0.0, c = 1.0;  // binomial coefficient
    for (int k = 0; k <= n; ++k) {
        double term = c * f(x0 + (0.5 * n - k) * h);
        s += (k % 2 == 0) ? term : -term;
        c = c * (n - k) / (k + 1);
    }
    return s / std::pow(h, n);
}
}  // namespace

double nth_derivative(const Fn &f, double x0, int n, DerivativeStep step) {
    if (n < 0) throw DomainError("nth_derivative: n must be >= 0");
    if (n == 0) return f(x0);
    double h = std::max(step.rel * std::abs(x0), step.abs);
    double d1 = central_difference(f, x0, n, h);
    double d2 = central_difference(f, x0, n, 0.5 * h);
    return (4.0 * d2 - d1) / 3.0;
}

struct MonotoneCubic::Impl {
    boost::math::interpolators::pchip<std::vector<double>> p;
};

MonotoneCubic::MonotoneCubic(std::vector<double> x, std::vector<double> y) {
    if (x.size() != y.size() || x.size() < 4) throw DomainError("MonotoneCubic needs >= 4 matching points");
    lo_ = x.front();
    hi_ = x.back();
    impl_ = std::make_shared<const Impl>(Impl{boost::math::interpolators::pchip<std::vector<double>>(
        std::move(x), std::move(y))});
}

double MonotoneCubic::operator()(double x) const { return impl_->p(std::clamp(x, lo_, hi_)); }

struct UniformSpline::Impl {
    boost::math::interpolators::cardinal_cubic_b_spline<double> s;
    double lo, hi;
};

UniformSpline::UniformSpline(std::vector<double> y, double x0, double step) {
    if (y.size() < 5) throw DomainError("UniformSpline needs >= 5 points");
    double hi = x0 + step * static_cast<double>(y.size() - 1);
    impl_ = std::make_shared<const Impl>(
        Impl{boost::math::interpolators::cardinal_cubic_b_spline<double>(y.begin(), y.end(), x0, step), x0, hi});
}

double UniformSpline::operator()(double x) const { return impl_->s(std::clamp(x, impl_->lo, impl_->hi)); }

}  // namespace mmhet

// SPDX-License-Identifier: Apache-2.0
#include "mmhet/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <numbers>
#include <optional>

namespace mmhet {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kLnBMin = -32.236;  // ln 1e-14
constexpr double kLnBMax = 4.382;    // ln 80; beyond this e^{-b} terms vanish

// int_0^t 2 r exp(-a r) dr
double q_los(double t, double a) {
    if (a == 0.0) return t * t;
    double x = a * t;
    if (x < 1e-3) return t * t * (1.0 - 2.0 * x / 3.0 + x * x / 4.0 - x * x * x / 15.0);
    return 2.0 / (a * a) * (-std::expm1(-x) - x * std::exp(-x));
}

// int_0^t 2 r (1 - exp(-a r)) dr
double q_nlos(double t, double a) {
    if (a == 0.0) return 0.0;
    double x = a * t;
    if (x < 1e-3) return t * t * (2.0 * x / 3.0 - x * x / 4.0 + x * x * x / 15.0);
    return t * t - q_los(t, a);
}

double softplus(double v) { return v > 0.0 ? v + std::log1p(std::exp(-v)) : std::log1p(std::exp(v)); }

QuadSpec inner_spec(const QuadSpec &q) {
    QuadSpec s = q;
    s.rel_tol = std::min(q.rel_tol * 1e-3, 1e-10);
    s.abs_tol = 1e-300;
    return s;
}

// int_1^inf 2u w / (u^alpha + w) exp(-b u) du, integrated in t = ln u.
double interference_integral(double w, double b, double alpha, const QuadSpec &spec) {
    if (!(w > 0.0)) return 0.0;
    const double lw = std::log(w);
    auto f = [lw, b, alpha](double t) {
        double e = 2.0 * t - softplus(alpha * t - lw);
        if (b > 0.0) e -= b * std::exp(t);
        return 2.0 * std::exp(e);
    };
    double ta = std::max(0.0, lw / alpha);
    double tb = b > 0.0 ? std::max(ta, -std::log(b)) : ta;
    double scale = b > 0.0 ? 1.0 : std::clamp(1.0 / (alpha - 2.0), 0.5, 50.0);
    double v = 0.0;
    if (ta > 0.0) v += integrate(f, 0.0, ta, spec).value;
    if (tb > ta) v += integrate(f, ta, tb, spec).value;
    v += integrate_semiinfinite([&](double u) { return f(tb + u); }, spec, scale).value;
    return v;
}

}  // namespace

// ---------------------------------------------------------------------------

struct LevelPrep {
    double phi = 0.0;
    double phi_err = 0.0;
    std::uint64_t evals = 0;
    std::vector<double> weight;  // rule weight times level density
    std::vector<double> noise;   // noise / mean serving power
    struct Interferer {
        double ratio = 1.0;  // c_k / c_m
        double alpha_l = 4.0, alpha_n = 4.0;
        bool nlos = false;
        bool zero_decay = false;
        std::vector<double> coef_l, lnb_l, coef_n, lnb_n;  // node-major, nodes x hermite
        std::vector<double> sum_l;                          // per node, zero-decay case
        double lo_l = 0, hi_l = 0, lo_n = 0, hi_n = 0;
    };
    std::vector<Interferer> inter;
    std::size_t hermite = 0;
};

struct AnalysisContext::Cache {
    std::mutex mu;
    std::vector<std::unique_ptr<LevelPrep>> level;
    std::vector<std::optional<MonotoneCubic>> grid;
    std::vector<double> unified;  // Lambda^U per tier
};

AnalysisContext::AnalysisContext(Scenario s, AssociationPolicy p, QuadSpec q, AnalysisOptions o)
    : scenario_(validate_scenario(std::move(s))), policy_(std::move(p)), quad_(q), opts_(o),
      cache_(std::make_unique<Cache>()) {
    quad_.validate();
    if (opts_.hermite_nodes < 4) throw DomainError("hermite_nodes must be >= 4");
    if (opts_.rate_grid_points < 8) throw DomainError("rate_grid_points must be >= 8");
    if (!(opts_.table_step > 0.0)) throw DomainError("table_step must be positive");
    auto ta = policy_.resolve(scenario_);
    decay_ = scenario_.blockage.decay();
    for (std::size_t m = 0; m < scenario_.tiers.size(); ++m) {
        const auto &t = scenario_.tiers[m];
        TierModel tm;
        tm.intensity = t.intensity_per_m2;
        tm.power = t.power_w;
        tm.antennas = t.tx_antennas;
        tm.band = t.band;
        tm.log_bias = ta[m].log_bias;
        tm.exponent = ta[m].exponent;
        const auto &band = scenario_.band(t.band);
        tm.log_psi = tm.log_bias - std::log(band.intercept);
        tm.log_c = std::log(t.power_w) - tm.log_bias;
        const auto &pl = scenario_.pathloss(t.band);
        tm.alpha_los = pl.alpha_los;
        tm.alpha_nlos = pl.alpha_nlos;
        tm.sigma_los = std::numbers::sqrt2 * t.los_shadow_rho;
        tm.sigma_nlos = std::numbers::sqrt2 * t.nlos_shadow_rho;
        tm.has_nlos = !scenario_.nlos_suppressed(t.band);
        tm.noise = band.noise_power_w;
        tiers_.push_back(tm);
    }
    for (std::size_t i = 0; i < tiers_.size(); ++i)
        for (std::size_t j = 0; j < tiers_.size(); ++j)
            if (tiers_[i].band == tiers_[j].band && tiers_[i].exponent != tiers_[j].exponent)
                throw DomainError("association exponents must agree within a band");
    cache_->level.resize(tiers_.size());
    cache_->grid.resize(tiers_.size());
}

AnalysisContext::~AnalysisContext() = default;
AnalysisContext::AnalysisContext(AnalysisContext &&) noexcept = default;

namespace {

// A_k at ln y: E[Q_los(tbar)] + E[Q_nlos(ttilde)].
double area_log(const TierModel &t, double ln_y, double a, const GaussHermite &gh) {
    if (t.intensity == 0.0) return 0.0;
    if (a == 0.0) {
        double k = 2.0 / t.alpha_los;
        return std::exp(k * (t.log_psi - ln_y) + 0.5 * k * k * t.sigma_los * t.sigma_los);
    }
    if (std::isinf(a)) {
        if (!t.has_nlos) return 0.0;
        double k = 2.0 / t.alpha_nlos;
        return std::exp(k * (t.log_psi - ln_y) + 0.5 * k * k * t.sigma_nlos * t.sigma_nlos);
    }
    double s = 0.0;
    for (std::size_t i = 0; i < gh.x.size(); ++i) {
        double tl = std::exp((t.log_psi + t.sigma_los * gh.x[i] - ln_y) / t.alpha_los);
        double v = q_los(tl, a);
        if (t.has_nlos) {
            double tn = std::exp((t.log_psi + t.sigma_nlos * gh.x[i] - ln_y) / t.alpha_nlos);
            v += q_nlos(tn, a);
        }
        s += gh.w[i] * v;
    }
    return s;
}

// -dA/d(ln y)
double area_density_log(const TierModel &t, double ln_y, double a, const GaussHermite &gh) {
    if (t.intensity == 0.0) return 0.0;
    if (a == 0.0) {
        double k = 2.0 / t.alpha_los;
        return k * std::exp(k * (t.log_psi - ln_y) + 0.5 * k * k * t.sigma_los * t.sigma_los);
    }
    if (std::isinf(a)) {
        if (!t.has_nlos) return 0.0;
        double k = 2.0 / t.alpha_nlos;
        return k * std::exp(k * (t.log_psi - ln_y) + 0.5 * k * k * t.sigma_nlos * t.sigma_nlos);
    }
    double s = 0.0;
    for (std::size_t i = 0; i < gh.x.size(); ++i) {
        double tl = std::exp((t.log_psi + t.sigma_los * gh.x[i] - ln_y) / t.alpha_los);
        double v = 2.0 / t.alpha_los * tl * tl * std::exp(-a * tl);
        if (t.has_nlos) {
            double tn = std::exp((t.log_psi + t.sigma_nlos * gh.x[i] - ln_y) / t.alpha_nlos);
            v += 2.0 / t.alpha_nlos * tn * tn * -std::expm1(-a * tn);
        }
        s += gh.w[i] * v;
    }
    return s;
}

double tail_at(double z, const AnalysisContext &ctx, const GaussHermite &gh) {
    double s = 0.0;
    for (const auto &t : ctx.tiers())
        if (t.intensity > 0.0) s += t.intensity * area_log(t, z / t.exponent, ctx.decay(), gh);
    return kPi * s;
}

// Level where pi lambda A(y) crosses min(1, sup / 2).
double level_center(const TierModel &t, double a, const GaussHermite &gh) {
    double sup = (t.has_nlos || a == 0.0) ? std::numeric_limits<double>::infinity()
                                          : kPi * t.intensity * 2.0 / (a * a);
    double target = std::min(1.0, 0.5 * sup);
    double z0 = t.log_psi + 0.5 * t.alpha_los * std::log(kPi * t.intensity);
    double lo = z0 - 400.0, hi = z0 + 400.0;
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        if (kPi * t.intensity * area_log(t, mid, a, gh) > target) lo = mid; else hi = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

double a_m(double x, std::size_t m, const AnalysisContext &ctx) {
    if (!(x > 0.0)) throw DomainError("a_m: x must be positive");
    TierModel t = ctx.tiers().at(m);
    if (t.intensity == 0.0) t.intensity = 1.0;  // A is per unit intensity
    return area_log(t, std::log(x), ctx.decay(), gauss_hermite(ctx.options().hermite_nodes));
}

double association_tail(double z, const AnalysisContext &ctx) {
    return tail_at(z, ctx, gauss_hermite(ctx.options().hermite_nodes));
}

double best_assoc_cdf(double x, const AnalysisContext &ctx) {
    if (!(x > 0.0)) throw DomainError("best_assoc_cdf: x must be positive");
    return std::exp(-association_tail(std::log(x), ctx));
}

double best_assoc_quantile(double p, const AnalysisContext &ctx) {
    if (!(p > 0.0 && p < 1.0)) throw DomainError("best_assoc_quantile: p must lie in (0, 1)");
    const double target = -std::log(p);
    const auto &gh = gauss_hermite(ctx.options().hermite_nodes);
    // The tail falls from +inf to its floor as the level rises.
    double lo = -50.0, hi = 50.0;
    while (tail_at(lo, ctx, gh) < target && lo > -1e4) lo *= 2.0;
    while (tail_at(hi, ctx, gh) > target && hi < 1e4) hi *= 2.0;
    if (tail_at(hi, ctx, gh) > target || tail_at(lo, ctx, gh) < target)
        throw DomainError("best_assoc_quantile: level outside the representable range");
    for (int it = 0; it < 200 && hi - lo > 1e-12 * std::max(1.0, std::abs(lo)); ++it) {
        double mid = 0.5 * (lo + hi);
        if (tail_at(mid, ctx, gh) > target) lo = mid; else hi = mid;
    }
    return std::exp(0.5 * (lo + hi));
}

double hole_probability(const AnalysisContext &ctx) {
    double a = ctx.decay();
    double s = 0.0;
    for (const auto &t : ctx.tiers()) {
        if (t.intensity == 0.0) continue;
        if (t.has_nlos || a == 0.0) return 0.0;
        if (std::isinf(a)) continue;
        s += t.intensity * 2.0 / (a * a);
    }
    return std::exp(-kPi * s);
}

static const LevelPrep &level_prep(const AnalysisContext &ctx, std::size_t m,
                                   std::vector<std::unique_ptr<LevelPrep>> &slots, std::mutex &mu);

double AnalysisContext::phi(std::size_t m) const { return level_prep(*this, m, cache_->level, cache_->mu).phi; }

double AnalysisContext::phi_error() const {
    double e = 0.0;
    for (std::size_t m = 0; m < tiers_.size(); ++m) e += level_prep(*this, m, cache_->level, cache_->mu).phi_err;
    return e;
}

std::uint64_t AnalysisContext::evaluations() const {
    std::uint64_t n = 0;
    for (std::size_t m = 0; m < tiers_.size(); ++m) n += level_prep(*this, m, cache_->level, cache_->mu).evals;
    return n;
}

void AnalysisContext::precompute() const {
    for (std::size_t m = 0; m < tiers_.size(); ++m) level_prep(*this, m, cache_->level, cache_->mu);
}

static const LevelPrep &level_prep(const AnalysisContext &ctx, std::size_t m,
                                   std::vector<std::unique_ptr<LevelPrep>> &slots, std::mutex &mu) {
    std::lock_guard<std::mutex> lock(mu);
    if (slots.at(m)) return *slots[m];
    auto prep = std::make_unique<LevelPrep>();
    const auto &tiers = ctx.tiers();
    const TierModel &tm = tiers[m];
    const double a = ctx.decay();
    const auto &gh = gauss_hermite(ctx.options().hermite_nodes);
    prep->hermite = gh.x.size();
    if (tm.intensity == 0.0) {
        slots[m] = std::move(prep);
        return *slots[m];
    }
    // Serving level density in zeta = ln y_m times P[no better candidate].
    auto density = [&](double zeta) {
        double tail = tail_at(tm.exponent * zeta, ctx, gh);
        if (!(tail < 745.0)) return 0.0;
        double f = kPi * tm.intensity * area_density_log(tm, zeta, a, gh);
        if (f == 0.0 || !std::isfinite(f)) return 0.0;
        return f * std::exp(-tail);
    };
    double center = level_center(tm, a, gh);
    double scale = std::sqrt(std::pow(0.6 * tm.alpha_los, 2) + tm.sigma_los * tm.sigma_los) + 1.0;
    MetricEstimate est;
    NodeRule rule = adapted_real_line_rule(density, center, scale, ctx.quad().tightened(0.1),
                                           ctx.options().level_rule_split, &est);
    prep->phi_err = est.error;
    prep->evals = est.count;
    std::vector<double> nodes;
    for (std::size_t j = 0; j < rule.x.size(); ++j) {
        double zeta = rule.x[j];
        double w = rule.w[j] * density(zeta);
        if (!(w > 0.0)) continue;
        nodes.push_back(zeta);
        prep->weight.push_back(w);
        prep->noise.push_back(tm.noise > 0.0 ? tm.noise * std::exp(-tm.log_c - zeta) : 0.0);
        prep->phi += w;
    }
    rule.x = std::move(nodes);
    const std::size_t n = rule.x.size();
    const std::size_t G = gh.x.size();
    for (std::size_t k = 0; k < tiers.size(); ++k) {
        const TierModel &tk = tiers[k];
        if (tk.band != tm.band || tk.intensity == 0.0) continue;
        LevelPrep::Interferer it;
        it.ratio = std::exp(tk.log_c - tm.log_c);
        it.alpha_l = tk.alpha_los;
        it.alpha_n = tk.alpha_nlos;
        it.zero_decay = (a == 0.0);
        it.nlos = tk.has_nlos && a > 0.0;
        const bool all_nlos = std::isinf(a);
        double lo_l = kLnBMax, hi_l = kLnBMin, lo_n = kLnBMax, hi_n = kLnBMin;
        for (std::size_t j = 0; j < n; ++j) {
            double zeta = rule.x[j];
            double sum = 0.0;
            for (std::size_t g = 0; g < G; ++g) {
                double tl = std::exp((tk.log_psi + tk.sigma_los * gh.x[g] - zeta) / tk.alpha_los);
                double cl = all_nlos ? 0.0 : kPi * tk.intensity * gh.w[g] * tl * tl;
                if (it.zero_decay) {
                    sum += cl;
                } else {
                    double lb = std::log(a * tl);
                    it.coef_l.push_back(cl);
                    it.lnb_l.push_back(lb);
                    if (cl > 0.0) {
                        lo_l = std::min(lo_l, lb);
                        hi_l = std::max(hi_l, lb);
                    }
                }
                if (it.nlos) {
                    double tn = std::exp((tk.log_psi + tk.sigma_nlos * gh.x[g] - zeta) / tk.alpha_nlos);
                    double lb = all_nlos ? std::numeric_limits<double>::infinity() : std::log(a * tn);
                    it.coef_n.push_back(kPi * tk.intensity * gh.w[g] * tn * tn);
                    it.lnb_n.push_back(lb);
                    if (std::isfinite(lb)) {
                        lo_n = std::min(lo_n, lb);
                        hi_n = std::max(hi_n, lb);
                    }
                }
            }
            if (it.zero_decay) it.sum_l.push_back(sum);
        }
        auto clampr = [](double &lo, double &hi) {
            lo = std::max(lo, kLnBMin);
            hi = std::min(hi, kLnBMax);
        };
        clampr(lo_l, hi_l);
        clampr(lo_n, hi_n);
        it.lo_l = lo_l;
        it.hi_l = hi_l;
        it.lo_n = lo_n;
        it.hi_n = hi_n;
        prep->inter.push_back(std::move(it));
    }
    slots[m] = std::move(prep);
    return *slots[m];
}

namespace {

// I(w, e^lnb, alpha) tabulated on [lo, hi]; outside: clamp below, zero above.
struct Table {
    bool empty = true;
    double lo = 0, hi = 0;
    UniformSpline spline;
    double edge = 0.0;  // value at lo when the range collapses
    double operator()(double lb) const {
        if (lb > kLnBMax) return 0.0;
        if (empty) return 0.0;
        if (hi <= lo) return edge;
        return spline(std::clamp(lb, lo, hi));
    }
};

Table make_table(double w, double alpha, double lo, double hi, double step, const QuadSpec &spec) {
    Table t;
    if (lo > hi) return t;  // no entries inside the range
    t.empty = false;
    t.lo = lo;
    t.hi = hi;
    if (hi - lo < step) {
        t.hi = t.lo;
        t.edge = interference_integral(w, std::exp(lo), alpha, spec);
        return t;
    }
    // Pad so the spline's end conditions sit outside the used range.
    const int pad = 3;
    int n = static_cast<int>(std::ceil((hi - lo) / step)) + 1;
    double h = (hi - lo) / (n - 1);
    std::vector<double> y;
    y.reserve(n + 2 * pad);
    for (int i = -pad; i < n + pad; ++i) y.push_back(interference_integral(w, std::exp(lo + i * h), alpha, spec));
    t.spline = UniformSpline(std::move(y), lo - pad * h, h);
    return t;
}

}  // namespace

double AnalysisContext::kernel(std::size_t m, double s) const {
    const LevelPrep &p = level_prep(*this, m, cache_->level, cache_->mu);
    if (p.phi == 0.0) throw DomainError("kernel: tier has zero association probability");
    if (!(s >= 0.0)) throw DomainError("kernel: s must be >= 0");
    if (s == 0.0) return 1.0;
    const QuadSpec spec = inner_spec(quad_);
    const std::size_t n = p.weight.size();
    std::vector<double> expo(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) expo[j] = s * p.noise[j];
    for (const auto &it : p.inter) {
        const double w = s * it.ratio;
        if (it.zero_decay) {
            double i0 = interference_integral(w, 0.0, it.alpha_l, spec);
            for (std::size_t j = 0; j < n; ++j) expo[j] += i0 * it.sum_l[j];
            continue;
        }
        const std::size_t G = p.hermite;
        if (!it.coef_l.empty()) {
            Table tl = make_table(w, it.alpha_l, it.lo_l, it.hi_l, opts_.table_step, spec);
            for (std::size_t j = 0; j < n; ++j) {
                double acc = 0.0;
                for (std::size_t g = 0; g < G; ++g) {
                    double c = it.coef_l[j * G + g];
                    if (c > 0.0) acc += c * tl(it.lnb_l[j * G + g]);
                }
                expo[j] += acc;
            }
        }
        if (it.nlos) {
            double i0 = interference_integral(w, 0.0, it.alpha_n, spec);
            Table tn = make_table(w, it.alpha_n, it.lo_n, it.hi_n, opts_.table_step, spec);
            for (std::size_t j = 0; j < n; ++j) {
                double acc = 0.0;
                for (std::size_t g = 0; g < G; ++g) {
                    double lb = it.lnb_n[j * G + g];
                    double v = std::isfinite(lb) ? i0 - tn(lb) : i0;
                    acc += it.coef_n[j * G + g] * v;
                }
                expo[j] += acc;
            }
        }
    }
    double sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) sum += p.weight[j] * std::exp(-expo[j]);
    return sum / p.phi;
}

double AnalysisContext::kernel_interpolated(std::size_t m, double s) const {
    {
        std::lock_guard<std::mutex> lock(cache_->mu);
        if (cache_->grid.at(m)) return (*cache_->grid[m])(std::log(s));
    }
    const int n = opts_.rate_grid_points;
    const double u0 = std::log(opts_.rate_s_min), u1 = std::log(opts_.rate_s_max);
    std::vector<double> u(n), k(n);
    for (int i = 0; i < n; ++i) {
        u[i] = u0 + (u1 - u0) * i / (n - 1);
        k[i] = kernel(m, std::exp(u[i]));
    }
    // Enforce monotone data against round-off.
    for (int i = 1; i < n; ++i) k[i] = std::min(k[i], k[i - 1]);
    MonotoneCubic mc(std::move(u), std::move(k));
    std::lock_guard<std::mutex> lock(cache_->mu);
    if (!cache_->grid[m]) cache_->grid[m] = std::move(mc);
    return (*cache_->grid[m])(std::log(s));
}

double tier_assoc_prob(std::size_t m, const AnalysisContext &ctx) { return ctx.phi(m); }

double serving_distance_cdf(double x, const AnalysisContext &ctx) {
    for (const auto &t : ctx.tiers())
        if (t.intensity > 0.0 && (t.sigma_los != 0.0 || t.sigma_nlos != 0.0))
            throw DomainError("serving_distance_cdf requires deterministic shadowing (rho = 0)");
    if (!(x >= 0.0)) throw DomainError("serving_distance_cdf: x must be >= 0");
    if (x == 0.0) return 0.0;
    const double a = ctx.decay();
    const auto &gh = gauss_hermite(ctx.options().hermite_nodes);
    double lam = 0.0;
    for (const auto &t : ctx.tiers()) lam += t.intensity;
    if (lam == 0.0) return 0.0;
    auto f = [&](double r) {
        if (r <= 0.0) return 0.0;
        double v = 0.0;
        for (const auto &t : ctx.tiers()) {
            if (t.intensity == 0.0) continue;
            double pl = std::isinf(a) ? 0.0 : std::exp(-a * r);
            double zl = t.exponent * (t.log_psi - t.alpha_los * std::log(r));
            double s = pl * std::exp(-tail_at(zl, ctx, gh));
            if (t.has_nlos && pl < 1.0) {
                double zn = t.exponent * (t.log_psi - t.alpha_nlos * std::log(r));
                s += (1.0 - pl) * std::exp(-tail_at(zn, ctx, gh));
            }
            v += 2.0 * kPi * t.intensity * r * s;
        }
        return v;
    };
    double scale = 1.0 / std::sqrt(kPi * lam);
    if (x > 50.0 * scale) return integrate_semiinfinite(f, ctx.quad(), scale).value -
                                 integrate_semiinfinite([&](double u) { return f(x + u); }, ctx.quad(), scale).value;
    return integrate(f, 0.0, x, ctx.quad()).value;
}

// ---------------------------------------------------------------------------
// Normalized-distance intensity form.

double lambda_intensity(std::size_t k, double q, double s, double r, const AnalysisContext &ctx) {
    const TierModel &t = ctx.tiers().at(k);
    const double a = ctx.decay();
    const double pl = std::isinf(a) ? 0.0 : std::exp(-a * r);
    const double inv_c = std::exp(-t.log_c);  // omega' / P
    auto term = [&](double alpha, double sigma) {
        double k2 = 2.0 / alpha;
        double mass = std::exp(k2 * t.log_psi + 0.5 * k2 * k2 * sigma * sigma);
        double qa = q == 0.0 ? 0.0 : std::pow(q, alpha);
        return mass / (qa * s * inv_c + 1.0);
    };
    double v = term(t.alpha_los, t.sigma_los) * pl;
    if (t.has_nlos) v += term(t.alpha_nlos, t.sigma_nlos) * (1.0 - pl);
    return t.intensity * v;
}

namespace {

// int_0^x Lambda(0,0,r) r dr in closed form.
double lambda_mass(double x, const AnalysisContext &ctx) {
    const double a = std::isinf(ctx.decay()) ? 1e300 : ctx.decay();
    double v = 0.0;
    for (const auto &t : ctx.tiers()) {
        if (t.intensity == 0.0) continue;
        double kl = 2.0 / t.alpha_los;
        double ml = std::exp(kl * t.log_psi + 0.5 * kl * kl * t.sigma_los * t.sigma_los);
        v += t.intensity * ml * 0.5 * q_los(x, a);
        if (t.has_nlos) {
            double kn = 2.0 / t.alpha_nlos;
            double mn = std::exp(kn * t.log_psi + 0.5 * kn * kn * t.sigma_nlos * t.sigma_nlos);
            v += t.intensity * mn * 0.5 * q_nlos(x, a);
        }
    }
    return v;
}

double lambda_total(double r, const AnalysisContext &ctx) {
    double v = 0.0;
    for (std::size_t k = 0; k < ctx.tiers().size(); ++k) v += lambda_intensity(k, 0.0, 0.0, r, ctx);
    return v;
}

double lambda_form(double theta, std::size_t m, bool mmwave, const AnalysisContext &ctx) {
    if (!(theta > 0.0)) throw DomainError("theta must be positive");
    const auto &tiers = ctx.tiers();
    const TierModel &tm = tiers[m];
    const QuadSpec outer = ctx.quad();
    const QuadSpec inner = ctx.quad().tightened(0.1);
    const double s = std::exp(tm.log_c) / theta;  // P_m / (theta omega'_m)
    double lam = 0.0;
    for (const auto &t : tiers) lam += t.intensity * std::exp(2.0 / t.alpha_los * t.log_psi);
    const double scale = lam > 0.0 ? 1.0 / std::sqrt(kPi * lam) : 1.0;
    const double a = ctx.decay();
    auto f = [&](double x) {
        if (x <= 0.0) return 0.0;
        double lt = lambda_total(x, ctx);
        if (lt == 0.0) return 0.0;
        double interf = 0.0;
        for (std::size_t k = 0; k < tiers.size(); ++k) {
            if (tiers[k].band != tm.band || tiers[k].intensity == 0.0) continue;
            interf += integrate_semiinfinite(
                          [&](double u) {
                              double r = x + u;
                              return lambda_intensity(k, r / x, s, r, ctx) * r;
                          },
                          inner, x)
                          .value;
        }
        double e = 2.0 * kPi * (interf + lambda_mass(x, ctx));
        if (mmwave && tm.noise > 0.0) {
            double pl = std::isinf(a) ? 0.0 : std::exp(-a * x);
            double mix = tm.has_nlos ? pl * std::pow(x, tm.alpha_los) + (1.0 - pl) * std::pow(x, tm.alpha_nlos)
                                     : std::pow(x, tm.alpha_los);
            e += theta * tm.noise * std::exp(-tm.log_c) / tm.antennas * mix;
        }
        return 2.0 * kPi * x * lt * std::exp(-e);
    };
    return integrate_semiinfinite(f, outer, scale).value;
}

}  // namespace

double b_m_lambda_form(double theta, std::size_t m, const AnalysisContext &ctx) {
    if (m >= ctx.mmwave_index()) throw DomainError("b_m: tier must be a UHF tier");
    return lambda_form(theta, m, false, ctx);
}

double b_M_lambda_form(double theta, const AnalysisContext &ctx) {
    return lambda_form(theta, ctx.mmwave_index(), true, ctx);
}

// ---------------------------------------------------------------------------

double b_m(double theta, std::size_t m, const AnalysisContext &ctx) {
    if (m >= ctx.mmwave_index()) throw DomainError("b_m: tier must be a UHF tier");
    if (!(theta > 0.0)) throw DomainError("theta must be positive");
    return ctx.kernel(m, theta);
}

double b_M(double theta, const AnalysisContext &ctx) {
    if (!(theta > 0.0)) throw DomainError("theta must be positive");
    std::size_t M = ctx.mmwave_index();
    return ctx.kernel(M, theta / ctx.tiers()[M].antennas);
}

namespace {

double fade_scale(const AnalysisContext &ctx) {
    return ctx.scenario().uhf_fading == FadingConvention::Chi2TwoT ? 2.0 : 1.0;
}

// sum_{n<T} (-x)^n / n! d^n f(x) at x
double gamma_series(const Fn &f, double x, int T, double rel_step) {
    if (T > 7) throw DomainError("antenna counts above 7 are not supported by the analysis engine");
    double sum = 0.0, fact = 1.0;
    for (int n = 0; n < T; ++n) {
        if (n > 0) fact *= n;
        double d = nth_derivative(f, x, n, {rel_step, 1e-12});
        sum += std::pow(-x, n) / fact * d;
    }
    return sum;
}

double coverage_sum(double theta, const AnalysisContext &ctx, const std::vector<double> &phi,
                    const std::function<double(std::size_t, double)> &kernel_m,
                    const std::function<double(double)> &kernel_M) {
    if (!(theta > 0.0)) throw DomainError("theta must be positive");
    const auto &tiers = ctx.tiers();
    const std::size_t M = ctx.mmwave_index();
    const double kappa = fade_scale(ctx);
    double p = 0.0;
    for (std::size_t m = 0; m < M; ++m) {
        if (phi[m] == 0.0) continue;
        Fn f = [&, m](double x) { return kernel_m(m, x); };
        p += phi[m] * gamma_series(f, theta / kappa, tiers[m].antennas, ctx.options().derivative_rel_step);
    }
    if (phi[M] > 0.0) p += phi[M] * kernel_M(theta);
    return p;
}

}  // namespace

double coverage_probability(double theta, const AnalysisContext &ctx) {
    std::vector<double> phi;
    for (std::size_t m = 0; m < ctx.tiers().size(); ++m) phi.push_back(ctx.phi(m));
    const std::size_t M = ctx.mmwave_index();
    return coverage_sum(
        theta, ctx, phi, [&](std::size_t m, double x) { return ctx.kernel(m, x); },
        [&](double th) { return ctx.kernel(M, th / ctx.tiers()[M].antennas); });
}

double coverage_probability_lambda_form(double theta, const AnalysisContext &ctx) {
    std::vector<double> phi;
    for (std::size_t m = 0; m < ctx.tiers().size(); ++m) phi.push_back(ctx.phi(m));
    return coverage_sum(
        theta, ctx, phi, [&](std::size_t m, double x) { return lambda_form(x, m, false, ctx); },
        [&](double th) { return lambda_form(th, ctx.mmwave_index(), true, ctx); });
}

// ---------------------------------------------------------------------------
// Unified UHF channel with a LOS ball for mmWave.

namespace {

std::vector<double> unified_masses(const AnalysisContext &ctx) {
    const auto &sc = ctx.scenario();
    if (!sc.unified_uhf) throw DomainError("unified analysis requires unified_uhf");
    const auto &u = *sc.unified_uhf;
    const double am = u.alpha_mu;
    std::vector<double> out;
    for (const auto &t : ctx.tiers()) {
        double k = 2.0 / am;
        if (t.band == Band::Uhf) {
            double sig = std::numbers::sqrt2 * u.rho_mu;
            out.push_back(t.intensity * std::exp(k * t.log_psi + 0.5 * k * k * sig * sig));
        } else {
            double dec = std::isinf(ctx.decay()) ? std::numeric_limits<double>::infinity() : ctx.decay() * u.d_los_m;
            out.push_back(t.intensity * std::exp(k * t.log_psi + 0.5 * k * k * t.sigma_los * t.sigma_los - dec));
        }
    }
    return out;
}

}  // namespace

double unified_phi(std::size_t m, const AnalysisContext &ctx) {
    auto mass = unified_masses(ctx);
    double tot = 0.0;
    for (double v : mass) tot += v;
    if (tot == 0.0) return 0.0;
    return mass.at(m) / tot;
}

double unified_b_m(double theta, std::size_t m, const AnalysisContext &ctx) {
    if (m >= ctx.mmwave_index()) throw DomainError("unified_b_m: tier must be a UHF tier");
    if (!(theta > 0.0)) throw DomainError("theta must be positive");
    const auto &tiers = ctx.tiers();
    const double am = ctx.scenario().unified_uhf->alpha_mu;
    const QuadSpec spec = inner_spec(ctx.quad());
    double bracket = 1.0;
    for (std::size_t k = 0; k < ctx.mmwave_index(); ++k) {
        double ph = unified_phi(k, ctx);
        if (ph == 0.0) continue;
        double c = theta * std::exp(tiers[k].log_c - tiers[m].log_c);
        bracket += ph * interference_integral(c, 0.0, am, spec);
    }
    return 1.0 / bracket;
}

double unified_b_M(double theta, const AnalysisContext &ctx) {
    if (!(theta > 0.0)) throw DomainError("theta must be positive");
    auto mass = unified_masses(ctx);
    const std::size_t M = ctx.mmwave_index();
    double lam = 0.0;
    for (double v : mass) lam += v;
    if (lam == 0.0) return 0.0;
    const TierModel &tm = ctx.tiers()[M];
    const double am = ctx.scenario().unified_uhf->alpha_mu;
    const double rho = interference_integral(theta, 0.0, am, inner_spec(ctx.quad()));
    const double a = std::isinf(ctx.decay()) ? 0.0 : ctx.decay();
    const double noise = theta * tm.noise * std::exp(-tm.log_c) / tm.antennas;
    auto f = [&](double x) {
        double e = kPi * lam * x * x + kPi * mass[M] * x * x * rho;
        if (noise > 0.0) e += noise * std::pow(x, am) * std::exp(-a * x);
        return 2.0 * kPi * lam * x * std::exp(-e);
    };
    return integrate_semiinfinite(f, ctx.quad(), 1.0 / std::sqrt(kPi * lam)).value;
}

double unified_coverage(double theta, const AnalysisContext &ctx) {
    std::vector<double> phi;
    for (std::size_t m = 0; m < ctx.tiers().size(); ++m) phi.push_back(unified_phi(m, ctx));
    return coverage_sum(
        theta, ctx, phi, [&](std::size_t m, double x) { return unified_b_m(x, m, ctx); },
        [&](double th) { return unified_b_M(th, ctx); });
}

// ---------------------------------------------------------------------------

RateBreakdown link_rate(const AnalysisContext &ctx) {
    const auto &tiers = ctx.tiers();
    const std::size_t M = ctx.mmwave_index();
    const auto &opts = ctx.options();
    const double kappa = fade_scale(ctx);
    RateBreakdown out;
    out.per_tier.assign(tiers.size(), 0.0);
    const double u0 = std::log(opts.rate_s_min), u1 = std::log(opts.rate_s_max);
    for (std::size_t m = 0; m < tiers.size(); ++m) {
        double ph = ctx.phi(m);
        out.phi.push_back(ph);
        if (ph == 0.0) continue;
        const int T = tiers[m].antennas;
        // 1 - Laplace transform of the serving fade.
        auto one_minus = [&](double s) {
            if (m == M) return T * s / (1.0 + T * s);
            return -std::expm1(-T * std::log1p(kappa * s));
        };
        double body = integrate([&](double u) {
                                    double s = std::exp(u);
                                    return one_minus(s) * ctx.kernel_interpolated(m, s);
                                },
                                u0, u1, ctx.quad())
                          .value;
        // Below s_min the kernel is 1 to first order.
        double head = integrate([&](double s) { return s > 0.0 ? one_minus(s) / s : (m == M ? T : kappa * T); },
                                0.0, opts.rate_s_min, ctx.quad())
                          .value;
        // Power-law tail of the kernel beyond s_max.
        double k1 = ctx.kernel_interpolated(m, opts.rate_s_max);
        double uprev = u1 - (u1 - u0) / (opts.rate_grid_points - 1);
        double k0 = ctx.kernel_interpolated(m, std::exp(uprev));
        double tail = 0.0;
        if (k1 > 0.0 && k0 > k1) {
            double delta = std::log(k0 / k1) / (u1 - uprev);
            tail = k1 / std::max(delta, 1e-3);
        }
        const double W = ctx.scenario().band(tiers[m].band).bandwidth_hz;
        out.per_tier[m] = W * (head + body + tail);
        out.total += ph * out.per_tier[m];
    }
    return out;
}

double coa_coverage(double theta, const Scenario &s, const QuadSpec &q) {
    return coverage_probability(theta, AnalysisContext(s, AssociationPolicy::coa(), q));
}
RateBreakdown coa_rate(const Scenario &s, const QuadSpec &q) {
    return link_rate(AnalysisContext(s, AssociationPolicy::coa(), q));
}
double roa_coverage(double theta, const Scenario &s, const QuadSpec &q) {
    return coverage_probability(theta, AnalysisContext(s, AssociationPolicy::roa(), q));
}
RateBreakdown roa_rate(const Scenario &s, const QuadSpec &q) {
    return link_rate(AnalysisContext(s, AssociationPolicy::roa(), q));
}

}  // namespace mmhet

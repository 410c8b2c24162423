// SPDX-License-Identifier: Apache-2.0
#include "mmhet/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "mmhet/channel.hpp"
#include "mmhet/geometry.hpp"

namespace mmhet {

namespace {

// Substream ids: positions, marks and fades per tier, plus the serving fade.
enum : std::uint64_t { kPos = 1, kMarks = 2, kFade = 3, kServing = 1000 };
std::uint64_t sub(std::uint64_t kind, std::size_t tier) { return kind + 8 * static_cast<std::uint64_t>(tier); }

struct Workspace {
    std::vector<PolarPoint> pts;
    std::vector<std::vector<double>> ln_rx;   // ln(P G / L) per tier and point
    std::vector<std::vector<double>> metric;
    std::vector<std::vector<double>> dist;
};

struct Resolved {
    std::vector<TierAssoc> assoc;
    std::vector<double> ln_nu;
};

TrialResult trial_impl(const Scenario &s, const Resolved &res, double theta, std::uint64_t seed,
                       std::uint64_t idx, Workspace &ws) {
    const std::size_t K = s.tiers.size();
    ws.ln_rx.resize(K);
    ws.metric.resize(K);
    ws.dist.resize(K);
    TrialResult out;
    int best_t = -1, best_i = -1;
    double best_m = 0.0, best_d = 0.0;
    for (std::size_t k = 0; k < K; ++k) {
        const auto &t = s.tiers[k];
        auto &lr = ws.ln_rx[k];
        auto &mt = ws.metric[k];
        auto &ds = ws.dist[k];
        lr.clear();
        mt.clear();
        ds.clear();
        if (t.intensity_per_m2 <= 0.0) continue;
        RngStream pos(seed, idx, sub(kPos, k));
        RngStream marks(seed, idx, sub(kMarks, k));
        const bool suppressed = s.nlos_suppressed(t.band);
        if (suppressed)
            sample_los_ppp(t.intensity_per_m2, s.window_radius_m, s.blockage, pos, ws.pts);
        else
            sample_ppp(t.intensity_per_m2, s.window_radius_m, pos, ws.pts);
        const auto &pl = s.pathloss(t.band);
        const double ln_p = std::log(t.power_w);
        const double sig_l = shadow_sigma(t, true), sig_n = shadow_sigma(t, false);
        const TierAssoc ta = res.assoc[k];
        for (std::size_t i = 0; i < ws.pts.size(); ++i) {
            double r = ws.pts[i].distance_m;
            bool los = suppressed ? true : sample_los(r, s.blockage, marks);
            double sig = los ? sig_l : sig_n;
            double ln_g = sig == 0.0 ? 0.0 : sig * marks.normal();
            double ln_gain = ln_g - res.ln_nu[k] - (los ? pl.alpha_los : pl.alpha_nlos) * std::log(r);
            double m = ta.exponent * (ta.log_bias + ln_gain);
            lr.push_back(ln_p + ln_gain);
            mt.push_back(m);
            ds.push_back(r);
            if (best_t < 0 || better_candidate(m, r, static_cast<int>(k), best_m, best_d, best_t)) {
                best_t = static_cast<int>(k);
                best_i = static_cast<int>(i);
                best_m = m;
                best_d = r;
            }
        }
    }
    if (best_t < 0) return out;
    out.serving_tier = best_t;
    out.serving_slot = best_i;
    out.best_metric = best_m;
    const auto &st = s.tiers[best_t];
    RngStream serv(seed, idx, kServing);
    double h = sample_serving_fade(st.band, st.tx_antennas, s.uhf_fading, serv);
    double signal = h * std::exp(ws.ln_rx[best_t][best_i]);
    double interference = 0.0;
    for (std::size_t k = 0; k < K; ++k) {
        if (s.tiers[k].band != st.band || ws.ln_rx[k].empty()) continue;
        RngStream fade(seed, idx, sub(kFade, k));
        const auto &lr = ws.ln_rx[k];
        for (std::size_t i = 0; i < lr.size(); ++i) {
            double hi = sample_interf_fade(fade);
            if (static_cast<int>(k) == best_t && static_cast<int>(i) == best_i) continue;
            interference += hi * std::exp(lr[i]);
        }
    }
    double noise = st.band == Band::MmWave ? s.mmwave_band.noise_power_w : 0.0;
    double denom = interference + noise;
    out.sinr = denom > 0.0 ? signal / denom : std::numeric_limits<double>::infinity();
    out.covered = out.sinr >= theta;
    out.rate_nats = s.band(st.band).bandwidth_hz * std::log1p(out.sinr);
    return out;
}

Resolved resolve(const Scenario &s, const AssociationPolicy &p) {
    Resolved r;
    r.assoc = p.resolve(s);
    for (const auto &t : s.tiers) r.ln_nu.push_back(std::log(s.band(t.band).intercept));
    return r;
}

}  // namespace

TrialResult run_trial(const Scenario &s, const AssociationPolicy &policy, double theta, std::uint64_t seed,
                      std::uint64_t trial_index) {
    Workspace ws;
    return trial_impl(s, resolve(s, policy), theta, seed, trial_index, ws);
}

std::vector<TrialResult> run_trials(const Scenario &s, const AssociationPolicy &policy, double theta,
                                    std::int64_t trials, std::uint64_t seed, int threads) {
    if (trials < 1) throw DomainError("trials must be >= 1");
    const Resolved res = resolve(s, policy);
    std::vector<TrialResult> out(static_cast<std::size_t>(trials));
    unsigned n = threads > 0 ? static_cast<unsigned>(threads) : std::max(1u, std::thread::hardware_concurrency());
    n = std::min<unsigned>(n, static_cast<unsigned>(trials));
    std::atomic<std::int64_t> next{0};
    constexpr std::int64_t chunk = 256;
    auto worker = [&] {
        Workspace ws;
        for (;;) {
            std::int64_t b = next.fetch_add(chunk);
            if (b >= trials) break;
            std::int64_t e = std::min(trials, b + chunk);
            for (std::int64_t i = b; i < e; ++i)
                out[i] = trial_impl(s, res, theta, seed, static_cast<std::uint64_t>(i), ws);
        }
    };
    if (n <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned i = 0; i < n; ++i) pool.emplace_back(worker);
        for (auto &t : pool) t.join();
    }
    return out;
}

namespace {
MetricEstimate proportion(std::uint64_t hits, std::uint64_t n) {
    double p = n ? static_cast<double>(hits) / n : 0.0;
    return {p, n ? std::sqrt(p * (1.0 - p) / n) : 0.0, n};
}

MetricEstimate mean_of(const std::vector<double> &v) {
    if (v.empty()) return {0.0, 0.0, 0};
    double s = 0.0;
    for (double x : v) s += x;
    double mean = s / v.size();
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    double se = v.size() > 1 ? std::sqrt(ss / (v.size() - 1) / v.size()) : 0.0;
    return {mean, se, v.size()};
}
}  // namespace

MetricEstimate coverage_from(const std::vector<TrialResult> &r, double theta) {
    std::uint64_t hits = 0;
    for (const auto &t : r)
        if (t.serving_tier >= 0 && t.sinr >= theta) ++hits;
    return proportion(hits, r.size());
}

RateEstimate rate_from(const std::vector<TrialResult> &r, std::size_t tiers) {
    RateEstimate out;
    std::vector<double> all;
    std::vector<std::vector<double>> per(tiers);
    all.reserve(r.size());
    for (const auto &t : r) {
        all.push_back(t.rate_nats);
        if (t.serving_tier >= 0) per[t.serving_tier].push_back(t.rate_nats);
    }
    out.total = mean_of(all);
    for (const auto &v : per) out.per_tier.push_back(mean_of(v));
    return out;
}

AssocEstimate assoc_from(const std::vector<TrialResult> &r, std::size_t tiers) {
    std::vector<std::uint64_t> c(tiers, 0);
    std::uint64_t hole = 0;
    for (const auto &t : r) {
        if (t.serving_tier < 0) ++hole; else ++c[t.serving_tier];
    }
    AssocEstimate out;
    for (auto v : c) out.per_tier.push_back(proportion(v, r.size()));
    out.hole = proportion(hole, r.size());
    return out;
}

std::vector<MetricEstimate> cdf_from(const std::vector<TrialResult> &r, const std::vector<double> &probes) {
    std::vector<MetricEstimate> out;
    for (double x : probes) {
        if (!(x > 0.0)) throw DomainError("cdf probes must be positive");
        double lx = std::log(x);
        std::uint64_t hits = 0;
        for (const auto &t : r)
            if (t.best_metric <= lx) ++hits;
        out.push_back(proportion(hits, r.size()));
    }
    return out;
}

MetricEstimate estimate_coverage(const Scenario &s, const AssociationPolicy &policy, double theta,
                                 std::int64_t trials, std::uint64_t seed, int threads) {
    return coverage_from(run_trials(s, policy, theta, trials, seed, threads), theta);
}

RateEstimate estimate_rate(const Scenario &s, const AssociationPolicy &policy, std::int64_t trials,
                           std::uint64_t seed, int threads) {
    return rate_from(run_trials(s, policy, 1.0, trials, seed, threads), s.tiers.size());
}

AssocEstimate estimate_assoc_prob(const Scenario &s, const AssociationPolicy &policy, std::int64_t trials,
                                  std::uint64_t seed, int threads) {
    return assoc_from(run_trials(s, policy, 1.0, trials, seed, threads), s.tiers.size());
}

std::vector<MetricEstimate> empirical_best_assoc_cdf(const Scenario &s, const AssociationPolicy &policy,
                                                     const std::vector<double> &probes, std::int64_t trials,
                                                     std::uint64_t seed, int threads) {
    return cdf_from(run_trials(s, policy, 1.0, trials, seed, threads), probes);
}

}  // namespace mmhet

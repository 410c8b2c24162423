// SPDX-License-Identifier: Apache-2.0
#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "mmhet/analysis.hpp"
#include "mmhet/config.hpp"
#include "mmhet/montecarlo.hpp"

using namespace mmhet;

namespace {

enum Exit { kOk = 0, kValidationFail = 1, kConfigError = 2, kNonConvergence = 3 };

struct Flags {
    std::string config;
    std::vector<std::string> policies;
    std::optional<double> theta;
    std::optional<std::int64_t> trials;
    std::optional<std::uint64_t> seed;
    std::string engine;
    std::string out;
    std::optional<int> threads;
    std::vector<std::string> sets;
};

std::string num(double x) {
    if (std::isnan(x)) return "";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", x);
    return buf;
}

ConfigValue parse_set_value(const std::string &text) {
    ConfigDocument d = parse_config("[x]\nv = " + text + "\n");
    return d.find("x")->at("v");
}

struct Point {
    std::string key;
    double value = std::nan("");
    ConfigDocument doc;
    RunConfig rc;
    Scenario scenario;
};

struct Run {
    Flags flags;
    RunConfig base;
    Scenario base_scenario;
    std::vector<Point> points;

    std::vector<std::string> engines() const { return base.sweep.engines; }
    const std::vector<std::string> &policies() const { return base.sweep.policies; }
};

ConfigValue string_list(const std::vector<std::string> &v) {
    std::vector<ConfigValue> items;
    for (const auto &x : v) items.push_back({x});
    return {items};
}

Run prepare(const Flags &f) {
    Run run;
    run.flags = f;
    ConfigDocument doc = load_config(f.config);
    for (const auto &s : f.sets) {
        auto eq = s.find('=');
        if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + s + "'");
        apply_override(doc, s.substr(0, eq), parse_set_value(s.substr(eq + 1)));
    }
    if (!f.policies.empty()) apply_override(doc, "sweep.policies", string_list(f.policies));
    if (f.theta) apply_override(doc, "sweep.theta", {*f.theta});
    if (f.trials) apply_override(doc, "mc.trials", {static_cast<double>(*f.trials)});
    if (f.threads) apply_override(doc, "mc.threads", {static_cast<double>(*f.threads)});
    if (f.engine == "both") apply_override(doc, "sweep.engines", string_list({"analysis", "mc"}));
    else if (f.engine == "analysis" || f.engine == "mc" || f.engine == "unified")
        apply_override(doc, "sweep.engines", string_list({f.engine}));
    else if (!f.engine.empty()) throw ConfigError("--engine must be analysis, mc, unified or both");
    RunConfig rc = resolve_config(doc);
    if (f.seed) rc.mc.seed = *f.seed;
    run.base = rc;
    run.base_scenario = build_scenario(doc);

    std::vector<double> values = rc.sweep.key.empty() ? std::vector<double>{std::nan("")} : rc.sweep.values;
    for (double v : values) {
        Point p;
        p.key = rc.sweep.key;
        p.value = v;
        p.doc = doc;
        if (!p.key.empty()) apply_override(p.doc, p.key, ConfigValue{v});
        p.rc = resolve_config(p.doc);
        if (f.seed) p.rc.mc.seed = *f.seed;
        p.scenario = build_scenario(p.doc);
        run.points.push_back(std::move(p));
    }
    return run;
}

std::string header(const Run &run) {
    std::ostringstream o;
    o << describe_scenario(run.base_scenario);
    const auto &sw = run.base.sweep;
    o << "# sweep: key=" << (sw.key.empty() ? "-" : sw.key) << " values=";
    for (std::size_t i = 0; i < sw.values.size(); ++i) o << (i ? "," : "") << num(sw.values[i]);
    o << " theta=" << num(sw.theta) << "\n";
    o << "# mc: trials=" << run.base.mc.trials << " seed=" << run.base.mc.seed << "\n";
    o << "# quad: rel_tol=" << num(run.base.quad.rel_tol) << " abs_tol=" << num(run.base.quad.abs_tol)
      << " max_evals=" << run.base.quad.max_evals << " hermite_nodes=" << run.base.analysis.hermite_nodes
      << " rate_grid_points=" << run.base.analysis.rate_grid_points << "\n";
    return o.str();
}

std::string prefix(const Point &p, const std::string &policy) {
    return (p.key.empty() ? std::string("-") : p.key) + "," + num(p.value) + "," + policy;
}

// All metrics of one (point, policy) pair from one batch of trials.
struct McBatch {
    std::vector<TrialResult> trials;
};

McBatch mc_batch(const Point &p, const AssociationPolicy &pol) {
    return {run_trials(p.scenario, pol, p.rc.sweep.theta, p.rc.mc.trials, p.rc.mc.seed, p.rc.mc.threads)};
}

AnalysisContext analysis_ctx(const Point &p, const AssociationPolicy &pol) {
    return AnalysisContext(p.scenario, pol, p.rc.quad, p.rc.analysis);
}

std::vector<double> cdf_probes(const Point &p, const AnalysisContext &ctx) {
    if (!p.rc.sweep.probes.empty()) return p.rc.sweep.probes;
    std::vector<double> out;
    for (double q : {0.1, 0.3, 0.5, 0.7, 0.9}) out.push_back(best_assoc_quantile(q, ctx));
    return out;
}

void emit_metric(std::ostream &o, const Run &run, const std::string &metric) {
    const std::size_t K = run.base_scenario.tiers.size();
    if (metric == "coverage") {
        o << "sweep_key,sweep_value,policy,engine,theta,value,error,n\n";
    } else if (metric == "rate") {
        o << "sweep_key,sweep_value,policy,engine,rate_nats_per_sec,error,n";
        for (std::size_t k = 0; k < K; ++k) o << ",rate_tier" << k + 1;
        for (std::size_t k = 0; k < K; ++k) o << ",phi_tier" << k + 1;
        o << "\n";
    } else if (metric == "assoc") {
        o << "sweep_key,sweep_value,policy,engine,tier,value,error,n\n";
    } else {
        o << "sweep_key,sweep_value,policy,engine,probe,value,error,n\n";
    }
    for (const auto &p : run.points) {
        for (const auto &pname : run.policies()) {
            AssociationPolicy pol = make_policy(pname, p.rc);
            std::optional<AnalysisContext> ctx;
            auto need_ctx = [&]() -> const AnalysisContext & {
                if (!ctx) ctx.emplace(analysis_ctx(p, pol));
                return *ctx;
            };
            for (const auto &eng : run.engines()) {
                const std::string pre = prefix(p, pname) + "," + eng;
                if (eng == "mc") {
                    McBatch b = mc_batch(p, pol);
                    if (metric == "coverage") {
                        auto e = coverage_from(b.trials, p.rc.sweep.theta);
                        o << pre << "," << num(p.rc.sweep.theta) << "," << num(e.value) << "," << num(e.error) << ","
                          << e.count << "\n";
                    } else if (metric == "rate") {
                        auto e = rate_from(b.trials, K);
                        auto a = assoc_from(b.trials, K);
                        o << pre << "," << num(e.total.value) << "," << num(e.total.error) << "," << e.total.count;
                        for (const auto &t : e.per_tier) o << "," << num(t.value);
                        for (const auto &t : a.per_tier) o << "," << num(t.value);
                        o << "\n";
                    } else if (metric == "assoc") {
                        auto a = assoc_from(b.trials, K);
                        for (std::size_t k = 0; k < K; ++k)
                            o << pre << "," << k + 1 << "," << num(a.per_tier[k].value) << ","
                              << num(a.per_tier[k].error) << "," << a.per_tier[k].count << "\n";
                        o << pre << ",hole," << num(a.hole.value) << "," << num(a.hole.error) << "," << a.hole.count
                          << "\n";
                    } else {
                        auto probes = cdf_probes(p, need_ctx());
                        auto c = cdf_from(b.trials, probes);
                        for (std::size_t i = 0; i < probes.size(); ++i)
                            o << pre << "," << num(probes[i]) << "," << num(c[i].value) << "," << num(c[i].error) << ","
                              << c[i].count << "\n";
                    }
                } else if (eng == "analysis") {
                    const auto &c = need_ctx();
                    if (metric == "coverage") {
                        double v = coverage_probability(p.rc.sweep.theta, c);
                        o << pre << "," << num(p.rc.sweep.theta) << "," << num(v) << "," << num(c.phi_error()) << ","
                          << c.evaluations() << "\n";
                    } else if (metric == "rate") {
                        auto r = link_rate(c);
                        o << pre << "," << num(r.total) << "," << num(c.phi_error() * r.total) << ","
                          << c.evaluations();
                        for (double v : r.per_tier) o << "," << num(v);
                        for (double v : r.phi) o << "," << num(v);
                        o << "\n";
                    } else if (metric == "assoc") {
                        for (std::size_t k = 0; k < K; ++k)
                            o << pre << "," << k + 1 << "," << num(c.phi(k)) << "," << num(c.phi_error()) << ","
                              << c.evaluations() << "\n";
                        o << pre << ",hole," << num(hole_probability(c)) << ",0,0\n";
                    } else {
                        for (double x : cdf_probes(p, c))
                            o << pre << "," << num(x) << "," << num(best_assoc_cdf(x, c)) << ",0,0\n";
                    }
                } else {  // unified
                    const auto &c = need_ctx();
                    if (metric == "coverage") {
                        o << pre << "," << num(p.rc.sweep.theta) << "," << num(unified_coverage(p.rc.sweep.theta, c))
                          << ",0,0\n";
                    } else if (metric == "assoc") {
                        for (std::size_t k = 0; k < K; ++k)
                            o << pre << "," << k + 1 << "," << num(unified_phi(k, c)) << ",0,0\n";
                    } else {
                        throw ConfigError("the unified engine provides coverage and assoc only");
                    }
                }
            }
        }
    }
}

struct Check {
    std::string prefix, metric, item;
    double analysis, mc, mc_error, gap, tol;
    bool pass;
};

int cmd_validate(std::ostream &o, const Run &run) {
    const std::size_t K = run.base_scenario.tiers.size();
    const auto &vd = run.base.validate;
    std::vector<Check> checks;
    double cov_gap_sum = 0.0;
    int cov_n = 0;
    for (const auto &p : run.points) {
        for (const auto &pname : run.policies()) {
            AssociationPolicy pol = make_policy(pname, p.rc);
            AnalysisContext ctx = analysis_ctx(p, pol);
            McBatch b = mc_batch(p, pol);
            const std::string pre = prefix(p, pname);
            auto add = [&](const std::string &metric, const std::string &item, double a, double m, double se,
                           double tol) {
                double gap = std::abs(a - m);
                checks.push_back({pre, metric, item, a, m, se, gap, tol, gap <= tol});
            };
            for (const auto &metric : p.rc.sweep.metrics) {
                if (metric == "coverage") {
                    double th = p.rc.sweep.theta;
                    double a = vd.use_unified ? unified_coverage(th, ctx) : coverage_probability(th, ctx);
                    auto m = coverage_from(b.trials, th);
                    add("coverage", "theta=" + num(th), a, m.value, m.error, vd.coverage_tol);
                    cov_gap_sum += std::abs(a - m.value);
                    ++cov_n;
                } else if (metric == "rate") {
                    auto a = link_rate(ctx);
                    auto m = rate_from(b.trials, K);
                    double tol = vd.rate_rel_tol * std::abs(a.total) + 3.0 * m.total.error;
                    add("rate", "total", a.total, m.total.value, m.total.error, tol);
                } else if (metric == "assoc") {
                    auto m = assoc_from(b.trials, K);
                    for (std::size_t k = 0; k < K; ++k) {
                        double a = vd.use_unified ? unified_phi(k, ctx) : ctx.phi(k);
                        add("assoc", "tier" + std::to_string(k + 1), a, m.per_tier[k].value, m.per_tier[k].error,
                            vd.assoc_tol + 3.0 * m.per_tier[k].error);
                    }
                    add("assoc", "hole", hole_probability(ctx), m.hole.value, m.hole.error,
                        vd.assoc_tol + 3.0 * m.hole.error);
                } else {
                    auto probes = cdf_probes(p, ctx);
                    auto m = cdf_from(b.trials, probes);
                    for (std::size_t i = 0; i < probes.size(); ++i)
                        add("cdf", "x=" + num(probes[i]), best_assoc_cdf(probes[i], ctx), m[i].value, m[i].error,
                            vd.cdf_tol + 3.0 * m[i].error);
                }
            }
        }
    }
    o << "sweep_key,sweep_value,policy,metric,item,analysis,mc,mc_error,gap,tolerance,status\n";
    bool ok = true;
    for (const auto &c : checks) {
        o << c.prefix << "," << c.metric << "," << c.item << "," << num(c.analysis) << "," << num(c.mc) << ","
          << num(c.mc_error) << "," << num(c.gap) << "," << num(c.tol) << "," << (c.pass ? "PASS" : "FAIL") << "\n";
        ok = ok && c.pass;
    }
    int failed = 0;
    for (const auto &c : checks) failed += c.pass ? 0 : 1;
    std::ostringstream summary;
    summary << "# checks=" << checks.size() << " failed=" << failed;
    if (cov_n > 0) {
        double mean = cov_gap_sum / cov_n;
        bool mean_ok = mean <= vd.coverage_mean_tol;
        summary << " coverage_mean_gap=" << num(mean) << " (tol " << num(vd.coverage_mean_tol) << ") "
                << (mean_ok ? "PASS" : "FAIL");
        ok = ok && mean_ok;
    }
    summary << " overall=" << (ok ? "PASS" : "FAIL") << "\n";
    o << summary.str();
    std::cerr << summary.str().substr(2);
    return ok ? kOk : kValidationFail;
}

void add_common(CLI::App *sub, Flags &f) {
    sub->add_option("--config", f.config, "configuration file")->required()->check(CLI::ExistingFile);
    sub->add_option("--policy", f.policies, "association policy: coa, roa or gua (repeatable)")
        ->delimiter(',');
    sub->add_option("--theta", f.theta, "SINR threshold (linear)");
    sub->add_option("--trials", f.trials, "Monte Carlo trials per point");
    sub->add_option("--seed", f.seed, "master seed");
    sub->add_option("--engine", f.engine, "analysis, mc, unified or both");
    sub->add_option("--out", f.out, "write CSV here instead of stdout");
    sub->add_option("--threads", f.threads, "worker threads (0 = all cores)");
    sub->add_option("--set", f.sets, "override a config key, e.g. --set tier.2.power_w=2");
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Coverage and rate of mmWave heterogeneous networks: analysis and Monte Carlo"};
    app.require_subcommand(1);
    Flags flags;
    std::string command;
    for (const char *name : {"coverage", "rate", "assoc", "cdf", "validate"}) {
        auto *sub = app.add_subcommand(name, std::string(name) + " sweep");
        add_common(sub, flags);
        sub->callback([&command, name] { command = name; });
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return kConfigError;
    }

    try {
        Run run = prepare(flags);
        std::ostringstream body;
        int code = kOk;
        if (command == "validate") {
            code = cmd_validate(body, run);
        } else {
            emit_metric(body, run, command);
        }
        std::string text = header(run) + body.str();
        if (flags.out.empty()) {
            std::cout << text;
        } else {
            std::ofstream f(flags.out);
            if (!f) throw ConfigError("cannot write '" + flags.out + "'");
            f << text;
        }
        return code;
    } catch (const NonConvergence &e) {
        std::cerr << "error: numerical non-convergence: " << e.what() << " (estimate " << e.estimate() << ", bound "
                  << e.bound() << ")\n";
        return kNonConvergence;
    } catch (const DomainError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kConfigError;
    }
}

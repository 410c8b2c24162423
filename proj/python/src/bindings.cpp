// SPDX-License-Identifier: Apache-2.0
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>

#include "mmhet/analysis.hpp"
#include "mmhet/config.hpp"
#include "mmhet/montecarlo.hpp"

namespace py = pybind11;
using namespace mmhet;

namespace {

Antennas antennas_from(const std::string &name) {
    if (name == "siso") return Antennas::Siso;
    if (name == "miso") return Antennas::Miso;
    throw DomainError("antennas must be 'siso' or 'miso'");
}

ConfigValue to_value(const py::handle &h) {
    if (py::isinstance<py::bool_>(h)) return {h.cast<bool>()};
    if (py::isinstance<py::int_>(h) || py::isinstance<py::float_>(h)) return {h.cast<double>()};
    if (py::isinstance<py::str>(h)) return {h.cast<std::string>()};
    if (py::isinstance<py::list>(h) || py::isinstance<py::tuple>(h)) {
        std::vector<ConfigValue> items;
        for (auto item : h) items.push_back(to_value(item));
        return {items};
    }
    throw ConfigError("unsupported override value type");
}

py::dict estimate(const MetricEstimate &e) {
    py::dict d;
    d["value"] = e.value;
    d["error"] = e.error;
    d["n"] = e.count;
    return d;
}

AnalysisContext context(const Scenario &s, const std::string &policy) {
    return AnalysisContext(s, policy_from_name(policy));
}

}  // namespace

PYBIND11_MODULE(_mmhet, m) {
    m.doc() = "Analysis and Monte Carlo engines for two-band heterogeneous networks";

    auto domain = py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<ConfigError>(m, "ConfigError", domain.ptr());
    py::register_exception<NonConvergence>(m, "NonConvergence", PyExc_RuntimeError);

    py::class_<Scenario>(m, "Scenario")
        .def_property_readonly("tiers", [](const Scenario &s) { return s.tiers.size(); })
        .def_property_readonly("intensities",
                               [](const Scenario &s) {
                                   std::vector<double> v;
                                   for (const auto &t : s.tiers) v.push_back(t.intensity_per_m2);
                                   return v;
                               })
        .def_property_readonly("mmwave_noise_power_w", [](const Scenario &s) { return s.mmwave_band.noise_power_w; })
        .def_property_readonly("window_radius_m", [](const Scenario &s) { return s.window_radius_m; })
        .def("__repr__", [](const Scenario &s) { return describe_scenario(s); });

    m.def("table2_scenario",
          [](const std::string &antennas, double ratio) { return table2_scenario(antennas_from(antennas), ratio); },
          py::arg("antennas") = "siso", py::arg("intensity_ratio_to_blockage") = 1.0);
    m.def(
        "classic_scenario",
        [](double alpha, double intensity, bool unified) {
            Scenario s = classic_scenario(alpha, intensity);
            if (unified) s.unified_uhf = UnifiedUhf{alpha, 0.0, 1.0};
            return validate_scenario(s);
        },
        py::arg("alpha") = 4.0, py::arg("intensity") = 1e-6, py::arg("unified") = false);
    m.def(
        "scenario_from_config",
        [](const std::string &path, const py::dict &overrides) {
            ConfigDocument doc = load_config(path);
            for (auto kv : overrides) apply_override(doc, kv.first.cast<std::string>(), to_value(kv.second));
            return build_scenario(doc);
        },
        py::arg("path"), py::arg("overrides") = py::dict());

    m.def(
        "analysis_coverage",
        [](const Scenario &s, double theta, const std::string &policy) {
            py::gil_scoped_release nogil;
            return coverage_probability(theta, context(s, policy));
        },
        py::arg("scenario"), py::arg("theta") = 1.0, py::arg("policy") = "coa");
    m.def(
        "unified_coverage",
        [](const Scenario &s, double theta, const std::string &policy) {
            return unified_coverage(theta, context(s, policy));
        },
        py::arg("scenario"), py::arg("theta") = 1.0, py::arg("policy") = "coa");
    m.def(
        "analysis_rate",
        [](const Scenario &s, const std::string &policy) {
            RateBreakdown r;
            {
                py::gil_scoped_release nogil;
                r = link_rate(context(s, policy));
            }
            py::dict d;
            d["total"] = r.total;
            d["per_tier"] = r.per_tier;
            d["phi"] = r.phi;
            return d;
        },
        py::arg("scenario"), py::arg("policy") = "coa");
    m.def(
        "analysis_assoc",
        [](const Scenario &s, const std::string &policy) {
            AnalysisContext ctx = context(s, policy);
            std::vector<double> phi;
            for (std::size_t k = 0; k < s.tiers.size(); ++k) phi.push_back(tier_assoc_prob(k, ctx));
            py::dict d;
            d["per_tier"] = phi;
            d["hole"] = hole_probability(ctx);
            return d;
        },
        py::arg("scenario"), py::arg("policy") = "coa");
    m.def(
        "best_assoc_cdf",
        [](const Scenario &s, double x, const std::string &policy) { return best_assoc_cdf(x, context(s, policy)); },
        py::arg("scenario"), py::arg("x"), py::arg("policy") = "coa");

    m.def(
        "mc_coverage",
        [](const Scenario &s, double theta, const std::string &policy, std::int64_t trials, std::uint64_t seed,
           int threads) {
            MetricEstimate e;
            {
                py::gil_scoped_release nogil;
                e = estimate_coverage(s, policy_from_name(policy), theta, trials, seed, threads);
            }
            return estimate(e);
        },
        py::arg("scenario"), py::arg("theta") = 1.0, py::arg("policy") = "coa", py::arg("trials") = 100000,
        py::arg("seed") = 1, py::arg("threads") = 0);
    m.def(
        "mc_rate",
        [](const Scenario &s, const std::string &policy, std::int64_t trials, std::uint64_t seed, int threads) {
            RateEstimate e;
            {
                py::gil_scoped_release nogil;
                e = estimate_rate(s, policy_from_name(policy), trials, seed, threads);
            }
            py::dict d = estimate(e.total);
            py::list per;
            for (const auto &p : e.per_tier) per.append(estimate(p));
            d["per_tier"] = per;
            return d;
        },
        py::arg("scenario"), py::arg("policy") = "coa", py::arg("trials") = 100000, py::arg("seed") = 1,
        py::arg("threads") = 0);
    m.def(
        "mc_assoc",
        [](const Scenario &s, const std::string &policy, std::int64_t trials, std::uint64_t seed, int threads) {
            AssocEstimate e;
            {
                py::gil_scoped_release nogil;
                e = estimate_assoc_prob(s, policy_from_name(policy), trials, seed, threads);
            }
            py::list per;
            for (const auto &p : e.per_tier) per.append(estimate(p));
            py::dict d;
            d["per_tier"] = per;
            d["hole"] = estimate(e.hole);
            return d;
        },
        py::arg("scenario"), py::arg("policy") = "coa", py::arg("trials") = 100000, py::arg("seed") = 1,
        py::arg("threads") = 0);
}

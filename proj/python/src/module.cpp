#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "parity/analytic.hpp"
#include "parity/bounds.hpp"
#include "parity/errors.hpp"
#include "parity/evt.hpp"
#include "parity/io.hpp"
#include "parity/sdp.hpp"

namespace py = pybind11;
using namespace parity;

// Structured values cross the boundary as JSON text; the Python package
// decodes them into dicts.
namespace {

Json parse(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::exception& ex) {
    throw ConfigError(std::string("invalid JSON: ") + ex.what());
  }
}

EnumerationLimits limits_for(int k_max, bool allow_higher, int threads) {
  EnumerationLimits l;
  l.allow_higher_defects = allow_higher || k_max >= 3;
  l.threads = threads;
  return l;
}

ProfileFamily family_for(const Json& spec, const ParityLayout& layout) {
  if (spec.is_null() || (spec.is_string() && spec.get<std::string>() == "full")) return ProfileFamily::full();
  if (spec.is_number_integer()) return ProfileFamily::up_to(spec.get<int>());
  std::vector<DefectProfile> list;
  for (const auto& p : spec) list.push_back(profile_from_json(p, layout));
  return ProfileFamily::explicit_list(std::move(list));
}

Json result_to_json(const EnsembleResult& r) {
  Json records = Json::array();
  for (const auto& rec : r.records) {
    Json values = Json::array();
    for (double v : rec.values) values.push_back(std::isfinite(v) ? Json(v) : Json());
    records.push_back({{"n", rec.n}, {"index", rec.index}, {"seed", rec.seed}, {"ok", rec.ok},
                       {"error", rec.error}, {"values", values}});
  }
  Json aggregates = Json::array();
  for (const auto& a : r.aggregates) {
    Json stats = Json::object();
    for (std::size_t c = 0; c < r.columns.size(); ++c)
      stats[r.columns[c]] = {{"count", a.stats[c].count},
                             {"mean", a.stats[c].mean},
                             {"variance", a.stats[c].variance},
                             {"se", a.stats[c].standard_error}};
    aggregates.push_back({{"n", a.n}, {"samples", a.samples}, {"failures", a.failures}, {"stats", stats}});
  }
  return {{"columns", r.columns}, {"records", records}, {"aggregates", aggregates}};
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Parity-constraint strengths for Ising problems";

  py::register_exception<CapacityError>(m, "CapacityError", PyExc_RuntimeError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

  m.def(
      "generate",
      [](int n, const std::string& distribution, std::uint64_t seed, double p_edge) {
        const auto dist = distribution_from_json(parse(distribution));
        const GraphSpec graph = p_edge >= 1.0 ? GraphSpec::complete(n) : GraphSpec::erdos_renyi(n, p_edge, seed ^ 0x5EEDULL);
        return instance_to_json(sample_instance(dist, graph, seed)).dump();
      },
      py::arg("n"), py::arg("distribution"), py::arg("seed"), py::arg("p_edge") = 1.0);

  m.def(
      "random_graph",
      [](int n, double p_edge, std::uint64_t seed) {
        return graph_to_json(GraphSpec::erdos_renyi(n, p_edge, seed).realize()).dump();
      },
      py::arg("n"), py::arg("p_edge"), py::arg("seed"));

  m.def("encode_maxcut", [](const std::string& graph) {
    return instance_to_json(encode_maxcut(graph_from_json(parse(graph)))).dump();
  });

  m.def(
      "encode_minbisection",
      [](const std::string& graph, std::optional<double> u) {
        return instance_to_json(encode_minbisection(graph_from_json(parse(graph)), u)).dump();
      },
      py::arg("graph"), py::arg("u") = py::none());

  m.def("layout", [](int n) {
    const ParityLayout layout(n);
    Json plaquettes = Json::array();
    for (int p = 0; p < layout.plaquette_count(); ++p) {
      const auto& pl = layout.plaquette(p);
      Json members = Json::array();
      for (int s : pl.sites()) members.push_back({layout.site(s).i + 1, layout.site(s).j + 1});
      plaquettes.push_back({{"label", {pl.i + 1, pl.j + 1}}, {"members", members}});
    }
    return Json{{"n", n}, {"m", layout.site_count()}, {"q", layout.plaquette_count()}, {"plaquettes", plaquettes}}
        .dump();
  });

  m.def(
      "spectrum",
      [](const std::string& instance, int threads) {
        return spectrum_to_json(logical_spectrum(instance_from_json(parse(instance)), limits_for(1, false, threads)))
            .dump();
      },
      py::arg("instance"), py::arg("threads") = 1);

  m.def(
      "solve",
      [](const std::string& instance, int k_max, bool allow_higher, int threads) {
        const auto inst = instance_from_json(parse(instance));
        const ParityLayout layout(inst.n());
        return bounds_to_json(homogeneous_optimum(inst, layout, k_max, limits_for(k_max, allow_higher, threads))).dump();
      },
      py::arg("instance"), py::arg("k_max") = 2, py::arg("allow_higher") = false, py::arg("threads") = 1);

  m.def(
      "restricted_minimum",
      [](const std::string& instance, const std::string& profile) {
        const auto inst = instance_from_json(parse(instance));
        const ParityLayout layout(inst.n());
        return restricted_minimum(inst, profile_from_json(parse(profile), layout), layout);
      },
      py::arg("instance"), py::arg("profile"));

  m.def(
      "verify",
      [](const std::string& instance, const std::string& assignment, const std::string& family) {
        const auto inst = instance_from_json(parse(instance));
        const ParityLayout layout(inst.n());
        EnumerationLimits limits;
        limits.allow_higher_defects = true;
        return verdict_to_json(verify_assignment(inst, layout, assignment_from_json(parse(assignment)),
                                                 family_for(parse(family), layout), limits),
                               layout)
            .dump();
      },
      py::arg("instance"), py::arg("assignment"), py::arg("family") = "\"full\"");

  m.def(
      "solve_lp",
      [](const std::string& instance, const std::string& family) {
        const auto inst = instance_from_json(parse(instance));
        const ParityLayout layout(inst.n());
        EnumerationLimits limits;
        limits.allow_higher_defects = true;
        return lp_to_json(solve_lp(inst, layout, family_for(parse(family), layout), limits), layout).dump();
      },
      py::arg("instance"), py::arg("family") = "\"full\"");

  m.def("sdp_bound", [](const std::string& graph) {
    const auto b = c1_sdp_bound(graph_from_json(parse(graph)));
    return Json{{"c1_sdp", b.c1_sdp},
                {"c1_sdp_continuous", b.c1_sdp_continuous},
                {"a1_plus", b.a1_plus},
                {"edge_count", b.edge_count},
                {"primal", b.sdp.primal_value},
                {"dual", b.sdp.dual_value},
                {"relative_gap", b.sdp.relative_gap()},
                {"meaningful", b.meaningful}}
        .dump();
  });

  m.def("run_ensemble", [](const std::string& config) {
    return result_to_json(run_ensemble(ensemble_config_from_json(parse(config)))).dump();
  });

  m.def(
      "fit_power_law",
      [](const std::vector<std::pair<double, double>>& points, const std::vector<double>& weights) {
        return fit_to_json(fit_power_law(points, weights)).dump();
      },
      py::arg("points"), py::arg("weights") = std::vector<double>{});

  m.def("probit", &probit);
  m.def("erfinv", &erfinv);
  m.def("gumbel_params", [](double mm) {
    const auto g = gumbel_params(mm);
    return std::make_pair(g.alpha, g.beta);
  });
  m.def("expected_min_independent", &expected_min_independent, py::arg("m"), py::arg("sigma") = 1.0);
  m.def("expected_l0_independent", &expected_l0_independent, py::arg("n"), py::arg("delta") = kDefaultDelta);
  m.def(
      "expected_a1_independent", [](int n, double delta) { return expected_a1_independent(n, delta); },
      py::arg("n"), py::arg("delta") = kDefaultDelta);
  m.def(
      "f1_scaling", [](int n, double delta) { return f1_scaling(n, delta); }, py::arg("n"),
      py::arg("delta") = kDefaultDelta);
  m.def("calibrate_delta", [](const std::vector<std::pair<int, double>>& data) {
    const auto c = calibrate_delta(data);
    return std::make_pair(c.delta, c.residual);
  });
  m.def("antiferro_c_minus_1", [](int n) { return antiferro_limit(n).c_minus_1; });
  m.attr("DEFAULT_DELTA") = kDefaultDelta;
}

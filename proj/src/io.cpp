#include "parity/io.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>
#include <set>
#include <sstream>

#include "parity/errors.hpp"

namespace parity {

namespace {

void require_keys(const Json& j, const std::set<std::string>& allowed, const std::string& what) {
  if (!j.is_object()) throw ConfigError(what + " must be an object");
  for (const auto& [key, value] : j.items())
    if (!allowed.count(key)) throw ConfigError("unknown key '" + key + "' in " + what);
}

template <class T>
T get_or(const Json& j, const std::string& key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const Json::exception& ex) {
    throw ConfigError("bad value for '" + key + "': " + ex.what());
  }
}

std::vector<int> n_range_from_json(const Json& j) {
  std::vector<int> out;
  if (j.is_array()) {
    for (const auto& v : j) out.push_back(v.get<int>());
    return out;
  }
  require_keys(j, {"min", "max", "step"}, "n_range");
  const int lo = get_or(j, "min", 0);
  const int hi = get_or(j, "max", -1);
  const int step = get_or(j, "step", 1);
  if (step < 1 || hi < lo) throw ConfigError("invalid n_range bounds");
  for (int n = lo; n <= hi; n += step) out.push_back(n);
  return out;
}

SampleSchedule schedule_from_json(const Json& j) {
  if (j.is_number_integer()) return SampleSchedule::fixed_count(j.get<std::size_t>());
  require_keys(j, {"kind", "count", "base", "n0", "floor", "cap"}, "samples");
  SampleSchedule s;
  const std::string kind = get_or<std::string>(j, "kind", "geometric");
  if (kind == "fixed") {
    s = SampleSchedule::fixed_count(get_or<std::size_t>(j, "count", 100));
  } else if (kind == "geometric") {
    s.base = get_or(j, "base", s.base);
    s.n0 = get_or(j, "n0", s.n0);
    s.floor = get_or(j, "floor", s.floor);
  } else {
    throw ConfigError("unknown sample schedule '" + kind + "'");
  }
  s.cap = get_or<std::size_t>(j, "cap", 0);
  return s;
}

GraphFamily graph_family_from_json(const Json& j) {
  require_keys(j, {"kind", "p"}, "graph");
  GraphFamily g;
  const std::string kind = get_or<std::string>(j, "kind", "complete");
  if (kind == "complete") {
    g.kind = GraphFamily::Kind::Complete;
  } else if (kind == "erdos_renyi") {
    g.kind = GraphFamily::Kind::ErdosRenyi;
    g.p_edge = get_or(j, "p", 0.5);
  } else {
    throw ConfigError("unknown graph family '" + kind + "'");
  }
  return g;
}

std::string csv_number(double v) {
  if (std::isnan(v)) return "nan";
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

void schema_line(std::ostream& os, const std::string& table) {
  os << "# schema: parity-constraints/" << table << " v" << kCsvSchemaVersion << '\n';
}

Json number_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

}  // namespace

Json instance_to_json(const IsingInstance& inst) {
  Json couplings = Json::array();
  for (const Coupling& c : inst.couplings()) couplings.push_back({c.i + 1, c.j + 1, c.value});
  Json j{{"n", inst.n()},
         {"couplings", couplings},
         {"offset", inst.offset()},
         {"problem", inst.metadata().problem}};
  if (!inst.metadata().distribution.empty()) j["distribution"] = inst.metadata().distribution;
  if (inst.metadata().seed) j["seed"] = *inst.metadata().seed;
  return j;
}

IsingInstance instance_from_json(const Json& j) {
  require_keys(j, {"n", "couplings", "offset", "problem", "distribution", "seed"}, "instance");
  if (!j.contains("n") || !j.contains("couplings")) throw ConfigError("instance needs n and couplings");
  const int n = j.at("n").get<int>();
  std::vector<Coupling> couplings;
  for (const auto& c : j.at("couplings")) {
    if (!c.is_array() || c.size() != 3) throw ConfigError("couplings are [i, j, J] triples");
    couplings.push_back({c[0].get<int>() - 1, c[1].get<int>() - 1, c[2].get<double>()});
  }
  InstanceMetadata meta;
  meta.problem = get_or<std::string>(j, "problem", "couplings");
  meta.distribution = get_or<std::string>(j, "distribution", "");
  if (j.contains("seed")) meta.seed = j.at("seed").get<std::uint64_t>();
  try {
    return IsingInstance(n, std::move(couplings), get_or(j, "offset", 0.0), meta);
  } catch (const std::invalid_argument& ex) {
    throw ConfigError(ex.what());
  }
}

Json graph_to_json(const Graph& g) {
  Json edges = Json::array();
  for (const Edge& e : g.edges()) edges.push_back({e.i + 1, e.j + 1});
  return {{"n", g.n()}, {"edges", edges}};
}

Graph graph_from_json(const Json& j) {
  require_keys(j, {"n", "edges"}, "graph");
  std::vector<Edge> edges;
  for (const auto& e : j.at("edges")) edges.push_back({e[0].get<int>() - 1, e[1].get<int>() - 1});
  try {
    return Graph(j.at("n").get<int>(), std::move(edges));
  } catch (const std::invalid_argument& ex) {
    throw ConfigError(ex.what());
  }
}

ConstraintAssignment assignment_from_json(const Json& j) {
  if (j.is_number()) return ConstraintAssignment::homogeneous(j.get<double>());
  require_keys(j, {"homogeneous", "strengths"}, "assignment");
  if (j.contains("homogeneous")) return ConstraintAssignment::homogeneous(j.at("homogeneous").get<double>());
  if (j.contains("strengths"))
    return ConstraintAssignment::per_plaquette(j.at("strengths").get<std::vector<double>>());
  throw ConfigError("assignment needs 'homogeneous' or 'strengths'");
}

Json assignment_to_json(const ConstraintAssignment& a) {
  if (a.is_homogeneous()) return {{"homogeneous", a.homogeneous_value()}};
  return {{"strengths", a.strengths()}};
}

DefectProfile profile_from_json(const Json& j, const ParityLayout& layout) {
  std::vector<int> idx;
  for (const auto& p : j) {
    if (!p.is_array() || p.size() != 2) throw ConfigError("plaquettes are [i, j] pairs");
    try {
      idx.push_back(layout.plaquette_index(p[0].get<int>() - 1, p[1].get<int>() - 1));
    } catch (const std::invalid_argument& ex) {
      throw ConfigError(ex.what());
    }
  }
  return DefectProfile(std::move(idx));
}

Json profile_to_json(const DefectProfile& omega, const ParityLayout& layout) {
  Json out = Json::array();
  for (int p : omega.plaquettes()) {
    const Plaquette& pl = layout.plaquette(p);
    out.push_back({pl.i + 1, pl.j + 1});
  }
  return out;
}

Json spectrum_to_json(const SpectrumSummary& s) {
  return {{"l0", s.l0},
          {"e", s.e},
          {"gap", s.gap},
          {"ground_degeneracy", s.ground_degeneracy},
          {"argmin", s.argmin},
          {"exact_integer", s.exact_integer}};
}

Json bounds_to_json(const BoundsReport& r) {
  Json lower = Json::object();
  for (std::size_t k = 0; k < r.lower.size(); ++k) lower["c_minus_" + std::to_string(k + 1)] = r.lower[k];
  Json upper = Json::object();
  for (std::size_t i = 0; i < r.upper.size(); ++i) upper["c" + std::to_string(i)] = r.upper[i];
  return {{"n", r.n},         {"q", r.q},
          {"l0", r.l0},       {"e", r.e},
          {"gap", r.gap},     {"p0", r.p0},
          {"a", r.a},         {"lower", lower},
          {"upper", upper},   {"c_hat", r.c_hat},
          {"binding_k", r.binding_k}, {"trivial", r.trivial},
          {"k_max", r.k_max_used},    {"label", r.label()}, {"certified", r.certified()},
          {"exact_integer", r.exact_integer}};
}

Json verdict_to_json(const Verdict& v, const ParityLayout& layout) {
  return {{"satisfied", v.satisfied},
          {"worst_profile", profile_to_json(v.worst, layout)},
          {"worst_slack", number_or_null(v.worst_slack)},
          {"checked", v.checked},
          {"tolerance", v.tolerance}};
}

Json lp_to_json(const LpSolution& lp, const ParityLayout& layout) {
  Json active = Json::array();
  for (const DefectProfile& p : lp.active) active.push_back(profile_to_json(p, layout));
  return {{"strengths", lp.strengths},
          {"objective", lp.objective},
          {"dual_objective", lp.dual_objective},
          {"active", active},
          {"constraints", lp.constraint_count},
          {"iterations", lp.iterations},
          {"e", lp.e},
          {"label", lp.label()}};
}

Json fit_to_json(const FitResult& f) {
  Json cov = Json::array();
  for (const auto& row : f.covariance) {
    Json r = Json::array();
    for (double v : row) r.push_back(number_or_null(v));
    cov.push_back(r);
  }
  return {{"alpha", f.alpha},
          {"beta", f.beta},
          {"gamma", f.gamma},
          {"covariance", cov},
          {"rms_residual", f.rms_residual},
          {"degenerate", f.degenerate},
          {"points", f.points}};
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  try {
    return Json::parse(in, nullptr, true, true);
  } catch (const Json::parse_error& ex) {
    throw ConfigError("cannot parse '" + path + "': " + ex.what());
  }
}

void write_json_file(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << j.dump(2) << '\n';
}

std::string pipeline_of(const Json& j) { return get_or<std::string>(j, "pipeline", ""); }

DistributionSpec distribution_from_json(const Json& j) {
  require_keys(j, {"kind", "mean", "stddev", "lower", "upper", "p", "ratio"}, "distribution");
  const std::string kind = get_or<std::string>(j, "kind", "normal");
  try {
    if (j.contains("ratio")) return DistributionSpec::with_ratio(kind, j.at("ratio").get<double>());
    if (kind == "normal") return DistributionSpec::normal(get_or(j, "mean", 0.0), get_or(j, "stddev", 1.0));
    if (kind == "uniform")
      return DistributionSpec::uniform(get_or(j, "lower", -1.0), get_or(j, "upper", 1.0));
    if (kind == "bimodal") return DistributionSpec::bimodal(get_or(j, "p", 0.5));
  } catch (const std::invalid_argument& ex) {
    throw ConfigError(ex.what());
  }
  throw ConfigError("unknown distribution kind '" + kind + "'");
}

EnsembleConfig ensemble_config_from_json(const Json& j) {
  require_keys(j,
               {"pipeline", "description", "distribution", "graph", "problem", "n_range", "samples",
                "master_seed", "quantities", "k_max", "threads"},
               "ensemble config");
  EnsembleConfig cfg;
  if (j.contains("distribution")) cfg.dist = distribution_from_json(j.at("distribution"));
  if (j.contains("graph")) cfg.graph = graph_family_from_json(j.at("graph"));
  cfg.problem = parse_problem(get_or<std::string>(j, "problem", "couplings"));
  if (!j.contains("n_range")) throw ConfigError("ensemble config needs n_range");
  cfg.n_range = n_range_from_json(j.at("n_range"));
  if (j.contains("samples")) cfg.schedule = schedule_from_json(j.at("samples"));
  cfg.master_seed = get_or<std::uint64_t>(j, "master_seed", cfg.master_seed);
  if (j.contains("quantities")) {
    cfg.quantities.clear();
    for (const auto& q : j.at("quantities")) cfg.quantities.push_back(parse_quantity(q.get<std::string>()));
  }
  cfg.k_max = get_or(j, "k_max", cfg.k_max);
  cfg.threads = get_or(j, "threads", cfg.threads);
  cfg.validate();
  return cfg;
}

SweepConfig sweep_config_from_json(const Json& j) {
  require_keys(j,
               {"pipeline", "description", "kinds", "ratios", "n_range", "samples", "master_seed",
                "threads", "weighted"},
               "sweep config");
  SweepConfig cfg;
  cfg.kinds = get_or(j, "kinds", cfg.kinds);
  cfg.ratios = get_or(j, "ratios", cfg.ratios);
  if (!j.contains("n_range")) throw ConfigError("sweep config needs n_range");
  cfg.n_range = n_range_from_json(j.at("n_range"));
  if (j.contains("samples")) cfg.schedule = schedule_from_json(j.at("samples"));
  cfg.master_seed = get_or<std::uint64_t>(j, "master_seed", cfg.master_seed);
  cfg.threads = get_or(j, "threads", cfg.threads);
  cfg.weighted = get_or(j, "weighted", cfg.weighted);
  for (const auto& k : cfg.kinds)
    if (k != "normal" && k != "uniform" && k != "bimodal") throw ConfigError("unknown kind '" + k + "'");
  if (cfg.n_range.size() < 4) throw ConfigError("a power-law fit needs at least 4 sizes");
  return cfg;
}

EvtConfig evt_config_from_json(const Json& j) {
  require_keys(j, {"pipeline", "description", "delta", "model_range", "polynomial", "calibration"},
               "evt config");
  EvtConfig cfg;
  cfg.delta = get_or(j, "delta", cfg.delta);
  if (j.contains("model_range")) {
    const auto range = n_range_from_json(j.at("model_range"));
    if (range.empty()) throw ConfigError("empty model_range");
    cfg.n_min = range.front();
    cfg.n_max = range.back();
  }
  if (j.contains("polynomial")) {
    const auto c = j.at("polynomial").get<std::vector<double>>();
    if (c.size() != 3) throw ConfigError("polynomial is [a, b, c] for a n^2 + b n + c");
    cfg.polynomial = {c[0], c[1], c[2]};
  }
  if (j.contains("calibration")) cfg.calibration = ensemble_config_from_json(j.at("calibration"));
  if (!(cfg.delta > 0.0 && cfg.delta <= 1.0)) throw ConfigError("delta must lie in (0, 1]");
  return cfg;
}

void write_records_csv(std::ostream& os, const EnsembleResult& r) {
  schema_line(os, "records");
  os << "n,index,seed,status";
  for (const auto& c : r.columns) os << ',' << c;
  os << '\n';
  for (const SampleRecord& rec : r.records) {
    os << rec.n << ',' << rec.index << ',' << rec.seed << ',' << (rec.ok ? "ok" : "failed");
    for (double v : rec.values) os << ',' << csv_number(v);
    os << '\n';
  }
}

void write_aggregates_csv(std::ostream& os, const EnsembleResult& r) {
  schema_line(os, "aggregates");
  os << "n,samples,failures";
  for (const auto& c : r.columns) os << ',' << c << "_mean," << c << "_var," << c << "_se";
  os << '\n';
  for (const Aggregate& a : r.aggregates) {
    os << a.n << ',' << a.samples << ',' << a.failures;
    for (const ColumnStats& s : a.stats)
      os << ',' << csv_number(s.mean) << ',' << csv_number(s.variance) << ','
         << csv_number(s.standard_error);
    os << '\n';
  }
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepCell>& cells) {
  schema_line(os, "sweep");
  os << "kind,ratio,alpha,beta,gamma,alpha_se,rms_residual,points,status\n";
  for (const SweepCell& c : cells) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    os << c.kind << ',' << csv_number(c.ratio) << ',' << csv_number(c.ok ? c.fit.alpha : nan) << ','
       << csv_number(c.ok ? c.fit.beta : nan) << ',' << csv_number(c.ok ? c.fit.gamma : nan) << ','
       << csv_number(c.ok ? std::sqrt(c.fit.covariance[0][0]) : nan) << ','
       << csv_number(c.ok ? c.fit.rms_residual : nan) << ',' << c.means.size() << ','
       << (c.ok ? (c.fit.degenerate ? "degenerate" : "ok") : "failed") << '\n';
  }
}

void write_evt_csv(std::ostream& os, const std::vector<EvtModelRow>& rows) {
  schema_line(os, "evt_model");
  os << "n,l0_model,a1_model,diff_model,f1\n";
  for (const EvtModelRow& r : rows)
    os << r.n << ',' << csv_number(r.l0_model) << ',' << csv_number(r.a1_model) << ','
       << csv_number(r.diff_model) << ',' << csv_number(r.f1) << '\n';
}

void write_sdp_csv(std::ostream& os, const EnsembleResult& r) {
  const auto primal = r.column("sdp_primal");
  if (!primal) throw std::invalid_argument("ensemble has no SDP columns");
  const auto exact = r.column("c_minus_1");
  schema_line(os, "sdp");
  os << "n,seed,primal,dual,a1_plus,c1_sdp" << (exact ? ",c_minus_1" : "") << '\n';
  for (const SampleRecord& rec : r.records) {
    os << rec.n << ',' << rec.seed;
    for (std::size_t k = 0; k < 4; ++k) os << ',' << csv_number(rec.values[*primal + k]);
    if (exact) os << ',' << csv_number(rec.values[*exact]);
    os << '\n';
  }
}

}  // namespace parity

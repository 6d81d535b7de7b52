#include "parity/ensemble.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

#include "parity/bounds.hpp"
#include "parity/errors.hpp"
#include "parity/layout.hpp"
#include "parity/parallel.hpp"
#include "parity/rng.hpp"
#include "parity/sdp.hpp"
#include "parity/solver.hpp"

namespace parity {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

const std::map<Quantity, std::string>& quantity_names() {
  static const std::map<Quantity, std::string> names{
      {Quantity::L0, "l0"},           {Quantity::E, "e"},
      {Quantity::Gap, "gap"},         {Quantity::A1, "a1"},
      {Quantity::A2, "a2"},           {Quantity::CMinus1, "c_minus_1"},
      {Quantity::CMinus2, "c_minus_2"}, {Quantity::CHat, "c_hat"},
      {Quantity::UpperBounds, "upper_bounds"}, {Quantity::C1Sdp, "c1_sdp"}};
  return names;
}

bool wants(const EnsembleConfig& cfg, Quantity q) {
  return std::find(cfg.quantities.begin(), cfg.quantities.end(), q) != cfg.quantities.end();
}

// Largest defect count the requested quantities need.
int defect_depth(const EnsembleConfig& cfg) {
  int depth = 0;
  if (wants(cfg, Quantity::A1) || wants(cfg, Quantity::CMinus1)) depth = 1;
  if (wants(cfg, Quantity::A2) || wants(cfg, Quantity::CMinus2)) depth = 2;
  if (wants(cfg, Quantity::CHat) || wants(cfg, Quantity::UpperBounds)) depth = std::max(depth, cfg.k_max);
  return depth;
}

bool needs_spectrum(const EnsembleConfig& cfg) {
  return std::any_of(cfg.quantities.begin(), cfg.quantities.end(),
                     [](Quantity q) { return q != Quantity::C1Sdp; });
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

IsingInstance build_instance(const EnsembleConfig& cfg, int n, std::uint64_t seed, Graph* graph_out) {
  const GraphSpec spec = cfg.graph.at(n, derive_seed(seed, 1));
  switch (cfg.problem) {
    case Problem::Couplings:
      return sample_instance(cfg.dist, spec, seed);
    case Problem::MaxCut: {
      Graph g = spec.realize();
      IsingInstance inst = encode_maxcut(g);
      if (graph_out) *graph_out = std::move(g);
      return inst;
    }
    case Problem::MinBisection: {
      Graph g = spec.realize();
      IsingInstance inst = encode_minbisection(g);
      if (graph_out) *graph_out = std::move(g);
      return inst;
    }
  }
  throw std::logic_error("unknown problem");
}

std::vector<double> evaluate_sample(const EnsembleConfig& cfg, int n, std::uint64_t seed,
                                    std::size_t width) {
  Graph graph(n, {});
  const IsingInstance inst = build_instance(cfg, n, seed, &graph);
  std::vector<double> values;
  values.reserve(width);

  const int q = (n - 1) * (n - 2) / 2;
  BoundsReport report;
  if (needs_spectrum(cfg)) {
    const ParityLayout layout(n);
    EnumerationLimits limits;
    limits.allow_higher_defects = true;
    report = homogeneous_optimum(inst, layout, std::max(1, std::min(defect_depth(cfg), q)), limits);
    if (defect_depth(cfg) == 0) report.a.clear();
  }
  auto a_k = [&](int k) {
    return k <= static_cast<int>(report.a.size()) ? report.a[static_cast<std::size_t>(k - 1)] : kNaN;
  };
  auto lower = [&](int k) {
    return k <= static_cast<int>(report.lower.size()) ? report.lower[static_cast<std::size_t>(k - 1)]
                                                      : kNaN;
  };

  for (Quantity qty : cfg.quantities) {
    switch (qty) {
      case Quantity::L0: values.push_back(report.l0); break;
      case Quantity::E: values.push_back(report.e); break;
      case Quantity::Gap: values.push_back(report.gap); break;
      case Quantity::A1: values.push_back(a_k(1)); break;
      case Quantity::A2: values.push_back(a_k(2)); break;
      case Quantity::CMinus1: values.push_back(lower(1)); break;
      case Quantity::CMinus2: values.push_back(lower(2)); break;
      case Quantity::CHat: {
        double c = kNaN;
        for (int k = 1; k <= std::min(cfg.k_max, static_cast<int>(report.lower.size())); ++k)
          c = std::isnan(c) ? lower(k) : std::max(c, lower(k));
        values.push_back(c);
        break;
      }
      case Quantity::UpperBounds:
        for (int i = 0; i <= cfg.k_max; ++i)
          values.push_back(i < static_cast<int>(report.upper.size())
                               ? report.upper[static_cast<std::size_t>(i)]
                               : kNaN);
        break;
      case Quantity::C1Sdp: {
        const SdpBound b = c1_sdp_bound(graph);
        values.push_back(b.sdp.primal_value);
        values.push_back(b.sdp.dual_value);
        values.push_back(b.a1_plus);
        values.push_back(b.meaningful ? b.c1_sdp : kNaN);
        break;
      }
    }
  }
  return values;
}

}  // namespace

std::string quantity_name(Quantity q) { return quantity_names().at(q); }

Quantity parse_quantity(const std::string& name) {
  for (const auto& [q, s] : quantity_names())
    if (s == name) return q;
  throw ConfigError("unknown quantity '" + name + "'");
}

std::string problem_name(Problem p) {
  switch (p) {
    case Problem::Couplings: return "couplings";
    case Problem::MaxCut: return "maxcut";
    case Problem::MinBisection: return "minbisection";
  }
  return "";
}

Problem parse_problem(const std::string& name) {
  if (name == "couplings") return Problem::Couplings;
  if (name == "maxcut") return Problem::MaxCut;
  if (name == "minbisection") return Problem::MinBisection;
  throw ConfigError("unknown problem '" + name + "'");
}

GraphSpec GraphFamily::at(int n, std::uint64_t seed) const {
  if (kind == Kind::Complete) return GraphSpec::complete(n);
  return GraphSpec::erdos_renyi(n, p_edge, seed);
}

std::string GraphFamily::describe() const {
  if (kind == Kind::Complete) return "complete";
  return "erdos_renyi(p=" + std::to_string(p_edge) + ")";
}

SampleSchedule SampleSchedule::fixed_count(std::size_t count) {
  SampleSchedule s;
  s.kind = Kind::Fixed;
  s.fixed = count;
  return s;
}

std::size_t SampleSchedule::samples(int n) const {
  std::size_t count = fixed;
  if (kind == Kind::Geometric) {
    const double raw = std::floor(base * std::ldexp(1.0, -(n - n0)));
    const double clamped = std::max(raw, static_cast<double>(floor));
    count = clamped >= 1e15 ? static_cast<std::size_t>(1e15) : static_cast<std::size_t>(clamped);
  }
  if (cap > 0) count = std::min(count, cap);
  return count;
}

void EnsembleConfig::validate() const {
  if (n_range.empty()) throw ConfigError("n_range is empty");
  if (quantities.empty()) throw ConfigError("no quantities requested");
  if (k_max < 1) throw ConfigError("k_max must be at least 1");
  const bool spectrum = needs_spectrum(*this);
  for (int n : n_range) {
    if (n < 3) throw ConfigError("sizes must be at least 3");
    if (spectrum && n > EnumerationLimits{}.max_spins)
      throw ConfigError("n = " + std::to_string(n) + " exceeds the exact solver cap");
    if (schedule.samples(n) < 2) throw ConfigError("at least 2 samples per size are required");
    if (problem == Problem::MinBisection && n % 2 != 0)
      throw ConfigError("MinBisection needs even n");
    if (wants(*this, Quantity::C1Sdp) && n < 6) throw ConfigError("c1_sdp needs n >= 6");
  }
  if (wants(*this, Quantity::C1Sdp) && problem != Problem::MaxCut)
    throw ConfigError("c1_sdp is defined for MaxCut instances only");
  if (graph.kind == GraphFamily::Kind::ErdosRenyi && !(graph.p_edge >= 0.0 && graph.p_edge <= 1.0))
    throw ConfigError("edge probability must lie in [0, 1]");
}

std::vector<std::string> ensemble_columns(const EnsembleConfig& cfg) {
  std::vector<std::string> cols;
  for (Quantity q : cfg.quantities) {
    if (q == Quantity::UpperBounds) {
      for (int i = 0; i <= cfg.k_max; ++i) cols.push_back("c" + std::to_string(i));
    } else if (q == Quantity::C1Sdp) {
      for (const char* c : {"sdp_primal", "sdp_dual", "a1_plus", "c1_sdp"}) cols.emplace_back(c);
    } else {
      cols.push_back(quantity_name(q));
    }
  }
  return cols;
}

std::optional<std::size_t> EnsembleResult::column(const std::string& name) const {
  const auto it = std::find(columns.begin(), columns.end(), name);
  if (it == columns.end()) return std::nullopt;
  return static_cast<std::size_t>(it - columns.begin());
}

std::vector<std::pair<double, double>> EnsembleResult::means(const std::string& name) const {
  const auto col = column(name);
  if (!col) throw std::invalid_argument("no column '" + name + "'");
  std::vector<std::pair<double, double>> out;
  for (const Aggregate& a : aggregates)
    if (a.stats[*col].count > 0) out.emplace_back(a.n, a.stats[*col].mean);
  return out;
}

ColumnStats column_stats(const std::vector<double>& values) {
  ColumnStats s;
  double sum = 0.0;
  for (double v : values) {
    if (!std::isfinite(v)) continue;
    ++s.count;
    sum += v;
  }
  if (s.count == 0) {
    s.mean = kNaN;
    s.variance = kNaN;
    s.standard_error = kNaN;
    return s;
  }
  s.mean = sum / static_cast<double>(s.count);
  if (s.count < 2) {
    s.variance = kNaN;
    s.standard_error = kNaN;
    return s;
  }
  double ss = 0.0;
  for (double v : values)
    if (std::isfinite(v)) ss += (v - s.mean) * (v - s.mean);
  s.variance = ss / static_cast<double>(s.count - 1);
  s.standard_error = std::sqrt(s.variance / static_cast<double>(s.count));
  return s;
}

EnsembleResult run_ensemble(const EnsembleConfig& cfg) {
  cfg.validate();
  EnsembleResult result;
  result.columns = ensemble_columns(cfg);
  const std::size_t width = result.columns.size();

  std::vector<int> sizes = cfg.n_range;
  std::sort(sizes.begin(), sizes.end());
  sizes.erase(std::unique(sizes.begin(), sizes.end()), sizes.end());
  for (int n : sizes) {
    const std::size_t count = cfg.schedule.samples(n);
    for (std::size_t i = 0; i < count; ++i) {
      SampleRecord r;
      r.n = n;
      r.index = i;
      r.seed = derive_seed(cfg.master_seed, static_cast<std::uint64_t>(n), i);
      result.records.push_back(std::move(r));
    }
  }

  parallel_for(result.records.size(), cfg.threads, [&](std::size_t k) {
    SampleRecord& r = result.records[k];
    try {
      r.values = evaluate_sample(cfg, r.n, r.seed, width);
    } catch (const std::exception& ex) {
      r.ok = false;
      r.error = ex.what();
      r.values.assign(width, kNaN);
    }
  });

  std::size_t begin = 0;
  for (int n : sizes) {
    Aggregate agg;
    agg.n = n;
    std::size_t end = begin;
    while (end < result.records.size() && result.records[end].n == n) ++end;
    agg.samples = end - begin;
    std::vector<double> column(end - begin);
    for (std::size_t c = 0; c < width; ++c) {
      std::size_t used = 0;
      for (std::size_t k = begin; k < end; ++k)
        if (result.records[k].ok) column[used++] = result.records[k].values[c];
      column.resize(used);
      agg.stats.push_back(column_stats(column));
      column.resize(end - begin);
    }
    for (std::size_t k = begin; k < end; ++k)
      if (!result.records[k].ok) ++agg.failures;
    result.aggregates.push_back(std::move(agg));
    begin = end;
  }
  return result;
}

std::vector<SweepCell> scaling_sweep(const SweepConfig& cfg) {
  if (cfg.kinds.empty() || cfg.ratios.empty()) throw ConfigError("sweep grid is empty");
  std::vector<SweepCell> cells;
  for (const std::string& kind : cfg.kinds) {
    for (double ratio : cfg.ratios) {
      SweepCell cell;
      cell.kind = kind;
      cell.ratio = ratio;
      try {
        EnsembleConfig ec;
        ec.dist = DistributionSpec::with_ratio(kind, ratio);
        ec.n_range = cfg.n_range;
        ec.schedule = cfg.schedule;
        ec.master_seed = derive_seed(cfg.master_seed, fnv1a(kind), std::bit_cast<std::uint64_t>(ratio));
        ec.quantities = {Quantity::CMinus1};
        ec.k_max = 1;
        ec.threads = cfg.threads;
        const EnsembleResult er = run_ensemble(ec);
        cell.means = er.means("c_minus_1");
        std::vector<double> weights;
        if (cfg.weighted) {
          const std::size_t col = *er.column("c_minus_1");
          for (const Aggregate& a : er.aggregates) {
            if (a.stats[col].count == 0) continue;
            const double se = a.stats[col].standard_error;
            weights.push_back(se > 0.0 && std::isfinite(se) ? 1.0 / (se * se) : 1.0);
          }
        }
        cell.fit = fit_power_law(cell.means, weights);
      } catch (const ConfigError&) {
        throw;
      } catch (const std::exception& ex) {
        cell.ok = false;
        cell.error = ex.what();
      }
      cells.push_back(std::move(cell));
    }
  }
  return cells;
}

}  // namespace parity

#include "parity/instances.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace parity {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace

// ---------------------------------------------------------------------------
// DistributionSpec

DistributionSpec DistributionSpec::normal(double mean, double stddev) {
  if (!(stddev > 0.0) || !std::isfinite(mean) || !std::isfinite(stddev))
    throw std::invalid_argument("normal distribution requires finite mean and stddev > 0");
  return DistributionSpec(NormalDist{mean, stddev});
}

DistributionSpec DistributionSpec::uniform(double lower, double upper) {
  if (!(lower < upper) || !std::isfinite(lower) || !std::isfinite(upper))
    throw std::invalid_argument("uniform distribution requires finite a < b");
  return DistributionSpec(UniformDist{lower, upper});
}

DistributionSpec DistributionSpec::bimodal(double p) {
  if (!(p >= 0.0 && p <= 1.0))
    throw std::invalid_argument("bimodal distribution requires p in [0, 1]");
  return DistributionSpec(BimodalDist{p});
}

DistributionSpec DistributionSpec::with_ratio(const std::string& kind, double ratio) {
  if (!std::isfinite(ratio)) throw std::invalid_argument("mu/sigma must be finite");
  if (kind == "normal") return normal(ratio, 1.0);
  if (kind == "uniform") {
    const double half_width = std::sqrt(3.0);
    return uniform(ratio - half_width, ratio + half_width);
  }
  if (kind == "bimodal") {
    const double t = ratio / std::sqrt(1.0 + ratio * ratio);
    return bimodal(0.5 * (1.0 + t));
  }
  throw std::invalid_argument("unknown distribution kind '" + kind + "'");
}

std::string DistributionSpec::kind_name() const {
  return std::visit(Overloaded{[](const NormalDist&) { return std::string("normal"); },
                               [](const UniformDist&) { return std::string("uniform"); },
                               [](const BimodalDist&) { return std::string("bimodal"); }},
                    kind_);
}

double DistributionSpec::mean() const {
  return std::visit(Overloaded{[](const NormalDist& d) { return d.mean; },
                               [](const UniformDist& d) { return 0.5 * (d.lower + d.upper); },
                               [](const BimodalDist& d) { return 2.0 * d.p - 1.0; }},
                    kind_);
}

double DistributionSpec::stddev() const {
  return std::visit(
      Overloaded{[](const NormalDist& d) { return d.stddev; },
                 [](const UniformDist& d) { return (d.upper - d.lower) / std::sqrt(12.0); },
                 [](const BimodalDist& d) { return 2.0 * std::sqrt(d.p * (1.0 - d.p)); }},
      kind_);
}

double DistributionSpec::ratio() const {
  return std::visit(
      Overloaded{[](const NormalDist& d) { return d.mean / d.stddev; },
                 [](const UniformDist& d) {
                   return std::sqrt(3.0) * (d.lower + d.upper) / std::abs(d.lower - d.upper);
                 },
                 [](const BimodalDist& d) {
                   if (d.p <= 0.0 || d.p >= 1.0)
                     throw std::domain_error("mu/sigma undefined for bimodal p in {0, 1}");
                   return (2.0 * d.p - 1.0) / (2.0 * std::sqrt(d.p * (1.0 - d.p)));
                 }},
      kind_);
}

double DistributionSpec::sample(CounterRng& rng) const {
  return std::visit(
      Overloaded{[&](const NormalDist& d) { return d.mean + d.stddev * rng.normal(); },
                 [&](const UniformDist& d) { return d.lower + (d.upper - d.lower) * rng.uniform(); },
                 [&](const BimodalDist& d) { return rng.bernoulli(d.p) ? 1.0 : -1.0; }},
      kind_);
}

std::string DistributionSpec::describe() const {
  std::ostringstream out;
  out.precision(17);
  std::visit(Overloaded{[&](const NormalDist& d) {
                          out << "normal(" << d.mean << "," << d.stddev << ")";
                        },
                        [&](const UniformDist& d) {
                          out << "uniform(" << d.lower << "," << d.upper << ")";
                        },
                        [&](const BimodalDist& d) { out << "bimodal(" << d.p << ")"; }},
             kind_);
  return out.str();
}

// ---------------------------------------------------------------------------
// Graph

Graph::Graph(int n, std::vector<Edge> edges) : n_(n), edges_(std::move(edges)) {
  if (n < 1) throw std::invalid_argument("graph needs at least one vertex");
  for (const Edge& e : edges_) {
    if (e.i < 0 || e.j >= n || e.i >= e.j)
      throw std::invalid_argument("edge endpoints must satisfy 0 <= i < j < n");
  }
  std::sort(edges_.begin(), edges_.end(),
            [](const Edge& a, const Edge& b) { return a.i != b.i ? a.i < b.i : a.j < b.j; });
  if (std::adjacent_find(edges_.begin(), edges_.end()) != edges_.end())
    throw std::invalid_argument("duplicate edge");
  degree_.assign(static_cast<std::size_t>(n), 0);
  for (const Edge& e : edges_) {
    ++degree_[static_cast<std::size_t>(e.i)];
    ++degree_[static_cast<std::size_t>(e.j)];
  }
  max_degree_ = *std::max_element(degree_.begin(), degree_.end());
}

Graph Graph::complete(int n) {
  std::vector<Edge> edges;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) edges.push_back({i, j});
  return Graph(n, std::move(edges));
}

Graph Graph::path(int n) {
  std::vector<Edge> edges;
  for (int i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1});
  return Graph(n, std::move(edges));
}

Graph Graph::cycle(int n) {
  if (n < 3) throw std::invalid_argument("cycle needs n >= 3");
  std::vector<Edge> edges;
  for (int i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1});
  edges.push_back({0, n - 1});
  return Graph(n, std::move(edges));
}

bool Graph::has_edge(int i, int j) const {
  if (i > j) std::swap(i, j);
  return std::binary_search(
      edges_.begin(), edges_.end(), Edge{i, j},
      [](const Edge& a, const Edge& b) { return a.i != b.i ? a.i < b.i : a.j < b.j; });
}

GraphSpec GraphSpec::complete(int n) {
  if (n < 1) throw std::invalid_argument("graph needs at least one vertex");
  return GraphSpec(CompleteGraph{n});
}

GraphSpec GraphSpec::erdos_renyi(int n, double p_edge, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("graph needs at least one vertex");
  if (!(p_edge >= 0.0 && p_edge <= 1.0))
    throw std::invalid_argument("edge probability must lie in [0, 1]");
  return GraphSpec(ErdosRenyiGraph{n, p_edge, seed});
}

int GraphSpec::n() const {
  return std::visit([](const auto& g) { return g.n; }, kind_);
}

std::string GraphSpec::describe() const {
  std::ostringstream out;
  std::visit(Overloaded{[&](const CompleteGraph& g) { out << "complete(" << g.n << ")"; },
                        [&](const ErdosRenyiGraph& g) {
                          out << "erdos_renyi(" << g.n << "," << g.p_edge << "," << g.seed << ")";
                        }},
             kind_);
  return out.str();
}

Graph GraphSpec::realize() const {
  return std::visit(Overloaded{[](const CompleteGraph& g) { return Graph::complete(g.n); },
                               [](const ErdosRenyiGraph& g) {
                                 CounterRng rng(g.seed);
                                 std::vector<Edge> edges;
                                 for (int i = 0; i < g.n; ++i)
                                   for (int j = i + 1; j < g.n; ++j)
                                     if (rng.bernoulli(g.p_edge)) edges.push_back({i, j});
                                 return Graph(g.n, std::move(edges));
                               }},
                    kind_);
}

// ---------------------------------------------------------------------------
// IsingInstance

IsingInstance::IsingInstance(int n, std::vector<Coupling> couplings, double offset,
                             InstanceMetadata metadata)
    : n_(n), couplings_(std::move(couplings)), offset_(offset), metadata_(std::move(metadata)) {
  if (n < 1) throw std::invalid_argument("instance needs at least one spin");
  if (n > 4096) throw std::invalid_argument("instance too large");
  std::sort(couplings_.begin(), couplings_.end(), [](const Coupling& a, const Coupling& b) {
    return a.i != b.i ? a.i < b.i : a.j < b.j;
  });
  const std::size_t m = static_cast<std::size_t>(n) * static_cast<std::size_t>(n - 1) / 2;
  dense_.assign(m, 0.0);
  std::vector<bool> seen(m, false);
  integral_ = true;
  for (const Coupling& c : couplings_) {
    if (c.i < 0 || c.j >= n || c.i >= c.j)
      throw std::invalid_argument("coupling indices must satisfy 0 <= i < j < n");
    if (!std::isfinite(c.value)) throw std::invalid_argument("coupling must be finite");
    const auto idx = static_cast<std::size_t>(pair_index(n, c.i, c.j));
    if (seen[idx]) throw std::invalid_argument("duplicate coupling");
    seen[idx] = true;
    dense_[idx] = c.value;
    if (c.value != std::floor(c.value) || std::abs(c.value) >= 2147483648.0) integral_ = false;
  }
}

IsingInstance IsingInstance::from_dense(int n, std::span<const double> site_couplings,
                                        double offset, InstanceMetadata metadata) {
  const std::size_t m = static_cast<std::size_t>(n) * static_cast<std::size_t>(n - 1) / 2;
  if (site_couplings.size() != m)
    throw std::invalid_argument("dense coupling vector must have n(n-1)/2 entries");
  std::vector<Coupling> couplings;
  couplings.reserve(m);
  std::size_t idx = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) couplings.push_back({i, j, site_couplings[idx++]});
  return IsingInstance(n, std::move(couplings), offset, std::move(metadata));
}

bool IsingInstance::dense() const noexcept { return couplings_.size() == dense_.size(); }

double IsingInstance::coupling(int i, int j) const {
  if (i == j) return 0.0;
  if (i > j) std::swap(i, j);
  if (i < 0 || j >= n_) throw std::out_of_range("spin index out of range");
  return dense_[static_cast<std::size_t>(pair_index(n_, i, j))];
}

double IsingInstance::p0() const noexcept {
  double s = 0.0;
  for (const Coupling& c : couplings_) s += std::abs(c.value);
  return -s;
}

double IsingInstance::energy(std::span<const std::int8_t> spins) const {
  if (static_cast<int>(spins.size()) != n_)
    throw std::invalid_argument("spin configuration has wrong length");
  double e = 0.0;
  for (const Coupling& c : couplings_)
    e += c.value * spins[static_cast<std::size_t>(c.i)] * spins[static_cast<std::size_t>(c.j)];
  return e;
}

IsingInstance IsingInstance::scaled(double factor) const {
  std::vector<Coupling> cs = couplings_;
  for (Coupling& c : cs) c.value *= factor;
  return IsingInstance(n_, std::move(cs), offset_ * factor, metadata_);
}

// ---------------------------------------------------------------------------
// Sampling and problem encodings

IsingInstance sample_instance(const DistributionSpec& dist, const GraphSpec& graph,
                              std::uint64_t seed) {
  const Graph g = graph.realize();
  CounterRng rng(seed);
  std::vector<Coupling> couplings;
  couplings.reserve(g.edge_count());
  for (const Edge& e : g.edges()) couplings.push_back({e.i, e.j, dist.sample(rng)});
  InstanceMetadata meta;
  meta.problem = "couplings";
  meta.distribution = dist.describe() + " on " + graph.describe();
  meta.seed = seed;
  return IsingInstance(g.n(), std::move(couplings), 0.0, std::move(meta));
}

IsingInstance encode_maxcut(const Graph& graph) {
  std::vector<Coupling> couplings;
  couplings.reserve(graph.edge_count());
  for (const Edge& e : graph.edges()) couplings.push_back({e.i, e.j, 1.0});
  InstanceMetadata meta;
  meta.problem = "maxcut";
  return IsingInstance(graph.n(), std::move(couplings), 0.0, std::move(meta));
}

double maxcut_value(double l0, std::size_t edge_count) {
  return 0.5 * (-l0 + static_cast<double>(edge_count));
}

double minbisection_threshold(const Graph& graph) {
  return std::min(4.0 * graph.max_degree(), static_cast<double>(graph.n())) / 4.0;
}

IsingInstance encode_minbisection(const Graph& graph, std::optional<double> u) {
  const int n = graph.n();
  if (n % 2 != 0) throw std::invalid_argument("minimum bisection needs an even number of vertices");
  const double threshold = minbisection_threshold(graph);
  const double penalty = u.value_or(threshold + 1.0);
  if (u && !(*u > threshold))
    throw std::invalid_argument("penalty u must exceed min(4 d_max, n)/4");
  std::vector<Coupling> couplings;
  couplings.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(n - 1) / 2);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      couplings.push_back({i, j, (graph.has_edge(i, j) ? -1.0 : 0.0) + 2.0 * penalty});
  InstanceMetadata meta;
  meta.problem = "minbisection";
  return IsingInstance(n, std::move(couplings), penalty * n, std::move(meta));
}

}  // namespace parity

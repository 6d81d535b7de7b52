#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "parity/rng.hpp"

namespace parity {

// Logical spin configuration, entries +1 / -1.
using Spins = std::vector<std::int8_t>;

// ---------------------------------------------------------------------------
// Coupling distributions

struct NormalDist {
  double mean = 0.0;
  double stddev = 1.0;
};

struct UniformDist {
  double lower = -1.0;
  double upper = 1.0;
};

// J = +1 with probability p, -1 otherwise.
struct BimodalDist {
  double p = 0.5;
};

class DistributionSpec {
 public:
  using Kind = std::variant<NormalDist, UniformDist, BimodalDist>;

  static DistributionSpec normal(double mean, double stddev);
  static DistributionSpec uniform(double lower, double upper);
  static DistributionSpec bimodal(double p);

  // Distribution of the given kind ("normal", "uniform", "bimodal") with unit
  // standard deviation and mean/stddev equal to `ratio`.
  static DistributionSpec with_ratio(const std::string& kind, double ratio);

  const Kind& kind() const noexcept { return kind_; }
  std::string kind_name() const;

  double mean() const;
  double stddev() const;

  // mu / sigma. Throws std::domain_error for Bimodal with p in {0, 1}.
  double ratio() const;

  double sample(CounterRng& rng) const;

  std::string describe() const;

 private:
  explicit DistributionSpec(Kind kind) : kind_(kind) {}
  Kind kind_;
};

// ---------------------------------------------------------------------------
// Graphs

struct Edge {
  int i = 0;  // 0-based, i < j
  int j = 0;
  bool operator==(const Edge&) const = default;
};

class Graph {
 public:
  Graph(int n, std::vector<Edge> edges);

  static Graph complete(int n);
  static Graph path(int n);
  static Graph cycle(int n);

  int n() const noexcept { return n_; }
  std::span<const Edge> edges() const noexcept { return edges_; }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  int degree(int v) const { return degree_.at(static_cast<std::size_t>(v)); }
  int max_degree() const noexcept { return max_degree_; }
  bool has_edge(int i, int j) const;

 private:
  int n_;
  std::vector<Edge> edges_;
  std::vector<int> degree_;
  int max_degree_ = 0;
};

struct CompleteGraph {
  int n = 0;
};

struct ErdosRenyiGraph {
  int n = 0;
  double p_edge = 0.5;
  std::uint64_t seed = 0;
};

class GraphSpec {
 public:
  using Kind = std::variant<CompleteGraph, ErdosRenyiGraph>;

  static GraphSpec complete(int n);
  static GraphSpec erdos_renyi(int n, double p_edge, std::uint64_t seed);

  const Kind& kind() const noexcept { return kind_; }
  int n() const;
  std::string describe() const;
  // Deterministic for a given GraphSpec (ER edges drawn from CounterRng(seed)).
  // Deterministic in the spec (ER edges drawn from CounterRng(seed)).
  Graph realize() const;

 private:
  explicit GraphSpec(Kind kind) : kind_(kind) {}
  Kind kind_;
};

// ---------------------------------------------------------------------------
// Ising instances

struct Coupling {
  int i = 0;  // 0-based, i < j
  int j = 0;
  double value = 0.0;
};

struct InstanceMetadata {
  std::string problem = "couplings";
  std::string distribution;
  std::optional<std::uint64_t> seed;
};

// H(sigma) = sum_{i<j} J_ij sigma_i sigma_j + offset. Couplings are stored
// sparsely; absent pairs are J = 0. The offset never enters any spectrum
// computation and is carried for reporting only.
class IsingInstance {
 public:
  IsingInstance(int n, std::vector<Coupling> couplings, double offset = 0.0,
                InstanceMetadata metadata = {});

  // Complete-graph instance from a site-ordered coupling vector of length
  // n(n-1)/2 (pairs (0,1), (0,2), ..., (n-2,n-1)).
  static IsingInstance from_dense(int n, std::span<const double> site_couplings,
                                  double offset = 0.0, InstanceMetadata metadata = {});

  int n() const noexcept { return n_; }
  std::span<const Coupling> couplings() const noexcept { return couplings_; }
  double offset() const noexcept { return offset_; }
  const InstanceMetadata& metadata() const noexcept { return metadata_; }

  // True when every pair i<j carries an explicit coupling.
  bool dense() const noexcept;

  // Site-ordered couplings over all pairs (zeros for absent edges).
  std::span<const double> site_couplings() const noexcept { return dense_; }
  double coupling(int i, int j) const;

  // All couplings are integers of magnitude below 2^31.
  bool integral() const noexcept { return integral_; }

  // p0 = -sum |J_ij|.
  double p0() const noexcept;

  // sum_{i<j} J_ij s_i s_j (offset excluded).
  double energy(std::span<const std::int8_t> spins) const;

  IsingInstance scaled(double factor) const;

 private:
  int n_;
  std::vector<Coupling> couplings_;
  std::vector<double> dense_;
  double offset_;
  InstanceMetadata metadata_;
  bool integral_ = false;
};

// Index of pair (i, j), i < j, in lexicographic site order.
constexpr int pair_index(int n, int i, int j) noexcept {
  return i * n - i * (i + 1) / 2 + (j - i - 1);
}

IsingInstance sample_instance(const DistributionSpec& dist, const GraphSpec& graph,
                              std::uint64_t seed);

// J_ij = 1 on every edge.
IsingInstance encode_maxcut(const Graph& graph);

// Maximum cut recovered from the ground energy of the MaxCut encoding.
double maxcut_value(double l0, std::size_t edge_count);

// Lucas threshold min(4 d_max, n) / 4; the penalty must exceed it.
double minbisection_threshold(const Graph& graph);

// -sum_{E} s_i s_j + u (sum s)^2 expanded into K_n couplings
// J'_ij = -[ij in E] + 2u, offset u n. `u` empty selects threshold + 1.
IsingInstance encode_minbisection(const Graph& graph, std::optional<double> u = std::nullopt);

}  // namespace parity

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "parity/instances.hpp"

namespace parity {

enum class Quantity { L0, E, Gap, A1, A2, CMinus1, CMinus2, CHat, UpperBounds, C1Sdp };

std::string quantity_name(Quantity q);
Quantity parse_quantity(const std::string& name);

// Which problem the per-sample graph is turned into.
enum class Problem { Couplings, MaxCut, MinBisection };

std::string problem_name(Problem p);
Problem parse_problem(const std::string& name);

struct GraphFamily {
  enum class Kind { Complete, ErdosRenyi };
  Kind kind = Kind::Complete;
  double p_edge = 0.5;

  GraphSpec at(int n, std::uint64_t seed) const;
  std::string describe() const;
};

// samples(n) = clamp(base * 2^{-(n - n0)}, floor, cap) for the geometric
// schedule, or a fixed count.
struct SampleSchedule {
  enum class Kind { Fixed, Geometric };
  Kind kind = Kind::Geometric;
  std::size_t fixed = 100;
  double base = 1e5;
  int n0 = 4;
  std::size_t floor = 32;
  std::size_t cap = 0;  // 0 = unlimited

  static SampleSchedule fixed_count(std::size_t count);
  std::size_t samples(int n) const;
};

struct EnsembleConfig {
  DistributionSpec dist = DistributionSpec::normal(0.0, 1.0);
  GraphFamily graph;
  Problem problem = Problem::Couplings;
  std::vector<int> n_range;
  SampleSchedule schedule;
  std::uint64_t master_seed = 1;
  std::vector<Quantity> quantities{Quantity::L0, Quantity::CMinus1};
  int k_max = 1;
  int threads = 1;

  // Throws ConfigError on an unusable configuration.
  void validate() const;
};

struct SampleRecord {
  int n = 0;
  std::size_t index = 0;
  std::uint64_t seed = 0;
  bool ok = true;
  std::string error;
  std::vector<double> values;  // aligned with EnsembleResult::columns
};

struct ColumnStats {
  std::size_t count = 0;
  double mean = 0.0;
  double variance = 0.0;  // unbiased
  double standard_error = 0.0;
};

struct Aggregate {
  int n = 0;
  std::size_t samples = 0;
  std::size_t failures = 0;
  std::vector<ColumnStats> stats;  // aligned with columns
};

struct EnsembleResult {
  std::vector<std::string> columns;
  std::vector<SampleRecord> records;  // ordered by (n, index)
  std::vector<Aggregate> aggregates;  // one per n

  std::optional<std::size_t> column(const std::string& name) const;
  // (n, mean) of a column over sizes with at least one successful sample.
  std::vector<std::pair<double, double>> means(const std::string& name) const;
};

// Output columns implied by a configuration.
std::vector<std::string> ensemble_columns(const EnsembleConfig& cfg);

// Deterministic in master_seed regardless of thread count. Per-sample failures
// (capacity or numerical) are recorded and excluded from the aggregates.
EnsembleResult run_ensemble(const EnsembleConfig& cfg);

// Mean, unbiased variance and standard error of finite values.
ColumnStats column_stats(const std::vector<double>& values);

struct FitResult {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
  double covariance[3][3] = {};  // over (alpha, beta, gamma)
  double rms_residual = 0.0;
  bool degenerate = false;  // alpha unidentifiable (e.g. constant data)
  std::size_t points = 0;
};

// Least-squares fit of y = beta n^alpha + gamma. For fixed alpha (beta, gamma)
// is a linear problem; alpha is found by scanning and golden-section search on
// [0, 3], then polished by Gauss-Newton. Optional weights multiply squared
// residuals. Requires >= 4 points with distinct n.
FitResult fit_power_law(const std::vector<std::pair<double, double>>& points,
                        const std::vector<double>& weights = {});

struct SweepConfig {
  std::vector<std::string> kinds{"normal", "uniform", "bimodal"};
  std::vector<double> ratios{-4.0, -2.0, -1.0, 0.0, 1.0, 2.0, 4.0};
  std::vector<int> n_range;
  SampleSchedule schedule;
  std::uint64_t master_seed = 1;
  int threads = 1;
  bool weighted = false;
};

struct SweepCell {
  std::string kind;
  double ratio = 0.0;
  bool ok = true;
  std::string error;
  FitResult fit;
  std::vector<std::pair<double, double>> means;  // (n, mean c_-1)
};

// Exponent of the power-law fit onto the mean c_-1 for every (kind, ratio).
std::vector<SweepCell> scaling_sweep(const SweepConfig& cfg);

}  // namespace parity

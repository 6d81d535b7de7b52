#pragma once

#include <cstdint>
#include <vector>

#include "parity/instances.hpp"

namespace parity {

struct SdpOptions {
  int rank = 0;  // 0 selects ceil(sqrt(2n)) + 1
  int max_iterations = 20000;
  double gradient_tolerance = 1e-7;  // relative to |E|
  double target_relative_gap = 1e-8;
  int dual_check_interval = 25;
  std::uint64_t seed = 0x5D9;
};

// MaxCut relaxation max sum_E (1 - X_ij)/2 over unit-diagonal PSD X.
struct SdpResult {
  double primal_value = 0.0;  // attained by the factorization X = Y Y^T
  double dual_value = 0.0;    // certified upper bound on the relaxation optimum
  int rank_used = 0;
  int iterations = 0;
  bool converged = false;
  bool widened_gap = false;  // iteration budget hit before the target gap
  std::vector<double> factor;  // n x rank, row-major unit rows

  double relative_gap() const;
};

SdpResult solve_maxcut_sdp(const Graph& graph, const SdpOptions& options = {});

// Dual value sum(y) + n lambda_max(L/4 - Diag(y)) for an arbitrary y; always
// an upper bound on the relaxation optimum.
double maxcut_dual_value(const Graph& graph, const std::vector<double>& y);

struct RoundedCut {
  Spins spins;
  std::int64_t value = 0;
};

// Best of `trials` random-hyperplane roundings of the factorization.
RoundedCut round_cut(const Graph& graph, const SdpResult& sdp, int trials = 64,
                     std::uint64_t seed = 1);

struct TripartitionBound {
  double a1_plus = 0.0;
  int k = 0;  // A = [0, k), B = [k, j), C = [j, n), 0-based
  int j = 0;
  int plaquette_i = 0;  // the single violated plaquette (k-1, j-1)
  int plaquette_j = 0;
  Spins spins;  // logical configuration of the sign-flipped problem
};

// Upper bound a1+ >= a1 from single-defect states built on three consecutive
// blocks. Requires n >= 6.
TripartitionBound tripartition_a1_upper(const IsingInstance& inst);

struct SdpBound {
  double c1_sdp = 0.0;             // uses floor of the dual (cuts are integers)
  double c1_sdp_continuous = 0.0;  // uses the dual value itself
  double a1_plus = 0.0;
  double edge_count = 0.0;
  SdpResult sdp;
  bool meaningful = true;  // false for edgeless graphs
};

// -2 opt_sdp + |E| + 2 - a1+ <= c_-1 for the MaxCut encoding of `graph`.
SdpBound c1_sdp_bound(const Graph& graph, const SdpOptions& options = {});

}  // namespace parity

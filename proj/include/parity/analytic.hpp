#pragma once

#include <cstdint>
#include <optional>
#include <span>

namespace parity {

// Uniform ferromagnet J = -1 on K_n.
struct FerroLimit {
  int n = 0;
  double l0 = 0.0;   // -n(n-1)/2
  double gap = 0.0;  // 2(n-1)
  double a1 = 0.0;   // l0 + 2
  double c = 0.0;    // 2n - 4
};

FerroLimit ferro_limit(int n);

// Uniform antiferromagnet J = +1 on K_n, closed forms as published:
// c_-1 = n^2/6 + 2 for n = 0 mod 3 and n^2/6 + 4/3 otherwise. l0 and the gap
// are only given for even n, a1 = -(n/2)(1 + n/3) only for n = 0 mod 3.
struct AntiferroLimit {
  int n = 0;
  double c_minus_1 = 0.0;
  std::optional<double> l0;
  std::optional<double> gap;
  std::optional<double> a1;
};

AntiferroLimit antiferro_limit(int n);

// Maximum cut of K_n: floor(n/2) * ceil(n/2).
std::int64_t complete_graph_maxcut(int n);

// Cov[H(sigma), H(tau)] for i.i.d. unit-variance couplings on K_n:
// (sum_i sigma_i tau_i)^2 / 2 - n/2.
double eigenvalue_covariance(std::span<const std::int8_t> sigma, std::span<const std::int8_t> tau);

// sum_{i<j} s_i s_j = ((sum s)^2 - n) / 2.
double pair_sum(std::span<const std::int8_t> spins);

// Mean energy mu ((n - 2k)^2 - n) / 2 of a configuration with k down spins
// when every J_ij has mean mu.
double mean_split(int n, int k, double mu);

// Configurations with exactly k down spins: binomial(n, k).
double level_count(int n, int k);

}  // namespace parity

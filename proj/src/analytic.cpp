#include "parity/analytic.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace parity {

namespace {

void require_n(int n, int minimum) {
  if (n < minimum) throw std::invalid_argument("closed form requires n >= " + std::to_string(minimum));
}

}  // namespace

FerroLimit ferro_limit(int n) {
  require_n(n, 3);
  FerroLimit r;
  r.n = n;
  r.l0 = -0.5 * n * (n - 1);
  r.gap = 2.0 * (n - 1);
  r.a1 = r.l0 + 2.0;
  r.c = 2.0 * n - 4.0;
  return r;
}

AntiferroLimit antiferro_limit(int n) {
  require_n(n, 3);
  AntiferroLimit r;
  r.n = n;
  const double base = static_cast<double>(n) * n / 6.0;
  r.c_minus_1 = base + (n % 3 == 0 ? 2.0 : 4.0 / 3.0);
  if (n % 2 == 0) {
    r.l0 = -0.5 * n;
    r.gap = 2.0;
  }
  if (n % 3 == 0) r.a1 = -0.5 * n * (1.0 + n / 3.0);
  return r;
}

std::int64_t complete_graph_maxcut(int n) {
  require_n(n, 1);
  const std::int64_t half = n / 2;
  return half * (n - half);
}

double eigenvalue_covariance(std::span<const std::int8_t> sigma, std::span<const std::int8_t> tau) {
  if (sigma.size() != tau.size()) throw std::invalid_argument("configurations differ in length");
  long overlap = 0;
  for (std::size_t i = 0; i < sigma.size(); ++i) overlap += sigma[i] * tau[i];
  return 0.5 * static_cast<double>(overlap) * static_cast<double>(overlap) -
         0.5 * static_cast<double>(sigma.size());
}

double pair_sum(std::span<const std::int8_t> spins) {
  long total = 0;
  for (auto s : spins) total += s;
  return 0.5 * (static_cast<double>(total) * static_cast<double>(total) -
                static_cast<double>(spins.size()));
}

double mean_split(int n, int k, double mu) {
  if (n < 1 || k < 0 || k > n) throw std::invalid_argument("mean_split requires 0 <= k <= n");
  const double d = n - 2.0 * k;
  return 0.5 * mu * (d * d - n);
}

double level_count(int n, int k) {
  if (n < 0 || k < 0 || k > n) return 0.0;
  return std::round(std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0)));
}

}  // namespace parity

#pragma once

// Test-only reference implementations. They share no code with the library
// routes they check: plain loops, no Gray codes, no sign-flip reduction.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <set>
#include <vector>

#include "parity/instances.hpp"

namespace oracle {

inline double energy(const parity::IsingInstance& inst, const std::vector<int>& s) {
  double e = 0.0;
  for (int i = 0; i < inst.n(); ++i)
    for (int j = i + 1; j < inst.n(); ++j) e += inst.coupling(i, j) * s[i] * s[j];
  return e;
}

inline std::vector<int> spins_of(std::uint64_t code, int n) {
  std::vector<int> s(n);
  for (int i = 0; i < n; ++i) s[i] = (code >> i) & 1 ? -1 : 1;
  return s;
}

// All distinct logical energies (merged within tol), ascending.
inline std::vector<double> spectrum(const parity::IsingInstance& inst, double tol = 1e-9) {
  std::vector<double> all;
  for (std::uint64_t c = 0; c < (std::uint64_t{1} << inst.n()); ++c)
    all.push_back(energy(inst, spins_of(c, inst.n())));
  std::sort(all.begin(), all.end());
  std::vector<double> levels;
  for (double v : all)
    if (levels.empty() || v - levels.back() > tol * std::max(1.0, std::abs(levels.back())))
      levels.push_back(v);
  return levels;
}

struct Levels {
  double l0;
  double e;
};

inline Levels ground_and_first(const parity::IsingInstance& inst) {
  const auto lv = spectrum(inst);
  return {lv[0], lv.size() > 1 ? lv[1] : lv[0]};
}

// Site numbering and plaquettes re-derived from the definitions.
struct Geometry {
  int n;
  std::map<std::pair<int, int>, int> site;          // (i, j) -> bit
  std::vector<std::vector<int>> plaquettes;         // member bits
  std::vector<std::pair<int, int>> plaquette_label;  // [k, l]

  explicit Geometry(int n_) : n(n_) {
    int b = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) site[{i, j}] = b++;
    for (int k = 0; k < n - 1; ++k) {
      for (int l = k + 1; l < n - 1; ++l) {
        std::set<std::pair<int, int>> members;
        if (l == k + 1) {
          members = {{k, k + 1}, {k, k + 2}, {k + 1, k + 2}};
        } else {
          members = {{k, l}, {k, l + 1}, {k + 1, l}, {k + 1, l + 1}};
        }
        std::vector<int> bits;
        for (const auto& p : members) bits.push_back(site.at(p));
        plaquettes.push_back(bits);
        plaquette_label.emplace_back(k, l);
      }
    }
  }
  int m() const { return static_cast<int>(site.size()); }
  int q() const { return static_cast<int>(plaquettes.size()); }

  std::uint64_t violated(std::uint64_t state) const {
    std::uint64_t w = 0;
    for (int p = 0; p < q(); ++p) {
      int parity = 0;
      for (int b : plaquettes[p]) parity ^= (state >> b) & 1;
      if (parity) w |= std::uint64_t{1} << p;
    }
    return w;
  }

  double field_energy(const parity::IsingInstance& inst, std::uint64_t state) const {
    double e = 0.0;
    for (const auto& [ij, b] : site) e += inst.coupling(ij.first, ij.second) * ((state >> b) & 1 ? -1.0 : 1.0);
    return e;
  }
};

// Minimum field energy per violation word over all 2^m physical states.
inline std::map<std::uint64_t, double> physical_minima(const parity::IsingInstance& inst) {
  const Geometry g(inst.n());
  std::map<std::uint64_t, double> best;
  for (std::uint64_t s = 0; s < (std::uint64_t{1} << g.m()); ++s) {
    const std::uint64_t w = g.violated(s);
    const double e = g.field_energy(inst, s);
    auto it = best.find(w);
    if (it == best.end() || e < it->second) best[w] = e;
  }
  return best;
}

// E[min of m i.i.d. standard normals] by quadrature of m x phi(x) (1 - Phi(x))^(m-1).
inline double expected_min_normals(double m) {
  const double lo = -12.0, hi = 4.0;
  const int steps = 200000;
  const double h = (hi - lo) / steps;
  double acc = 0.0;
  for (int k = 0; k <= steps; ++k) {
    const double x = lo + k * h;
    const double phi = std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI);
    const double tail = 0.5 * std::erfc(x / std::sqrt(2.0));
    const double f = x * m * phi * std::exp((m - 1.0) * std::log(tail));
    acc += (k == 0 || k == steps) ? 0.5 * f : f;
  }
  return acc * h;
}

// Normal quantile by bisection on erfc.
inline double probit_bisect(double p) {
  if (p > 0.5) return -probit_bisect(1.0 - p);
  double lo = -40.0, hi = 40.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (0.5 * std::erfc(-mid / std::sqrt(2.0)) < p)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace oracle

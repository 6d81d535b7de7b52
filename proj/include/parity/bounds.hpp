#pragma once

#include <optional>
#include <string>
#include <vector>

#include "parity/constraints.hpp"
#include "parity/instances.hpp"
#include "parity/layout.hpp"
#include "parity/solver.hpp"

namespace parity {

// Homogeneous optimum and the bound family around it.
struct BoundsReport {
  int n = 0;
  int q = 0;
  double l0 = 0.0;
  double e = 0.0;
  double gap = 0.0;
  double p0 = 0.0;               // -sum |J|
  std::vector<double> a;         // a[k-1] = a_k, k = 1..k_max_used
  std::vector<double> lower;     // lower[k-1] = c_-k = (e - a_k)/k
  std::vector<double> upper;     // upper[i] = c_i, i = 0..k_max_used
  double c_hat = 0.0;            // max over lower (0 when q = 0)
  int binding_k = 0;             // k attaining c_hat
  double trivial = 0.0;          // 2|p0|
  int k_max_used = 0;
  bool exact_integer = false;

  bool complete() const noexcept { return k_max_used == q; }
  // c_hat is the optimum when every defect count was covered or when the
  // upper bound c_{k_max} already meets max_k c_-k.
  bool certified() const noexcept {
    return complete() || (!lower.empty() && upper.back() <= c_hat);
  }
  std::string label() const;
};

// c_-k, c_hat, c_i and 2|p0| for k = 1..min(k_max, q).
BoundsReport homogeneous_optimum(const IsingInstance& inst, const ParityLayout& layout, int k_max,
                                 const EnumerationLimits& limits = {});

// Same report from already-computed l0, e and a_1..a_k.
BoundsReport bounds_from_minima(int n, double l0, double e, double p0, std::vector<double> a_k);

// Which defect profiles an operation ranges over.
struct ProfileFamily {
  enum class Kind { Full, UpTo, Explicit };
  Kind kind = Kind::Full;
  int k_max = 0;
  std::vector<DefectProfile> profiles;

  static ProfileFamily full() { return {Kind::Full, 0, {}}; }
  static ProfileFamily up_to(int k) { return {Kind::UpTo, k, {}}; }
  static ProfileFamily explicit_list(std::vector<DefectProfile> list) {
    return {Kind::Explicit, 0, std::move(list)};
  }
  std::string describe() const;
};

struct Verdict {
  bool satisfied = false;
  DefectProfile worst;   // profile with the smallest slack
  double worst_slack = 0.0;  // sum_{p in worst} c_p - (e - a_worst)
  std::size_t checked = 0;
  double tolerance = 0.0;
};

// Checks sum_{p in omega} c_p >= e - a_omega over the family.
Verdict verify_assignment(const IsingInstance& inst, const ParityLayout& layout,
                          const ConstraintAssignment& assignment, const ProfileFamily& family,
                          const EnumerationLimits& limits = {});

struct LpSolution {
  std::vector<double> strengths;  // c_p per plaquette
  double objective = 0.0;
  double dual_objective = 0.0;
  std::vector<DefectProfile> active;
  std::size_t constraint_count = 0;
  bool full = false;
  int k_max = 0;
  int iterations = 0;
  double e = 0.0;
  std::string label() const;
  ConstraintAssignment assignment() const { return ConstraintAssignment::per_plaquette(strengths); }
};

// Minimal sum of c_p >= 0 subject to the family's inequalities. A truncated
// family yields a lower bound on the inhomogeneous optimum. Full families are
// limited to q <= 10.
LpSolution solve_lp(const IsingInstance& inst, const ParityLayout& layout,
                    const ProfileFamily& family, const EnumerationLimits& limits = {});

// Enumerates the profiles of a family (Full / UpTo) in increasing size.
std::vector<DefectProfile> enumerate_profiles(const ParityLayout& layout, const ProfileFamily& family);

}  // namespace parity

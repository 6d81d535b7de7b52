#include "parity/bounds.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "parity/errors.hpp"
#include "parity/simplex.hpp"

namespace parity {

namespace {

constexpr int kMaxFullFamilyQ = 20;
constexpr int kMaxFullLpQ = 10;

void check_compatible(const IsingInstance& inst, const ParityLayout& layout) {
  if (inst.n() != layout.n()) throw std::invalid_argument("instance and layout sizes differ");
}

// a_omega lookup backed by the physical profile table when it is cheap,
// otherwise by the sign-flip reduction per profile.
class ProfileMinima {
 public:
  ProfileMinima(const IsingInstance& inst, const ParityLayout& layout,
                const EnumerationLimits& limits, std::size_t expected_queries)
      : inst_(inst), layout_(layout), limits_(limits) {
    const int q = layout.plaquette_count();
    const int m = layout.site_count();
    const bool table_fits = q <= kMaxFullFamilyQ && m <= 40 &&
                            (std::uint64_t{1} << m) <= limits.max_states;
    const double reduction_cost =
        static_cast<double>(expected_queries) * std::ldexp(1.0, inst.n() - 1) * inst.n();
    if (table_fits && std::ldexp(1.0, m) <= reduction_cost) table_ = profile_minima(inst, layout, limits);
  }

  double operator()(const DefectProfile& omega) const {
    if (!table_.empty()) {
      std::uint64_t word = 0;
      for (int p : omega.plaquettes()) word |= std::uint64_t{1} << p;
      return table_[word];
    }
    return restricted_minimum(inst_, omega, layout_, limits_);
  }

 private:
  const IsingInstance& inst_;
  const ParityLayout& layout_;
  EnumerationLimits limits_;
  std::vector<double> table_;
};

std::size_t family_size(const ParityLayout& layout, const ProfileFamily& family) {
  const int q = layout.plaquette_count();
  switch (family.kind) {
    case ProfileFamily::Kind::Full:
      return q >= 63 ? std::numeric_limits<std::size_t>::max() : (std::size_t{1} << q) - 1;
    case ProfileFamily::Kind::UpTo: {
      std::uint64_t total = 0;
      for (int k = 1; k <= std::min(family.k_max, q); ++k)
        total += binomial_saturating(static_cast<std::uint64_t>(q), static_cast<std::uint64_t>(k));
      return static_cast<std::size_t>(total);
    }
    case ProfileFamily::Kind::Explicit:
      return family.profiles.size();
  }
  return 0;
}

}  // namespace

std::string BoundsReport::label() const {
  if (complete()) return "optimum";
  if (certified()) return "optimum (c_" + std::to_string(k_max_used) + " = c_hat)";
  return "lower bound (k <= " + std::to_string(k_max_used) + ")";
}

std::string ProfileFamily::describe() const {
  switch (kind) {
    case Kind::Full:
      return "full";
    case Kind::UpTo:
      return "k <= " + std::to_string(k_max);
    case Kind::Explicit:
      return "explicit(" + std::to_string(profiles.size()) + ")";
  }
  return "";
}

std::string LpSolution::label() const {
  if (full) return "optimum";
  if (k_max > 0) return "lower bound (k <= " + std::to_string(k_max) + ")";
  return "lower bound (explicit family)";
}

BoundsReport bounds_from_minima(int n, double l0, double e, double p0, std::vector<double> a_k) {
  BoundsReport r;
  r.n = n;
  r.q = n >= 2 ? (n - 1) * (n - 2) / 2 : 0;
  r.l0 = l0;
  r.e = e;
  r.gap = e - l0;
  r.p0 = p0;
  r.trivial = 2.0 * std::abs(p0);
  r.k_max_used = static_cast<int>(a_k.size());
  r.a = std::move(a_k);
  r.c_hat = r.a.empty() ? 0.0 : -std::numeric_limits<double>::infinity();
  for (int k = 1; k <= r.k_max_used; ++k) {
    const double c = (e - r.a[static_cast<std::size_t>(k - 1)]) / k;
    r.lower.push_back(c);
    if (c > r.c_hat) {
      r.c_hat = c;
      r.binding_k = k;
    }
  }
  double running = -std::numeric_limits<double>::infinity();
  for (int i = 0; i <= r.k_max_used; ++i) {
    if (i >= 1) running = std::max(running, r.lower[static_cast<std::size_t>(i - 1)]);
    r.upper.push_back(std::max(running, (e - p0) / (i + 1)));
  }
  return r;
}

BoundsReport homogeneous_optimum(const IsingInstance& inst, const ParityLayout& layout, int k_max,
                                 const EnumerationLimits& limits) {
  check_compatible(inst, layout);
  const SpectrumSummary spec = logical_spectrum(inst, limits);
  std::vector<double> a;
  if (layout.plaquette_count() > 0) {
    if (k_max < 1) throw std::invalid_argument("k_max must be at least 1");
    a = defect_count_minima(inst, layout, std::min(k_max, layout.plaquette_count()), limits);
  }
  BoundsReport r = bounds_from_minima(inst.n(), spec.l0, spec.e, inst.p0(), std::move(a));
  r.exact_integer = spec.exact_integer;
  return r;
}

std::vector<DefectProfile> enumerate_profiles(const ParityLayout& layout, const ProfileFamily& family) {
  if (family.kind == ProfileFamily::Kind::Explicit) return family.profiles;
  const int q = layout.plaquette_count();
  int k_max = q;
  if (family.kind == ProfileFamily::Kind::Full) {
    if (q > kMaxFullFamilyQ)
      throw CapacityError("full profile family limited to q <= " + std::to_string(kMaxFullFamilyQ));
  } else {
    k_max = std::min(family.k_max, q);
  }
  std::vector<DefectProfile> out;
  for (int k = 1; k <= k_max; ++k) {
    std::vector<int> idx(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) idx[static_cast<std::size_t>(i)] = i;
    for (;;) {
      out.emplace_back(idx);
      int pos = k - 1;
      while (pos >= 0 && idx[static_cast<std::size_t>(pos)] == q - k + pos) --pos;
      if (pos < 0) break;
      ++idx[static_cast<std::size_t>(pos)];
      for (int r = pos + 1; r < k; ++r)
        idx[static_cast<std::size_t>(r)] = idx[static_cast<std::size_t>(r - 1)] + 1;
    }
  }
  return out;
}

Verdict verify_assignment(const IsingInstance& inst, const ParityLayout& layout,
                          const ConstraintAssignment& assignment, const ProfileFamily& family,
                          const EnumerationLimits& limits) {
  check_compatible(inst, layout);
  const int q = layout.plaquette_count();
  if (!assignment.is_homogeneous() && static_cast<int>(assignment.strengths().size()) != q)
    throw std::invalid_argument("assignment has " + std::to_string(assignment.strengths().size()) +
                                " strengths, layout has " + std::to_string(q) + " plaquettes");
  const SpectrumSummary spec = logical_spectrum(inst, limits);

  Verdict v;
  v.tolerance = 1e-9 * std::max({1.0, std::abs(spec.e), std::abs(inst.p0())});
  v.worst_slack = std::numeric_limits<double>::infinity();
  if (q == 0) {
    v.satisfied = true;
    v.worst_slack = 0.0;
    return v;
  }

  const std::size_t expected = family_size(layout, family);
  if (family.kind == ProfileFamily::Kind::Full && q > kMaxFullFamilyQ)
    throw CapacityError("full verification limited to q <= " + std::to_string(kMaxFullFamilyQ));
  const ProfileMinima minima(inst, layout, limits, expected);
  for (const DefectProfile& omega : enumerate_profiles(layout, family)) {
    if (omega.empty()) continue;
    double lhs = 0.0;
    for (int p : omega.plaquettes()) lhs += assignment.strength(p);
    const double slack = lhs - (spec.e - minima(omega));
    ++v.checked;
    if (slack < v.worst_slack) {
      v.worst_slack = slack;
      v.worst = omega;
    }
  }
  v.satisfied = v.worst_slack >= -v.tolerance;
  return v;
}

LpSolution solve_lp(const IsingInstance& inst, const ParityLayout& layout,
                    const ProfileFamily& family, const EnumerationLimits& limits) {
  check_compatible(inst, layout);
  const int q = layout.plaquette_count();
  if (family.kind == ProfileFamily::Kind::Full && q > kMaxFullLpQ)
    throw CapacityError("full LP limited to q <= " + std::to_string(kMaxFullLpQ) + " (n <= 6)");
  const SpectrumSummary spec = logical_spectrum(inst, limits);
  const std::vector<DefectProfile> profiles = enumerate_profiles(layout, family);
  const ProfileMinima minima(inst, layout, limits, profiles.size());

  DenseMatrix A(profiles.size(), static_cast<std::size_t>(q));
  std::vector<double> rhs(profiles.size());
  for (std::size_t r = 0; r < profiles.size(); ++r) {
    if (profiles[r].empty()) throw std::invalid_argument("LP family contains the empty profile");
    for (int p : profiles[r].plaquettes()) {
      if (p >= q) throw std::invalid_argument("plaquette index out of range");
      A(r, static_cast<std::size_t>(p)) = 1.0;
    }
    rhs[r] = spec.e - minima(profiles[r]);
  }
  const std::vector<double> cost(static_cast<std::size_t>(q), 1.0);
  const CoveringLpResult lp = solve_covering_lp(A, rhs, cost);

  LpSolution out;
  out.strengths = lp.x;
  out.objective = lp.objective;
  out.dual_objective = lp.dual_objective;
  out.constraint_count = profiles.size();
  out.full = family.kind == ProfileFamily::Kind::Full;
  out.k_max = family.kind == ProfileFamily::Kind::UpTo ? family.k_max : (out.full ? q : 0);
  out.iterations = lp.iterations;
  out.e = spec.e;
  double scale = 1.0;
  for (double v : rhs) scale = std::max(scale, std::abs(v));
  for (std::size_t r = 0; r < profiles.size(); ++r) {
    double lhs = 0.0;
    for (int p : profiles[r].plaquettes()) lhs += lp.x[static_cast<std::size_t>(p)];
    if (lhs - rhs[r] <= 1e-8 * scale) out.active.push_back(profiles[r]);
  }
  return out;
}

}  // namespace parity

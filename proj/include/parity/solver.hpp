#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "parity/instances.hpp"
#include "parity/layout.hpp"

namespace parity {

// Budgets for exhaustive enumeration.
struct EnumerationLimits {
  int max_spins = 24;                          // logical_spectrum cap
  std::uint64_t max_states = std::uint64_t{1} << 36;  // total states visited per call
  bool allow_higher_defects = false;           // a_k for k >= 3
  int threads = 1;
};

struct SpectrumSummary {
  double l0 = 0.0;
  double e = 0.0;    // smallest eigenvalue above l0; equals l0 when degenerate
  double gap = 0.0;  // e - l0
  // Configurations attaining l0, counted over all 2^n states (global flips included).
  std::uint64_t ground_degeneracy = 0;
  Spins argmin;
  bool exact_integer = false;
};

// Degeneracy tolerance used for real couplings: 1e-9 * max(1, |l0|).
double degeneracy_tolerance(double l0);

// Exact l0, e and gap by Gray-code enumeration over 2^(n-1) configurations.
SpectrumSummary logical_spectrum(const IsingInstance& inst, const EnumerationLimits& limits = {});

// Logical ground energy only (single pass).
double ground_energy(const IsingInstance& inst, const EnumerationLimits& limits = {});

// Instance with J'_ij = -J_ij on sites flipped by the profile mask.
IsingInstance sign_flipped(const IsingInstance& inst, const ParityLayout& layout,
                           const DefectProfile& omega);

// a_omega: minimum of H_J over S_omega via the sign-flip reduction.
double restricted_minimum(const IsingInstance& inst, const DefectProfile& omega,
                          const ParityLayout& layout, const EnumerationLimits& limits = {});

// a_k: minimum over all omega with |omega| = k.
double min_over_defect_count(const IsingInstance& inst, const ParityLayout& layout, int k,
                             const EnumerationLimits& limits = {});

// a_1 .. a_{k_max}, choosing the cheaper exact route (sign-flip reduction per
// profile, or one pass over all 2^m physical states).
std::vector<double> defect_count_minima(const IsingInstance& inst, const ParityLayout& layout,
                                        int k_max, const EnumerationLimits& limits = {});

// Minimum of H_J for every defect count 0..q by enumerating all physical
// states (requires q <= 64 and 2^m within budget). Entry 0 equals l0.
std::vector<double> physical_defect_count_minima(const IsingInstance& inst,
                                                 const ParityLayout& layout,
                                                 const EnumerationLimits& limits = {});

// a_omega for every omega, indexed by the plaquette bit word (bit p <=> p in
// omega). Requires q <= 24.
std::vector<double> profile_minima(const IsingInstance& inst, const ParityLayout& layout,
                                   const EnumerationLimits& limits = {});

// Binomial coefficient saturating at UINT64_MAX.
std::uint64_t binomial_saturating(std::uint64_t n, std::uint64_t k);

}  // namespace parity

#include "parity/solver.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <type_traits>

#include "parity/errors.hpp"
#include "parity/parallel.hpp"

namespace parity {

namespace {

// Energies of floating-point instances are recomputed from scratch every
// 2^kResyncBits Gray steps to bound accumulated rounding.
constexpr int kResyncBits = 12;

template <class T>
std::vector<T> coupling_matrix(const IsingInstance& inst) {
  const int n = inst.n();
  std::vector<T> J(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), T{0});
  for (const Coupling& c : inst.couplings()) {
    const T v = static_cast<T>(c.value);
    J[static_cast<std::size_t>(c.i * n + c.j)] = v;
    J[static_cast<std::size_t>(c.j * n + c.i)] = v;
  }
  return J;
}

// Number of top free spins fixed per chunk when splitting the Gray scan.
int chunk_bits(int free_bits, int threads) {
  if (threads <= 1) return 0;
  int c = 0;
  while ((1 << c) < 4 * threads && c < free_bits && c < 16) ++c;
  return c;
}

template <class T>
void recompute_fields(int n, const T* J, const std::int8_t* s, T& energy, T* h) {
  energy = T{0};
  for (int i = 0; i < n; ++i) {
    T acc{0};
    const T* row = J + static_cast<std::ptrdiff_t>(i) * n;
    for (int j = 0; j < n; ++j) acc += row[j] * s[j];
    h[i] = acc;
    energy += acc * s[i];
  }
  energy /= T{2};
}

// Visits every configuration with spin n-1 = +1 whose top `high_bits` free
// spins equal `high_pattern`. visit(E, code): bit f of code set <=> s_f = -1.
template <class T, class Visit>
void gray_scan_logical(int n, const std::vector<T>& J, int high_bits, std::uint64_t high_pattern,
                       Visit&& visit) {
  const int free_bits = n - 1;
  const int low_bits = free_bits - high_bits;
  std::vector<std::int8_t> s(static_cast<std::size_t>(n), 1);
  std::vector<T> h(static_cast<std::size_t>(n), T{0});
  for (int b = 0; b < high_bits; ++b)
    if ((high_pattern >> b) & 1U) s[static_cast<std::size_t>(low_bits + b)] = -1;
  const std::uint64_t high_code = high_pattern << low_bits;
  T energy{};
  recompute_fields(n, J.data(), s.data(), energy, h.data());
  visit(energy, high_code);
  const std::uint64_t total = std::uint64_t{1} << low_bits;
  const T* Jd = J.data();
  T* hd = h.data();
  for (std::uint64_t t = 1; t < total; ++t) {
    const int f = std::countr_zero(t);
    const T sf = s[static_cast<std::size_t>(f)];
    energy -= T{2} * sf * hd[f];
    s[static_cast<std::size_t>(f)] = static_cast<std::int8_t>(-sf);
    const T* row = Jd + static_cast<std::ptrdiff_t>(f) * n;
    const T delta = T{2} * sf;
    for (int j = 0; j < n; ++j) hd[j] -= delta * row[j];
    if constexpr (std::is_floating_point_v<T>) {
      if ((t & ((std::uint64_t{1} << kResyncBits) - 1)) == 0)
        recompute_fields(n, Jd, s.data(), energy, hd);
    }
    visit(energy, high_code | (t ^ (t >> 1)));
  }
}

template <class T>
struct MinResult {
  T value = std::numeric_limits<T>::max();
  std::uint64_t code = 0;
};

template <class T>
MinResult<T> scan_minimum(int n, const std::vector<T>& J, int threads) {
  const int high = chunk_bits(n - 1, threads);
  const std::size_t chunks = std::size_t{1} << high;
  std::vector<MinResult<T>> partial(chunks);
  parallel_for(chunks, threads, [&](std::size_t c) {
    MinResult<T> best;
    gray_scan_logical<T>(n, J, high, c, [&](T e, std::uint64_t code) {
      if (e < best.value) {
        best.value = e;
        best.code = code;
      }
    });
    partial[c] = best;
  });
  MinResult<T> best = partial.front();
  for (const auto& p : partial)
    if (p.value < best.value || (p.value == best.value && p.code < best.code)) best = p;
  return best;
}

Spins spins_from_code(int n, std::uint64_t code) {
  Spins s(static_cast<std::size_t>(n), 1);
  for (int f = 0; f + 1 < n; ++f)
    if ((code >> f) & 1U) s[static_cast<std::size_t>(f)] = -1;
  return s;
}

void check_spin_cap(int n, const EnumerationLimits& limits) {
  if (n > limits.max_spins || n > 63)
    throw CapacityError("exact enumeration for n=" + std::to_string(n) +
                        " exceeds the spin cap of " + std::to_string(limits.max_spins));
}

std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a)
    return std::numeric_limits<std::uint64_t>::max();
  return a * b;
}

template <class T>
SpectrumSummary spectrum_impl(const IsingInstance& inst, const EnumerationLimits& limits) {
  const int n = inst.n();
  const auto J = coupling_matrix<T>(inst);
  const int threads = limits.threads;
  const MinResult<T> lowest = scan_minimum<T>(n, J, threads);

  T tol{0};
  if constexpr (std::is_floating_point_v<T>) tol = degeneracy_tolerance(lowest.value);
  const T threshold = lowest.value + tol;

  const int high = chunk_bits(n - 1, threads);
  const std::size_t chunks = std::size_t{1} << high;
  std::vector<MinResult<T>> above(chunks);
  std::vector<std::uint64_t> ties(chunks, 0);
  parallel_for(chunks, threads, [&](std::size_t c) {
    MinResult<T> best;
    std::uint64_t count = 0;
    gray_scan_logical<T>(n, J, high, c, [&](T e, std::uint64_t code) {
      if (e <= threshold) {
        ++count;
      } else if (e < best.value) {
        best.value = e;
        best.code = code;
      }
    });
    above[c] = best;
    ties[c] = count;
  });

  MinResult<T> next;
  bool has_next = false;
  std::uint64_t degeneracy = 0;
  for (std::size_t c = 0; c < chunks; ++c) {
    degeneracy += ties[c];
    if (above[c].value < next.value ||
        (above[c].value == next.value && above[c].code < next.code)) {
      next = above[c];
    }
  }
  has_next = next.value != std::numeric_limits<T>::max();

  SpectrumSummary out;
  out.argmin = spins_from_code(n, lowest.code);
  out.l0 = inst.energy(out.argmin);
  if (has_next) {
    out.e = inst.energy(spins_from_code(n, next.code));
  } else {
    out.e = out.l0;
  }
  out.gap = out.e - out.l0;
  out.ground_degeneracy = 2 * degeneracy;
  out.exact_integer = std::is_integral_v<T>;
  return out;
}

// sum_{i<j} J_ij s_i s_j for the configuration encoded by `code`.
template <class T>
double code_energy(int n, const std::vector<T>& J, std::uint64_t code) {
  double e = 0.0;
  for (int i = 0; i < n; ++i) {
    const int si = (i + 1 < n && ((code >> i) & 1U)) ? -1 : 1;
    for (int j = i + 1; j < n; ++j) {
      const int sj = (j + 1 < n && ((code >> j) & 1U)) ? -1 : 1;
      e += static_cast<double>(J[static_cast<std::size_t>(i * n + j)]) * si * sj;
    }
  }
  return e;
}

// Minimum logical energy of a coupling matrix, re-evaluated exactly at the
// minimizing configuration.
template <class T>
double matrix_ground(int n, const std::vector<T>& J) {
  MinResult<T> best;
  gray_scan_logical<T>(n, J, 0, 0, [&](T e, std::uint64_t code) {
    if (e < best.value) {
      best.value = e;
      best.code = code;
    }
  });
  if constexpr (std::is_floating_point_v<T>) return code_energy(n, J, best.code);
  return static_cast<double>(best.value);
}

template <class T>
void apply_mask(int n, const BitVector& mask, std::vector<T>& J) {
  for (int s : mask.ones()) {
    // Invert pair_index: find (i, j) for site s.
    int i = 0;
    int rem = s;
    while (rem >= n - 1 - i) {
      rem -= n - 1 - i;
      ++i;
    }
    const int j = i + 1 + rem;
    J[static_cast<std::size_t>(i * n + j)] = -J[static_cast<std::size_t>(i * n + j)];
    J[static_cast<std::size_t>(j * n + i)] = -J[static_cast<std::size_t>(j * n + i)];
  }
}

// Calls body(combination) for every k-subset of [first, q) in lexicographic order.
template <class Body>
void for_each_combination(int q, int k, Body&& body, int first = 0) {
  std::vector<int> idx(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) idx[static_cast<std::size_t>(i)] = first + i;
  if (k == 0) {
    body(idx);
    return;
  }
  if (first + k > q) return;
  for (;;) {
    body(idx);
    int pos = k - 1;
    while (pos >= 0 && idx[static_cast<std::size_t>(pos)] == q - k + pos) --pos;
    if (pos < 0) return;
    ++idx[static_cast<std::size_t>(pos)];
    for (int r = pos + 1; r < k; ++r)
      idx[static_cast<std::size_t>(r)] = idx[static_cast<std::size_t>(r - 1)] + 1;
  }
}

template <class T>
double min_over_count_impl(const IsingInstance& inst, const ParityLayout& layout, int k,
                           const EnumerationLimits& limits) {
  const int n = inst.n();
  const int q = layout.plaquette_count();
  const auto base = coupling_matrix<T>(inst);
  // Parallelize over the smallest plaquette of each combination.
  std::vector<double> partial(static_cast<std::size_t>(q), std::numeric_limits<double>::infinity());
  parallel_for(static_cast<std::size_t>(q), limits.threads, [&](std::size_t first) {
    double best = std::numeric_limits<double>::infinity();
    const BitVector& head = layout.defect_mask(static_cast<int>(first));
    std::vector<T> J;
    for_each_combination(
        q, k - 1,
        [&](const std::vector<int>& rest) {
          BitVector mask = head;
          for (int p : rest) mask ^= layout.defect_mask(p);
          J = base;
          apply_mask(n, mask, J);
          best = std::min(best, matrix_ground<T>(n, J));
        },
        static_cast<int>(first) + 1);
    partial[first] = best;
  });
  return *std::min_element(partial.begin(), partial.end());
}

// Scan over all 2^m physical states; visit(E, syndrome word). The lowest
// kLowTableBits sites are expanded from a precomputed table of energy and
// syndrome offsets, the remaining ones follow a Gray code.
constexpr int kLowTableBits = 10;

template <class T, class Visit>
void gray_scan_physical(const IsingInstance& inst, const ParityLayout& layout, int high_bits,
                        std::uint64_t high_pattern, Visit&& visit) {
  const int m = layout.site_count();
  const int free_bits = m - high_bits;
  const int table_bits = std::min(kLowTableBits, free_bits);
  const auto Jd = inst.site_couplings();
  std::vector<T> v(static_cast<std::size_t>(m));
  std::vector<std::uint64_t> word(static_cast<std::size_t>(m));
  std::uint64_t syndrome = 0;
  for (int s = 0; s < m; ++s) {
    v[static_cast<std::size_t>(s)] = static_cast<T>(Jd[static_cast<std::size_t>(s)]);
    word[static_cast<std::size_t>(s)] = layout.site_plaquette_word(s);
  }
  for (int b = 0; b < high_bits; ++b) {
    if ((high_pattern >> b) & 1U) {
      const auto s = static_cast<std::size_t>(free_bits + b);
      v[s] = -v[s];
      syndrome ^= word[s];
    }
  }

  const std::size_t table_size = std::size_t{1} << table_bits;
  std::vector<T> d_energy(table_size, T{0});
  std::vector<std::uint64_t> d_syndrome(table_size, 0);
  for (std::size_t i = 1; i < table_size; ++i) {
    const int b = std::countr_zero(i);
    const std::size_t prev = i & (i - 1);
    d_energy[i] = d_energy[prev] - T{2} * v[static_cast<std::size_t>(b)];
    d_syndrome[i] = d_syndrome[prev] ^ word[static_cast<std::size_t>(b)];
  }

  auto total_energy = [&] {
    T e{0};
    for (T x : v) e += x;
    return e;
  };
  const T* de = d_energy.data();
  const std::uint64_t* ds = d_syndrome.data();
  auto sweep_table = [&](T base, std::uint64_t syn) {
    for (std::size_t i = 0; i < table_size; ++i) visit(base + de[i], syn ^ ds[i]);
  };

  T energy = total_energy();
  sweep_table(energy, syndrome);
  const int gray_bits = free_bits - table_bits;
  const std::uint64_t total = std::uint64_t{1} << gray_bits;
  T* vd = v.data() + table_bits;
  const std::uint64_t* wd = word.data() + table_bits;
  for (std::uint64_t t = 1; t < total; ++t) {
    const int b = std::countr_zero(t);
    energy -= T{2} * vd[b];
    vd[b] = -vd[b];
    syndrome ^= wd[b];
    if constexpr (std::is_floating_point_v<T>) {
      if ((t & ((std::uint64_t{1} << kResyncBits) - 1)) == 0) energy = total_energy();
    }
    sweep_table(energy, syndrome);
  }
}

void check_physical_budget(const ParityLayout& layout, const EnumerationLimits& limits) {
  const int m = layout.site_count();
  if (layout.plaquette_count() > 64 || m > 62 ||
      (std::uint64_t{1} << m) > limits.max_states)
    throw CapacityError("physical enumeration of 2^" + std::to_string(m) +
                        " states exceeds the state budget");
}

template <class T>
std::vector<double> physical_counts_impl(const IsingInstance& inst, const ParityLayout& layout,
                                         const EnumerationLimits& limits) {
  const int q = layout.plaquette_count();
  const int high = chunk_bits(layout.site_count(), limits.threads);
  const std::size_t chunks = std::size_t{1} << high;
  std::vector<std::vector<T>> partial(chunks);
  parallel_for(chunks, limits.threads, [&](std::size_t c) {
    std::vector<T> best(static_cast<std::size_t>(q + 1), std::numeric_limits<T>::max());
    T* bd = best.data();
    gray_scan_physical<T>(inst, layout, high, c, [bd](T e, std::uint64_t syn) {
      const int k = std::popcount(syn);
      if (e < bd[k]) bd[k] = e;
    });
    partial[c] = std::move(best);
  });
  std::vector<double> out(static_cast<std::size_t>(q + 1), std::numeric_limits<double>::infinity());
  for (const auto& p : partial)
    for (int k = 0; k <= q; ++k)
      out[static_cast<std::size_t>(k)] =
          std::min(out[static_cast<std::size_t>(k)], static_cast<double>(p[static_cast<std::size_t>(k)]));
  return out;
}

template <class T>
std::vector<double> profile_minima_impl(const IsingInstance& inst, const ParityLayout& layout) {
  const int q = layout.plaquette_count();
  std::vector<T> table(std::size_t{1} << q, std::numeric_limits<T>::max());
  T* td = table.data();
  gray_scan_physical<T>(inst, layout, 0, 0, [td](T e, std::uint64_t syn) {
    if (e < td[syn]) td[syn] = e;
  });
  return {table.begin(), table.end()};
}

void validate_sizes(const IsingInstance& inst, const ParityLayout& layout) {
  if (inst.n() != layout.n()) throw std::invalid_argument("instance and layout sizes differ");
}

}  // namespace

double degeneracy_tolerance(double l0) { return 1e-9 * std::max(1.0, std::abs(l0)); }

std::uint64_t binomial_saturating(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  __extension__ using u128 = unsigned __int128;
  u128 r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    r = r * (n - k + i) / i;
    if (r > std::numeric_limits<std::uint64_t>::max()) return std::numeric_limits<std::uint64_t>::max();
  }
  return static_cast<std::uint64_t>(r);
}

SpectrumSummary logical_spectrum(const IsingInstance& inst, const EnumerationLimits& limits) {
  check_spin_cap(inst.n(), limits);
  if (inst.integral()) return spectrum_impl<std::int64_t>(inst, limits);
  return spectrum_impl<double>(inst, limits);
}

double ground_energy(const IsingInstance& inst, const EnumerationLimits& limits) {
  check_spin_cap(inst.n(), limits);
  if (inst.integral()) {
    const auto J = coupling_matrix<std::int64_t>(inst);
    return static_cast<double>(scan_minimum<std::int64_t>(inst.n(), J, limits.threads).value);
  }
  const auto J = coupling_matrix<double>(inst);
  const auto best = scan_minimum<double>(inst.n(), J, limits.threads);
  return inst.energy(spins_from_code(inst.n(), best.code));
}

IsingInstance sign_flipped(const IsingInstance& inst, const ParityLayout& layout,
                           const DefectProfile& omega) {
  validate_sizes(inst, layout);
  const BitVector mask = layout.profile_mask(omega);
  std::vector<Coupling> cs(inst.couplings().begin(), inst.couplings().end());
  for (Coupling& c : cs)
    if (mask.test(static_cast<std::size_t>(pair_index(inst.n(), c.i, c.j)))) c.value = -c.value;
  return IsingInstance(inst.n(), std::move(cs), inst.offset(), inst.metadata());
}

double restricted_minimum(const IsingInstance& inst, const DefectProfile& omega,
                          const ParityLayout& layout, const EnumerationLimits& limits) {
  validate_sizes(inst, layout);
  if (omega.empty())
    throw std::invalid_argument("restricted_minimum needs a non-empty defect profile; use logical_spectrum for S0");
  if (omega.plaquettes().back() >= layout.plaquette_count())
    throw std::invalid_argument("plaquette index out of range");
  return ground_energy(sign_flipped(inst, layout, omega), limits);
}

double min_over_defect_count(const IsingInstance& inst, const ParityLayout& layout, int k,
                             const EnumerationLimits& limits) {
  validate_sizes(inst, layout);
  const int q = layout.plaquette_count();
  if (k < 1 || k > q)
    throw std::invalid_argument("defect count k must satisfy 1 <= k <= q (q=" + std::to_string(q) + ")");
  if (k >= 3 && !limits.allow_higher_defects)
    throw CapacityError("a_k for k >= 3 requires allow_higher_defects");
  check_spin_cap(inst.n(), limits);
  const std::uint64_t profiles = binomial_saturating(static_cast<std::uint64_t>(q), static_cast<std::uint64_t>(k));
  const std::uint64_t states = saturating_mul(profiles, std::uint64_t{1} << (inst.n() - 1));
  if (states > limits.max_states)
    throw CapacityError("a_" + std::to_string(k) + " needs C(" + std::to_string(q) + "," +
                        std::to_string(k) + ")*2^" + std::to_string(inst.n() - 1) + " = " +
                        std::to_string(states) + " states, above the budget of " +
                        std::to_string(limits.max_states));
  if (inst.integral()) return min_over_count_impl<std::int64_t>(inst, layout, k, limits);
  return min_over_count_impl<double>(inst, layout, k, limits);
}

std::vector<double> physical_defect_count_minima(const IsingInstance& inst,
                                                 const ParityLayout& layout,
                                                 const EnumerationLimits& limits) {
  validate_sizes(inst, layout);
  check_physical_budget(layout, limits);
  if (inst.integral()) return physical_counts_impl<std::int64_t>(inst, layout, limits);
  return physical_counts_impl<double>(inst, layout, limits);
}

std::vector<double> defect_count_minima(const IsingInstance& inst, const ParityLayout& layout,
                                        int k_max, const EnumerationLimits& limits) {
  validate_sizes(inst, layout);
  const int q = layout.plaquette_count();
  if (q == 0) return {};
  if (k_max < 1) throw std::invalid_argument("k_max must be at least 1");
  k_max = std::min(k_max, q);
  if (k_max >= 3 && !limits.allow_higher_defects)
    throw CapacityError("a_k for k >= 3 requires allow_higher_defects");

  const int n = inst.n();
  const int m = layout.site_count();
  // Cost model: the reduction route pays O(n) per logical state, the physical
  // route O(1) per physical state.
  std::uint64_t reduction_states = 0;
  for (int k = 1; k <= k_max; ++k)
    reduction_states = std::min<std::uint64_t>(
        std::numeric_limits<std::uint64_t>::max() / 2,
        reduction_states + saturating_mul(binomial_saturating(static_cast<std::uint64_t>(q), static_cast<std::uint64_t>(k)),
                                          n <= 63 ? std::uint64_t{1} << (n - 1) : std::numeric_limits<std::uint64_t>::max()));
  const bool physical_possible = q <= 64 && m <= 62 && (std::uint64_t{1} << m) <= limits.max_states;
  const bool reduction_possible = n <= limits.max_spins && reduction_states <= limits.max_states;
  const double reduction_cost = static_cast<double>(reduction_states) * n;
  const double physical_cost = physical_possible ? std::ldexp(2.0, m) : std::numeric_limits<double>::infinity();

  if (physical_possible && (!reduction_possible || physical_cost < reduction_cost)) {
    auto all = physical_defect_count_minima(inst, layout, limits);
    return {all.begin() + 1, all.begin() + 1 + k_max};
  }
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(k_max));
  for (int k = 1; k <= k_max; ++k) out.push_back(min_over_defect_count(inst, layout, k, limits));
  return out;
}

std::vector<double> profile_minima(const IsingInstance& inst, const ParityLayout& layout,
                                   const EnumerationLimits& limits) {
  validate_sizes(inst, layout);
  if (layout.plaquette_count() > 24)
    throw CapacityError("profile table limited to q <= 24 plaquettes");
  check_physical_budget(layout, limits);
  if (inst.integral()) return profile_minima_impl<std::int64_t>(inst, layout);
  return profile_minima_impl<double>(inst, layout);
}

}  // namespace parity

#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "parity/constraints.hpp"
#include "parity/instances.hpp"

namespace parity {

// Fixed-size bit vector over physical sites (or plaquettes).
class BitVector {
 public:
  BitVector() = default;
  explicit BitVector(std::size_t size) : size_(size), words_((size + 63) / 64, 0) {}

  std::size_t size() const noexcept { return size_; }
  bool test(std::size_t bit) const noexcept { return (words_[bit >> 6] >> (bit & 63)) & 1U; }
  void set(std::size_t bit, bool value = true) noexcept {
    const std::uint64_t m = std::uint64_t{1} << (bit & 63);
    if (value)
      words_[bit >> 6] |= m;
    else
      words_[bit >> 6] &= ~m;
  }
  void flip(std::size_t bit) noexcept { words_[bit >> 6] ^= std::uint64_t{1} << (bit & 63); }
  std::size_t count() const noexcept;
  bool none() const noexcept { return count() == 0; }
  std::vector<int> ones() const;

  BitVector& operator^=(const BitVector& other);
  friend BitVector operator^(BitVector a, const BitVector& b) { return a ^= b; }
  bool operator==(const BitVector&) const = default;

  std::span<const std::uint64_t> words() const noexcept { return words_; }
  // Low 64 bits; only meaningful when size() <= 64.
  std::uint64_t word0() const noexcept { return words_.empty() ? 0 : words_[0]; }

 private:
  std::size_t size_ = 0;
  std::vector<std::uint64_t> words_;
};

// Physical state: bit b set <=> the spin on site b points down (-1).
using PhysicalState = BitVector;

struct Site {
  int i = 0;  // 0-based logical indices, i < j
  int j = 0;
};

// Plaquette [i, j] over (i, j) in E_{n-1}. Bottom-row plaquettes (j = i + 1)
// have three member sites, all others four.
struct Plaquette {
  int i = 0;
  int j = 0;
  std::array<int, 4> members{};
  int size = 0;
  std::span<const int> sites() const noexcept {
    return {members.data(), static_cast<std::size_t>(size)};
  }
};

// Set of violated plaquettes (indices into ParityLayout::plaquettes()).
class DefectProfile {
 public:
  DefectProfile() = default;
  explicit DefectProfile(std::vector<int> plaquettes);
  static DefectProfile from_bits(const BitVector& bits);

  std::span<const int> plaquettes() const noexcept { return plaquettes_; }
  std::size_t size() const noexcept { return plaquettes_.size(); }
  bool empty() const noexcept { return plaquettes_.empty(); }
  bool contains(int p) const;

  // Symmetric difference.
  DefectProfile operator^(const DefectProfile& other) const;
  bool operator==(const DefectProfile&) const = default;

 private:
  std::vector<int> plaquettes_;  // sorted, unique
};

// Parity (LHZ) index structure for n logical spins. Sites (i, j), i < j, are
// numbered lexicographically; plaquettes likewise over pairs of E_{n-1}.
class ParityLayout {
 public:
  explicit ParityLayout(int n);

  int n() const noexcept { return n_; }
  int site_count() const noexcept { return m_; }
  int plaquette_count() const noexcept { return q_; }

  int site_index(int i, int j) const;
  Site site(int index) const { return sites_.at(static_cast<std::size_t>(index)); }

  // Index of plaquette [k, l], 0-based with k < l <= n - 2.
  int plaquette_index(int k, int l) const;
  const Plaquette& plaquette(int index) const { return plaquettes_.at(static_cast<std::size_t>(index)); }
  std::span<const Plaquette> plaquettes() const noexcept { return plaquettes_; }

  // Sites {(i, j): i <= k, j > l} of plaquette index p = [k, l]. XOR with this
  // mask toggles the parity of plaquette p and of no other.
  const BitVector& defect_mask(int p) const { return masks_.at(static_cast<std::size_t>(p)); }

  // XOR of defect masks over the profile.
  BitVector profile_mask(const DefectProfile& omega) const;

  // Plaquettes containing site s, as a bit word. Requires q <= 64.
  std::uint64_t site_plaquette_word(int s) const;

  // Table of plaquette -> member sites and plaquette -> mask sites (1-based labels).
  std::string dump() const;

 private:
  int n_;
  int m_;
  int q_;
  std::vector<Site> sites_;
  std::vector<Plaquette> plaquettes_;
  std::vector<BitVector> masks_;
  std::vector<std::uint64_t> site_plaquettes_;
};

// Physical bit (i, j) = s_i XOR s_j.
PhysicalState logical_to_physical(std::span<const std::int8_t> spins, const ParityLayout& layout);

// Mask of plaquette [k, l] (0-based); throws std::invalid_argument if invalid.
BitVector defect_mask(int k, int l, const ParityLayout& layout);

// Plaquettes with an odd number of down spins among their members.
DefectProfile violated_plaquettes(const PhysicalState& state, const ParityLayout& layout);

// H_J = sum_sites J_site s_site.
double field_energy(const PhysicalState& state, const IsingInstance& inst);

// H_J plus sum of c_p over violated plaquettes (satisfied plaquettes cost 0).
double physical_energy(const PhysicalState& state, const IsingInstance& inst,
                       const ParityLayout& layout, const ConstraintAssignment& constraints);

}  // namespace parity

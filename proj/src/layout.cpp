#include "parity/layout.hpp"

#include <algorithm>
#include <bit>
#include <sstream>
#include <stdexcept>

namespace parity {

// ---------------------------------------------------------------------------
// BitVector

std::size_t BitVector::count() const noexcept {
  std::size_t c = 0;
  for (std::uint64_t w : words_) c += static_cast<std::size_t>(std::popcount(w));
  return c;
}

std::vector<int> BitVector::ones() const {
  std::vector<int> out;
  for (std::size_t w = 0; w < words_.size(); ++w) {
    std::uint64_t bits = words_[w];
    while (bits != 0) {
      out.push_back(static_cast<int>(w * 64 + static_cast<std::size_t>(std::countr_zero(bits))));
      bits &= bits - 1;
    }
  }
  return out;
}

BitVector& BitVector::operator^=(const BitVector& other) {
  if (other.size_ != size_) throw std::invalid_argument("bit vector size mismatch");
  for (std::size_t w = 0; w < words_.size(); ++w) words_[w] ^= other.words_[w];
  return *this;
}

// ---------------------------------------------------------------------------
// DefectProfile

DefectProfile::DefectProfile(std::vector<int> plaquettes) : plaquettes_(std::move(plaquettes)) {
  std::sort(plaquettes_.begin(), plaquettes_.end());
  if (std::adjacent_find(plaquettes_.begin(), plaquettes_.end()) != plaquettes_.end())
    throw std::invalid_argument("defect profile lists a plaquette twice");
  if (!plaquettes_.empty() && plaquettes_.front() < 0)
    throw std::invalid_argument("negative plaquette index");
}

DefectProfile DefectProfile::from_bits(const BitVector& bits) { return DefectProfile(bits.ones()); }

bool DefectProfile::contains(int p) const {
  return std::binary_search(plaquettes_.begin(), plaquettes_.end(), p);
}

DefectProfile DefectProfile::operator^(const DefectProfile& other) const {
  std::vector<int> out;
  std::set_symmetric_difference(plaquettes_.begin(), plaquettes_.end(), other.plaquettes_.begin(),
                                other.plaquettes_.end(), std::back_inserter(out));
  return DefectProfile(std::move(out));
}

// ---------------------------------------------------------------------------
// ParityLayout

ParityLayout::ParityLayout(int n)
    : n_(n), m_(n * (n - 1) / 2), q_(n >= 2 ? (n - 1) * (n - 2) / 2 : 0) {
  if (n < 2) throw std::invalid_argument("parity layout needs n >= 2");
  if (n > 4096) throw std::invalid_argument("parity layout too large");
  sites_.reserve(static_cast<std::size_t>(m_));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) sites_.push_back({i, j});

  plaquettes_.reserve(static_cast<std::size_t>(q_));
  for (int i = 0; i < n - 1; ++i) {
    for (int j = i + 1; j < n - 1; ++j) {
      Plaquette p;
      p.i = i;
      p.j = j;
      if (j == i + 1) {
        p.members = {site_index(i, i + 1), site_index(i, i + 2), site_index(i + 1, i + 2), -1};
        p.size = 3;
      } else {
        p.members = {site_index(i, j), site_index(i, j + 1), site_index(i + 1, j),
                     site_index(i + 1, j + 1)};
        p.size = 4;
      }
      plaquettes_.push_back(p);
    }
  }

  masks_.reserve(static_cast<std::size_t>(q_));
  for (const Plaquette& p : plaquettes_) {
    BitVector mask(static_cast<std::size_t>(m_));
    for (int a = 0; a <= p.i; ++a)
      for (int b = std::max(a + 1, p.j + 1); b < n; ++b)
        mask.set(static_cast<std::size_t>(site_index(a, b)));
    masks_.push_back(std::move(mask));
  }

  if (q_ <= 64) {
    site_plaquettes_.assign(static_cast<std::size_t>(m_), 0);
    for (int p = 0; p < q_; ++p)
      for (int s : plaquettes_[static_cast<std::size_t>(p)].sites())
        site_plaquettes_[static_cast<std::size_t>(s)] |= std::uint64_t{1} << p;
  }
}

int ParityLayout::site_index(int i, int j) const {
  if (i < 0 || j >= n_ || i >= j) throw std::out_of_range("invalid site index");
  return pair_index(n_, i, j);
}

int ParityLayout::plaquette_index(int k, int l) const {
  if (k < 0 || l > n_ - 2 || k >= l)
    throw std::invalid_argument("invalid plaquette [" + std::to_string(k + 1) + "," +
                                std::to_string(l + 1) + "]");
  return pair_index(n_ - 1, k, l);
}

BitVector ParityLayout::profile_mask(const DefectProfile& omega) const {
  BitVector mask(static_cast<std::size_t>(m_));
  for (int p : omega.plaquettes()) {
    if (p >= q_) throw std::invalid_argument("plaquette index out of range");
    mask ^= masks_[static_cast<std::size_t>(p)];
  }
  return mask;
}

std::uint64_t ParityLayout::site_plaquette_word(int s) const {
  if (q_ > 64) throw std::logic_error("site_plaquette_word requires at most 64 plaquettes");
  return site_plaquettes_.at(static_cast<std::size_t>(s));
}

std::string ParityLayout::dump() const {
  std::ostringstream out;
  out << "# n=" << n_ << " m=" << m_ << " q=" << q_ << "\n";
  out << "# plaquette\tmembers\tmask\n";
  for (int p = 0; p < q_; ++p) {
    const Plaquette& pl = plaquettes_[static_cast<std::size_t>(p)];
    out << "[" << pl.i + 1 << "," << pl.j + 1 << "]\t";
    for (int k = 0; k < pl.size; ++k) {
      const Site s = sites_[static_cast<std::size_t>(pl.members[static_cast<std::size_t>(k)])];
      out << (k ? " " : "") << "(" << s.i + 1 << "," << s.j + 1 << ")";
    }
    out << "\t";
    bool first = true;
    for (int b : masks_[static_cast<std::size_t>(p)].ones()) {
      const Site s = sites_[static_cast<std::size_t>(b)];
      out << (first ? "" : " ") << "(" << s.i + 1 << "," << s.j + 1 << ")";
      first = false;
    }
    out << "\n";
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Free operations

PhysicalState logical_to_physical(std::span<const std::int8_t> spins, const ParityLayout& layout) {
  if (static_cast<int>(spins.size()) != layout.n())
    throw std::invalid_argument("logical state size does not match layout");
  PhysicalState state(static_cast<std::size_t>(layout.site_count()));
  int s = 0;
  for (int i = 0; i < layout.n(); ++i)
    for (int j = i + 1; j < layout.n(); ++j, ++s)
      if (spins[static_cast<std::size_t>(i)] != spins[static_cast<std::size_t>(j)])
        state.set(static_cast<std::size_t>(s));
  return state;
}

BitVector defect_mask(int k, int l, const ParityLayout& layout) {
  return layout.defect_mask(layout.plaquette_index(k, l));
}

DefectProfile violated_plaquettes(const PhysicalState& state, const ParityLayout& layout) {
  if (static_cast<int>(state.size()) != layout.site_count())
    throw std::invalid_argument("physical state size does not match layout");
  std::vector<int> violated;
  for (int p = 0; p < layout.plaquette_count(); ++p) {
    int down = 0;
    for (int s : layout.plaquette(p).sites()) down += state.test(static_cast<std::size_t>(s));
    if (down % 2 != 0) violated.push_back(p);
  }
  return DefectProfile(std::move(violated));
}

double field_energy(const PhysicalState& state, const IsingInstance& inst) {
  const auto J = inst.site_couplings();
  if (state.size() != J.size()) throw std::invalid_argument("physical state size does not match instance");
  double e = 0.0;
  for (std::size_t s = 0; s < J.size(); ++s) e += state.test(s) ? -J[s] : J[s];
  return e;
}

double physical_energy(const PhysicalState& state, const IsingInstance& inst,
                       const ParityLayout& layout, const ConstraintAssignment& constraints) {
  if (inst.n() != layout.n()) throw std::invalid_argument("instance and layout sizes differ");
  double e = field_energy(state, inst);
  for (int p : violated_plaquettes(state, layout).plaquettes()) e += constraints.strength(p);
  return e;
}

}  // namespace parity

#include "parity/constraints.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace parity {

ConstraintAssignment ConstraintAssignment::homogeneous(double c) {
  if (!std::isfinite(c)) throw std::invalid_argument("constraint strength must be finite");
  ConstraintAssignment a;
  a.homogeneous_ = true;
  a.value_ = c;
  return a;
}

ConstraintAssignment ConstraintAssignment::per_plaquette(std::vector<double> strengths) {
  for (double c : strengths)
    if (!std::isfinite(c)) throw std::invalid_argument("constraint strength must be finite");
  ConstraintAssignment a;
  a.homogeneous_ = false;
  a.strengths_ = std::move(strengths);
  return a;
}

double ConstraintAssignment::strength(int plaquette) const {
  if (homogeneous_) return value_;
  return strengths_.at(static_cast<std::size_t>(plaquette));
}

bool ConstraintAssignment::has_negative() const noexcept {
  if (homogeneous_) return value_ < 0.0;
  return std::any_of(strengths_.begin(), strengths_.end(), [](double c) { return c < 0.0; });
}

double ConstraintAssignment::total(int plaquette_count) const {
  if (homogeneous_) return value_ * plaquette_count;
  if (static_cast<int>(strengths_.size()) != plaquette_count)
    throw std::invalid_argument("assignment size does not match plaquette count");
  double s = 0.0;
  for (double c : strengths_) s += c;
  return s;
}

}  // namespace parity

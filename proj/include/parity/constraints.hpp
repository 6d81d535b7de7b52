#pragma once

#include <vector>

namespace parity {

// Penalty strengths per plaquette: either one homogeneous value c or an
// explicit c_p for every plaquette index p.
class ConstraintAssignment {
 public:
  static ConstraintAssignment homogeneous(double c);
  static ConstraintAssignment per_plaquette(std::vector<double> strengths);

  bool is_homogeneous() const noexcept { return homogeneous_; }
  double strength(int plaquette) const;
  const std::vector<double>& strengths() const noexcept { return strengths_; }
  double homogeneous_value() const noexcept { return value_; }

  // Negative strengths are accepted but reported here.
  bool has_negative() const noexcept;

  // Sum of strengths over `plaquette_count` plaquettes.
  double total(int plaquette_count) const;

 private:
  ConstraintAssignment() = default;
  bool homogeneous_ = true;
  double value_ = 0.0;
  std::vector<double> strengths_;
};

}  // namespace parity

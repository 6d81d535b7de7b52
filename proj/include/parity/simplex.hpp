#pragma once

#include <cstddef>
#include <vector>

namespace parity {

// Dense row-major constraint matrix.
struct DenseMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  DenseMatrix() = default;
  DenseMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}
  double& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
};

struct CoveringLpResult {
  std::vector<double> x;     // primal solution (variables)
  std::vector<double> dual;  // one multiplier per constraint row
  double objective = 0.0;       // cost . x
  double dual_objective = 0.0;  // b . dual
  int iterations = 0;
};

// Solves  min cost.x  s.t.  A x >= b,  x >= 0  for cost >= 0.
//
// The dual  max b.y  s.t.  A^T y <= cost,  y >= 0  starts feasible at y = 0,
// so it is solved by a revised primal simplex (explicit basis inverse, Bland's
// rule) without a phase-one; the primal x is read off the simplex multipliers.
// `tolerance` is the absolute feasibility/optimality tolerance.
CoveringLpResult solve_covering_lp(const DenseMatrix& A, const std::vector<double>& b,
                                   const std::vector<double>& cost, double tolerance = 1e-9);

}  // namespace parity

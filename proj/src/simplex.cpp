#include "parity/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace parity {

namespace {

constexpr int kRefactorInterval = 50;
constexpr int kIterationCap = 200000;

// Gauss-Jordan inverse with partial pivoting; returns false when singular.
bool invert(std::vector<double>& a, std::size_t n) {
  std::vector<double> inv(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) inv[i * n + i] = 1.0;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(a[r * n + col]) > std::abs(a[pivot * n + col])) pivot = r;
    if (std::abs(a[pivot * n + col]) < 1e-14) return false;
    if (pivot != col) {
      for (std::size_t c = 0; c < n; ++c) {
        std::swap(a[pivot * n + c], a[col * n + c]);
        std::swap(inv[pivot * n + c], inv[col * n + c]);
      }
    }
    const double d = a[col * n + col];
    for (std::size_t c = 0; c < n; ++c) {
      a[col * n + c] /= d;
      inv[col * n + c] /= d;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      const double f = a[r * n + col];
      if (f == 0.0) continue;
      for (std::size_t c = 0; c < n; ++c) {
        a[r * n + c] -= f * a[col * n + c];
        inv[r * n + c] -= f * inv[col * n + c];
      }
    }
  }
  a.swap(inv);
  return true;
}

}  // namespace

CoveringLpResult solve_covering_lp(const DenseMatrix& A, const std::vector<double>& b,
                                   const std::vector<double>& cost, double tolerance) {
  const std::size_t rows = A.rows;  // dual variables y
  const std::size_t q = A.cols;     // primal variables x, dual constraints
  if (b.size() != rows || cost.size() != q)
    throw std::invalid_argument("LP dimensions do not match");
  for (double c : cost)
    if (c < 0.0) throw std::invalid_argument("covering LP requires nonnegative costs");

  double scale = 1.0;
  for (double v : b) scale = std::max(scale, std::abs(v));
  for (double v : cost) scale = std::max(scale, std::abs(v));
  const double tol = tolerance * scale;

  CoveringLpResult result;
  result.x.assign(q, 0.0);
  result.dual.assign(rows, 0.0);
  if (q == 0 || rows == 0) return result;

  const std::size_t total = rows + q;
  auto objective_coeff = [&](std::size_t j) { return j < rows ? b[j] : 0.0; };
  // Column j of [A^T | I] as a dense q-vector.
  auto column = [&](std::size_t j, std::vector<double>& out) {
    if (j < rows) {
      for (std::size_t i = 0; i < q; ++i) out[i] = A(j, i);
    } else {
      std::fill(out.begin(), out.end(), 0.0);
      out[j - rows] = 1.0;
    }
  };

  std::vector<std::size_t> basis(q);
  std::vector<char> in_basis(total, 0);
  for (std::size_t i = 0; i < q; ++i) {
    basis[i] = rows + i;
    in_basis[rows + i] = 1;
  }
  std::vector<double> binv(q * q, 0.0);
  for (std::size_t i = 0; i < q; ++i) binv[i * q + i] = 1.0;
  std::vector<double> xb = cost;
  std::vector<double> pi(q), col(q), u(q);

  auto refactor = [&] {
    std::vector<double> B(q * q);
    for (std::size_t k = 0; k < q; ++k) {
      column(basis[k], col);
      for (std::size_t i = 0; i < q; ++i) B[i * q + k] = col[i];
    }
    if (!invert(B, q)) throw std::runtime_error("simplex basis became singular");
    binv.swap(B);
    for (std::size_t i = 0; i < q; ++i) {
      double acc = 0.0;
      for (std::size_t k = 0; k < q; ++k) acc += binv[i * q + k] * cost[k];
      xb[i] = std::max(acc, 0.0);
    }
  };

  int iter = 0;
  for (;; ++iter) {
    if (iter > kIterationCap) throw std::runtime_error("simplex iteration cap reached");
    if (iter > 0 && iter % kRefactorInterval == 0) refactor();

    for (std::size_t k = 0; k < q; ++k) {
      double acc = 0.0;
      for (std::size_t i = 0; i < q; ++i) acc += objective_coeff(basis[i]) * binv[i * q + k];
      pi[k] = acc;
    }

    // Bland: lowest-index improving column.
    std::size_t entering = total;
    for (std::size_t j = 0; j < total; ++j) {
      if (in_basis[j]) continue;
      double reduced;
      if (j < rows) {
        double dot = 0.0;
        for (std::size_t i = 0; i < q; ++i) dot += pi[i] * A(j, i);
        reduced = b[j] - dot;
      } else {
        reduced = -pi[j - rows];
      }
      if (reduced > tol) {
        entering = j;
        break;
      }
    }
    if (entering == total) break;

    column(entering, col);
    for (std::size_t i = 0; i < q; ++i) {
      double acc = 0.0;
      for (std::size_t k = 0; k < q; ++k) acc += binv[i * q + k] * col[k];
      u[i] = acc;
    }
    std::size_t leave = q;
    double best_ratio = 0.0;
    for (std::size_t i = 0; i < q; ++i) {
      if (u[i] <= tol * 1e-3) continue;
      const double ratio = xb[i] / u[i];
      if (leave == q || ratio < best_ratio - tol ||
          (std::abs(ratio - best_ratio) <= tol && basis[i] < basis[leave])) {
        leave = i;
        best_ratio = ratio;
      }
    }
    if (leave == q) throw std::logic_error("covering LP dual unbounded (primal infeasible)");

    const double theta = std::max(best_ratio, 0.0);
    for (std::size_t i = 0; i < q; ++i) {
      if (i == leave) continue;
      xb[i] = std::max(xb[i] - theta * u[i], 0.0);
    }
    xb[leave] = theta;
    const double pivot = u[leave];
    for (std::size_t k = 0; k < q; ++k) binv[leave * q + k] /= pivot;
    for (std::size_t i = 0; i < q; ++i) {
      if (i == leave || u[i] == 0.0) continue;
      const double f = u[i];
      for (std::size_t k = 0; k < q; ++k) binv[i * q + k] -= f * binv[leave * q + k];
    }
    in_basis[basis[leave]] = 0;
    basis[leave] = entering;
    in_basis[entering] = 1;
  }

  refactor();
  for (std::size_t k = 0; k < q; ++k) {
    double acc = 0.0;
    for (std::size_t i = 0; i < q; ++i) acc += objective_coeff(basis[i]) * binv[i * q + k];
    result.x[k] = std::max(acc, 0.0);
  }
  for (std::size_t i = 0; i < q; ++i)
    if (basis[i] < rows) result.dual[basis[i]] = xb[i];
  for (std::size_t k = 0; k < q; ++k) result.objective += cost[k] * result.x[k];
  for (std::size_t j = 0; j < rows; ++j) result.dual_objective += b[j] * result.dual[j];
  result.iterations = iter;
  return result;
}

}  // namespace parity

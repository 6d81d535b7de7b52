#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>

#include "parity/ensemble.hpp"

namespace parity {

namespace {

struct Linear {
  double beta = 0.0;
  double gamma = 0.0;
  double sse = 0.0;  // weighted
};

class PowerLawProblem {
 public:
  PowerLawProblem(const std::vector<std::pair<double, double>>& points, std::vector<double> weights)
      : points_(points), w_(std::move(weights)) {
    if (w_.empty()) w_.assign(points.size(), 1.0);
  }

  // Optimal (beta, gamma) at fixed alpha by weighted linear least squares.
  Linear solve(double alpha) const {
    double sw = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < points_.size(); ++i) {
      const double x = std::pow(points_[i].first, alpha);
      const double y = points_[i].second;
      sw += w_[i];
      sx += w_[i] * x;
      sy += w_[i] * y;
      sxx += w_[i] * x * x;
      sxy += w_[i] * x * y;
    }
    Linear out;
    const double det = sw * sxx - sx * sx;
    if (std::abs(det) <= 1e-12 * std::max(1.0, sw * sxx)) {
      out.gamma = sy / sw;
    } else {
      out.beta = (sw * sxy - sx * sy) / det;
      out.gamma = (sxx * sy - sx * sxy) / det;
    }
    out.sse = sse(alpha, out.beta, out.gamma);
    return out;
  }

  double sse(double alpha, double beta, double gamma) const {
    double s = 0.0;
    for (std::size_t i = 0; i < points_.size(); ++i) {
      const double r = beta * std::pow(points_[i].first, alpha) + gamma - points_[i].second;
      s += w_[i] * r * r;
    }
    return s;
  }

  // Weighted J^T J and J^T r at (alpha, beta, gamma).
  void normal_equations(double alpha, double beta, double gamma, Eigen::Matrix3d& jtj,
                        Eigen::Vector3d& jtr) const {
    jtj.setZero();
    jtr.setZero();
    for (std::size_t i = 0; i < points_.size(); ++i) {
      const double n = points_[i].first;
      const double x = std::pow(n, alpha);
      const Eigen::Vector3d j(beta * x * std::log(n), x, 1.0);
      const double r = beta * x + gamma - points_[i].second;
      jtj += w_[i] * j * j.transpose();
      jtr += w_[i] * r * j;
    }
  }

 private:
  const std::vector<std::pair<double, double>>& points_;
  std::vector<double> w_;
};

constexpr double kAlphaLow = 0.0;
constexpr double kAlphaHigh = 3.0;

}  // namespace

FitResult fit_power_law(const std::vector<std::pair<double, double>>& points,
                        const std::vector<double>& weights) {
  if (points.size() < 4) throw std::invalid_argument("power-law fit needs at least 4 points");
  if (!weights.empty() && weights.size() != points.size())
    throw std::invalid_argument("weights and points differ in length");
  std::set<double> xs;
  double ymin = std::numeric_limits<double>::infinity();
  double ymax = -ymin;
  double ysum = 0.0;
  for (const auto& [n, y] : points) {
    if (!(n > 0.0) || !std::isfinite(y)) throw std::invalid_argument("invalid fit point");
    xs.insert(n);
    ymin = std::min(ymin, y);
    ymax = std::max(ymax, y);
    ysum += y;
  }
  if (xs.size() != points.size()) throw std::invalid_argument("fit points need distinct n");
  for (double w : weights)
    if (!(w > 0.0)) throw std::invalid_argument("fit weights must be positive");

  FitResult fit;
  fit.points = points.size();
  if (ymax - ymin <= 1e-12 * std::max(1.0, std::abs(ymax))) {
    fit.degenerate = true;
    fit.gamma = ysum / static_cast<double>(points.size());
    return fit;
  }

  const PowerLawProblem problem(points, weights);
  constexpr int kGrid = 300;
  int best = 0;
  double best_sse = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= kGrid; ++i) {
    const double a = kAlphaLow + (kAlphaHigh - kAlphaLow) * i / kGrid;
    const double s = problem.solve(a).sse;
    if (s < best_sse) {
      best_sse = s;
      best = i;
    }
  }
  const double step = (kAlphaHigh - kAlphaLow) / kGrid;
  double lo = std::max(kAlphaLow, kAlphaLow + (best - 1) * step);
  double hi = std::min(kAlphaHigh, kAlphaLow + (best + 1) * step);
  const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - ratio * (hi - lo), x2 = lo + ratio * (hi - lo);
  double f1 = problem.solve(x1).sse, f2 = problem.solve(x2).sse;
  while (hi - lo > 1e-12) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - ratio * (hi - lo);
      f1 = problem.solve(x1).sse;
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + ratio * (hi - lo);
      f2 = problem.solve(x2).sse;
    }
  }
  double alpha = 0.5 * (lo + hi);
  Linear lin = problem.solve(alpha);
  double beta = lin.beta, gamma = lin.gamma, sse = lin.sse;

  // Gauss-Newton polish on all three parameters, kept only if it helps.
  for (int it = 0; it < 5; ++it) {
    Eigen::Matrix3d jtj;
    Eigen::Vector3d jtr;
    problem.normal_equations(alpha, beta, gamma, jtj, jtr);
    const Eigen::Vector3d delta = jtj.ldlt().solve(-jtr);
    if (!delta.allFinite()) break;
    const double a2 = alpha + delta(0), b2 = beta + delta(1), g2 = gamma + delta(2);
    const double s2 = problem.sse(a2, b2, g2);
    if (!(s2 < sse)) break;
    alpha = a2;
    beta = b2;
    gamma = g2;
    sse = s2;
  }

  fit.alpha = alpha;
  fit.beta = beta;
  fit.gamma = gamma;
  double plain = 0.0;
  for (const auto& [n, y] : points) {
    const double r = beta * std::pow(n, alpha) + gamma - y;
    plain += r * r;
  }
  fit.rms_residual = std::sqrt(plain / static_cast<double>(points.size()));

  Eigen::Matrix3d jtj;
  Eigen::Vector3d jtr;
  problem.normal_equations(alpha, beta, gamma, jtj, jtr);
  const double dof = static_cast<double>(points.size()) - 3.0;
  const double s2 = dof > 0 ? sse / dof : std::numeric_limits<double>::quiet_NaN();
  Eigen::FullPivLU<Eigen::Matrix3d> lu(jtj);
  if (lu.isInvertible()) {
    const Eigen::Matrix3d cov = s2 * lu.inverse();
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) fit.covariance[r][c] = cov(r, c);
  } else {
    fit.degenerate = true;
    for (auto& row : fit.covariance)
      for (double& v : row) v = std::numeric_limits<double>::quiet_NaN();
  }
  return fit;
}

}  // namespace parity

#include "parity/evt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>
#include <stdexcept>

namespace parity {

namespace {

constexpr double kLog2 = std::numbers::ln2;
constexpr double kSqrt2 = std::numbers::sqrt2;
const double kLogSqrt2Pi = 0.5 * std::log(2.0 * std::numbers::pi);

// Lower-tail threshold below which log Phi uses the asymptotic series.
constexpr double kTailSwitch = -30.0;
// Largest log m handled by plain probabilities.
constexpr double kDirectLogLimit = 690.0;

// Acklam's rational approximation of the lower-tail quantile (p < 0.5).
double acklam_lower(double p) {
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00, 2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  if (p < 0.02425) {
    const double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  const double q = p - 0.5;
  const double r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

double probit_lower(double p) {
  double x = acklam_lower(p);
  for (int it = 0; it < 3; ++it) {
    const double e = normal_cdf(x) - p;
    const double u = e * std::exp(0.5 * x * x + kLogSqrt2Pi);
    x -= u / (1.0 + 0.5 * x * u);
  }
  return x;
}

// Phi(x) ~ phi(x) S(x) / (-x) for x -> -inf.
double tail_series(double x) {
  const double t = 1.0 / (x * x);
  return 1.0 + t * (-1.0 + t * (3.0 + t * (-15.0 + t * (105.0 - t * 945.0))));
}

// d/dx log Phi(x) = phi(x) / Phi(x).
double log_cdf_slope(double x) {
  if (x > kTailSwitch) return std::exp(-0.5 * x * x - kLogSqrt2Pi - log_normal_cdf(x));
  return -x / tail_series(x);
}

void require_log_m(double log_m) {
  if (!(log_m >= kLog2 * (1.0 - 1e-12)))
    throw std::invalid_argument("Gumbel parameters require m >= 2");
}

}  // namespace

double normal_cdf(double x) { return 0.5 * std::erfc(-x / kSqrt2); }

double log_normal_cdf(double x) {
  if (x > kTailSwitch) return std::log(normal_cdf(x));
  return -0.5 * x * x - std::log(-x) - kLogSqrt2Pi + std::log(tail_series(x));
}

double probit(double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::domain_error("probit requires 0 < p < 1");
  if (p == 0.5) return 0.0;
  if (p > 0.5) return -probit_lower(1.0 - p);
  if (p < 1e-300) return probit_from_log(std::log(p));
  return probit_lower(p);
}

double probit_from_log(double log_p) {
  if (!(log_p < 0.0)) throw std::domain_error("probit_from_log requires log p < 0");
  if (log_p > -kDirectLogLimit) return probit(std::exp(log_p));
  const double t = -2.0 * log_p;
  double x = -std::sqrt(t - std::log(t) - 2.0 * kLogSqrt2Pi);
  for (int it = 0; it < 60; ++it) {
    const double step = (log_normal_cdf(x) - log_p) / log_cdf_slope(x);
    x -= step;
    if (std::abs(step) <= 1e-15 * std::abs(x)) break;
  }
  return x;
}

double erfinv(double x) {
  if (!(x > -1.0 && x < 1.0)) throw std::domain_error("erfinv requires -1 < x < 1");
  if (x == 0.0) return 0.0;
  if (x < 0.0) return -erfinv(-x);
  return -probit(0.5 * (1.0 - x)) / kSqrt2;
}

double erfinv_crude(double x) {
  if (!(x > -1.0 && x < 1.0)) throw std::domain_error("erfinv_crude requires -1 < x < 1");
  const double v = std::sqrt(-std::log1p(-x * x));
  return x < 0.0 ? -v : v;
}

GumbelParams gumbel_params(double m) {
  if (std::isnan(m) || m < 2.0) throw std::invalid_argument("Gumbel parameters require m >= 2");
  if (std::isinf(m) || m > 1e300) throw std::invalid_argument("use gumbel_params_log for m beyond 1e300");
  GumbelParams g;
  g.m = m;
  g.log_m = std::log(m);
  g.alpha = -probit(1.0 / m);
  g.beta = -probit(1.0 / (std::numbers::e * m)) - g.alpha;
  return g;
}

GumbelParams gumbel_params_log(double log_m) {
  require_log_m(log_m);
  if (log_m < kDirectLogLimit) {
    GumbelParams g = gumbel_params(std::max(2.0, std::exp(log_m)));
    g.log_m = log_m;
    return g;
  }
  GumbelParams g;
  g.m = std::numeric_limits<double>::infinity();
  g.log_m = log_m;
  g.alpha = -probit_from_log(-log_m);
  g.beta = -probit_from_log(-log_m - 1.0) - g.alpha;
  return g;
}

double expected_min_independent(double m, double sigma) {
  const GumbelParams g = gumbel_params(m);
  return -sigma * (g.alpha + kEulerGamma * g.beta);
}

double expected_min_independent_log(double log_m, double sigma) {
  const GumbelParams g = gumbel_params_log(log_m);
  return -sigma * (g.alpha + kEulerGamma * g.beta);
}

double sk_sigma(int n) { return std::sqrt(0.5 * n * (n - 1.0)); }

double expected_l0_independent(int n, double delta) {
  return expected_min_independent_log(delta * n * kLog2, sk_sigma(n));
}

double expected_a1_independent(int n, double delta, const Quadratic& p) {
  const double pn = p(n);
  if (!(pn > 0.0)) throw std::invalid_argument("p(n) must be positive");
  return expected_min_independent_log(delta * n * kLog2 + std::log(pn), sk_sigma(n));
}

double expected_ak_independent(int n, int k, double delta) {
  if (k < 1) throw std::invalid_argument("defect count must be positive");
  return expected_min_independent_log(delta * n * kLog2 + 2.0 * k * std::log(n), sk_sigma(n));
}

double f1_scaling(int n, double delta, const Quadratic& p) {
  if (!(delta > 0.0)) throw std::invalid_argument("delta must be positive");
  return std::sqrt(static_cast<double>(n)) * std::log(p(n)) / (2.0 * std::sqrt(delta * kLog2));
}

ApproxChain approx_chain(int n, double delta, const Quadratic& p) {
  const double dn = delta * n;
  if (!(dn > 2.0)) throw std::invalid_argument("approximation chain requires delta n > 2");
  const double eps = std::log(p(n));
  const double root = std::sqrt(n * (n - 1.0));
  ApproxChain c;
  c.alpha_approx = std::sqrt((dn - 2.0) * kLog2);
  c.l0_approx = -root * c.alpha_approx;
  c.a1_approx = -root * std::sqrt((dn - 2.0) * kLog2 + eps);
  c.diff_approx = root * eps / (2.0 * std::sqrt(dn * kLog2));
  return c;
}

double asymptotic_l0_coefficient(double delta) { return -std::sqrt(delta * kLog2); }

EvtCalibration calibrate_delta(const std::vector<std::pair<int, double>>& empirical) {
  if (empirical.size() < 3) throw std::invalid_argument("delta calibration needs at least 3 points");
  std::set<int> sizes;
  int n_min = std::numeric_limits<int>::max();
  int n_max = 0;
  for (const auto& [n, l0] : empirical) {
    if (n < 2 || !std::isfinite(l0)) throw std::invalid_argument("invalid calibration point");
    sizes.insert(n);
    n_min = std::min(n_min, n);
    n_max = std::max(n_max, n);
  }
  if (sizes.size() < 3) throw std::invalid_argument("delta calibration needs 3 distinct sizes");

  auto sse = [&](double delta) {
    double s = 0.0;
    for (const auto& [n, l0] : empirical) {
      const double r = expected_l0_independent(n, delta) - l0;
      s += r * r;
    }
    return s;
  };

  const double lo = 1.0 / n_min;
  const double hi = 1.0;
  constexpr int kGrid = 200;
  int best = 0;
  double best_value = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= kGrid; ++i) {
    const double v = sse(lo + (hi - lo) * i / kGrid);
    if (v < best_value) {
      best_value = v;
      best = i;
    }
  }
  double a = lo + (hi - lo) * std::max(best - 1, 0) / kGrid;
  double b = lo + (hi - lo) * std::min(best + 1, kGrid) / kGrid;
  const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - ratio * (b - a);
  double x2 = a + ratio * (b - a);
  double f1 = sse(x1);
  double f2 = sse(x2);
  while (b - a > 1e-13) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - ratio * (b - a);
      f1 = sse(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + ratio * (b - a);
      f2 = sse(x2);
    }
  }
  EvtCalibration cal;
  cal.delta = 0.5 * (a + b);
  cal.n_min = n_min;
  cal.n_max = n_max;
  cal.residual = std::sqrt(sse(cal.delta) / static_cast<double>(empirical.size()));
  return cal;
}

std::vector<EvtModelRow> evt_model_curves(int n_min, int n_max, double delta, const Quadratic& p) {
  if (n_min < 3 || n_max < n_min) throw std::invalid_argument("invalid model-curve range");
  std::vector<EvtModelRow> rows;
  for (int n = n_min; n <= n_max; ++n) {
    if (delta * n < 1.0) continue;
    EvtModelRow r;
    r.n = n;
    r.l0_model = expected_l0_independent(n, delta);
    r.a1_model = expected_a1_independent(n, delta, p);
    r.diff_model = r.l0_model - r.a1_model;
    r.f1 = f1_scaling(n, delta, p);
    rows.push_back(r);
  }
  return rows;
}

}  // namespace parity

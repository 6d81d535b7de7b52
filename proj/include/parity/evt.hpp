#pragma once

#include <utility>
#include <vector>

namespace parity {

inline constexpr double kEulerGamma = 0.57721566490153286061;
inline constexpr double kDefaultDelta = 0.798158;
// n^{3/2} coefficient of the SK ground-state energy (Parisi).
inline constexpr double kParisiGroundCoefficient = -0.763167;

double normal_cdf(double x);

// log Phi(x), accurate deep into the lower tail.
double log_normal_cdf(double x);

// Standard-normal quantile, absolute error below 1e-12 on [1e-300, 1 - 1e-16].
double probit(double p);

// Quantile at log-probability: Phi(x) = exp(log_p), log_p <= log(1/2).
double probit_from_log(double log_p);

// Inverse error function built on probit.
double erfinv(double x);

// sqrt(-log(1 - x^2)); only meaningful as an asymptotic device for x near 1.
double erfinv_crude(double x);

struct GumbelParams {
  double alpha = 0.0;  // F^{-1}(1 - 1/m)
  double beta = 0.0;   // F^{-1}(1 - 1/(e m)) - alpha
  double m = 0.0;      // may be +inf when only log m is representable
  double log_m = 0.0;
};

// Requires m >= 2.
GumbelParams gumbel_params(double m);
GumbelParams gumbel_params_log(double log_m);

// -sigma (alpha + Gamma beta): Gumbel approximation of the expected minimum of
// m independent N(0, sigma^2) variables.
double expected_min_independent(double m, double sigma);
double expected_min_independent_log(double log_m, double sigma);

// Standard deviation of any SK eigenvalue: sqrt(n(n-1)/2).
double sk_sigma(int n);

// Quadratic a n^2 + b n + c; defaults to n(n+1)/12.
struct Quadratic {
  double a = 1.0 / 12.0;
  double b = 1.0 / 12.0;
  double c = 0.0;
  double operator()(double n) const { return (a * n + b) * n + c; }
};

// Model of the mean SK ground energy: M_ind(2^{delta n}, sigma_n).
double expected_l0_independent(int n, double delta);

// Model of the mean single-violator minimum: M_ind(2^{delta n} p(n), sigma_n).
double expected_a1_independent(int n, double delta, const Quadratic& p = {});

// Model of the mean k-violator minimum with 2^{delta n} n^{2k} variables.
double expected_ak_independent(int n, int k, double delta);

// (1 / (2 sqrt(delta log 2))) sqrt(n) log p(n).
double f1_scaling(int n, double delta, const Quadratic& p = {});

struct ApproxChain {
  double alpha_approx = 0.0;  // sqrt((delta n - 2) log 2)
  double l0_approx = 0.0;     // -sqrt(n(n-1)) alpha_approx
  double a1_approx = 0.0;     // -sqrt(n(n-1)) sqrt((delta n - 2) log 2 + log p(n))
  double diff_approx = 0.0;   // sqrt(n(n-1)) log p(n) / (2 sqrt(delta n log 2))
};

// Requires delta n > 2.
ApproxChain approx_chain(int n, double delta, const Quadratic& p = {});

// Leading n^{3/2} coefficient of the l0 model: -sqrt(delta log 2).
double asymptotic_l0_coefficient(double delta);

struct EvtCalibration {
  double delta = 0.0;
  int n_min = 0;
  int n_max = 0;
  double residual = 0.0;  // rms of model - data
};

// Least-squares fit of delta in (0, 1] to (n, mean l0) pairs; needs >= 3
// points with distinct n.
EvtCalibration calibrate_delta(const std::vector<std::pair<int, double>>& empirical);

struct EvtModelRow {
  int n = 0;
  double l0_model = 0.0;
  double a1_model = 0.0;
  double diff_model = 0.0;  // l0_model - a1_model
  double f1 = 0.0;
};

std::vector<EvtModelRow> evt_model_curves(int n_min, int n_max, double delta, const Quadratic& p = {});

}  // namespace parity

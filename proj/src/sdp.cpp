#include "parity/sdp.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "parity/rng.hpp"

namespace parity {

namespace {

struct Adjacency {
  std::vector<std::vector<int>> neighbors;
  explicit Adjacency(const Graph& g) : neighbors(static_cast<std::size_t>(g.n())) {
    for (const Edge& e : g.edges()) {
      neighbors[static_cast<std::size_t>(e.i)].push_back(e.j);
      neighbors[static_cast<std::size_t>(e.j)].push_back(e.i);
    }
  }
};

double dot(const double* a, const double* b, int r) {
  double s = 0.0;
  for (int k = 0; k < r; ++k) s += a[k] * b[k];
  return s;
}

void normalize(double* a, int r) {
  const double norm = std::sqrt(dot(a, a, r));
  for (int k = 0; k < r; ++k) a[k] /= norm;
}

// sum_E (1 - <Y_i, Y_j>) / 2
double cut_objective(const Graph& g, const std::vector<double>& Y, int r) {
  double s = 0.0;
  for (const Edge& e : g.edges())
    s += 1.0 - dot(&Y[static_cast<std::size_t>(e.i * r)], &Y[static_cast<std::size_t>(e.j * r)], r);
  return 0.5 * s;
}

// Riemannian gradient of the objective, returns its squared norm.
double riemannian_gradient(const Adjacency& adj, const std::vector<double>& Y, int n, int r,
                           std::vector<double>& grad) {
  double norm2 = 0.0;
  for (int i = 0; i < n; ++i) {
    double* g = &grad[static_cast<std::size_t>(i * r)];
    std::fill(g, g + r, 0.0);
    for (int j : adj.neighbors[static_cast<std::size_t>(i)]) {
      const double* yj = &Y[static_cast<std::size_t>(j * r)];
      for (int k = 0; k < r; ++k) g[k] -= 0.5 * yj[k];
    }
    const double* yi = &Y[static_cast<std::size_t>(i * r)];
    const double radial = dot(g, yi, r);
    for (int k = 0; k < r; ++k) g[k] -= radial * yi[k];
    norm2 += dot(g, g, r);
  }
  return norm2;
}

// Dual multipliers suggested by the stationarity condition of the primal.
std::vector<double> dual_guess(const Adjacency& adj, const std::vector<double>& Y, int n, int r) {
  std::vector<double> y(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const auto& nb = adj.neighbors[static_cast<std::size_t>(i)];
    double s = static_cast<double>(nb.size());
    for (int j : nb)
      s -= dot(&Y[static_cast<std::size_t>(i * r)], &Y[static_cast<std::size_t>(j * r)], r);
    y[static_cast<std::size_t>(i)] = 0.25 * s;
  }
  return y;
}

}  // namespace

double SdpResult::relative_gap() const {
  return (dual_value - primal_value) / std::max(1.0, std::abs(dual_value));
}

double maxcut_dual_value(const Graph& graph, const std::vector<double>& y) {
  const int n = graph.n();
  if (static_cast<int>(y.size()) != n) throw std::invalid_argument("dual vector has wrong length");
  if (n == 0) return 0.0;
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, n);
  for (const Edge& e : graph.edges()) {
    M(e.i, e.j) = -0.25;
    M(e.j, e.i) = -0.25;
  }
  double row_bound = 0.0;
  for (int i = 0; i < n; ++i) {
    M(i, i) = 0.25 * graph.degree(i) - y[static_cast<std::size_t>(i)];
    row_bound = std::max(row_bound, std::abs(M(i, i)) + 0.25 * graph.degree(i));
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(M, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw std::runtime_error("eigenvalue computation failed");
  // Backward-stable eigensolver: error bounded by a small multiple of eps * ||M||.
  const double margin = 64.0 * n * std::numeric_limits<double>::epsilon() * std::max(row_bound, 1.0);
  const double lambda_max = solver.eigenvalues()(n - 1) + margin;
  double total = 0.0;
  for (double v : y) total += v;
  return total + n * lambda_max;
}

SdpResult solve_maxcut_sdp(const Graph& graph, const SdpOptions& options) {
  const int n = graph.n();
  SdpResult res;
  const double edges = static_cast<double>(graph.edge_count());
  if (graph.edge_count() == 0) {
    res.converged = true;
    return res;
  }
  const int r = options.rank > 0 ? options.rank
                                 : static_cast<int>(std::ceil(std::sqrt(2.0 * n))) + 1;
  res.rank_used = r;
  const Adjacency adj(graph);

  std::vector<double> Y(static_cast<std::size_t>(n * r));
  CounterRng rng(options.seed);
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < r; ++k) Y[static_cast<std::size_t>(i * r + k)] = rng.normal();
    normalize(&Y[static_cast<std::size_t>(i * r)], r);
  }

  std::vector<double> grad(Y.size()), trial(Y.size());
  double value = cut_objective(graph, Y, r);
  double step = 1.0;
  double best_dual = std::numeric_limits<double>::infinity();
  const double grad_tol = options.gradient_tolerance * edges;

  int it = 0;
  for (; it < options.max_iterations; ++it) {
    const double g2 = riemannian_gradient(adj, Y, n, r, grad);
    const bool small_gradient = std::sqrt(g2) < grad_tol;
    if (small_gradient || (it % options.dual_check_interval == 0)) {
      best_dual = std::min(best_dual, maxcut_dual_value(graph, dual_guess(adj, Y, n, r)));
      if ((best_dual - value) / std::max(1.0, best_dual) <= options.target_relative_gap) {
        res.converged = true;
        break;
      }
      if (small_gradient) {
        res.converged = true;
        break;
      }
    }
    // Backtracking (Armijo) along the gradient, retracting rows to the sphere.
    step = std::min(step * 2.0, 1e6);
    for (;;) {
      for (std::size_t t = 0; t < Y.size(); ++t) trial[t] = Y[t] + step * grad[t];
      for (int i = 0; i < n; ++i) normalize(&trial[static_cast<std::size_t>(i * r)], r);
      const double candidate = cut_objective(graph, trial, r);
      if (candidate >= value + 1e-4 * step * g2 || step < 1e-12) {
        Y.swap(trial);
        value = candidate;
        break;
      }
      step *= 0.5;
    }
  }
  best_dual = std::min(best_dual, maxcut_dual_value(graph, dual_guess(adj, Y, n, r)));
  res.primal_value = value;
  res.dual_value = best_dual;
  res.iterations = it;
  res.widened_gap = res.relative_gap() > options.target_relative_gap && !res.converged;
  res.factor = std::move(Y);
  return res;
}

RoundedCut round_cut(const Graph& graph, const SdpResult& sdp, int trials, std::uint64_t seed) {
  const int n = graph.n();
  RoundedCut best;
  best.spins.assign(static_cast<std::size_t>(n), 1);
  best.value = 0;
  if (graph.edge_count() == 0 || sdp.rank_used == 0) return best;
  const int r = sdp.rank_used;
  CounterRng rng(seed);
  std::vector<double> h(static_cast<std::size_t>(r));
  Spins spins(static_cast<std::size_t>(n));
  best.value = -1;
  for (int t = 0; t < trials; ++t) {
    for (auto& v : h) v = rng.normal();
    for (int i = 0; i < n; ++i)
      spins[static_cast<std::size_t>(i)] =
          dot(&sdp.factor[static_cast<std::size_t>(i * r)], h.data(), r) >= 0.0 ? 1 : -1;
    std::int64_t cut = 0;
    for (const Edge& e : graph.edges())
      if (spins[static_cast<std::size_t>(e.i)] != spins[static_cast<std::size_t>(e.j)]) ++cut;
    if (cut > best.value) {
      best.value = cut;
      best.spins = spins;
    }
  }
  return best;
}

TripartitionBound tripartition_a1_upper(const IsingInstance& inst) {
  const int n = inst.n();
  if (n < 6) throw std::invalid_argument("tripartition bound requires n >= 6");
  // prefix[a][b] = sum of the symmetric coupling matrix over rows < a, cols < b
  const std::size_t w = static_cast<std::size_t>(n + 1);
  std::vector<double> prefix(w * w, 0.0);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      const double v = a == b ? 0.0 : inst.coupling(std::min(a, b), std::max(a, b));
      prefix[(a + 1) * w + (b + 1)] =
          v + prefix[a * w + (b + 1)] + prefix[(a + 1) * w + b] - prefix[a * w + b];
    }
  }
  auto block = [&](int r0, int r1, int c0, int c1) {
    return prefix[r1 * w + c1] - prefix[r0 * w + c1] - prefix[r1 * w + c0] + prefix[r0 * w + c0];
  };

  TripartitionBound best;
  best.a1_plus = std::numeric_limits<double>::infinity();
  bool flip_c = false;
  for (int k = 2; k + 4 <= n; ++k) {
    for (int j = k + 2; j + 2 <= n; ++j) {
      const double inner = 0.5 * (block(0, k, 0, k) + block(k, j, k, j) + block(j, n, j, n));
      const double ab = block(0, k, k, j);
      const double ac = block(0, k, j, n);
      const double bc = block(k, j, j, n);
      // A, C up and B down, or C down as well; A-C couplings are sign-flipped.
      const double keep = inner - ab - bc - ac;
      const double flip = inner - ab + bc + ac;
      const double energy = std::min(keep, flip);
      if (energy < best.a1_plus) {
        best.a1_plus = energy;
        best.k = k;
        best.j = j;
        flip_c = flip < keep;
      }
    }
  }
  best.plaquette_i = best.k - 1;
  best.plaquette_j = best.j - 1;
  best.spins.assign(static_cast<std::size_t>(n), 1);
  for (int v = best.k; v < best.j; ++v) best.spins[static_cast<std::size_t>(v)] = -1;
  if (flip_c)
    for (int v = best.j; v < n; ++v) best.spins[static_cast<std::size_t>(v)] = -1;
  return best;
}

SdpBound c1_sdp_bound(const Graph& graph, const SdpOptions& options) {
  SdpBound out;
  out.edge_count = static_cast<double>(graph.edge_count());
  const TripartitionBound tri = tripartition_a1_upper(encode_maxcut(graph));
  out.a1_plus = tri.a1_plus;
  out.sdp = solve_maxcut_sdp(graph, options);
  out.meaningful = graph.edge_count() > 0;
  out.c1_sdp_continuous = -2.0 * out.sdp.dual_value + out.edge_count + 2.0 - out.a1_plus;
  out.c1_sdp = -2.0 * std::floor(out.sdp.dual_value) + out.edge_count + 2.0 - out.a1_plus;
  return out;
}

}  // namespace parity

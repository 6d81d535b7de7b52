#include <doctest.h>

#include <cmath>
#include <set>

#include "../oracles.hpp"
#include "parity/bounds.hpp"
#include "parity/instances.hpp"
#include "parity/layout.hpp"
#include "parity/solver.hpp"

using namespace parity;

TEST_SUITE("instances") {
  TEST_CASE("bimodal p = 1 gives all couplings +1") {
    const auto inst = sample_instance(DistributionSpec::bimodal(1.0), GraphSpec::complete(4), 7);
    REQUIRE(inst.couplings().size() == 6);
    for (const auto& c : inst.couplings()) CHECK(c.value == 1.0);
  }

  TEST_CASE("sampling is deterministic in the seed") {
    const auto dist = DistributionSpec::normal(0.0, 1.0);
    const auto a = sample_instance(dist, GraphSpec::complete(4), 42);
    const auto b = sample_instance(dist, GraphSpec::complete(4), 42);
    const auto c = sample_instance(dist, GraphSpec::complete(4), 43);
    bool differs = false;
    for (std::size_t k = 0; k < 6; ++k) {
      CHECK(a.couplings()[k].value == b.couplings()[k].value);
      differs |= a.couplings()[k].value != c.couplings()[k].value;
    }
    CHECK(differs);
  }

  TEST_CASE("uniform couplings have mean zero within 3 SE") {
    const auto dist = DistributionSpec::uniform(-1.0, 1.0);
    double sum = 0.0, sum2 = 0.0;
    std::size_t count = 0;
    for (std::uint64_t s = 0; s < 10000; ++s) {
      const auto inst = sample_instance(dist, GraphSpec::complete(10), s);
      for (const auto& c : inst.couplings()) {
        sum += c.value;
        sum2 += c.value * c.value;
        ++count;
      }
    }
    const double mean = sum / count;
    const double var = sum2 / count - mean * mean;
    CHECK(std::abs(mean) < 3.0 * std::sqrt(var / count));
    CHECK(var == doctest::Approx(1.0 / 3.0).epsilon(0.01));
  }

  TEST_CASE("normal couplings have the requested moments") {
    const auto dist = DistributionSpec::normal(0.7, 2.0);
    double sum = 0.0, sum2 = 0.0;
    std::size_t count = 0;
    for (std::uint64_t s = 0; s < 4000; ++s) {
      const auto inst = sample_instance(dist, GraphSpec::complete(8), s);
      for (const auto& c : inst.couplings()) {
        sum += c.value;
        sum2 += c.value * c.value;
        ++count;
      }
    }
    const double mean = sum / count;
    const double sd = std::sqrt(sum2 / count - mean * mean);
    CHECK(std::abs(mean - 0.7) < 3.0 * 2.0 / std::sqrt(count));
    CHECK(sd == doctest::Approx(2.0).epsilon(0.02));
  }

  TEST_CASE("ratio per distribution kind") {
    CHECK(DistributionSpec::normal(2.0, 4.0).ratio() == doctest::Approx(0.5));
    CHECK(DistributionSpec::uniform(1.0, 3.0).ratio() == doctest::Approx(std::sqrt(3.0) * 4.0 / 2.0));
    const double p = 0.8;
    CHECK(DistributionSpec::bimodal(p).ratio() ==
          doctest::Approx((2 * p - 1) / (2 * std::sqrt(p * (1 - p)))));
    CHECK_THROWS_AS(DistributionSpec::bimodal(1.0).ratio(), std::domain_error);
    CHECK_THROWS_AS(DistributionSpec::bimodal(0.0).ratio(), std::domain_error);
  }

  TEST_CASE("with_ratio yields unit variance and the requested ratio") {
    for (const char* kind : {"normal", "uniform", "bimodal"}) {
      for (double r : {-4.0, -1.0, 0.0, 0.5, 4.0}) {
        const auto d = DistributionSpec::with_ratio(kind, r);
        if (std::string(kind) != "bimodal") CHECK(d.stddev() == doctest::Approx(1.0));
        CHECK(d.ratio() == doctest::Approx(r));
        CHECK(d.kind_name() == kind);
      }
    }
    CHECK_THROWS(DistributionSpec::with_ratio("cauchy", 0.0));
  }

  TEST_CASE("pair_index is lexicographic") {
    int k = 0;
    for (int i = 0; i < 7; ++i)
      for (int j = i + 1; j < 7; ++j) CHECK(pair_index(7, i, j) == k++);
  }

  TEST_CASE("graph validation") {
    CHECK_THROWS(Graph(3, {{0, 0}}));
    CHECK_THROWS(Graph(3, {{0, 1}, {0, 1}}));
    CHECK_THROWS(Graph(3, {{0, 5}}));
    const Graph g(4, {{2, 3}, {0, 1}});
    CHECK(g.edge_count() == 2);
    CHECK(g.has_edge(1, 0));
    CHECK_FALSE(g.has_edge(0, 2));
  }

  TEST_CASE("Erdos-Renyi graphs: determinism, degrees, density") {
    const auto spec = GraphSpec::erdos_renyi(20, 0.3, 9);
    const Graph a = spec.realize();
    const Graph b = spec.realize();
    REQUIRE(a.edge_count() == b.edge_count());
    for (std::size_t k = 0; k < a.edge_count(); ++k) CHECK(a.edges()[k] == b.edges()[k]);
    int dmax = 0;
    for (int v = 0; v < 20; ++v) dmax = std::max(dmax, a.degree(v));
    CHECK(a.max_degree() == dmax);

    double edges = 0;
    const int trials = 400;
    for (int s = 0; s < trials; ++s) edges += GraphSpec::erdos_renyi(20, 0.3, s).realize().edge_count();
    const double expected = 0.3 * 190;
    const double se = std::sqrt(190 * 0.3 * 0.7 / trials);
    CHECK(std::abs(edges / trials - expected) < 4 * se);
  }

  TEST_CASE("MaxCut encoding") {
    const auto k4 = encode_maxcut(Graph::complete(4));
    CHECK(k4.couplings().size() == 6);
    for (const auto& c : k4.couplings()) CHECK(c.value == 1.0);

    const auto k6 = encode_maxcut(Graph::complete(6));
    const double l0 = logical_spectrum(k6).l0;
    CHECK(l0 == -3.0);
    CHECK(maxcut_value(l0, 15) == 9.0);

    const auto path = encode_maxcut(Graph::path(3));
    const double lp = logical_spectrum(path).l0;
    CHECK(lp == -2.0);
    CHECK(maxcut_value(lp, 2) == 2.0);
  }

  TEST_CASE("MinBisection encoding") {
    const auto k4 = encode_minbisection(Graph::complete(4), 2.0);
    for (double v : k4.site_couplings()) CHECK(v == 3.0);
    CHECK(k4.offset() == 8.0);
    CHECK_THROWS(encode_minbisection(Graph::complete(5)));
    CHECK_THROWS(encode_minbisection(Graph::complete(4), 0.5));
    const Graph star(6, {{0, 1}, {0, 2}, {0, 3}, {0, 4}, {0, 5}});
    CHECK(minbisection_threshold(star) == doctest::Approx(6.0 / 4.0));
  }

  TEST_CASE("MinBisection with AUTO penalty has balanced ground states") {
    for (int n : {4, 6, 8, 10}) {
      for (std::uint64_t s = 0; s < 5; ++s) {
        const Graph g = GraphSpec::erdos_renyi(n, 0.5, 100 * n + s).realize();
        const auto inst = encode_minbisection(g);
        const double l0 = logical_spectrum(inst).l0;
        for (std::uint64_t c = 0; c < (std::uint64_t{1} << n); ++c) {
          const auto spins = oracle::spins_of(c, n);
          if (oracle::energy(inst, spins) <= l0 + 1e-9) {
            int mag = 0;
            for (int v : spins) mag += v;
            CHECK(mag == 0);
          }
        }
      }
    }
  }

  TEST_CASE("rescaling multiplies spectrum, minima and bounds") {
    const auto inst = sample_instance(DistributionSpec::normal(0.3, 1.0), GraphSpec::complete(6), 5);
    const ParityLayout layout(6);
    const double k = 3.5;
    const auto base = homogeneous_optimum(inst, layout, 2);
    const auto scaled = homogeneous_optimum(inst.scaled(k), layout, 2);
    CHECK(scaled.l0 == doctest::Approx(k * base.l0));
    CHECK(scaled.e == doctest::Approx(k * base.e));
    for (std::size_t i = 0; i < base.a.size(); ++i) CHECK(scaled.a[i] == doctest::Approx(k * base.a[i]));
    for (std::size_t i = 0; i < base.lower.size(); ++i)
      CHECK(scaled.lower[i] == doctest::Approx(k * base.lower[i]));
    for (std::size_t i = 0; i < base.upper.size(); ++i)
      CHECK(scaled.upper[i] == doctest::Approx(k * base.upper[i]));
  }

  TEST_CASE("instance validation and accessors") {
    CHECK_THROWS(IsingInstance(3, {{1, 1, 1.0}}));
    CHECK_THROWS(IsingInstance(3, {{0, 3, 1.0}}));
    const IsingInstance inst(3, {{0, 2, -2.0}});
    CHECK(inst.coupling(0, 2) == -2.0);
    CHECK(inst.coupling(0, 1) == 0.0);
    CHECK(inst.p0() == -2.0);
    CHECK(inst.integral());
    CHECK_FALSE(inst.dense());
    const IsingInstance real(2, {{0, 1, 0.5}});
    CHECK_FALSE(real.integral());
  }
}

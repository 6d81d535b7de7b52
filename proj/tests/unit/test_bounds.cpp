#include <doctest.h>

#include <bit>

#include "../oracles.hpp"
#include "parity/bounds.hpp"
#include "parity/errors.hpp"

using namespace parity;

namespace {

IsingInstance uniform_couplings(int n, double j) {
  std::vector<double> v(static_cast<std::size_t>(n * (n - 1) / 2), j);
  return IsingInstance::from_dense(n, v);
}

IsingInstance gaussian(int n, std::uint64_t seed) {
  return sample_instance(DistributionSpec::normal(0.0, 1.0), GraphSpec::complete(n), seed);
}

EnumerationLimits full_range() {
  EnumerationLimits l;
  l.allow_higher_defects = true;
  return l;
}

}  // namespace

TEST_SUITE("bounds") {
  TEST_CASE("homogeneous optimum of the uniform limits") {
    const ParityLayout l6(6);
    const auto ferro = homogeneous_optimum(uniform_couplings(6, -1.0), l6, l6.plaquette_count(), full_range());
    CHECK(ferro.c_hat == 8.0);
    CHECK(ferro.lower[0] == 8.0);
    CHECK(ferro.label() == "optimum");
    const auto af = homogeneous_optimum(uniform_couplings(6, 1.0), l6, 1);
    CHECK(af.lower[0] == 8.0);
    CHECK(af.certified());
    const auto partial = homogeneous_optimum(gaussian(7, 2), ParityLayout(7), 1);
    CHECK(partial.certified() == (partial.upper[1] <= partial.c_hat));
    if (!partial.certified()) CHECK(partial.label() == "lower bound (k <= 1)");
    const auto ferro8 = homogeneous_optimum(uniform_couplings(8, -1.0), ParityLayout(8), 1);
    CHECK(ferro8.certified());
    CHECK(ferro8.c_hat == 12.0);
    CHECK(ferro8.label() == "optimum (c_1 = c_hat)");
    const ParityLayout l4(4);
    CHECK(homogeneous_optimum(uniform_couplings(4, 1.0), l4, 1).lower[0] == 4.0);
  }

  TEST_CASE("bound formulas from given minima") {
    // n = 4, q = 3, e = 1, p0 = -6, a = {-2, -4, -5}
    const auto r = bounds_from_minima(4, 0.0, 1.0, -6.0, {-2.0, -4.0, -5.0});
    CHECK(r.lower == std::vector<double>{3.0, 2.5, 2.0});
    CHECK(r.c_hat == 3.0);
    CHECK(r.binding_k == 1);
    CHECK(r.upper[0] == 7.0);
    CHECK(r.upper[1] == 3.5);
    CHECK(r.upper[2] == 3.0);
    CHECK(r.upper[3] == 3.0);
    CHECK(r.trivial == 12.0);
    CHECK(r.complete());
  }

  TEST_CASE("negative lower bounds are not clamped") {
    const auto r = bounds_from_minima(4, 0.0, 0.0, -6.0, {1.0, -4.0, -5.0});
    CHECK(r.lower[0] == -1.0);
    CHECK(r.binding_k == 2);
  }

  TEST_CASE("bound chain and quadratic cap on random instances") {
    for (int n = 4; n <= 7; ++n) {
      const ParityLayout layout(n);
      for (std::uint64_t s = 0; s < 10; ++s) {
        const auto r = homogeneous_optimum(gaussian(n, s), layout, layout.plaquette_count(), full_range());
        REQUIRE(r.complete());
        const double tol = 1e-9 * std::max(1.0, r.trivial);
        CHECK(r.c_hat <= r.upper.back() + tol);
        for (std::size_t i = 1; i < r.upper.size(); ++i) CHECK(r.upper[i] <= r.upper[i - 1] + tol);
        CHECK(r.upper[0] <= r.trivial + tol);
        CHECK(r.upper[0] == doctest::Approx(r.e - r.p0));
        CHECK(r.c_hat <= 2.0 * std::abs(r.p0) + tol);
      }
    }
  }

  TEST_CASE("verification at and just below the homogeneous optimum") {
    const ParityLayout layout(5);
    for (std::uint64_t s = 0; s < 5; ++s) {
      const auto inst = gaussian(5, 40 + s);
      const auto r = homogeneous_optimum(inst, layout, layout.plaquette_count(), full_range());
      const auto at = verify_assignment(inst, layout, ConstraintAssignment::homogeneous(r.c_hat),
                                        ProfileFamily::full());
      CHECK(at.satisfied);
      CHECK(at.checked == 63);
      CHECK(std::abs(at.worst_slack) <= at.tolerance);
      CHECK(static_cast<int>(at.worst.size()) == r.binding_k);
      const auto below = verify_assignment(
          inst, layout, ConstraintAssignment::homogeneous(r.c_hat * (1 - 1e-6)), ProfileFamily::full());
      CHECK_FALSE(below.satisfied);
      const auto partial = verify_assignment(inst, layout, ConstraintAssignment::homogeneous(r.c_hat),
                                             ProfileFamily::up_to(2));
      CHECK(partial.satisfied);
      CHECK(partial.checked == 6 + 15);
    }
  }

  TEST_CASE("LP on the uniform ferromagnet") {
    const ParityLayout layout(4);
    const auto inst = uniform_couplings(4, -1.0);
    const auto lp = solve_lp(inst, layout, ProfileFamily::full());
    CHECK(lp.objective <= 3.0 * 4.0 + 1e-9);
    CHECK(lp.label() == "optimum");
    CHECK(verify_assignment(inst, layout, lp.assignment(), ProfileFamily::full()).satisfied);
  }

  TEST_CASE("LP with one constraint") {
    const ParityLayout layout(5);
    const auto inst = gaussian(5, 8);
    const DefectProfile omega({0});
    const auto lp = solve_lp(inst, layout, ProfileFamily::explicit_list({omega}));
    const double rhs = logical_spectrum(inst).e - restricted_minimum(inst, omega, layout);
    CHECK(lp.strengths[0] == doctest::Approx(std::max(0.0, rhs)));
    for (std::size_t p = 1; p < lp.strengths.size(); ++p) CHECK(lp.strengths[p] == 0.0);
    CHECK(lp.label() == "lower bound (explicit family)");
  }

  TEST_CASE("LP solutions verify, obey duality and beat the homogeneous point") {
    const ParityLayout layout(5);
    for (std::uint64_t s = 0; s < 10; ++s) {
      const auto inst = gaussian(5, 300 + s);
      const auto lp = solve_lp(inst, layout, ProfileFamily::full());
      CHECK(verify_assignment(inst, layout, lp.assignment(), ProfileFamily::full()).satisfied);
      CHECK(lp.objective == doctest::Approx(lp.dual_objective).epsilon(1e-7));
      const auto r = homogeneous_optimum(inst, layout, layout.plaquette_count(), full_range());
      CHECK(lp.objective <= layout.plaquette_count() * r.c_hat + 1e-9);
      for (double c : lp.strengths) CHECK(c >= 0.0);
      CHECK_FALSE(lp.active.empty());
    }
  }

  TEST_CASE("truncated LP is a labelled lower bound") {
    const ParityLayout layout(6);
    const auto inst = gaussian(6, 5);
    const auto full = solve_lp(inst, layout, ProfileFamily::full(), full_range());
    const auto part = solve_lp(inst, layout, ProfileFamily::up_to(1));
    CHECK(part.label() == "lower bound (k <= 1)");
    CHECK(part.objective <= full.objective + 1e-9);
    CHECK(full.constraint_count == 1023);
  }

  TEST_CASE("full LP beyond q = 10 is refused") {
    const ParityLayout layout(7);
    CHECK_THROWS_AS(solve_lp(gaussian(7, 1), layout, ProfileFamily::full()), CapacityError);
  }

  TEST_CASE("profile enumeration") {
    const ParityLayout layout(5);
    CHECK(enumerate_profiles(layout, ProfileFamily::full()).size() == 63);
    const auto two = enumerate_profiles(layout, ProfileFamily::up_to(2));
    CHECK(two.size() == 21);
    CHECK(two.front().size() == 1);
    CHECK(two.back().size() == 2);
    CHECK(ProfileFamily::up_to(3).describe() == "k <= 3");
  }

  TEST_CASE("certification by physical enumeration") {
    const ParityLayout layout(4);
    const oracle::Geometry g(4);
    for (std::uint64_t s = 0; s < 10; ++s) {
      const auto inst = gaussian(4, 500 + s);
      const auto r = homogeneous_optimum(inst, layout, layout.plaquette_count(), full_range());
      double best_outside = 1e300;
      for (std::uint64_t st = 0; st < 64; ++st) {
        const int k = std::popcount(g.violated(st));
        if (k == 0) continue;
        best_outside = std::min(best_outside, g.field_energy(inst, st) + r.c_hat * k);
      }
      CHECK(best_outside >= r.e - 1e-9);
    }
  }
}

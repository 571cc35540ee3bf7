#include "doctest.h"
#include "nucache/optimizer.hpp"

#include <cmath>

using namespace nucache;

TEST_CASE("breakpoints on the memory line") {
  SUBCASE("unit memory at six users") {
    auto bps = breakpoints(6, Rational(1));
    REQUIRE(bps.size() == 4);
    CHECK(bps[0].t1 == Rational(3));
    CHECK(bps[0].symmetric);
    CHECK(bps[1].t1 == Rational(4));
    CHECK(bps[2].t1 == Rational(5));
    CHECK(bps[3].t1 == Rational(6));
  }
  SUBCASE("fractional memory at four users") {
    auto bps = breakpoints(4, Rational(3, 4));
    REQUIRE(bps.size() == 3);
    CHECK(bps[0].t1 == Rational(3, 2));
    CHECK(bps[0].symmetric);
    CHECK_FALSE(bps[0].integer_t1);
    CHECK(bps[1].t1 == Rational(2));
    CHECK(bps[1].integer_t1);
    CHECK(bps[1].integer_t2);  // t2 = 1
    CHECK(bps[2].t1 == Rational(3));  // t2 = 0
  }
  SUBCASE("zero memory collapses to one point") {
    auto bps = breakpoints(2, Rational(0));
    REQUIRE(bps.size() == 1);
    CHECK(bps[0].t1 == Rational(0));
  }
}

TEST_CASE("slopes along the K=6, M=1 line") {
  Rational M(1);
  CHECK(slope_plus(Rational(3), 6, M) == Rational(1, 30));
  CHECK(slope_plus(Rational(4), 6, M) == Rational(1, 10));
  CHECK(slope_plus(Rational(5), 6, M) == Rational(1, 6));
  CHECK(slope_minus(Rational(3), 6, M) == -Rational(1, 30));  // symmetric point
  CHECK(slope_minus(Rational(4), 6, M) == Rational(1, 30));
  CHECK(slope_minus(Rational(5), 6, M) == Rational(1, 10));
  CHECK(slope_minus(Rational(6), 6, M) == Rational(1, 6));
}

TEST_CASE("slopes are consistent with finite differences of the expected rate") {
  for (int K : {4, 5, 6, 8}) {
    for (const auto& M : {Rational(1, 2), Rational(3, 4), Rational(1), Rational(5, 4),
                          Rational(7, 4)}) {
      for (const auto& p1 : {Rational(11, 20), Rational(4, 5)}) {
        Rational q1 = p1.pow(static_cast<unsigned>(K));
        Rational q2 = (Rational(1) - p1).pow(static_cast<unsigned>(K));
        Rational budget = Rational(K) * M;
        auto bps = breakpoints(K, M);
        for (size_t j = 0; j + 1 < bps.size(); ++j) {
          const Rational& a = bps[j].t1;
          const Rational& b = bps[j + 1].t1;
          Rational diff = (expected_rate(K, p1, b, budget - b) -
                           expected_rate(K, p1, a, budget - a)) /
                          (b - a);
          Rational predicted = (Rational(1) - q1 - q2) * slope_plus(a, K, M) -
                               (q1 - q2) / Rational(K);
          CHECK(diff == predicted);
          // The same segment seen from its right end.
          CHECK(slope_minus(b, K, M) == slope_plus(a, K, M));
        }
        // Convexity: slopes non-decreasing across breakpoints.
        for (size_t j = 0; j + 2 < bps.size(); ++j)
          CHECK(slope_plus(bps[j].t1, K, M) <= slope_plus(bps[j + 1].t1, K, M));
      }
    }
  }
}

TEST_CASE("optimal allocation spot value at four users") {
  OptimalAllocation best = optimal_allocation(4, Rational(4, 5), Rational(3, 4));
  CHECK(best.point.t1 == Rational(2));
  CHECK(best.point.t2 == Rational(1));
  CHECK(best.point.rbar == Rational(1987, 2500));
  CHECK(best.point.rbar.to_double() == doctest::Approx(0.7948).epsilon(1e-12));
}

TEST_CASE("allocation regions at six users, unit memory") {
  CHECK(optimal_allocation(6, Rational(3, 5), Rational(1)).point.t1 == Rational(3));
  CHECK(optimal_allocation(6, Rational(1, 2), Rational(1)).point.t1 == Rational(3));
  CHECK(optimal_allocation(6, Rational(4, 5), Rational(1)).point.t1 == Rational(4));
  CHECK(optimal_allocation(6, Rational(17, 20), Rational(1)).point.t1 == Rational(5));
  CHECK(optimal_allocation(6, Rational(22, 25), Rational(1)).point.t1 == Rational(5));
  CHECK(optimal_allocation(6, Rational(9, 10), Rational(1)).point.t1 == Rational(6));
  // The optimal value near the grouping/uniform gap.
  double rate = optimal_allocation(6, Rational(17, 20), Rational(1)).point.rbar.to_double();
  CHECK(rate == doctest::Approx(0.582).epsilon(2e-3));
}

TEST_CASE("optimal allocation equals a dense grid scan") {
  for (int K : {3, 4, 6}) {
    for (const auto& M : {Rational(1, 4), Rational(3, 4), Rational(1), Rational(3, 2)}) {
      for (const auto& p1 : {Rational(1, 2), Rational(13, 20), Rational(17, 20)}) {
        OptimalAllocation best = optimal_allocation(K, p1, M);
        double budget = (Rational(K) * M).to_double();
        double lo = budget / 2, hi = std::min<double>(K, budget);
        double grid_min = 1e9;
        for (int step = 0; step <= 2000; ++step) {
          double t1 = lo + (hi - lo) * step / 2000.0;
          Rational t1r = Rational(std::llround(t1 * 1000000), 1000000);
          if (t1r < Rational(0)) t1r = Rational(0);
          Rational t2r = Rational(K) * M - t1r;
          if (t2r > t1r || t2r < Rational(0) || t1r > Rational(K)) continue;
          grid_min = std::min(grid_min, expected_rate(K, p1, t1r, t2r).to_double());
        }
        CHECK(best.point.rbar.to_double() <= grid_min + 1e-12);
      }
    }
  }
}

TEST_CASE("equal popularity keeps the split symmetric and matches uniform caching") {
  for (int K : {2, 4, 6}) {
    for (const auto& M : {Rational(1, 2), Rational(1), Rational(3, 2)}) {
      OptimalAllocation best = optimal_allocation(K, Rational(1, 2), M);
      CHECK(best.point.t1 == Rational(K) * M / Rational(2));
      CHECK(best.point.t2 == best.point.t1);
      CHECK(best.point.rbar == baseline_uniform(K, Rational(1, 2), M));
    }
  }
}

TEST_CASE("baselines at the six-user landmark") {
  Rational p1(17, 20);
  Rational run = baseline_uniform(6, p1, Rational(1));
  Rational rnc = baseline_grouping(6, p1, Rational(1));
  CHECK(rnc == Rational(1) - p1.pow(6));
  CHECK(run.to_double() == doctest::Approx(0.6246).epsilon(1e-3));
  CHECK(rnc.to_double() == doctest::Approx(0.6229).epsilon(1e-3));
  // The optimal allocation is strictly better by at least 0.04 here.
  Rational ropt = optimal_allocation(6, p1, Rational(1)).point.rbar;
  CHECK(Rational::min(run, rnc) - ropt >= Rational(1, 25));
}

TEST_CASE("baselines at the memory extremes") {
  for (const auto& p1 : {Rational(1, 2), Rational(17, 20)}) {
    for (int K : {4, 6}) {
      CHECK(baseline_uniform(K, p1, Rational(2)) == Rational(0));
      CHECK(baseline_grouping(K, p1, Rational(2)) == Rational(0));
      Rational q1 = p1.pow(static_cast<unsigned>(K));
      Rational q2 = (Rational(1) - p1).pow(static_cast<unsigned>(K));
      Rational distinct = Rational(2) - q1 - q2;
      CHECK(baseline_uniform(K, p1, Rational(0)) == distinct);
      CHECK(baseline_grouping(K, p1, Rational(0)) == distinct);
      // All three strategies coincide at the extremes.
      CHECK(optimal_allocation(K, p1, Rational(0)).point.rbar == distinct);
      CHECK(optimal_allocation(K, p1, Rational(2)).point.rbar == Rational(0));
    }
  }
}

TEST_CASE("optimal never exceeds either baseline") {
  for (int K : {2, 4, 6, 8}) {
    for (int m = 0; m <= 8; ++m) {
      Rational M(m, 4);
      for (int pnum = 10; pnum <= 19; pnum += 3) {
        Rational p1(pnum, 20);
        Rational ropt = optimal_allocation(K, p1, M).point.rbar;
        CHECK(ropt <= baseline_uniform(K, p1, M));
        CHECK(ropt <= baseline_grouping(K, p1, M));
      }
    }
  }
}

TEST_CASE("twelve users on a 1/100 probability grid stay within exact range") {
  // The symmetric optimum coincides with the equal-split baseline, an
  // independent identity that must hold through the long exact fractions.
  OptimalAllocation best = optimal_allocation(12, Rational(57, 100), Rational(1));
  CHECK(best.point.t1 == Rational(6));
  CHECK(best.point.t2 == Rational(6));
  CHECK(best.point.rbar == baseline_uniform(12, Rational(57, 100), Rational(1)));
}

TEST_CASE("preconditions") {
  CHECK_THROWS_AS(optimal_allocation(1, Rational(3, 5), Rational(1)), std::invalid_argument);
  CHECK_THROWS_AS(optimal_allocation(4, Rational(2, 5), Rational(1)), std::invalid_argument);
  CHECK_THROWS_AS(optimal_allocation(4, Rational(1), Rational(1)), std::invalid_argument);
  CHECK_THROWS_AS(optimal_allocation(4, Rational(3, 5), Rational(5, 2)), std::invalid_argument);
  CHECK_THROWS_AS(breakpoints(4, Rational(-1, 2)), std::invalid_argument);
}

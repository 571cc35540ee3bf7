#include "doctest.h"
#include "nucache/scheme.hpp"

#include <random>

#include "nucache/optimizer.hpp"
#include "nucache/rates.hpp"

using namespace nucache;

TEST_CASE("share plans") {
  SUBCASE("integer allocations collapse to one point") {
    SharePlan plan = share_plan(4, Rational(2), Rational(1));
    CHECK(plan.regime == 2);
    REQUIRE(plan.points.size() == 1);
    CHECK(plan.points[0] == std::array<int, 2>{2, 1});
    CHECK(plan.weights[0] == Rational(1));
  }
  SUBCASE("fractional boundary case drops the third point") {
    SharePlan plan = share_plan(4, Rational(5, 2), Rational(3, 2));
    CHECK(plan.regime == 1);
    REQUIRE(plan.points.size() == 2);
    CHECK(plan.points[0] == std::array<int, 2>{2, 2});
    CHECK(plan.points[1] == std::array<int, 2>{3, 1});
    CHECK(plan.weights[0] == Rational(1, 2));
    CHECK(plan.weights[1] == Rational(1, 2));
  }
  SUBCASE("generic fractional point") {
    SharePlan plan = share_plan(4, Rational(23, 10), Rational(6, 5));
    CHECK(plan.regime == 2);
    REQUIRE(plan.points.size() == 3);
    CHECK(plan.points[0] == std::array<int, 2>{3, 1});
    CHECK(plan.points[1] == std::array<int, 2>{2, 2});
    CHECK(plan.points[2] == std::array<int, 2>{2, 1});
    CHECK(plan.weights[0] == Rational(3, 10));
    CHECK(plan.weights[1] == Rational(1, 5));
    CHECK(plan.weights[2] == Rational(1, 2));
  }
  SUBCASE("diagonal cell mixes along the diagonal") {
    SharePlan plan = share_plan(4, Rational(5, 2), Rational(5, 2));
    CHECK(plan.regime == 0);
    REQUIRE(plan.points.size() == 2);
    CHECK(plan.points[0] == std::array<int, 2>{2, 2});
    CHECK(plan.points[1] == std::array<int, 2>{3, 3});
    CHECK(plan.weights[0] == Rational(1, 2));
    CHECK(plan.weights[1] == Rational(1, 2));

    SharePlan skew = share_plan(5, Rational(11, 4), Rational(5, 2));
    CHECK(skew.regime == 0);
    REQUIRE(skew.points.size() == 3);
    CHECK(skew.points[0] == std::array<int, 2>{3, 2});
    CHECK(skew.weights[0] == Rational(1, 4));
    CHECK(skew.points[1] == std::array<int, 2>{2, 2});
    CHECK(skew.weights[1] == Rational(1, 4));
    CHECK(skew.points[2] == std::array<int, 2>{3, 3});
    CHECK(skew.weights[2] == Rational(1, 2));
  }
  SUBCASE("weights stay a convex combination averaging to t") {
    std::mt19937 rng(5);
    for (int trial = 0; trial < 200; ++trial) {
      int K = 2 + static_cast<int>(rng() % 7);
      std::uniform_int_distribution<long long> eighths(0, 8LL * K);
      Rational t1(eighths(rng), 8), t2(eighths(rng), 8);
      if (t2 > t1) std::swap(t1, t2);
      SharePlan plan = share_plan(K, t1, t2);  // throws on any violation
      CHECK(plan.boundaries.back() == Rational(1));
    }
  }
  SUBCASE("out of range rejected") {
    CHECK_THROWS_AS(share_plan(4, Rational(1), Rational(2)), std::invalid_argument);
    CHECK_THROWS_AS(share_plan(4, Rational(9, 2), Rational(0)), std::invalid_argument);
  }
}

TEST_CASE("minimal file length and divisibility errors") {
  SharePlan plan = share_plan(4, Rational(23, 10), Rational(6, 5));
  long long F = minimal_file_length(plan, 4, 1);
  CHECK(F == 120);  // lcm(40, 30, 24)

  std::vector<std::vector<Symbol>> files(2, std::vector<Symbol>(120, 1));
  CHECK_NOTHROW(joint_place(4, Rational(23, 10), Rational(6, 5), files, 1));

  std::vector<std::vector<Symbol>> short_files(2, std::vector<Symbol>(60, 1));
  try {
    joint_place(4, Rational(23, 10), Rational(6, 5), short_files, 1);
    FAIL("expected a config error");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("120") != std::string::npos);
  }
}

namespace {

void roundtrip_all_users(int K, const Rational& t1, const Rational& t2,
                         const std::vector<int>& demand, std::uint64_t seed) {
  SharePlan plan = share_plan(K, t1, t2);
  long long F = minimal_file_length(plan, K, 1);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::uint32_t> dist(0, kDefaultPrime - 1);
  std::vector<std::vector<Symbol>> files(2, std::vector<Symbol>(static_cast<size_t>(F)));
  for (auto& f : files)
    for (auto& s : f) s = dist(rng);

  JointPlacement placement = joint_place(K, t1, t2, files, 1);
  auto messages = joint_deliver(demand, placement, files);
  for (int user = 1; user <= K; ++user) {
    auto decoded = joint_decode(user, placement, messages);
    CHECK(decoded == files[static_cast<size_t>(demand[static_cast<size_t>(user - 1)] - 1)]);
  }

  // Realized load against the closed-form class rates.
  std::set<int> requested = requested_set(demand);
  Rational realized = realized_joint_rate(messages, F);
  if (requested.size() == 2) {
    auto [rate1, rate2] = pair_rates_interp(K, t1, t2);
    CHECK(realized == Rational::max(rate1, rate2));
  } else {
    Rational t = *requested.begin() == 1 ? t1 : t2;
    CHECK(realized == (Rational(K) - t) / Rational(K));
  }

  // Per-user cache usage is exactly (t1 + t2)/K * F symbols.
  for (int user = 1; user <= K; ++user) {
    long long cached = 0;
    for (const auto& seg : placement.segments)
      cached += static_cast<long long>(seg.map.users[static_cast<size_t>(user - 1)].size()) *
                seg.map.cfg.subfile_len;
    CHECK(Rational(cached) == (t1 + t2) / Rational(K) * Rational(F));
  }
}

}  // namespace

TEST_CASE("joint pipeline: worked fractional splits") {
  roundtrip_all_users(4, Rational(5, 2), Rational(1, 2), {1, 1, 2, 2}, 11);
  roundtrip_all_users(4, Rational(23, 10), Rational(6, 5), {1, 2, 1, 1}, 12);
  // Symmetric fractional point exercises the diagonal plan.
  roundtrip_all_users(4, Rational(5, 2), Rational(5, 2), {2, 1, 2, 1}, 13);
  // One-sided demands ride the single-file path in every segment.
  roundtrip_all_users(3, Rational(3, 2), Rational(1, 2), {1, 1, 1}, 14);
  roundtrip_all_users(3, Rational(3, 2), Rational(1, 2), {2, 2, 2}, 15);
}

TEST_CASE("joint pipeline: integer allocations degenerate to one segment") {
  SharePlan plan = share_plan(5, Rational(3), Rational(1));
  CHECK(plan.points.size() == 1);
  roundtrip_all_users(5, Rational(3), Rational(1), {1, 2, 1, 2, 1}, 16);
}

TEST_CASE("optimizer output executes at its claimed expected rate") {
  // Fractional symmetric optimum: run the planned scheme over every demand
  // vector and average the realized loads by their probabilities.
  const int K = 4;
  Rational p1(4, 5);
  OptimalAllocation best = optimal_allocation(K, p1, Rational(3, 8));
  REQUIRE(best.point.t1 == Rational(3, 4));
  REQUIRE(best.point.t2 == Rational(3, 4));

  SharePlan plan = share_plan(K, best.point.t1, best.point.t2);
  long long F = minimal_file_length(plan, K, 1);
  PlacementConfig gen;
  gen.K = K;
  gen.N = 2;
  gen.r = {0, 0};
  gen.subfile_len = static_cast<int>(F);
  auto files = random_files(gen, 55);
  JointPlacement placement = joint_place(K, best.point.t1, best.point.t2, files, 1);

  Rational expected(0);
  for (long long bits = 0; bits < (1 << K); ++bits) {
    std::vector<int> demand(static_cast<size_t>(K));
    Rational prob(1);
    for (int k = 0; k < K; ++k) {
      demand[static_cast<size_t>(k)] = (bits >> k) & 1 ? 2 : 1;
      prob *= (bits >> k) & 1 ? Rational(1) - p1 : p1;
    }
    auto messages = joint_deliver(demand, placement, files);
    for (int user = 1; user <= K; ++user)
      REQUIRE(joint_decode(user, placement, messages) ==
              files[static_cast<size_t>(demand[static_cast<size_t>(user - 1)] - 1)]);
    expected += prob * realized_joint_rate(messages, F);
  }
  CHECK(expected == best.point.rbar);
}

TEST_CASE("joint pipeline: randomized fractional allocations") {
  std::mt19937 rng(77);
  int cases = 0;
  while (cases < 12) {
    int K = 2 + static_cast<int>(rng() % 3);
    std::uniform_int_distribution<long long> quarters(0, 4LL * K);
    Rational t1(quarters(rng), 4), t2(quarters(rng), 4);
    if (t2 > t1) std::swap(t1, t2);
    SharePlan plan = share_plan(K, t1, t2);
    if (minimal_file_length(plan, K, 1) > 4000) continue;  // keep the test fast
    std::vector<int> demand(static_cast<size_t>(K));
    for (auto& d : demand) d = 1 + static_cast<int>(rng() % 2);
    roundtrip_all_users(K, t1, t2, demand, rng());
    ++cases;
  }
}

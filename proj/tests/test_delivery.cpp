#include "doctest.h"
#include "nucache/delivery.hpp"

#include <algorithm>
#include <map>

using namespace nucache;

namespace {

PlacementConfig two_file_cfg(int K, int r1, int r2, int L = 4) {
  PlacementConfig cfg;
  cfg.K = K;
  cfg.N = 2;
  cfg.r = {r1, r2};
  cfg.subfile_len = L;
  return cfg;
}

long long theta_sum(const Description& d) {
  long long total = 0;
  for (const auto& g : d.groups) total += g.dims.theta;
  return total;
}

}  // namespace

TEST_CASE("group dimensions") {
  // Degenerate group of the opposite-file description.
  auto d = group_dims(2, 0, 0, 1, 2, 1);
  CHECK(d.kappa == 0);
  CHECK(d.theta == 0);
  // Singleton groups that pass through verbatim.
  d = group_dims(2, 1, 1, 1, 2, 1);
  CHECK(d.kappa == 1);
  CHECK(d.theta == 1);
  // Three constituents compressed to two coded elements.
  d = group_dims(1, 1, 1, 3, 2, 1);
  CHECK(d.kappa == 3);
  CHECK(d.theta == 2);
  // theta == kappa when the own-side extension is empty.
  d = group_dims(1, 2, 1, 3, 2, 1);
  CHECK(d.kappa == 1);
  CHECK(d.theta == 1);
  d = group_dims(2, 1, 1, 2, 2, 1);
  CHECK(d.kappa == 2);
  CHECK(d.theta == 2);
}

TEST_CASE("worked example: description shapes for d = (1,1,1,2)") {
  auto cfg = two_file_cfg(4, 2, 1);
  std::vector<int> demand = {1, 1, 1, 2};

  Description w1 = build_description(1, demand, cfg);
  CHECK(w1.total_elements == 6);
  std::map<std::pair<std::vector<int>, std::vector<int>>, long long> thetas;
  for (const auto& g : w1.groups) thetas[{g.key.rho1, g.key.rho2}] = g.dims.theta;
  CHECK(thetas.at({{}, {}}) == 2);
  CHECK(thetas.at({{4}, {}}) == 2);
  CHECK(thetas.at({{4}, {4}}) == 2);

  Description w2 = build_description(2, demand, cfg);
  CHECK(w2.total_elements == 9);
  // The nine kept elements are the subfiles unknown to user 4, one per group.
  long long singles = 0;
  for (const auto& g : w2.groups) {
    CHECK(g.dims.theta <= 1);
    if (g.dims.theta == 1) {
      CHECK(g.dims.kappa == 1);
      ++singles;
    }
  }
  CHECK(singles == 9);

  CHECK(description_length(4, 2, 12) == 6);
  CHECK(description_length(4, 1, 12) == 9);
  CHECK(outsider_unknown_count(4, 2, 12) == 2);
  CHECK(outsider_unknown_count(4, 1, 12) == 6);
}

TEST_CASE("one-sided demands must use the single-file path") {
  auto cfg = two_file_cfg(4, 2, 1);
  CHECK_THROWS_AS(build_description(1, {1, 1, 1, 1}, cfg), std::invalid_argument);
}

TEST_CASE("zero split ships the file verbatim") {
  auto cfg = two_file_cfg(3, 0, 0, 2);
  std::vector<int> demand = {1, 2, 1};
  Description d = build_description(1, demand, cfg);
  REQUIRE(d.groups.size() == 1);
  CHECK(d.groups[0].dims.kappa == 1);
  CHECK(d.groups[0].dims.theta == 1);
  CHECK(d.total_elements == cfg.subpacketization());
}

TEST_CASE("worked example: outer system is 12 x 15 and the rate is exactly 1") {
  auto cfg = two_file_cfg(4, 2, 1);
  std::vector<int> demand = {1, 1, 1, 2};
  auto files = random_files(cfg, 2024);
  DeliveryMessage msg = encode_delivery(demand, files, cfg);
  CHECK(msg.payload.rows == 12);
  CHECK(msg.manifest.size() == 15);
  CHECK(delivery_rate(4, 2, 1, {1, 2}) == Rational(1));
  CHECK(Rational(msg.payload.rows, cfg.subpacketization()) == Rational(1));

  CacheMap cache = place(cfg, files);
  for (int user = 1; user <= 4; ++user) {
    auto decoded = decode(user, cache, msg);
    CHECK(decoded == files[static_cast<size_t>(demand[static_cast<size_t>(user - 1)] - 1)]);
  }
}

TEST_CASE("worked example: per-user known column counts") {
  auto cfg = two_file_cfg(4, 2, 1);
  std::vector<int> demand = {1, 1, 1, 2};
  // A requester of file 1 can pre-fill 3 columns, user 4 fills 4.
  for (int user : {1, 2, 3})
    CHECK(known_columns(user, demand, cfg).size() == 3);
  CHECK(known_columns(4, demand, cfg).size() == 4);
}

TEST_CASE("structural identities across all desk-scale splits") {
  for (int K = 2; K <= 8; ++K) {
    for (int r1 = 0; r1 <= K; ++r1) {
      for (int r2 = 0; r2 <= r1; ++r2) {
        auto cfg = two_file_cfg(K, r1, r2, 1);
        long long S = cfg.subpacketization();
        for (int K1 = 1; K1 < K; ++K1) {
          // Demand with users 1..K1 on file 1, the rest on file 2.
          std::vector<int> demand(static_cast<size_t>(K), 2);
          for (int k = 0; k < K1; ++k) demand[static_cast<size_t>(k)] = 1;

          Description d1 = build_description(1, demand, cfg);
          Description d2 = build_description(2, demand, cfg);
          CHECK(theta_sum(d1) == description_length(K, r1, S));
          CHECK(theta_sum(d2) == description_length(K, r2, S));

          long long cols = d1.total_elements + d2.total_elements;
          long long rows = outer_row_count(cfg, {1, 2});
          CHECK(Rational(rows) == Rational(S) * delivery_rate(K, r1, r2, {1, 2}));
          CHECK(rows <= cols);

          // Known-column counts: len - e for the opposite file, 0 for the own.
          long long max_unknown = 0;
          for (int user = 1; user <= K; ++user) {
            int own = demand[static_cast<size_t>(user - 1)];
            int opp = 3 - own;
            long long known = static_cast<long long>(known_columns(user, demand, cfg).size());
            long long expected = description_length(K, cfg.r[static_cast<size_t>(opp - 1)], S) -
                                 outsider_unknown_count(K, cfg.r[static_cast<size_t>(opp - 1)], S);
            CHECK(known == expected);
            max_unknown = std::max(max_unknown, cols - known);
          }
          // The outer row count is exactly the worst-case unknown count.
          CHECK(max_unknown == rows);
        }
      }
    }
  }
}

TEST_CASE("one-sided broadcast row counts") {
  auto cfg = two_file_cfg(4, 2, 1, 2);
  auto files = random_files(cfg, 7);
  DeliveryMessage msg = encode_delivery({1, 1, 1, 1}, files, cfg);
  CHECK(msg.payload.rows == 6);  // S (K - r1) / K = 12 / 2
  CHECK(msg.manifest.size() == 12);
  DeliveryMessage msg2 = encode_delivery({2, 2, 2, 2}, files, cfg);
  CHECK(msg2.payload.rows == 9);  // S (K - r2) / K = 12 * 3/4

  CacheMap cache = place(cfg, files);
  for (int user = 1; user <= 4; ++user) {
    CHECK(decode(user, cache, msg) == files[0]);
    CHECK(decode(user, cache, msg2) == files[1]);
  }
}

TEST_CASE("storage-free and fully-cached extremes decode") {
  SUBCASE("r = (0,0): nobody cached anything") {
    auto cfg = two_file_cfg(3, 0, 0, 3);
    auto files = random_files(cfg, 3);
    CacheMap cache = place(cfg, files);
    DeliveryMessage msg = encode_delivery({1, 2, 1}, files, cfg);
    CHECK(msg.payload.rows == 2);  // both one-subfile files, coded twice
    for (int user = 1; user <= 3; ++user) {
      int want = user == 2 ? 1 : 0;
      CHECK(decode(user, cache, msg) == files[static_cast<size_t>(want)]);
    }
  }
  SUBCASE("r = (K,K): everything cached, empty broadcast") {
    auto cfg = two_file_cfg(3, 3, 3, 2);
    auto files = random_files(cfg, 4);
    CacheMap cache = place(cfg, files);
    DeliveryMessage msg = encode_delivery({1, 2, 2}, files, cfg);
    CHECK(msg.payload.rows == 0);
    CHECK(decode(1, cache, msg) == files[0]);
    CHECK(decode(2, cache, msg) == files[1]);
  }
  SUBCASE("r = (K, r2): the popular file is fully cached") {
    auto cfg = two_file_cfg(3, 3, 1, 2);
    auto files = random_files(cfg, 5);
    CacheMap cache = place(cfg, files);
    DeliveryMessage msg = encode_delivery({1, 2, 1}, files, cfg);
    CHECK(Rational(msg.payload.rows) ==
          Rational(cfg.subpacketization()) * delivery_rate(3, 3, 1, {1, 2}));
    for (int user = 1; user <= 3; ++user) {
      int want = user == 2 ? 2 : 1;
      CHECK(decode(user, cache, msg) == files[static_cast<size_t>(want - 1)]);
    }
  }
}

TEST_CASE("decode across every split and demand for K <= 4") {
  for (int K = 2; K <= 4; ++K) {
    for (int r1 = 0; r1 <= K; ++r1) {
      for (int r2 = 0; r2 <= r1; ++r2) {
        auto cfg = two_file_cfg(K, r1, r2, 2);
        auto files = random_files(cfg, static_cast<std::uint64_t>(K * 100 + r1 * 10 + r2));
        CacheMap cache = place(cfg, files);
        for (long long bits = 0; bits < (1LL << K); ++bits) {
          std::vector<int> demand(static_cast<size_t>(K));
          for (int k = 0; k < K; ++k) demand[static_cast<size_t>(k)] = (bits >> k) & 1 ? 2 : 1;
          DeliveryMessage msg = encode_delivery(demand, files, cfg);
          for (int user = 1; user <= K; ++user)
            CHECK(decode(user, cache, msg) ==
                  files[static_cast<size_t>(demand[static_cast<size_t>(user - 1)] - 1)]);
        }
      }
    }
  }
}

TEST_CASE("larger instances decode bit-exactly") {
  struct Spot {
    int K, r1, r2;
    std::vector<int> demand;
  };
  const std::vector<Spot> spots = {
      {6, 4, 2, {1, 2, 2, 1, 1, 2}},
      {6, 3, 3, {2, 1, 1, 1, 1, 1}},
      {7, 4, 2, {1, 1, 2, 1, 2, 1, 1}},
      {7, 5, 1, {2, 2, 2, 2, 2, 2, 1}},
  };
  for (const auto& spot : spots) {
    auto cfg = two_file_cfg(spot.K, spot.r1, spot.r2, 2);
    auto files = random_files(cfg, static_cast<std::uint64_t>(spot.K * 7 + spot.r1));
    CacheMap cache = place(cfg, files);
    DeliveryMessage msg = encode_delivery(spot.demand, files, cfg);
    CHECK(Rational(msg.payload.rows) ==
          Rational(cfg.subpacketization()) *
              delivery_rate(spot.K, spot.r1, spot.r2, requested_set(spot.demand)));
    for (int user = 1; user <= spot.K; ++user)
      CHECK(decode(user, cache, msg) ==
            files[static_cast<size_t>(spot.demand[static_cast<size_t>(user - 1)] - 1)]);
  }
}

TEST_CASE("messages survive a different field and matrix seed") {
  auto cfg = two_file_cfg(4, 3, 1, 3);
  cfg.prime = 257;
  cfg.matrix_seed = 12;
  auto files = random_files(cfg, 8);
  CacheMap cache = place(cfg, files);
  DeliveryMessage msg = encode_delivery({2, 1, 1, 2}, files, cfg);
  for (int user = 1; user <= 4; ++user)
    CHECK(decode(user, cache, msg) ==
          files[static_cast<size_t>(msg.demand[static_cast<size_t>(user - 1)] - 1)]);
}

TEST_CASE("decode rejects a mismatched placement") {
  auto cfg = two_file_cfg(4, 2, 1);
  auto files = random_files(cfg, 1);
  DeliveryMessage msg = encode_delivery({1, 1, 1, 2}, files, cfg);
  auto other = two_file_cfg(4, 3, 1);
  CacheMap cache = place(other, random_files(other, 1));
  CHECK_THROWS_AS(decode(1, cache, msg), std::invalid_argument);
}

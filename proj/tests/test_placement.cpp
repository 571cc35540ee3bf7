#include "doctest.h"
#include "nucache/placement.hpp"

#include <algorithm>
#include <set>

using namespace nucache;

namespace {

PlacementConfig make_cfg(int K, std::vector<int> r, int L = 4) {
  PlacementConfig cfg;
  cfg.K = K;
  cfg.N = static_cast<int>(r.size());
  cfg.r = std::move(r);
  cfg.subfile_len = L;
  return cfg;
}

std::set<std::pair<int, std::vector<std::vector<int>>>> entry_set(const CacheMap& map, int user) {
  std::set<std::pair<int, std::vector<std::vector<int>>>> out;
  for (const auto& e : map.users[static_cast<size_t>(user - 1)]) out.insert({e.file, e.chain.sets});
  return out;
}

}  // namespace

TEST_CASE("subpacketization") {
  CHECK(subpacketization(4, {2, 1}) == 12);
  CHECK(subpacketization(4, {4, 4}) == 1);
  CHECK(subpacketization(6, {3, 3}) == 20);
  CHECK(subpacketization(5, {3, 2, 1}) == 60);
}

TEST_CASE("the four-user cache contents match the worked placement") {
  auto cfg = make_cfg(4, {2, 1});
  CacheMap map = place(cfg);

  // User 1 holds six subfiles of file 1 and three of file 2.
  std::set<std::pair<int, std::vector<std::vector<int>>>> expected = {
      {1, {{1, 2}, {1}}}, {1, {{1, 2}, {2}}}, {1, {{1, 3}, {1}}},
      {1, {{1, 3}, {3}}}, {1, {{1, 4}, {1}}}, {1, {{1, 4}, {4}}},
      {2, {{1, 2}, {1}}}, {2, {{1, 3}, {1}}}, {2, {{1, 4}, {1}}}};
  CHECK(entry_set(map, 1) == expected);

  // User 4, by the same rule.
  std::set<std::pair<int, std::vector<std::vector<int>>>> expected4 = {
      {1, {{1, 4}, {1}}}, {1, {{1, 4}, {4}}}, {1, {{2, 4}, {2}}},
      {1, {{2, 4}, {4}}}, {1, {{3, 4}, {3}}}, {1, {{3, 4}, {4}}},
      {2, {{1, 4}, {4}}}, {2, {{2, 4}, {4}}}, {2, {{3, 4}, {4}}}};
  CHECK(entry_set(map, 4) == expected4);
}

TEST_CASE("placement cache sizes are exactly M*F for every user") {
  for (int K = 1; K <= 5; ++K) {
    for (int r1 = 0; r1 <= K; ++r1) {
      for (int r2 = 0; r2 <= r1; ++r2) {
        auto cfg = make_cfg(K, {r1, r2});
        CacheMap map = place(cfg);
        Rational mf = cfg.total_cache() * Rational(cfg.file_len());
        for (int u = 1; u <= K; ++u) {
          long long symbols =
              static_cast<long long>(map.users[static_cast<size_t>(u - 1)].size()) *
              cfg.subfile_len;
          CHECK(Rational(symbols) == mf);
        }
      }
    }
  }
}

TEST_CASE("membership rule and uncoded payloads") {
  auto cfg = make_cfg(3, {2, 1}, 5);
  auto files = random_files(cfg, 99);
  CacheMap map = place(cfg, files);
  REQUIRE(map.has_payloads);
  auto chains = enumerate_chains(cfg.K, cfg.r);
  for (int u = 1; u <= cfg.K; ++u) {
    for (const auto& e : map.users[static_cast<size_t>(u - 1)]) {
      const auto& level = e.chain.sets[static_cast<size_t>(e.file - 1)];
      CHECK(std::binary_search(level.begin(), level.end(), u));
      long long q = chain_rank(e.chain, cfg.K, cfg.r);
      for (int j = 0; j < cfg.subfile_len; ++j)
        CHECK(e.payload[static_cast<size_t>(j)] ==
              files[static_cast<size_t>(e.file - 1)][static_cast<size_t>(q * cfg.subfile_len + j)]);
    }
    // Entry (i, c) present iff u in c.sets[i-1]: count matches the rule.
    long long expected = 0;
    for (const auto& c : chains)
      for (int file = 1; file <= cfg.N; ++file) {
        const auto& level = c.sets[static_cast<size_t>(file - 1)];
        if (std::binary_search(level.begin(), level.end(), u)) ++expected;
      }
    CHECK(static_cast<long long>(map.users[static_cast<size_t>(u - 1)].size()) == expected);
  }
}

TEST_CASE("zero profile leaves every cache empty") {
  auto cfg = make_cfg(3, {0, 0});
  CacheMap map = place(cfg);
  for (const auto& user : map.users) CHECK(user.empty());
}

TEST_CASE("three-level placement counts") {
  auto cfg = make_cfg(4, {3, 2, 1}, 2);
  CacheMap map = place(cfg);
  long long S = cfg.subpacketization();
  for (int u = 1; u <= cfg.K; ++u) {
    long long per_file[3] = {0, 0, 0};
    for (const auto& e : map.users[static_cast<size_t>(u - 1)]) ++per_file[e.file - 1];
    for (int i = 0; i < 3; ++i) CHECK(per_file[i] * cfg.K == cfg.r[static_cast<size_t>(i)] * S);
  }
}

TEST_CASE("bad inputs are rejected") {
  auto cfg = make_cfg(4, {1, 2});
  CHECK_THROWS_AS(place(cfg), std::invalid_argument);
  auto good = make_cfg(4, {2, 1});
  std::vector<std::vector<Symbol>> files(2, std::vector<Symbol>(5));
  CHECK_THROWS_AS(place(good, files), std::invalid_argument);
}

TEST_CASE("user permutations re-prioritize files without changing cache size") {
  auto cfg = make_cfg(2, {2, 1}, 3);
  auto files = random_files(cfg, 5);

  SUBCASE("identity permutations reproduce place()") {
    CacheMap plain = place(cfg, files);
    CacheMap permuted = place_with_permutations(cfg, files, {{1, 2}, {1, 2}});
    for (int u = 1; u <= 2; ++u) CHECK(entry_set(plain, u) == entry_set(permuted, u));
  }

  SUBCASE("user 2 swaps the files") {
    CacheMap map = place_with_permutations(cfg, files, {{1, 2}, {2, 1}});
    // User 2 now keeps both subfiles of file 2 but only one of file 1.
    std::set<std::pair<int, std::vector<std::vector<int>>>> expected = {
        {1, {{1, 2}, {2}}}, {2, {{1, 2}, {1}}}, {2, {{1, 2}, {2}}}};
    CHECK(entry_set(map, 2) == expected);
    // User 1 is untouched.
    std::set<std::pair<int, std::vector<std::vector<int>>>> expected1 = {
        {1, {{1, 2}, {1}}}, {1, {{1, 2}, {2}}}, {2, {{1, 2}, {1}}}};
    CHECK(entry_set(map, 1) == expected1);
  }

  SUBCASE("any permutation keeps the per-user subfile count") {
    auto cfg5 = make_cfg(5, {3, 1}, 1);
    auto files5 = random_files(cfg5, 6);
    CacheMap plain = place(cfg5, files5);
    std::vector<std::vector<int>> perms = {{2, 1}, {1, 2}, {2, 1}, {2, 1}, {1, 2}};
    CacheMap permuted = place_with_permutations(cfg5, files5, perms);
    for (int u = 1; u <= 5; ++u)
      CHECK(plain.users[static_cast<size_t>(u - 1)].size() ==
            permuted.users[static_cast<size_t>(u - 1)].size());
  }

  SUBCASE("non-bijective permutations are rejected") {
    CHECK_THROWS_AS(place_with_permutations(cfg, files, {{1, 1}, {1, 2}}),
                    std::invalid_argument);
  }
}

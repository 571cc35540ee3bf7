#include <benchmark/benchmark.h>

#include "nucache/converse.hpp"
#include "nucache/optimizer.hpp"
#include "nucache/oracle.hpp"
#include "nucache/scheme.hpp"

namespace {

using namespace nucache;

PlacementConfig bench_cfg(int K, int r1, int r2, int L = 16) {
  PlacementConfig cfg;
  cfg.K = K;
  cfg.N = 2;
  cfg.r = {r1, r2};
  cfg.subfile_len = L;
  return cfg;
}

void BM_EnumerateChains(benchmark::State& state) {
  int K = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto chains = enumerate_chains(K, {K / 2, K / 4});
    benchmark::DoNotOptimize(chains);
  }
}
BENCHMARK(BM_EnumerateChains)->Arg(8)->Arg(10)->Arg(12);

void BM_ChainRankRoundTrip(benchmark::State& state) {
  int K = static_cast<int>(state.range(0));
  std::vector<int> r = {K / 2, K / 4};
  long long S = chain_count(K, r);
  long long i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(chain_rank(chain_unrank(i, K, r), K, r));
    i = (i + 1) % S;
  }
}
BENCHMARK(BM_ChainRankRoundTrip)->Arg(8)->Arg(12);

void BM_CauchySolve(benchmark::State& state) {
  int n = static_cast<int>(state.range(0));
  FieldMatrix c = mds_cauchy(n, n, kDefaultPrime);
  FieldMatrix rhs(n, 16, kDefaultPrime);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < 16; ++j) rhs.at(i, j) = static_cast<Symbol>((i * 31 + j) % kDefaultPrime);
  for (auto _ : state) benchmark::DoNotOptimize(solve_after_drop(c, {}, rhs));
  state.SetComplexityN(n);
}
BENCHMARK(BM_CauchySolve)->RangeMultiplier(2)->Range(16, 128)->Complexity();

void BM_FieldRank(benchmark::State& state) {
  int n = static_cast<int>(state.range(0));
  FieldMatrix m(n, n, kDefaultPrime);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m.at(i, j) = static_cast<Symbol>((i * 7 + j * 13) % 97);
  for (auto _ : state) benchmark::DoNotOptimize(rank(m));
}
BENCHMARK(BM_FieldRank)->Arg(64)->Arg(128);

void BM_EncodeDelivery(benchmark::State& state) {
  auto cfg = bench_cfg(6, 3, 1);
  auto files = random_files(cfg, 1);
  std::vector<int> demand = {1, 2, 1, 1, 2, 1};
  for (auto _ : state) benchmark::DoNotOptimize(encode_delivery(demand, files, cfg));
}
BENCHMARK(BM_EncodeDelivery);

void BM_DecodeUser(benchmark::State& state) {
  auto cfg = bench_cfg(6, 3, 1);
  auto files = random_files(cfg, 1);
  std::vector<int> demand = {1, 2, 1, 1, 2, 1};
  CacheMap cache = place(cfg, files);
  DeliveryMessage msg = encode_delivery(demand, files, cfg);
  for (auto _ : state) benchmark::DoNotOptimize(decode(1, cache, msg));
}
BENCHMARK(BM_DecodeUser);

void BM_JointPipeline(benchmark::State& state) {
  int K = 5;
  Rational t1(17, 4), t2(1, 2);
  SharePlan plan = share_plan(K, t1, t2);
  long long F = minimal_file_length(plan, K, 1);
  PlacementConfig gen = bench_cfg(K, 0, 0, static_cast<int>(F));
  auto files = random_files(gen, 3);
  std::vector<int> demand = {2, 1, 1, 2, 1};
  for (auto _ : state) {
    JointPlacement placement = joint_place(K, t1, t2, files, 1);
    auto messages = joint_deliver(demand, placement, files);
    benchmark::DoNotOptimize(joint_decode(1, placement, messages));
  }
}
BENCHMARK(BM_JointPipeline);

void BM_ExpectedRate(benchmark::State& state) {
  Rational p1(17, 20), t1(23, 4), t2(9, 4);
  for (auto _ : state) benchmark::DoNotOptimize(expected_rate(8, p1, t1, t2));
}
BENCHMARK(BM_ExpectedRate);

void BM_OptimalAllocation(benchmark::State& state) {
  Rational p1(17, 20), M(1);
  for (auto _ : state) benchmark::DoNotOptimize(optimal_allocation(8, p1, M));
}
BENCHMARK(BM_OptimalAllocation);

void BM_ConverseBoundTwoFiles(benchmark::State& state) {
  std::vector<Rational> p = {Rational(17, 20), Rational(3, 20)};
  Rational M(5, 4);
  for (auto _ : state) benchmark::DoNotOptimize(converse_bound(8, 2, p, M));
}
BENCHMARK(BM_ConverseBoundTwoFiles);

void BM_ConverseBoundThreeFiles(benchmark::State& state) {
  std::vector<Rational> p = {Rational(3, 5), Rational(3, 10), Rational(1, 10)};
  Rational M(1);
  for (auto _ : state) benchmark::DoNotOptimize(converse_bound(4, 3, p, M));
}
BENCHMARK(BM_ConverseBoundThreeFiles);

void BM_VerifyEntropyIdentities(benchmark::State& state) {
  auto cfg = bench_cfg(4, 2, 1, 1);
  std::vector<int> demand = {1, 1, 1, 2};
  for (auto _ : state) benchmark::DoNotOptimize(verify_entropy_identities(cfg, demand));
}
BENCHMARK(BM_VerifyEntropyIdentities);

}  // namespace

BENCHMARK_MAIN();

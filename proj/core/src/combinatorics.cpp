#include "nucache/combinatorics.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace nucache {

long long binom(long long a, long long b) {
  if (b < 0 || b > a) return 0;
  if (a < 0) throw std::invalid_argument("binom: negative upper index");
  b = std::min(b, a - b);
  __int128 result = 1;
  for (long long i = 1; i <= b; ++i) {
    result = result * (a - b + i) / i;
    if (result > static_cast<__int128>(INT64_MAX))
      throw std::overflow_error("binom: value exceeds 64 bits");
  }
  return static_cast<long long>(result);
}

long long multinomial(long long a, const std::vector<long long>& parts) {
  long long sum = 0;
  for (long long p : parts) {
    if (p < 0) throw std::invalid_argument("multinomial: negative part");
    sum += p;
  }
  if (sum != a)
    throw std::invalid_argument("multinomial: parts must sum to the upper index");
  __int128 result = 1;
  long long remaining = a;
  for (long long p : parts) {
    __int128 c = binom(remaining, p);
    result *= c;
    if (result > static_cast<__int128>(INT64_MAX))
      throw std::overflow_error("multinomial: value exceeds 64 bits");
    remaining -= p;
  }
  return static_cast<long long>(result);
}

namespace {

void check_profile(int K, const std::vector<int>& r) {
  if (K < 0) throw std::invalid_argument("profile: K must be non-negative");
  if (r.empty()) throw std::invalid_argument("profile: empty");
  int prev = K;
  for (int ri : r) {
    if (ri < 0 || ri > prev)
      throw std::invalid_argument("profile: r must satisfy 0 <= r_N <= ... <= r_1 <= K");
    prev = ri;
  }
}

// sum_{q in [from, to)} binom(n - 1 - q, k) — helper for lex subset ranking.
long long lex_skip(int n, int k, int from, int to) {
  long long total = 0;
  for (int q = from; q < to; ++q) total += binom(n - 1 - q, k);
  return total;
}

// Lexicographic rank of sorted position tuple `pos` among k-subsets of [0,n).
long long positions_rank(const std::vector<int>& pos, int n) {
  long long rank = 0;
  int prev = -1;
  int k = static_cast<int>(pos.size());
  for (int i = 0; i < k; ++i) {
    rank += lex_skip(n, k - 1 - i, prev + 1, pos[i]);
    prev = pos[i];
  }
  return rank;
}

std::vector<int> positions_unrank(long long rank, int n, int k) {
  std::vector<int> pos(k);
  int prev = -1;
  for (int i = 0; i < k; ++i) {
    int q = prev + 1;
    while (true) {
      long long block = binom(n - 1 - q, k - 1 - i);
      if (rank < block) break;
      rank -= block;
      ++q;
    }
    pos[i] = q;
    prev = q;
  }
  if (rank != 0) throw std::out_of_range("chain_unrank: index out of range");
  return pos;
}

std::vector<int> positions_in(const std::vector<int>& subset, const std::vector<int>& ground) {
  std::vector<int> pos;
  pos.reserve(subset.size());
  size_t j = 0;
  for (int v : subset) {
    while (j < ground.size() && ground[j] < v) ++j;
    if (j == ground.size() || ground[j] != v)
      throw std::invalid_argument("chain_rank: set is not nested in its parent");
    pos.push_back(static_cast<int>(j));
    ++j;
  }
  return pos;
}

void enumerate_rec(const std::vector<int>& ground, const std::vector<int>& r, size_t level,
                   ChainIndex& partial, std::vector<ChainIndex>& out) {
  if (level == r.size()) {
    out.push_back(partial);
    return;
  }
  for (auto& subset : subsets_of_size(ground, r[level])) {
    partial.sets[level] = subset;
    enumerate_rec(subset, r, level + 1, partial, out);
  }
}

}  // namespace

bool chain_valid(const ChainIndex& chain, int K, const std::vector<int>& r) {
  if (chain.sets.size() != r.size()) return false;
  const std::vector<int>* parent = nullptr;
  for (size_t j = 0; j < r.size(); ++j) {
    const auto& s = chain.sets[j];
    if (static_cast<int>(s.size()) != r[j]) return false;
    if (!std::is_sorted(s.begin(), s.end())) return false;
    if (std::adjacent_find(s.begin(), s.end()) != s.end()) return false;
    if (!s.empty() && (s.front() < 1 || s.back() > K)) return false;
    if (parent && !std::includes(parent->begin(), parent->end(), s.begin(), s.end()))
      return false;
    parent = &s;
  }
  return true;
}

long long chain_count(int K, const std::vector<int>& r) {
  check_profile(K, r);
  std::vector<long long> parts;
  parts.push_back(r.back());
  for (size_t j = r.size() - 1; j > 0; --j) parts.push_back(r[j - 1] - r[j]);
  parts.push_back(K - r.front());
  return multinomial(K, parts);
}

std::vector<ChainIndex> enumerate_chains(int K, const std::vector<int>& r) {
  check_profile(K, r);
  std::vector<int> ground(K);
  for (int i = 0; i < K; ++i) ground[i] = i + 1;
  std::vector<ChainIndex> out;
  out.reserve(static_cast<size_t>(chain_count(K, r)));
  ChainIndex partial;
  partial.sets.resize(r.size());
  enumerate_rec(ground, r, 0, partial, out);
  return out;
}

long long chain_rank(const ChainIndex& chain, int K, const std::vector<int>& r) {
  check_profile(K, r);
  if (!chain_valid(chain, K, r))
    throw std::invalid_argument("chain_rank: chain invalid for (K, r)");
  std::vector<int> ground(K);
  for (int i = 0; i < K; ++i) ground[i] = i + 1;
  long long rank = 0;
  const std::vector<int>* parent = &ground;
  for (size_t j = 0; j < r.size(); ++j) {
    int n = static_cast<int>(parent->size());
    rank = rank * binom(n, r[j]) + positions_rank(positions_in(chain.sets[j], *parent), n);
    parent = &chain.sets[j];
  }
  return rank;
}

ChainIndex chain_unrank(long long index, int K, const std::vector<int>& r) {
  check_profile(K, r);
  long long total = chain_count(K, r);
  if (index < 0 || index >= total)
    throw std::out_of_range("chain_unrank: index out of range");
  // Peel mixed-radix digits from the least significant level upward.
  std::vector<long long> digits(r.size());
  std::vector<long long> radix(r.size());
  long long rem = index;
  for (size_t j = r.size(); j-- > 0;) {
    int n = j == 0 ? K : r[j - 1];
    radix[j] = binom(n, r[j]);
    digits[j] = rem % radix[j];
    rem /= radix[j];
  }
  ChainIndex chain;
  chain.sets.resize(r.size());
  std::vector<int> ground(K);
  for (int i = 0; i < K; ++i) ground[i] = i + 1;
  const std::vector<int>* parent = &ground;
  for (size_t j = 0; j < r.size(); ++j) {
    auto pos = positions_unrank(digits[j], static_cast<int>(parent->size()), r[j]);
    chain.sets[j].resize(r[j]);
    for (int i = 0; i < r[j]; ++i) chain.sets[j][i] = (*parent)[pos[i]];
    parent = &chain.sets[j];
  }
  return chain;
}

std::vector<std::vector<int>> subsets_of_size(const std::vector<int>& ground, int k) {
  int n = static_cast<int>(ground.size());
  std::vector<std::vector<int>> out;
  if (k < 0 || k > n) return out;
  out.reserve(static_cast<size_t>(binom(n, k)));
  std::vector<int> pos(k);
  for (int i = 0; i < k; ++i) pos[i] = i;
  while (true) {
    std::vector<int> subset(k);
    for (int i = 0; i < k; ++i) subset[i] = ground[pos[i]];
    out.push_back(std::move(subset));
    int i = k - 1;
    while (i >= 0 && pos[i] == n - k + i) --i;
    if (i < 0) break;
    ++pos[i];
    for (int j = i + 1; j < k; ++j) pos[j] = pos[j - 1] + 1;
  }
  return out;
}

std::vector<GroupKey> enumerate_group_keys(const std::vector<int>& omega, int r1, int r2) {
  if (!std::is_sorted(omega.begin(), omega.end()))
    throw std::invalid_argument("enumerate_group_keys: omega must be sorted");
  int limit1 = std::min<int>(r1, static_cast<int>(omega.size()));
  std::vector<GroupKey> keys;
  for (int s1 = 0; s1 <= limit1; ++s1) {
    for (int s2 = 0; s2 <= std::min(r2, s1); ++s2) {
      for (auto& rho1 : subsets_of_size(omega, s1)) {
        for (auto& rho2 : subsets_of_size(rho1, s2)) {
          keys.push_back(GroupKey{rho1, rho2});
        }
      }
    }
  }
  return keys;
}

bool colex_less(const std::vector<int>& a, const std::vector<int>& b) {
  if (a.size() != b.size())
    throw std::invalid_argument("colex_less: sets must have equal size");
  for (size_t i = a.size(); i-- > 0;) {
    if (a[i] != b[i]) return a[i] < b[i];
  }
  return false;
}

}  // namespace nucache

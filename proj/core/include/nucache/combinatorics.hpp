#pragma once

#include <cstdint>
#include <vector>

namespace nucache {

/// Binomial coefficient extended with binom(a,b) = 0 for b < 0 or b > a.
/// The zero extension is load-bearing: the dimension formulas in the
/// delivery and rate modules rely on out-of-range terms vanishing.
long long binom(long long a, long long b);

/// Exact a! / (parts[0]! ... parts[n-1]!). Requires sum(parts) == a.
long long multinomial(long long a, const std::vector<long long>& parts);

/// Label of one subfile: a nested chain of user sets
/// sets[0] >= sets[1] >= ... >= sets[N-1], with |sets[j]| = r[j] and
/// sets[0] a subset of {1..K}. Sets are kept sorted ascending.
struct ChainIndex {
  std::vector<std::vector<int>> sets;

  bool operator==(const ChainIndex&) const = default;
};

/// True when `chain` is a valid chain for (K, r): sizes match the profile,
/// sets are sorted subsets of {1..K} and each level nests in the previous.
bool chain_valid(const ChainIndex& chain, int K, const std::vector<int>& r);

/// All chains for K users and a non-increasing profile r, in lexicographic
/// order by (sets[0] as a sorted tuple, then sets[1], ...). The list has
/// exactly multinomial(K, [r_N, r_{N-1}-r_N, ..., r_1-r_2, K-r_1]) entries.
std::vector<ChainIndex> enumerate_chains(int K, const std::vector<int>& r);

/// Number of chains for (K, r) without materializing them.
long long chain_count(int K, const std::vector<int>& r);

/// Position of `chain` in enumerate_chains(K, r); inverse of chain_unrank.
long long chain_rank(const ChainIndex& chain, int K, const std::vector<int>& r);
ChainIndex chain_unrank(long long index, int K, const std::vector<int>& r);

/// A pair of nested subsets (rho1 >= rho2) of a designated user set, used to
/// group the subfiles of one file during delivery.
struct GroupKey {
  std::vector<int> rho1;
  std::vector<int> rho2;

  bool operator==(const GroupKey&) const = default;
};

/// All (rho1, rho2) with rho2 <= rho1 <= omega, |rho1| <= r1, |rho2| <= r2.
/// Ordered by (|rho1|, |rho2|) ascending, then rho1, then rho2 in
/// lexicographic order; the order is part of the wire format.
std::vector<GroupKey> enumerate_group_keys(const std::vector<int>& omega, int r1, int r2);

/// All size-k subsets of `ground` (sorted) in lexicographic order.
std::vector<std::vector<int>> subsets_of_size(const std::vector<int>& ground, int k);

/// Colexicographic comparison of same-size sorted sets: decided by the
/// largest differing element.
bool colex_less(const std::vector<int>& a, const std::vector<int>& b);

}  // namespace nucache

#pragma once

#include <cstdint>
#include <vector>

#include "nucache/combinatorics.hpp"
#include "nucache/field.hpp"
#include "nucache/rational.hpp"

namespace nucache {

/// Static parameters of one placement instance. The profile r must be
/// non-increasing; callers with a different popularity order relabel files
/// first (the CLI does this and records the relabeling).
struct PlacementConfig {
  int K = 0;                        // users
  int N = 0;                        // files
  std::vector<int> r;               // per-file share, r[0] >= ... >= r[N-1]
  int subfile_len = 16;             // symbols per subfile
  std::uint32_t prime = kDefaultPrime;
  std::uint32_t matrix_seed = 0;    // offsets the Cauchy evaluation points

  long long subpacketization() const;          // S
  long long file_len() const;                  // F = S * subfile_len
  Rational cache_share(int file) const;        // M_i = r_i / K
  Rational total_cache() const;                // M = sum r_i / K

  void validate() const;
};

/// One cached subfile: which file, which chain, and (when instantiated)
/// the raw symbols. Placement is uncoded, so the payload is always a
/// verbatim slice of the file.
struct CacheEntry {
  int file = 0;  // 1-based
  ChainIndex chain;
  std::vector<Symbol> payload;
};

struct CacheMap {
  PlacementConfig cfg;
  bool has_payloads = false;
  std::vector<std::vector<CacheEntry>> users;  // users[k] is user k+1

  const std::vector<Symbol>* find_payload(int user, int file, const ChainIndex& chain) const;
};

long long subpacketization(int K, const std::vector<int>& r);

/// Structural placement: which chains land in which cache, no payloads.
CacheMap place(const PlacementConfig& cfg);

/// Placement with instantiated files. files[i] must have exactly S*L symbols;
/// chain q of file i maps to symbols [q*L, (q+1)*L).
CacheMap place(const PlacementConfig& cfg, const std::vector<std::vector<Symbol>>& files);

/// Placement where user j applies their own bijection over the files:
/// user j stores subfile (i, chain) iff j is in chain.sets[perm_j(i) - 1].
/// perms[j-1] maps 1-based file index to 1-based set level. Identity
/// permutations reproduce place().
CacheMap place_with_permutations(const PlacementConfig& cfg,
                                 const std::vector<std::vector<Symbol>>& files,
                                 const std::vector<std::vector<int>>& perms);

/// Deterministic test payloads: symbols uniform in [0, prime), seeded.
std::vector<std::vector<Symbol>> random_files(const PlacementConfig& cfg, std::uint64_t seed);

}  // namespace nucache

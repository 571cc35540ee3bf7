#pragma once

#include <array>
#include <cstdint>
#include <set>
#include <vector>

#include "nucache/combinatorics.hpp"
#include "nucache/field.hpp"
#include "nucache/placement.hpp"
#include "nucache/rates.hpp"

namespace nucache {

/// Users requesting `file` (1-based, sorted). demand[k] is user k+1's file.
std::vector<int> users_demanding(const std::vector<int>& demand, int file);
std::set<int> requested_set(const std::vector<int>& demand);

struct GroupDims {
  long long kappa = 0;  // subfiles in the group
  long long theta = 0;  // coded elements kept, = unknowns per requester
};

/// Dimensions of the group (rho1, rho2) with s1 = |rho1|, s2 = |rho2| in the
/// description of `file`, when own_count users request that file:
///   kappa = C(own, r2-s2) * C(own-(r2-s2), (r1-s1)-(r2-s2))
///   theta = (own - (r_file - s_file)) / own * kappa
/// Zero-extended binomials make degenerate combinations vanish.
GroupDims group_dims(int file, int s1, int s2, int own_count, int r1, int r2);

/// One aligned group of a compressed file description: the kappa constituent
/// subfiles W_{file, rho1 u x1, rho2 u x2} (x2 <= x1 inside the requester
/// set, ordered colexicographically by (x1, x2)) and, when payloads are
/// present, the theta inner-coded elements.
struct DescriptionGroup {
  GroupKey key;
  GroupDims dims;
  std::vector<ChainIndex> constituents;
  std::vector<long long> constituent_ranks;
  FieldMatrix coded;  // theta x subfile_len, empty in structural mode
};

/// Compressed description W*_file: every user can be brought to decode it,
/// and requesters of `file` can peel it back to the full file.
struct Description {
  int file = 0;
  long long total_elements = 0;
  std::vector<DescriptionGroup> groups;  // all keys, including empty groups
};

/// Structural description (group keys, dims, constituents) of `file` under
/// `demand`; with `files` given, also computes the inner-coded payloads.
/// Requires a two-sided demand (both files requested somewhere).
Description build_description(int file, const std::vector<int>& demand,
                              const PlacementConfig& cfg,
                              const std::vector<std::vector<Symbol>>* files = nullptr);

/// Closed forms used to size the broadcast: the description of file i has
/// S*C(K-1,r_i)/C(K,r_i) elements, of which S*C(K-2,r_i)/C(K,r_i) are
/// unknown to each user who did not request file i.
long long description_length(int K, int r_i, long long S);
long long outsider_unknown_count(int K, int r_i, long long S);

/// Rows of the outer code, = S * delivery_rate (always an integer).
long long outer_row_count(const PlacementConfig& cfg, const std::set<int>& requested);

/// Label of one column of the outer system. Two-sided messages carry coded
/// description elements; one-sided messages carry raw subfile columns.
struct ColumnLabel {
  int file = 0;
  bool coded = true;
  GroupKey key;          // when coded
  int element = 0;       // index within the group's theta elements
  long long chain = -1;  // chain rank when !coded
};

struct DeliveryMessage {
  int K = 0;
  std::array<int, 2> r{};
  std::uint32_t prime = kDefaultPrime;
  int subfile_len = 0;
  std::uint32_t matrix_seed = 0;
  std::vector<int> demand;
  std::vector<ColumnLabel> manifest;
  FieldMatrix payload;  // outer rows x subfile_len

  PlacementConfig config() const;
};

/// The broadcast: outer-MDS-coded rows over the stacked descriptions
/// [W*_1; W*_2] (two-sided) or over the raw subfiles of the single
/// requested file (one-sided).
DeliveryMessage encode_delivery(const std::vector<int>& demand,
                                const std::vector<std::vector<Symbol>>& files,
                                const PlacementConfig& cfg);

/// Indices (into the manifest) of outer columns user `user` can reproduce
/// from cache before seeing the broadcast.
std::vector<int> known_columns(int user, const std::vector<int>& demand,
                               const PlacementConfig& cfg);

/// Two-stage peeling decode of user `user`'s requested file; returns the full
/// file payload (S * subfile_len symbols), bit-exact. The placement must be
/// the one the message was encoded against.
std::vector<Symbol> decode(int user, const CacheMap& cache, const DeliveryMessage& msg);

}  // namespace nucache

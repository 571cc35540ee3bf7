#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "nucache/delivery.hpp"
#include "nucache/field.hpp"
#include "nucache/placement.hpp"

namespace nucache {

/// Brute-force verifiers, independent of the coding path they certify.
/// Linear maps act on the 2S subfile variables of a two-file placement
/// (file 1's subfiles first); entropies are counted in subfile units.

/// Selector of all S subfiles of `file`.
FieldMatrix file_selector(int file, const PlacementConfig& cfg);

/// Selector of every subfile cached by `user` under the standard placement.
FieldMatrix cache_selector(int user, const PlacementConfig& cfg);

/// The linear map computing the compressed description of `file` from the
/// subfile variables.
FieldMatrix description_map(int file, const std::vector<int>& demand,
                            const PlacementConfig& cfg);

/// H(A W | B W) for uniform W, in variable units: rank([A;B]) - rank(B).
long long linear_entropy(const FieldMatrix& a, const FieldMatrix& b);

struct EntropyCheck {
  std::string name;
  long long got = 0;
  long long expected = 0;
  bool pass = false;
};

struct EntropyReport {
  int K = 0;
  std::array<int, 2> r{};
  std::vector<int> demand;
  std::vector<EntropyCheck> checks;
  bool pass = false;
};

/// Verifies, by rank computations, that the compressed descriptions meet
/// their entropy characterization under a two-sided demand:
///  - every requester of file i recovers it from W*_i plus cache,
///  - max_{m in Omega_i} H(W*_i | Z_m) = S*C(K-1,r_i)/C(K,r_i),
///  - max_{l not in Omega_i} H(W*_i | Z_l) = S*C(K-2,r_i)/C(K,r_i),
///  - single- and pair-user cache statistics of the placement match the
///    same two ratios.
EntropyReport verify_entropy_identities(const PlacementConfig& cfg, const std::vector<int>& demand);

struct DecodeInstance {
  int K = 0;
  std::array<int, 2> r{};
  std::vector<int> demand;
  std::uint64_t seed = 0;
  bool pass = false;
  std::string failure;
};

struct DecodeSweepReport {
  long long instances = 0;
  long long decode_failures = 0;
  long long witness_failures = 0;
  std::vector<DecodeInstance> failed;  // only failing instances are kept
  bool pass = false;
};

/// End-to-end oracle: for every K <= K_max (desk scale, K_max <= 6), every
/// split 0 <= r2 <= r1 <= K and every demand vector in {1,2}^K, place random
/// payloads, broadcast, and check each user's decode bit-exactly. Two-sided
/// instances with at least one broadcast row also run the tightness witness:
/// dropping one outer row must leave some user's step-1 system
/// rank-deficient.
DecodeSweepReport exhaustive_decode(int K_max,
                                    const std::vector<std::uint64_t>& seeds = {1, 2, 3},
                                    std::uint32_t prime = kDefaultPrime, int subfile_len = 4);

/// Same witness as in exhaustive_decode, for one instance and one dropped
/// row; true when some user's step-1 system becomes underdetermined.
bool tightness_witness(const std::vector<int>& demand, const PlacementConfig& cfg,
                       int dropped_row);

std::string to_json(const EntropyReport& report);
std::string to_json(const DecodeSweepReport& report);

}  // namespace nucache

#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "nucache/delivery.hpp"
#include "nucache/placement.hpp"
#include "nucache/rational.hpp"

namespace nucache {

/// Memory-sharing recipe realizing a fractional allocation (t1, t2) as a
/// weighted mix of at most three integer splits. Zero-weight points are
/// dropped; the weighted average of the surviving points equals (t1, t2),
/// every surviving point is a valid split (q1 >= q2), and the mix realizes
/// the interpolated two-sided rate exactly.
struct SharePlan {
  int regime = 2;  // 1: frac(t1)+frac(t2) >= 1, 2: otherwise, 0: diagonal cell
  std::vector<std::array<int, 2>> points;
  std::vector<Rational> weights;
  std::vector<Rational> boundaries;  // prefix sums over [0, 1], size points+1

  size_t segments() const { return points.size(); }
};

SharePlan share_plan(int K, const Rational& t1, const Rational& t2);

/// Smallest file length F for which every segment length weight_j * F is an
/// integer multiple of S_j * subfile_len.
long long minimal_file_length(const SharePlan& plan, int K, int subfile_len);

/// One file segment run under its own integer split.
struct SegmentPlacement {
  std::array<int, 2> profile{};
  long long offset = 0;  // first symbol of the segment in the original files
  long long length = 0;  // symbols per file in the segment
  CacheMap map;
};

struct JointPlacement {
  int K = 0;
  Rational t1, t2;
  SharePlan plan;
  long long file_len = 0;  // F, symbols per original file
  int base_subfile_len = 0;
  std::uint32_t prime = kDefaultPrime;
  std::uint32_t matrix_seed = 0;
  std::vector<SegmentPlacement> segments;
};

/// Splits both files along the plan boundaries and places each segment.
/// Every segment length must be divisible by its own S_j * subfile_len;
/// otherwise a config error names the minimal compatible F.
JointPlacement joint_place(int K, const Rational& t1, const Rational& t2,
                           const std::vector<std::vector<Symbol>>& files, int subfile_len,
                           std::uint32_t prime = kDefaultPrime, std::uint32_t matrix_seed = 0);

/// Per-segment broadcasts for one demand vector, in plan order.
std::vector<DeliveryMessage> joint_deliver(const std::vector<int>& demand,
                                           const JointPlacement& placement,
                                           const std::vector<std::vector<Symbol>>& files);

/// Concatenation of the per-segment decodes: the user's full requested file.
std::vector<Symbol> joint_decode(int user, const JointPlacement& placement,
                                 const std::vector<DeliveryMessage>& messages);

/// Transmitted symbols divided by the file length, as an exact fraction.
Rational realized_joint_rate(const std::vector<DeliveryMessage>& messages, long long file_len);

}  // namespace nucache

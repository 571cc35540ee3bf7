#include "nucache/scheme.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

namespace nucache {

namespace {

long long llgcd(long long a, long long b) { return std::gcd(a, b); }

long long lllcm(long long a, long long b) { return a / llgcd(a, b) * b; }

std::vector<Symbol> segment_slice(const std::vector<Symbol>& file, long long offset,
                                  long long length) {
  auto begin = file.begin() + static_cast<ptrdiff_t>(offset);
  return {begin, begin + static_cast<ptrdiff_t>(length)};
}

std::vector<std::vector<Symbol>> segment_files(const std::vector<std::vector<Symbol>>& files,
                                               const SegmentPlacement& seg) {
  return {segment_slice(files[0], seg.offset, seg.length),
          segment_slice(files[1], seg.offset, seg.length)};
}

}  // namespace

SharePlan share_plan(int K, const Rational& t1, const Rational& t2) {
  if (t2 < Rational(0) || t1 < t2 || t1 > Rational(K))
    throw std::invalid_argument("share_plan: need 0 <= t2 <= t1 <= K");
  long long fl1 = t1.floor(), fl2 = t2.floor();
  Rational f1 = t1.frac(), f2 = t2.frac();

  SharePlan plan;
  std::vector<std::array<int, 2>> points;
  std::vector<Rational> weights;
  if (fl1 == fl2) {
    // Diagonal cell: both allocations share a floor, so the plain regime
    // point sets would include the transposed split (fl1, fl2+1) whose
    // realizable rate is the same as its mirror and exceeds the
    // interpolated target. Mixing along the diagonal instead attains the
    // interpolated rate exactly.
    plan.regime = 0;
    points = {{static_cast<int>(fl1) + 1, static_cast<int>(fl2)},
              {static_cast<int>(fl1), static_cast<int>(fl2)},
              {static_cast<int>(fl1) + 1, static_cast<int>(fl2) + 1}};
    weights = {f1 - f2, Rational(1) - f1, f2};
  } else if (f1 + f2 >= Rational(1)) {
    plan.regime = 1;
    points = {{static_cast<int>(fl1), static_cast<int>(fl2) + 1},
              {static_cast<int>(fl1) + 1, static_cast<int>(fl2)},
              {static_cast<int>(fl1) + 1, static_cast<int>(fl2) + 1}};
    weights = {Rational(1) - f1, Rational(1) - f2, f1 + f2 - Rational(1)};
  } else {
    plan.regime = 2;
    points = {{static_cast<int>(fl1) + 1, static_cast<int>(fl2)},
              {static_cast<int>(fl1), static_cast<int>(fl2) + 1},
              {static_cast<int>(fl1), static_cast<int>(fl2)}};
    weights = {f1, f2, Rational(1) - f1 - f2};
  }

  Rational total(0), avg1(0), avg2(0);
  for (size_t i = 0; i < points.size(); ++i) {
    if (weights[i].is_zero()) continue;
    if (weights[i] < Rational(0)) throw std::logic_error("share_plan: negative weight");
    plan.points.push_back(points[i]);
    plan.weights.push_back(weights[i]);
    total += weights[i];
    avg1 += weights[i] * Rational(points[i][0]);
    avg2 += weights[i] * Rational(points[i][1]);
  }
  if (total != Rational(1) || avg1 != t1 || avg2 != t2)
    throw std::logic_error("share_plan: weights do not average to (t1, t2)");
  for (const auto& q : plan.points) {
    if (q[1] < 0 || q[0] < q[1] || q[0] > K)
      throw std::logic_error("share_plan: point is not a valid split");
  }

  plan.boundaries.push_back(Rational(0));
  Rational acc(0);
  for (const auto& w : plan.weights) {
    acc += w;
    plan.boundaries.push_back(acc);
  }
  return plan;
}

long long minimal_file_length(const SharePlan& plan, int K, int subfile_len) {
  long long F = 1;
  for (size_t j = 0; j < plan.points.size(); ++j) {
    const auto& profile = plan.points[j];
    long long unit = subpacketization(K, {profile[0], profile[1]}) * subfile_len;
    long long a = static_cast<long long>(plan.weights[j].num());
    long long b = static_cast<long long>(plan.weights[j].den());
    F = lllcm(F, b * (unit / llgcd(a, unit)));
  }
  return F;
}

JointPlacement joint_place(int K, const Rational& t1, const Rational& t2,
                           const std::vector<std::vector<Symbol>>& files, int subfile_len,
                           std::uint32_t prime, std::uint32_t matrix_seed) {
  if (files.size() != 2) throw std::invalid_argument("joint_place: expected two files");
  if (files[0].size() != files[1].size() || files[0].empty())
    throw std::invalid_argument("joint_place: files must have equal positive length");

  JointPlacement out;
  out.K = K;
  out.t1 = t1;
  out.t2 = t2;
  out.plan = share_plan(K, t1, t2);
  out.file_len = static_cast<long long>(files[0].size());
  out.base_subfile_len = subfile_len;
  out.prime = prime;
  out.matrix_seed = matrix_seed;

  long long F = out.file_len;
  for (size_t j = 0; j < out.plan.points.size(); ++j) {
    SegmentPlacement seg;
    seg.profile = out.plan.points[j];
    Rational begin = out.plan.boundaries[j] * Rational(F);
    Rational end = out.plan.boundaries[j + 1] * Rational(F);
    if (!begin.is_integer() || !end.is_integer())
      throw std::invalid_argument(
          "joint_place: segment boundaries are fractional; minimal compatible F = " +
          std::to_string(minimal_file_length(out.plan, K, subfile_len)));
    seg.offset = static_cast<long long>(begin.num());
    seg.length = static_cast<long long>(end.num()) - seg.offset;

    const auto& profile = seg.profile;
    long long S = subpacketization(K, {profile[0], profile[1]});
    long long unit = S * subfile_len;
    if (seg.length % unit != 0)
      throw std::invalid_argument(
          "joint_place: segment length " + std::to_string(seg.length) +
          " is not a multiple of S*L = " + std::to_string(unit) +
          "; minimal compatible F = " +
          std::to_string(minimal_file_length(out.plan, K, subfile_len)));

    PlacementConfig cfg;
    cfg.K = K;
    cfg.N = 2;
    cfg.r = {profile[0], profile[1]};
    cfg.subfile_len = static_cast<int>(seg.length / S);
    cfg.prime = prime;
    cfg.matrix_seed = matrix_seed;
    seg.map = place(cfg, segment_files(files, seg));
    out.segments.push_back(std::move(seg));
  }
  return out;
}

std::vector<DeliveryMessage> joint_deliver(const std::vector<int>& demand,
                                           const JointPlacement& placement,
                                           const std::vector<std::vector<Symbol>>& files) {
  if (files.size() != 2 ||
      static_cast<long long>(files[0].size()) != placement.file_len ||
      static_cast<long long>(files[1].size()) != placement.file_len)
    throw std::invalid_argument("joint_deliver: files do not match the placement");
  std::vector<DeliveryMessage> messages;
  for (const auto& seg : placement.segments)
    messages.push_back(encode_delivery(demand, segment_files(files, seg), seg.map.cfg));
  return messages;
}

std::vector<Symbol> joint_decode(int user, const JointPlacement& placement,
                                 const std::vector<DeliveryMessage>& messages) {
  if (messages.size() != placement.segments.size())
    throw std::invalid_argument("joint_decode: one message per segment expected");
  std::vector<Symbol> out(static_cast<size_t>(placement.file_len));
  for (size_t j = 0; j < placement.segments.size(); ++j) {
    const auto& seg = placement.segments[j];
    std::vector<Symbol> piece = decode(user, seg.map, messages[j]);
    std::copy(piece.begin(), piece.end(), out.begin() + static_cast<ptrdiff_t>(seg.offset));
  }
  return out;
}

Rational realized_joint_rate(const std::vector<DeliveryMessage>& messages, long long file_len) {
  Rational symbols(0);
  for (const auto& msg : messages)
    symbols += Rational(static_cast<long long>(msg.payload.rows) * msg.subfile_len);
  return symbols / Rational(file_len);
}

}  // namespace nucache

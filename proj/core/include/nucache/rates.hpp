#pragma once

#include <set>
#include <utility>

#include "nucache/rational.hpp"

namespace nucache {

/// A fractional per-file cache split (in user units, M_i = t_i / K) together
/// with its expected delivery rate.
struct RatePoint {
  Rational t1;
  Rational t2;
  Rational rbar;
};

/// C(K - i, n) / C(K, n) for n in [0, K]. The broadcast saving obtained when
/// i users' caches can be peeled off a symbol cached by n users.
Rational coverage_ratio(int K, int i, int n);

/// Piecewise-linear interpolation of coverage_ratio in n at a fractional
/// point t in [0, K].
Rational coverage_interp(int K, int i, const Rational& t);

/// The two candidate two-sided rates for an integer split (r1, r2):
///   R1 = C(K-1,r1)/C(K,r1) + C(K-2,r2)/C(K,r2)
///   R2 = C(K-2,r1)/C(K,r1) + C(K-1,r2)/C(K,r2)
/// The scheme transmits max(R1, R2) file units.
std::pair<Rational, Rational> pair_rates(int K, int r1, int r2);

/// R1 and R2 extended to fractional (t1, t2) by coverage interpolation.
std::pair<Rational, Rational> pair_rates_interp(int K, const Rational& t1, const Rational& t2);

struct Prop1Order {
  bool r1_dominates;  // R1 >= R2
  Rational gap;       // R1 - R2 = (r1-r2)(K-r1-r2) / (K(K-1))
};

/// Which of the two candidate rates wins for r2 < r1: R1 >= R2 exactly when
/// r1 + r2 <= K. Also returns the closed-form gap.
Prop1Order prop1_order(int K, int r1, int r2);

/// Broadcast length (in file units) for an integer split when the demanded
/// file set is {1}, {2} or {1,2}.
Rational delivery_rate(int K, int r1, int r2, const std::set<int>& requested);

/// Expected delivery rate at fractional (t1, t2) with t2 <= t1 and the more
/// popular file carrying t1 (callers swap labels when p1 < p2):
///   p1^K (K-t1)/K + p2^K (K-t2)/K + (1 - p1^K - p2^K) max(R1, R2).
Rational expected_rate(int K, const Rational& p1, const Rational& t1, const Rational& t2);

/// Two-sided rate of the equal-split scheme, [C(K,r+1) - C(K-2,r+1)] / C(K,r).
/// Equals max(R1,R2) at r1 = r2 = r.
Rational uniform_pair_rate(int K, int r);

}  // namespace nucache

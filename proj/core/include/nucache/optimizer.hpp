#pragma once

#include <vector>

#include "nucache/rates.hpp"
#include "nucache/rational.hpp"

namespace nucache {

/// Candidate minimizer on the line t1 + t2 = K*M (t2 <= t1): the expected
/// rate restricted to the line is convex piecewise linear and only kinks
/// where t1 or t2 is an integer or at the symmetric point.
struct Breakpoint {
  Rational t1;
  bool integer_t1 = false;
  bool integer_t2 = false;
  bool symmetric = false;  // t1 == t2
};

/// Sorted breakpoints with t1 in [K*M/2, min(K, K*M)].
std::vector<Breakpoint> breakpoints(int K, const Rational& M);

/// Right/left slope of the two-sided rate term along the line at t1
/// (the combinatorial part only; the one-sided terms contribute the
/// threshold below). At the symmetric point the left slope is -slope_plus
/// by reflection.
Rational slope_plus(const Rational& t1, int K, const Rational& M);
Rational slope_minus(const Rational& t1, int K, const Rational& M);

struct OptimalAllocation {
  RatePoint point;     // t1*, t2*, expected rate
  Rational threshold;  // slope target (p1^K - p2^K) / (K (1 - p1^K - p2^K))
  bool tie = false;    // the next breakpoint achieves the same rate
};

/// Optimal allocation for two files by binary search over the breakpoints:
/// the minimizer is the first breakpoint whose right slope reaches the
/// threshold. Requires p1 in [1/2, 1) (canonicalize first) and M in [0, 2].
/// Ties return the smaller t1.
OptimalAllocation optimal_allocation(int K, const Rational& p1, const Rational& M);

/// Expected rate of equal-split caching that ignores the popularity skew;
/// linear interpolation between the integer splits r = K*M/2.
Rational baseline_uniform(int K, const Rational& p1, const Rational& M);

/// Expected rate of per-file caching that ignores cross-file coding: all
/// cache goes to the popular file first.
Rational baseline_grouping(int K, const Rational& p1, const Rational& M);

}  // namespace nucache

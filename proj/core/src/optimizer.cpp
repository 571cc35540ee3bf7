#include "nucache/optimizer.hpp"

#include <algorithm>
#include <stdexcept>

#include "nucache/combinatorics.hpp"

namespace nucache {

namespace {

void check_memory(int K, const Rational& M) {
  if (K < 1) throw std::invalid_argument("optimizer: K must be positive");
  if (M < Rational(0) || M > Rational(2))
    throw std::invalid_argument("optimizer: M must lie in [0, 2]");
}

Rational c1(int K, long long n) { return coverage_ratio(K, 1, static_cast<int>(n)); }
Rational c2(int K, long long n) { return coverage_ratio(K, 2, static_cast<int>(n)); }

}  // namespace

std::vector<Breakpoint> breakpoints(int K, const Rational& M) {
  check_memory(K, M);
  Rational budget = Rational(K) * M;
  Rational lo = budget / Rational(2);
  Rational hi = Rational::min(Rational(K), budget);

  std::vector<Rational> values = {lo};
  for (long long z = lo.ceil(); z <= hi.floor(); ++z) values.emplace_back(z);
  for (long long z = (budget - hi).ceil(); z <= (budget - lo).floor(); ++z) {
    Rational t1 = budget - Rational(z);
    if (t1 >= lo && t1 <= hi) values.push_back(t1);
  }
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());

  std::vector<Breakpoint> bps;
  for (const auto& t1 : values) {
    Breakpoint bp;
    bp.t1 = t1;
    bp.integer_t1 = t1.is_integer();
    bp.integer_t2 = (budget - t1).is_integer();
    bp.symmetric = t1 == lo;
    bps.push_back(bp);
  }
  return bps;
}

Rational slope_plus(const Rational& t1, int K, const Rational& M) {
  check_memory(K, M);
  Rational budget = Rational(K) * M;
  Rational t2 = budget - t1;
  long long f1 = t1.floor();
  long long c2i = t2.ceil();
  if (f1 + 1 > K || c2i - 1 < 0)
    throw std::invalid_argument("slope_plus: no segment to the right of t1");
  if (M <= Rational(1))
    return c1(K, f1 + 1) - c1(K, f1) + c2(K, c2i - 1) - c2(K, c2i);
  return c2(K, f1 + 1) - c2(K, f1) + c1(K, c2i - 1) - c1(K, c2i);
}

Rational slope_minus(const Rational& t1, int K, const Rational& M) {
  check_memory(K, M);
  Rational budget = Rational(K) * M;
  Rational t2 = budget - t1;
  if (t1 == t2) return -slope_plus(t1, K, M);
  long long c1i = t1.ceil();
  long long f2 = t2.floor();
  if (c1i - 1 < 0 || f2 + 1 > K)
    throw std::invalid_argument("slope_minus: no segment to the left of t1");
  if (M <= Rational(1))
    return c1(K, c1i) - c1(K, c1i - 1) + c2(K, f2) - c2(K, f2 + 1);
  return c2(K, c1i) - c2(K, c1i - 1) + c1(K, f2) - c1(K, f2 + 1);
}

OptimalAllocation optimal_allocation(int K, const Rational& p1, const Rational& M) {
  check_memory(K, M);
  if (K < 2) throw std::invalid_argument("optimal_allocation: needs at least two users");
  if (p1 < Rational(1, 2) || p1 >= Rational(1))
    throw std::invalid_argument("optimal_allocation: p1 must lie in [1/2, 1)");
  Rational budget = Rational(K) * M;
  Rational p2 = Rational(1) - p1;
  Rational q1 = p1.pow(static_cast<unsigned>(K));
  Rational q2 = p2.pow(static_cast<unsigned>(K));
  Rational threshold = (q1 - q2) / (Rational(K) * (Rational(1) - q1 - q2));

  std::vector<Breakpoint> bps = breakpoints(K, M);
  size_t last = bps.size() - 1;
  auto right_slope_reaches = [&](size_t j) {
    if (j == last) return true;  // no segment to the right: treat as +inf
    return slope_plus(bps[j].t1, K, M) >= threshold;
  };

  size_t lo = 0, hi = last;
  while (lo < hi) {
    size_t mid = (lo + hi) / 2;
    if (right_slope_reaches(mid))
      hi = mid;
    else
      lo = mid + 1;
  }

  OptimalAllocation out;
  out.threshold = threshold;
  Rational t1 = bps[lo].t1;
  out.point = {t1, budget - t1, expected_rate(K, p1, t1, budget - t1)};
  out.tie = lo < last && slope_plus(t1, K, M) == threshold;
  if (lo > 0 && slope_minus(t1, K, M) > threshold)
    throw std::logic_error("optimal_allocation: breakpoint slopes not monotone");
  return out;
}

Rational baseline_uniform(int K, const Rational& p1, const Rational& M) {
  check_memory(K, M);
  Rational q1 = p1.pow(static_cast<unsigned>(K));
  Rational q2 = (Rational(1) - p1).pow(static_cast<unsigned>(K));
  auto at_r = [&](long long r) {
    return (q1 + q2) * Rational(K - r, K) +
           (Rational(1) - q1 - q2) * uniform_pair_rate(K, static_cast<int>(r));
  };
  Rational half_budget = Rational(K) * M / Rational(2);
  long long r = half_budget.floor();
  Rational frac = half_budget.frac();
  if (frac.is_zero()) return at_r(r);
  return (Rational(1) - frac) * at_r(r) + frac * at_r(r + 1);
}

Rational baseline_grouping(int K, const Rational& p1, const Rational& M) {
  check_memory(K, M);
  Rational q1 = p1.pow(static_cast<unsigned>(K));
  Rational q2 = (Rational(1) - p1).pow(static_cast<unsigned>(K));
  if (M > Rational(1)) return (Rational(1) - q1) * (Rational(2) - M);
  return -q1 - q2 * (Rational(1) - M) + Rational(2) - M;
}

}  // namespace nucache

#include "nucache/rates.hpp"

#include <stdexcept>

#include "nucache/combinatorics.hpp"

namespace nucache {

Rational coverage_ratio(int K, int i, int n) {
  if (n < 0 || n > K) throw std::invalid_argument("coverage_ratio: n out of [0, K]");
  return {binom(K - i, n), binom(K, n)};
}

Rational coverage_interp(int K, int i, const Rational& t) {
  if (t < Rational(0) || t > Rational(K))
    throw std::invalid_argument("coverage_interp: t out of [0, K]");
  long long n = static_cast<long long>(t.floor());
  Rational frac = t.frac();
  if (frac.is_zero()) return coverage_ratio(K, i, static_cast<int>(n));
  return (Rational(1) - frac) * coverage_ratio(K, i, static_cast<int>(n)) +
         frac * coverage_ratio(K, i, static_cast<int>(n) + 1);
}

std::pair<Rational, Rational> pair_rates(int K, int r1, int r2) {
  if (r2 < 0 || r1 < r2 || r1 > K)
    throw std::invalid_argument("pair_rates: need 0 <= r2 <= r1 <= K");
  Rational a1 = coverage_ratio(K, 1, r1), a2 = coverage_ratio(K, 2, r1);
  Rational b1 = coverage_ratio(K, 1, r2), b2 = coverage_ratio(K, 2, r2);
  return {a1 + b2, a2 + b1};
}

std::pair<Rational, Rational> pair_rates_interp(int K, const Rational& t1, const Rational& t2) {
  return {coverage_interp(K, 1, t1) + coverage_interp(K, 2, t2),
          coverage_interp(K, 2, t1) + coverage_interp(K, 1, t2)};
}

Prop1Order prop1_order(int K, int r1, int r2) {
  if (K < 2) throw std::invalid_argument("prop1_order: K must be at least 2");
  if (!(0 <= r2 && r2 < r1 && r1 <= K))
    throw std::invalid_argument("prop1_order: need 0 <= r2 < r1 <= K");
  Rational gap(static_cast<long long>(r1 - r2) * (K - r1 - r2),
               static_cast<long long>(K) * (K - 1));
  return {r1 + r2 <= K, gap};
}

Rational delivery_rate(int K, int r1, int r2, const std::set<int>& requested) {
  if (r2 < 0 || r1 < r2 || r1 > K)
    throw std::invalid_argument("delivery_rate: need 0 <= r2 <= r1 <= K");
  if (requested == std::set<int>{1}) return {K - r1, K};
  if (requested == std::set<int>{2}) return {K - r2, K};
  if (requested == std::set<int>{1, 2}) {
    auto [rate1, rate2] = pair_rates(K, r1, r2);
    return Rational::max(rate1, rate2);
  }
  throw std::invalid_argument("delivery_rate: requested set must be {1}, {2} or {1,2}");
}

Rational expected_rate(int K, const Rational& p1, const Rational& t1, const Rational& t2) {
  if (t2 < Rational(0) || t1 < t2 || t1 > Rational(K))
    throw std::invalid_argument("expected_rate: need 0 <= t2 <= t1 <= K");
  if (p1 < Rational(0) || p1 > Rational(1))
    throw std::invalid_argument("expected_rate: p1 out of [0, 1]");
  Rational p2 = Rational(1) - p1;
  Rational q1 = p1.pow(static_cast<unsigned>(K));
  Rational q2 = p2.pow(static_cast<unsigned>(K));
  auto [rate1, rate2] = pair_rates_interp(K, t1, t2);
  Rational one_sided = q1 * (Rational(K) - t1) / Rational(K) +
                       q2 * (Rational(K) - t2) / Rational(K);
  return one_sided + (Rational(1) - q1 - q2) * Rational::max(rate1, rate2);
}

Rational uniform_pair_rate(int K, int r) {
  if (r < 0 || r > K) throw std::invalid_argument("uniform_pair_rate: r out of [0, K]");
  return {binom(K, r + 1) - binom(K - 2, r + 1), binom(K, r)};
}

}  // namespace nucache

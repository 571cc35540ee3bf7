#include "nucache/converse.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>
#include <sstream>
#include <stdexcept>

#include "nucache/combinatorics.hpp"
#include "nucache/rates.hpp"

namespace nucache {

namespace {

void check_probabilities(const std::vector<Rational>& p) {
  Rational sum(0);
  for (const auto& pi : p) {
    if (pi < Rational(0)) throw std::invalid_argument("probabilities must be non-negative");
    sum += pi;
  }
  if (sum != Rational(1)) throw std::invalid_argument("probabilities must sum to 1");
}

std::vector<std::vector<int>> nonempty_subsets(int N) {
  std::vector<std::vector<int>> subsets;
  for (int bits = 1; bits < (1 << N); ++bits) {
    std::vector<int> s;
    for (int i = 0; i < N; ++i)
      if (bits & (1 << i)) s.push_back(i + 1);
    subsets.push_back(std::move(s));
  }
  return subsets;
}

}  // namespace

Rational range_probability(const std::vector<int>& subset, const std::vector<Rational>& p,
                           int K) {
  check_probabilities(p);
  if (subset.empty()) return K == 0 ? Rational(1) : Rational(0);
  int m = static_cast<int>(subset.size());
  Rational total(0);
  for (int bits = 0; bits < (1 << m); ++bits) {
    Rational mass(0);
    int size = 0;
    for (int i = 0; i < m; ++i) {
      if (bits & (1 << i)) {
        mass += p.at(static_cast<size_t>(subset[static_cast<size_t>(i)] - 1));
        ++size;
      }
    }
    Rational term = mass.pow(static_cast<unsigned>(K));
    total += (m - size) % 2 == 0 ? term : -term;
  }
  return total;
}

Rational r_pi(const std::vector<Rational>& t, const std::vector<int>& subset,
              const std::vector<int>& pi, int K) {
  if (pi.size() != subset.size())
    throw std::invalid_argument("r_pi: pi must arrange exactly the requested files");
  std::set<int> seen(pi.begin(), pi.end());
  if (seen != std::set<int>(subset.begin(), subset.end()))
    throw std::invalid_argument("r_pi: pi is not a bijection onto the subset");
  Rational total(0);
  for (size_t i = 0; i < pi.size(); ++i)
    total += coverage_interp(K, static_cast<int>(i) + 1,
                             t.at(static_cast<size_t>(pi[i] - 1)));
  return total;
}

Rational converse_at(const std::vector<Rational>& t, const std::vector<Rational>& p, int K) {
  check_probabilities(p);
  int N = static_cast<int>(p.size());
  if (static_cast<int>(t.size()) != N)
    throw std::invalid_argument("converse_at: allocation size mismatch");
  for (const auto& ti : t)
    if (ti < Rational(0) || ti > Rational(K))
      throw std::invalid_argument("converse_at: allocation out of [0, K]");
  Rational total(0);
  for (const auto& subset : nonempty_subsets(N)) {
    Rational prob = range_probability(subset, p, K);
    if (prob.is_zero()) continue;
    std::vector<int> pi = subset;
    Rational best = r_pi(t, subset, pi, K);
    while (std::next_permutation(pi.begin(), pi.end()))
      best = Rational::max(best, r_pi(t, subset, pi, K));
    total += prob * best;
  }
  return total;
}

namespace {

double coverage_interp_dbl(int K, int i, double t) {
  double n = std::floor(t);
  int ni = static_cast<int>(n);
  if (ni >= K) return static_cast<double>(binom(K - i, K)) / static_cast<double>(binom(K, K));
  double frac = t - n;
  double c0 = static_cast<double>(binom(K - i, ni)) / static_cast<double>(binom(K, ni));
  double c1 = static_cast<double>(binom(K - i, ni + 1)) / static_cast<double>(binom(K, ni + 1));
  return (1.0 - frac) * c0 + frac * c1;
}

}  // namespace

double converse_at_dbl(const std::vector<double>& t, const std::vector<double>& p, int K) {
  int N = static_cast<int>(p.size());
  double total = 0.0;
  for (int bits = 1; bits < (1 << N); ++bits) {
    // Inclusion-exclusion for P(Range = subset).
    double prob = 0.0;
    int m = 0;
    for (int i = 0; i < N; ++i)
      if (bits & (1 << i)) ++m;
    for (int sub = bits;; sub = (sub - 1) & bits) {
      double mass = 0.0;
      int size = 0;
      for (int i = 0; i < N; ++i) {
        if (sub & (1 << i)) {
          mass += p[static_cast<size_t>(i)];
          ++size;
        }
      }
      prob += ((m - size) % 2 == 0 ? 1.0 : -1.0) * std::pow(mass, K);
      if (sub == 0) break;
    }
    if (prob <= 0.0) continue;

    std::vector<int> subset;
    for (int i = 0; i < N; ++i)
      if (bits & (1 << i)) subset.push_back(i);
    std::vector<int> pi = subset;
    double best = -1.0;
    do {
      double value = 0.0;
      for (size_t i = 0; i < pi.size(); ++i)
        value += coverage_interp_dbl(K, static_cast<int>(i) + 1, t[static_cast<size_t>(pi[i])]);
      best = std::max(best, value);
    } while (std::next_permutation(pi.begin(), pi.end()));
    total += prob * best;
  }
  return total;
}

namespace {

struct LineSearchResult {
  double delta = 0.0;
  double value = 0.0;
};

// Exact-direction 1-D minimization of the convex objective along
// t + delta * (e_i - e_j): ternary search plus the integer crossings.
LineSearchResult line_search(std::vector<double>& t, const std::vector<double>& p, int K,
                             size_t i, size_t j) {
  double lo = std::max(-t[i], t[j] - K);
  double hi = std::min(K - t[i], t[j]);
  auto eval = [&](double d) {
    std::vector<double> probe = t;
    probe[i] += d;
    probe[j] -= d;
    probe[i] = std::clamp(probe[i], 0.0, static_cast<double>(K));
    probe[j] = std::clamp(probe[j], 0.0, static_cast<double>(K));
    return converse_at_dbl(probe, p, K);
  };
  double a = lo, b = hi;
  for (int iter = 0; iter < 200 && b - a > 1e-13; ++iter) {
    double m1 = a + (b - a) / 3.0, m2 = b - (b - a) / 3.0;
    if (eval(m1) <= eval(m2))
      b = m2;
    else
      a = m1;
  }
  LineSearchResult best{(a + b) / 2.0, eval((a + b) / 2.0)};
  auto consider = [&](double d) {
    if (d < lo - 1e-12 || d > hi + 1e-12) return;
    d = std::clamp(d, lo, hi);
    double v = eval(d);
    if (v < best.value) best = {d, v};
  };
  consider(lo);
  consider(hi);
  // Snap to the breakpoint lattice: integer crossings of both moving
  // coordinates near the ternary-search point.
  for (int off = -1; off <= 1; ++off) {
    consider(std::round(t[i] + best.delta) + off - t[i]);
    consider(t[j] - (std::round(t[j] - best.delta) + off));
  }
  return best;
}

Rational snap_to_grid(double x, long long den, const Rational& hi) {
  long long num = std::llround(x * static_cast<double>(den));
  Rational r(num, den);
  if (r < Rational(0)) r = Rational(0);
  if (r > hi) r = hi;
  return r;
}

}  // namespace

ConverseResult converse_bound(int K, int N, const std::vector<Rational>& p, const Rational& M) {
  check_probabilities(p);
  if (static_cast<int>(p.size()) != N)
    throw std::invalid_argument("converse_bound: p must have N entries");
  if (M < Rational(0) || M > Rational(N))
    throw std::invalid_argument("converse_bound: M must lie in [0, N]");
  Rational budget = Rational(K) * M;

  ConverseResult result;

  if (N == 1) {
    result.minimizer = {budget};
    result.value = converse_at(result.minimizer, p, K);
    result.exact = true;
    return result;
  }

  if (N == 2) {
    // Full breakpoint enumeration on the line t2 = budget - t1.
    Rational lo = Rational::max(Rational(0), budget - Rational(K));
    Rational hi = Rational::min(Rational(K), budget);
    std::vector<Rational> candidates = {lo, hi, budget / Rational(2)};
    for (long long z = lo.ceil(); z <= hi.floor(); ++z) {
      candidates.emplace_back(z);
      Rational mirrored = budget - Rational(z);
      if (mirrored >= lo && mirrored <= hi) candidates.push_back(mirrored);
    }
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
    bool first = true;
    for (const auto& t1 : candidates) {
      std::vector<Rational> t = {t1, budget - t1};
      Rational value = converse_at(t, p, K);
      if (first || value < result.value) {
        result.value = value;
        result.minimizer = t;
        first = false;
      }
    }
    result.exact = true;
    return result;
  }

  // N >= 3: multi-start descent along pairwise directions (doubles), then an
  // exact re-evaluation on a snapped rational point.
  std::vector<double> pd(p.size());
  for (size_t i = 0; i < p.size(); ++i) pd[i] = p[i].to_double();
  double budget_d = budget.to_double();

  std::vector<std::vector<double>> starts;
  starts.push_back(std::vector<double>(static_cast<size_t>(N), budget_d / N));
  {
    // Greedy: fill the most popular files first.
    std::vector<int> order(static_cast<size_t>(N));
    for (int i = 0; i < N; ++i) order[static_cast<size_t>(i)] = i;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      return pd[static_cast<size_t>(a)] > pd[static_cast<size_t>(b)];
    });
    std::vector<double> greedy(static_cast<size_t>(N), 0.0);
    double left = budget_d;
    for (int idx : order) {
      double take = std::min(left, static_cast<double>(K));
      greedy[static_cast<size_t>(idx)] = take;
      left -= take;
    }
    starts.push_back(std::move(greedy));
  }
  {
    // Half-integer grid, capped.
    std::vector<std::vector<double>> grid;
    std::vector<double> partial(static_cast<size_t>(N), 0.0);
    long long units = std::llround(budget_d * 2.0);
    std::function<void(int, long long)> rec = [&](int idx, long long left) {
      if (grid.size() > 4000) return;
      if (idx == N - 1) {
        if (left >= 0 && left <= 2 * K) {
          partial[static_cast<size_t>(idx)] = static_cast<double>(left) / 2.0;
          grid.push_back(partial);
        }
        return;
      }
      for (long long u = 0; u <= std::min<long long>(2 * K, left); ++u) {
        partial[static_cast<size_t>(idx)] = static_cast<double>(u) / 2.0;
        rec(idx + 1, left - u);
      }
    };
    if (std::abs(budget_d * 2.0 - static_cast<double>(units)) < 1e-9) rec(0, units);
    for (auto& g : grid) starts.push_back(std::move(g));
  }

  std::vector<double> best_t;
  double best_value = 0.0;
  bool have_best = false;
  for (auto& t : starts) {
    double value = converse_at_dbl(t, pd, K);
    for (int pass = 0; pass < 50; ++pass) {
      bool improved = false;
      for (size_t i = 0; i < t.size(); ++i) {
        for (size_t j = 0; j < t.size(); ++j) {
          if (i == j) continue;
          LineSearchResult ls = line_search(t, pd, K, i, j);
          if (ls.value < value - 1e-14) {
            t[i] = std::clamp(t[i] + ls.delta, 0.0, static_cast<double>(K));
            t[j] = std::clamp(t[j] - ls.delta, 0.0, static_cast<double>(K));
            value = ls.value;
            improved = true;
          }
        }
      }
      if (!improved) break;
    }
    if (!have_best || value < best_value) {
      best_value = value;
      best_t = t;
      have_best = true;
    }
  }

  // Snap to a rational point on the constraint plane and evaluate exactly.
  const long long grid_den = 5040 * static_cast<long long>(budget.den());
  std::vector<Rational> snapped(best_t.size());
  Rational left = budget;
  for (size_t i = 0; i + 1 < best_t.size(); ++i) {
    snapped[i] = snap_to_grid(best_t[i], grid_den, Rational::min(Rational(K), left));
    left -= snapped[i];
  }
  snapped.back() = left;
  if (snapped.back() < Rational(0) || snapped.back() > Rational(K)) {
    // Redistribute onto interior coordinates when the remainder fell outside.
    Rational excess = snapped.back() < Rational(0) ? snapped.back() : snapped.back() - Rational(K);
    snapped.back() -= excess;
    for (size_t i = 0; i + 1 < snapped.size() && !excess.is_zero(); ++i) {
      Rational room = excess > Rational(0) ? Rational(K) - snapped[i] : snapped[i];
      Rational move = excess > Rational(0) ? Rational::min(excess, room)
                                           : -Rational::min(-excess, room);
      snapped[i] += move;
      excess -= move;
    }
  }
  result.minimizer = snapped;
  result.value = converse_at(snapped, p, K);
  result.exact = false;

  // Certificate: numeric one-sided derivatives along feasible pairwise moves.
  std::vector<double> final_t(snapped.size());
  for (size_t i = 0; i < snapped.size(); ++i) final_t[i] = snapped[i].to_double();
  double f0 = converse_at_dbl(final_t, pd, K);
  double slack = 0.0;
  const double eps = 1e-7;
  for (size_t i = 0; i < final_t.size(); ++i) {
    for (size_t j = 0; j < final_t.size(); ++j) {
      if (i == j) continue;
      if (final_t[i] + eps > K || final_t[j] - eps < 0) continue;
      std::vector<double> probe = final_t;
      probe[i] += eps;
      probe[j] -= eps;
      slack = std::min(slack, (converse_at_dbl(probe, pd, K) - f0) / eps);
    }
  }
  result.certificate_slack = slack;

  // Record permutation ties at the minimizer.
  for (const auto& subset : nonempty_subsets(N)) {
    if (subset.size() < 2) continue;
    std::vector<int> pi = subset;
    std::vector<double> values;
    do {
      double v = 0.0;
      for (size_t i = 0; i < pi.size(); ++i)
        v += coverage_interp_dbl(K, static_cast<int>(i) + 1,
                                 final_t[static_cast<size_t>(pi[i] - 1)]);
      values.push_back(v);
    } while (std::next_permutation(pi.begin(), pi.end()));
    double top = *std::max_element(values.begin(), values.end());
    if (std::count_if(values.begin(), values.end(),
                      [&](double v) { return v > top - 1e-12; }) > 1) {
      std::ostringstream os;
      os << "{";
      for (size_t i = 0; i < subset.size(); ++i) os << (i ? "," : "") << subset[i];
      os << "}";
      result.tie_loci.push_back(os.str());
    }
  }
  return result;
}

}  // namespace nucache

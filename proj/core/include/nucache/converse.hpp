#pragma once

#include <string>
#include <vector>

#include "nucache/rational.hpp"

namespace nucache {

/// P(exactly the files in `subset` are requested) for K i.i.d. requests with
/// file probabilities p, by inclusion-exclusion over sub-subsets.
Rational range_probability(const std::vector<int>& subset, const std::vector<Rational>& p,
                           int K);

/// The lower-bound term contributed by one processing order `pi` of the
/// requested files: pi[i] is the (1-based) file handled at position i+1, and
/// position i+1 pays the floor-interpolated C(K-i-1, t)/C(K, t) coverage of
/// its file's allocation.
Rational r_pi(const std::vector<Rational>& t, const std::vector<int>& subset,
              const std::vector<int>& pi, int K);

/// Expected lower bound at a fixed allocation: sum over all non-empty file
/// subsets of range_probability * max over processing orders of r_pi.
Rational converse_at(const std::vector<Rational>& t, const std::vector<Rational>& p, int K);
double converse_at_dbl(const std::vector<double>& t, const std::vector<double>& p, int K);

struct ConverseResult {
  Rational value;
  std::vector<Rational> minimizer;
  /// True when the minimum was taken over the complete breakpoint set
  /// (N <= 2); for larger N the search is certified-numeric.
  bool exact = false;
  /// Numeric optimality certificate: the smallest one-sided directional
  /// derivative along feasible pairwise directions at the minimizer
  /// (non-negative up to tolerance at a true minimum).
  double certificate_slack = 0.0;
  /// Subsets whose permutation maximum is tied at the minimizer.
  std::vector<std::string> tie_loci;
};

/// min over allocations t (sum t_i = M*K, 0 <= t_i <= K) of converse_at.
/// For N <= 2 the objective restricted to the feasible line is piecewise
/// linear with breakpoints at integer coordinates and the symmetric point,
/// so the minimum is found exactly. For N >= 3 a multi-start descent over
/// pairwise directions plus breakpoint refinement is used and the result
/// carries a numeric certificate.
ConverseResult converse_bound(int K, int N, const std::vector<Rational>& p, const Rational& M);

}  // namespace nucache

#pragma once

#include <cstdint>
#include <vector>

namespace nucache {

using Symbol = std::uint32_t;

constexpr std::uint32_t kDefaultPrime = 65537;

bool is_prime(std::uint32_t n);

/// Dense row-major matrix over the prime field F_p. Entries live in [0, p).
/// Matrices are immutable in spirit: the coding paths construct them once
/// and only read afterwards.
struct FieldMatrix {
  int rows = 0;
  int cols = 0;
  std::uint32_t p = kDefaultPrime;
  std::vector<Symbol> data;

  FieldMatrix() = default;
  FieldMatrix(int rows_, int cols_, std::uint32_t p_);

  Symbol& at(int i, int j) { return data[static_cast<size_t>(i) * cols + j]; }
  Symbol at(int i, int j) const { return data[static_cast<size_t>(i) * cols + j]; }

  static FieldMatrix identity(int n, std::uint32_t p);
};

Symbol fp_add(Symbol a, Symbol b, std::uint32_t p);
Symbol fp_sub(Symbol a, Symbol b, std::uint32_t p);
Symbol fp_mul(Symbol a, Symbol b, std::uint32_t p);
Symbol fp_inv(Symbol a, std::uint32_t p);

/// Cauchy matrix 1/(x_i - y_j) with x_i = offset + i and y_j = offset + rows + j
/// (mod p). All evaluation points are distinct, so every square submatrix is
/// invertible; that is the property the peeling decoder leans on when it
/// drops known columns. Requires rows <= cols and rows + cols <= p.
FieldMatrix mds_cauchy(int rows, int cols, std::uint32_t p, std::uint32_t offset = 0);

FieldMatrix matmul(const FieldMatrix& a, const FieldMatrix& b);
FieldMatrix vstack(const FieldMatrix& top, const FieldMatrix& bottom);
FieldMatrix submatrix_cols(const FieldMatrix& m, const std::vector<int>& cols);

/// Exact rank over F_p by Gaussian elimination.
int rank(const FieldMatrix& m);

/// Determinant over F_p (square matrices).
Symbol determinant(const FieldMatrix& m);

/// Solves C_unknown * x = rhs_adjusted where C_unknown is `c` with the
/// columns in `known_cols` removed and rhs_adjusted already has the known
/// columns' contribution subtracted. rhs_adjusted is c.rows x w (one column
/// per payload position). The system must be square or overdetermined and
/// consistent; a singular or inconsistent system throws, since with MDS
/// inputs it signals a logic bug rather than a data condition.
FieldMatrix solve_after_drop(const FieldMatrix& c, const std::vector<int>& known_cols,
                             const FieldMatrix& rhs_adjusted);

}  // namespace nucache

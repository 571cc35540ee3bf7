#include "nucache/field.hpp"

#include <algorithm>
#include <stdexcept>

namespace nucache {

bool is_prime(std::uint32_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

FieldMatrix::FieldMatrix(int rows_, int cols_, std::uint32_t p_)
    : rows(rows_), cols(cols_), p(p_) {
  if (rows < 0 || cols < 0) throw std::invalid_argument("FieldMatrix: negative dimension");
  data.assign(static_cast<size_t>(rows) * cols, 0);
}

FieldMatrix FieldMatrix::identity(int n, std::uint32_t p) {
  FieldMatrix m(n, n, p);
  for (int i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

Symbol fp_add(Symbol a, Symbol b, std::uint32_t p) {
  std::uint64_t s = static_cast<std::uint64_t>(a) + b;
  return static_cast<Symbol>(s >= p ? s - p : s);
}

Symbol fp_sub(Symbol a, Symbol b, std::uint32_t p) {
  return a >= b ? a - b : static_cast<Symbol>(a + p - b);
}

Symbol fp_mul(Symbol a, Symbol b, std::uint32_t p) {
  return static_cast<Symbol>(static_cast<std::uint64_t>(a) * b % p);
}

Symbol fp_inv(Symbol a, std::uint32_t p) {
  if (a == 0) throw std::domain_error("fp_inv: zero has no inverse");
  // Extended Euclid on (a, p).
  std::int64_t t = 0, new_t = 1;
  std::int64_t r = p, new_r = a;
  while (new_r != 0) {
    std::int64_t q = r / new_r;
    std::int64_t tmp = t - q * new_t;
    t = new_t;
    new_t = tmp;
    tmp = r - q * new_r;
    r = new_r;
    new_r = tmp;
  }
  if (t < 0) t += p;
  return static_cast<Symbol>(t);
}

FieldMatrix mds_cauchy(int rows, int cols, std::uint32_t p, std::uint32_t offset) {
  if (!is_prime(p)) throw std::invalid_argument("mds_cauchy: p must be prime");
  if (rows > cols) throw std::invalid_argument("mds_cauchy: rows must not exceed cols");
  if (static_cast<std::uint64_t>(rows) + cols > p)
    throw std::invalid_argument("mds_cauchy: rows + cols must not exceed p");
  FieldMatrix m(rows, cols, p);
  for (int i = 0; i < rows; ++i) {
    Symbol xi = static_cast<Symbol>((offset + i) % p);
    for (int j = 0; j < cols; ++j) {
      Symbol yj = static_cast<Symbol>((offset + static_cast<std::uint64_t>(rows) + j) % p);
      m.at(i, j) = fp_inv(fp_sub(xi, yj, p), p);
    }
  }
  return m;
}

FieldMatrix matmul(const FieldMatrix& a, const FieldMatrix& b) {
  if (a.cols != b.rows || a.p != b.p) throw std::invalid_argument("matmul: shape mismatch");
  FieldMatrix out(a.rows, b.cols, a.p);
  for (int i = 0; i < a.rows; ++i) {
    for (int k = 0; k < a.cols; ++k) {
      std::uint64_t aik = a.at(i, k);
      if (aik == 0) continue;
      for (int j = 0; j < b.cols; ++j) {
        out.at(i, j) = static_cast<Symbol>(
            (out.at(i, j) + aik * b.at(k, j)) % a.p);
      }
    }
  }
  return out;
}

FieldMatrix vstack(const FieldMatrix& top, const FieldMatrix& bottom) {
  if (top.rows == 0 && top.cols == 0) return bottom;
  if (bottom.rows == 0 && bottom.cols == 0) return top;
  if (top.cols != bottom.cols || top.p != bottom.p)
    throw std::invalid_argument("vstack: shape mismatch");
  FieldMatrix out(top.rows + bottom.rows, top.cols, top.p);
  std::copy(top.data.begin(), top.data.end(), out.data.begin());
  std::copy(bottom.data.begin(), bottom.data.end(),
            out.data.begin() + static_cast<ptrdiff_t>(top.data.size()));
  return out;
}

FieldMatrix submatrix_cols(const FieldMatrix& m, const std::vector<int>& cols) {
  FieldMatrix out(m.rows, static_cast<int>(cols.size()), m.p);
  for (int i = 0; i < m.rows; ++i)
    for (size_t j = 0; j < cols.size(); ++j) out.at(i, static_cast<int>(j)) = m.at(i, cols[j]);
  return out;
}

namespace {

// In-place forward elimination; returns pivot columns. `work` is modified.
std::vector<int> eliminate(FieldMatrix& work) {
  std::vector<int> pivot_cols;
  int row = 0;
  for (int col = 0; col < work.cols && row < work.rows; ++col) {
    int pivot = -1;
    for (int i = row; i < work.rows; ++i) {
      if (work.at(i, col) != 0) {
        pivot = i;
        break;
      }
    }
    if (pivot < 0) continue;
    if (pivot != row)
      for (int j = 0; j < work.cols; ++j) std::swap(work.at(pivot, j), work.at(row, j));
    Symbol inv = fp_inv(work.at(row, col), work.p);
    for (int j = col; j < work.cols; ++j) work.at(row, j) = fp_mul(work.at(row, j), inv, work.p);
    for (int i = 0; i < work.rows; ++i) {
      if (i == row) continue;
      Symbol f = work.at(i, col);
      if (f == 0) continue;
      for (int j = col; j < work.cols; ++j)
        work.at(i, j) = fp_sub(work.at(i, j), fp_mul(f, work.at(row, j), work.p), work.p);
    }
    pivot_cols.push_back(col);
    ++row;
  }
  return pivot_cols;
}

}  // namespace

int rank(const FieldMatrix& m) {
  FieldMatrix work = m;
  return static_cast<int>(eliminate(work).size());
}

Symbol determinant(const FieldMatrix& m) {
  if (m.rows != m.cols) throw std::invalid_argument("determinant: matrix not square");
  FieldMatrix work = m;
  Symbol det = 1;
  for (int col = 0; col < work.cols; ++col) {
    int pivot = -1;
    for (int i = col; i < work.rows; ++i) {
      if (work.at(i, col) != 0) {
        pivot = i;
        break;
      }
    }
    if (pivot < 0) return 0;
    if (pivot != col) {
      for (int j = 0; j < work.cols; ++j) std::swap(work.at(pivot, j), work.at(col, j));
      det = fp_sub(0, det, work.p);
    }
    det = fp_mul(det, work.at(col, col), work.p);
    Symbol inv = fp_inv(work.at(col, col), work.p);
    for (int i = col + 1; i < work.rows; ++i) {
      Symbol f = fp_mul(work.at(i, col), inv, work.p);
      if (f == 0) continue;
      for (int j = col; j < work.cols; ++j)
        work.at(i, j) = fp_sub(work.at(i, j), fp_mul(f, work.at(col, j), work.p), work.p);
    }
  }
  return det;
}

FieldMatrix solve_after_drop(const FieldMatrix& c, const std::vector<int>& known_cols,
                             const FieldMatrix& rhs_adjusted) {
  if (rhs_adjusted.rows != c.rows || rhs_adjusted.p != c.p)
    throw std::invalid_argument("solve_after_drop: rhs shape mismatch");
  std::vector<bool> known(static_cast<size_t>(c.cols), false);
  for (int j : known_cols) {
    if (j < 0 || j >= c.cols) throw std::invalid_argument("solve_after_drop: bad column index");
    known[static_cast<size_t>(j)] = true;
  }
  std::vector<int> unknown_cols;
  for (int j = 0; j < c.cols; ++j)
    if (!known[static_cast<size_t>(j)]) unknown_cols.push_back(j);
  int n_unknown = static_cast<int>(unknown_cols.size());
  if (n_unknown > c.rows)
    throw std::invalid_argument("solve_after_drop: underdetermined system");

  int w = rhs_adjusted.cols;
  FieldMatrix aug(c.rows, n_unknown + w, c.p);
  for (int i = 0; i < c.rows; ++i) {
    for (int j = 0; j < n_unknown; ++j) aug.at(i, j) = c.at(i, unknown_cols[j]);
    for (int j = 0; j < w; ++j) aug.at(i, n_unknown + j) = rhs_adjusted.at(i, j);
  }
  std::vector<int> pivots = eliminate(aug);
  // Every unknown column must carry a pivot; a pivot in the rhs block or a
  // missing pivot means the reduced matrix was singular or inconsistent.
  int solved = 0;
  for (int col : pivots) {
    if (col >= n_unknown)
      throw std::runtime_error("solve_after_drop: inconsistent system (non-MDS input?)");
    ++solved;
  }
  if (solved < n_unknown)
    throw std::runtime_error("solve_after_drop: singular reduced system (non-MDS input?)");

  FieldMatrix x(n_unknown, w, c.p);
  for (int i = 0; i < solved; ++i)
    for (int j = 0; j < w; ++j) x.at(pivots[i], j) = aug.at(i, n_unknown + j);
  return x;
}

}  // namespace nucache

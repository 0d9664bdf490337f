#pragma once

// Test-only dense exact linear algebra, kept independent of the library's
// sparse elimination path so the two can cross-check each other.

#include <vector>

#include "wittkit/rational.hpp"
#include "wittkit/sparse_matrix.hpp"

namespace oracle {

using wittkit::Rational;
using DenseMatrix = std::vector<std::vector<Rational>>;

inline DenseMatrix to_dense(const wittkit::SparseRationalMatrix& m) {
  DenseMatrix d(m.rows(), std::vector<Rational>(m.cols(), Rational(0)));
  for (int r = 0; r < m.rows(); ++r)
    for (const auto& e : m.row(r)) d[r][e.col] = e.value;
  return d;
}

// Plain Gaussian elimination, first-nonzero pivoting.
inline int dense_rank(DenseMatrix a) {
  const int rows = static_cast<int>(a.size());
  const int cols = rows == 0 ? 0 : static_cast<int>(a[0].size());
  int rank = 0;
  int row = 0;
  for (int col = 0; col < cols && row < rows; ++col) {
    int pivot = -1;
    for (int r = row; r < rows; ++r)
      if (a[r][col] != 0) {
        pivot = r;
        break;
      }
    if (pivot < 0) continue;
    std::swap(a[row], a[pivot]);
    for (int r = 0; r < rows; ++r) {
      if (r == row || a[r][col] == 0) continue;
      const Rational f = a[r][col] / a[row][col];
      for (int c = col; c < cols; ++c) a[r][c] -= f * a[row][c];
    }
    ++row;
    ++rank;
  }
  return rank;
}

inline int dense_rank(const wittkit::SparseRationalMatrix& m) { return dense_rank(to_dense(m)); }

}  // namespace oracle

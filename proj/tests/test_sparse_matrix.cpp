#include <doctest.h>

#include <random>

#include "support/dense_oracle.hpp"
#include "wittkit/rational.hpp"
#include "wittkit/sparse_matrix.hpp"

using namespace wittkit;

namespace {

SparseRationalMatrix random_matrix(std::mt19937& rng, int rows, int cols, double density) {
  SparseRationalMatrix m(rows, cols);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::uniform_int_distribution<int> num(-4, 4);
  std::uniform_int_distribution<int> den(1, 3);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c)
      if (coin(rng) < density) m.set(r, c, Rational(num(rng), den(rng)));
  return m;
}

}  // namespace

TEST_CASE("rational parsing and formatting") {
  CHECK(rational_to_string(parse_rational("3/6")) == "1/2");
  CHECK(rational_to_string(parse_rational("-0.25")) == "-1/4");
  CHECK(rational_to_string(parse_rational("7")) == "7");
  CHECK(rational_to_string(parse_rational("0.5")) == "1/2");
  CHECK_THROWS_AS(parse_rational("a/b"), error);
  CHECK_THROWS_AS(parse_rational(""), error);
  CHECK(*exact_sqrt(Rational(1, 4)) == Rational(1, 2));
  CHECK(*exact_sqrt(Rational(9)) == 3);
  CHECK(!exact_sqrt(Rational(2)));
  CHECK(!exact_sqrt(Rational(-1)));
}

TEST_CASE("rank matches dense oracle on random matrices") {
  std::mt19937 rng(20240817);
  for (int trial = 0; trial < 60; ++trial) {
    const int rows = 1 + trial % 9;
    const int cols = 1 + (trial * 7) % 11;
    SparseRationalMatrix m = random_matrix(rng, rows, cols, 0.4);
    CAPTURE(trial);
    CHECK(matrix_rank(m) == oracle::dense_rank(m));
  }
}

TEST_CASE("kernel basis spans the exact kernel") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 40; ++trial) {
    const int rows = 2 + trial % 6;
    const int cols = 2 + (trial * 5) % 8;
    SparseRationalMatrix m = random_matrix(rng, rows, cols, 0.5);
    const auto basis = kernel_basis(m);
    CHECK(static_cast<int>(basis.size()) == m.cols() - matrix_rank(m));
    for (const auto& v : basis) {
      // m * v = 0
      std::vector<Rational> image(m.rows(), Rational(0));
      for (const auto& e : v)
        for (int r = 0; r < m.rows(); ++r) image[r] += m.get(r, e.col) * e.value;
      for (const auto& val : image) CHECK(val == 0);
    }
    // Kernel vectors are linearly independent.
    SparseRationalMatrix kmat = matrix_from_columns(m.cols(), basis);
    CHECK(matrix_rank(kmat) == static_cast<int>(basis.size()));
  }
}

TEST_CASE("solve recovers solutions and rejects inconsistency") {
  std::mt19937 rng(99);
  for (int trial = 0; trial < 30; ++trial) {
    const int rows = 2 + trial % 5;
    const int cols = 2 + (trial * 3) % 6;
    SparseRationalMatrix a = random_matrix(rng, rows, cols, 0.6);
    SparseRationalMatrix x_true = random_matrix(rng, cols, 2, 0.7);
    SparseRationalMatrix b = a.multiply(x_true);
    auto x = solve(a, b);
    REQUIRE(x.has_value());
    CHECK(a.multiply(*x) == b);
  }
  // x + y = 1, x + y = 2 has no solution.
  SparseRationalMatrix a(2, 2);
  a.set(0, 0, 1);
  a.set(0, 1, 1);
  a.set(1, 0, 1);
  a.set(1, 1, 1);
  SparseRationalMatrix b(2, 1);
  b.set(0, 0, 1);
  b.set(1, 0, 2);
  CHECK(!solve(a, b).has_value());
}

TEST_CASE("elimination is deterministic") {
  std::mt19937 rng(5150);
  SparseRationalMatrix m = random_matrix(rng, 12, 15, 0.3);
  const auto r1 = eliminate(m, true);
  const auto r2 = eliminate(m, true);
  CHECK(r1.rank == r2.rank);
  REQUIRE(r1.pivots.size() == r2.pivots.size());
  for (size_t i = 0; i < r1.pivots.size(); ++i) {
    CHECK(r1.pivots[i].row == r2.pivots[i].row);
    CHECK(r1.pivots[i].col == r2.pivots[i].col);
  }
  CHECK(r1.reduced == r2.reduced);
}

TEST_CASE("independent_columns_mod reduces against a span") {
  // space = {e0 + e1}, candidates: e0 - e1 (new), 2*e0 + 2*e1 (in span).
  std::vector<SparseVector> space{{{0, Rational(1)}, {1, Rational(1)}}};
  std::vector<SparseVector> candidates{
      {{0, Rational(1)}, {1, Rational(-1)}},
      {{0, Rational(2)}, {1, Rational(2)}},
  };
  const auto kept = independent_columns_mod(space, candidates);
  REQUIRE(kept.size() == 1);
  CHECK(kept[0] == 0);
}

TEST_CASE("symmetric signature by congruence") {
  SUBCASE("diagonal") {
    SparseRationalMatrix s(3, 3);
    s.set(0, 0, Rational(2));
    s.set(1, 1, Rational(-5));
    s.set(2, 2, Rational(1, 3));
    const auto sig = symmetric_signature(s);
    CHECK(sig.positive == 2);
    CHECK(sig.negative == 1);
    CHECK(sig.zero == 0);
    CHECK(sig.signature() == 1);
  }
  SUBCASE("hyperbolic plane contributes zero") {
    SparseRationalMatrix s(2, 2);
    s.set(0, 1, Rational(1));
    s.set(1, 0, Rational(1));
    const auto sig = symmetric_signature(s);
    CHECK(sig.positive == 1);
    CHECK(sig.negative == 1);
    CHECK(sig.signature() == 0);
  }
  SUBCASE("zero block counted as zero") {
    SparseRationalMatrix s(3, 3);
    s.set(0, 0, Rational(4));
    const auto sig = symmetric_signature(s);
    CHECK(sig.positive == 1);
    CHECK(sig.zero == 2);
  }
  SUBCASE("asymmetric input is rejected") {
    SparseRationalMatrix s(2, 2);
    s.set(0, 1, Rational(1));
    CHECK_THROWS_AS(symmetric_signature(s), error);
  }
}

TEST_CASE("congruence invariance of the signature") {
  std::mt19937 rng(31337);
  std::uniform_int_distribution<int> entry(-3, 3);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 + trial % 4;
    SparseRationalMatrix s(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        const Rational v(entry(rng));
        s.set(i, j, v);
        s.set(j, i, v);
      }
    // Random invertible T: unit upper triangular times unit lower triangular.
    SparseRationalMatrix t(n, n);
    for (int i = 0; i < n; ++i) t.set(i, i, 1);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (i != j && entry(rng) > 0) t.set(i, j, Rational(entry(rng)));
    if (matrix_rank(t) != n) continue;
    const auto transformed = t.transpose().multiply(s).multiply(t);
    CHECK(symmetric_signature(s).signature() == symmetric_signature(transformed).signature());
  }
}

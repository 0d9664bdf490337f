#pragma once

#include <algorithm>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "wittkit/errors.hpp"
#include "wittkit/rational.hpp"

namespace wittkit {

// Sparse matrix over Q. Rows hold column-sorted entries; zeros are never stored.
// All arithmetic is exact; elimination is deterministic for identical inputs.
class SparseRationalMatrix {
 public:
  struct Entry {
    int col;
    Rational value;
  };
  using Row = std::vector<Entry>;

  SparseRationalMatrix() : rows_(0), cols_(0) {}
  SparseRationalMatrix(int rows, int cols) : rows_(rows), cols_(cols), data_(rows) {}

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  const Row& row(int r) const { return data_[r]; }
  Row& mutable_row(int r) { return data_[r]; }

  // Inserts or overwrites; value 0 erases. Values are canonicalized on entry
  // (mpq comparisons assume canonical form).
  void set(int r, int c, Rational v) {
    v.canonicalize();
    Row& row = data_[r];
    auto it = std::lower_bound(row.begin(), row.end(), c,
                               [](const Entry& e, int col) { return e.col < col; });
    if (it != row.end() && it->col == c) {
      if (v == 0)
        row.erase(it);
      else
        it->value = std::move(v);
    } else if (v != 0) {
      row.insert(it, Entry{c, std::move(v)});
    }
  }

  void add(int r, int c, Rational v) {
    v.canonicalize();
    if (v == 0) return;
    Row& row = data_[r];
    auto it = std::lower_bound(row.begin(), row.end(), c,
                               [](const Entry& e, int col) { return e.col < col; });
    if (it != row.end() && it->col == c) {
      it->value += v;
      if (it->value == 0) row.erase(it);
    } else {
      row.insert(it, Entry{c, std::move(v)});
    }
  }

  Rational get(int r, int c) const {
    const Row& row = data_[r];
    auto it = std::lower_bound(row.begin(), row.end(), c,
                               [](const Entry& e, int col) { return e.col < col; });
    if (it != row.end() && it->col == c) return it->value;
    return Rational(0);
  }

  long nonzeros() const {
    long n = 0;
    for (const Row& r : data_) n += static_cast<long>(r.size());
    return n;
  }

  SparseRationalMatrix transpose() const {
    SparseRationalMatrix t(cols_, rows_);
    std::vector<size_t> counts(cols_, 0);
    for (const Row& r : data_)
      for (const Entry& e : r) counts[e.col]++;
    for (int c = 0; c < cols_; ++c) t.data_[c].reserve(counts[c]);
    for (int r = 0; r < rows_; ++r)
      for (const Entry& e : data_[r]) t.data_[e.col].push_back(Entry{r, e.value});
    return t;
  }

  SparseRationalMatrix multiply(const SparseRationalMatrix& other) const {
    if (cols_ != other.rows_) throw error(errc::malformed_input, "multiply: shape mismatch");
    SparseRationalMatrix result(rows_, other.cols_);
    std::map<int, Rational> acc;
    for (int r = 0; r < rows_; ++r) {
      acc.clear();
      for (const Entry& e : data_[r]) {
        for (const Entry& f : other.data_[e.col]) {
          auto [it, inserted] = acc.emplace(f.col, e.value * f.value);
          if (!inserted) it->second += e.value * f.value;
        }
      }
      Row& out = result.data_[r];
      out.reserve(acc.size());
      for (auto& [c, v] : acc)
        if (v != 0) out.push_back(Entry{c, v});
    }
    return result;
  }

  SparseRationalMatrix scaled(const Rational& factor) const {
    SparseRationalMatrix out(rows_, cols_);
    if (factor == 0) return out;
    for (int r = 0; r < rows_; ++r) {
      out.data_[r].reserve(data_[r].size());
      for (const Entry& e : data_[r]) out.data_[r].push_back(Entry{e.col, factor * e.value});
    }
    return out;
  }

  // Keeps the given rows/columns (renumbered by position in the index lists).
  SparseRationalMatrix submatrix(const std::vector<int>& row_ids,
                                 const std::vector<int>& col_ids) const {
    std::vector<int> col_pos(cols_, -1);
    for (size_t i = 0; i < col_ids.size(); ++i) col_pos[col_ids[i]] = static_cast<int>(i);
    SparseRationalMatrix out(static_cast<int>(row_ids.size()), static_cast<int>(col_ids.size()));
    for (size_t i = 0; i < row_ids.size(); ++i) {
      for (const Entry& e : data_[row_ids[i]]) {
        if (col_pos[e.col] >= 0) out.data_[i].push_back(Entry{col_pos[e.col], e.value});
      }
    }
    return out;
  }

  bool operator==(const SparseRationalMatrix& other) const {
    if (rows_ != other.rows_ || cols_ != other.cols_) return false;
    for (int r = 0; r < rows_; ++r) {
      const Row& a = data_[r];
      const Row& b = other.data_[r];
      if (a.size() != b.size()) return false;
      for (size_t i = 0; i < a.size(); ++i)
        if (a[i].col != b[i].col || a[i].value != b[i].value) return false;
    }
    return true;
  }

  friend class GaussianEliminator;

 private:
  int rows_, cols_;
  std::vector<Row> data_;
};

// A sparse vector, entries keyed by coordinate index, sorted, no zeros.
using SparseVector = std::vector<SparseRationalMatrix::Entry>;

inline void sparse_axpy(SparseVector& target, const Rational& coeff, const SparseVector& source) {
  if (coeff == 0 || source.empty()) return;
  SparseVector merged;
  merged.reserve(target.size() + source.size());
  auto a = target.begin();
  auto b = source.begin();
  while (a != target.end() || b != source.end()) {
    if (b == source.end() || (a != target.end() && a->col < b->col)) {
      merged.push_back(std::move(*a));
      ++a;
    } else if (a == target.end() || b->col < a->col) {
      merged.push_back({b->col, coeff * b->value});
      ++b;
    } else {
      Rational v = a->value + coeff * b->value;
      if (v != 0) merged.push_back({a->col, std::move(v)});
      ++a;
      ++b;
    }
  }
  target = std::move(merged);
}

inline SparseRationalMatrix matrix_from_columns(int rows, const std::vector<SparseVector>& cols) {
  SparseRationalMatrix m(rows, static_cast<int>(cols.size()));
  for (size_t c = 0; c < cols.size(); ++c)
    for (const auto& e : cols[c]) m.set(e.col, static_cast<int>(c), e.value);
  return m;
}

inline std::vector<SparseVector> columns_of(const SparseRationalMatrix& m) {
  std::vector<SparseVector> cols(m.cols());
  for (int r = 0; r < m.rows(); ++r)
    for (const auto& e : m.row(r)) cols[e.col].push_back({r, e.value});
  return cols;
}

struct Pivot {
  int row;
  int col;
};

struct EliminationResult {
  int rank = 0;
  std::vector<Pivot> pivots;          // in elimination order
  std::vector<int> pivot_row_of_col;  // -1 for free/ineligible columns
  std::vector<int> pivot_col_of_row;  // -1 for zeroed rows
  SparseRationalMatrix reduced;
};

// Markowitz-pivoted exact Gaussian elimination. The pivot minimizes
// (row_count-1)*(col_count-1) over a deterministic, capped candidate scan,
// preferring unit entries, with remaining ties broken by lowest row index
// then lowest column index. With jordan=true the pivot column is cleared
// from every row, so each pivot column survives only in its pivot row.
// Columns at indices >= pivot_col_limit are never chosen as pivots but are
// transformed along with the rest (used to carry right-hand sides).
class GaussianEliminator {
 public:
  GaussianEliminator(SparseRationalMatrix m, bool jordan, int pivot_col_limit = -1)
      : m_(std::move(m)),
        jordan_(jordan),
        pivot_col_limit_(pivot_col_limit < 0 ? m_.cols() : pivot_col_limit) {}

  EliminationResult run() {
    const int rows = m_.rows();
    const int cols = m_.cols();
    row_active_.assign(rows, true);
    col_active_.assign(cols, false);
    row_count_.assign(rows, 0);
    col_count_.assign(cols, 0);
    col_rows_.assign(cols, {});
    for (int c = 0; c < pivot_col_limit_; ++c) col_active_[c] = true;
    for (int r = 0; r < rows; ++r) {
      int active_entries = 0;
      for (const auto& e : m_.data_[r]) {
        col_rows_[e.col].push_back(r);
        if (col_active_[e.col]) {
          col_count_[e.col]++;
          active_entries++;
        }
      }
      row_count_[r] = active_entries;
    }
    for (int r = 0; r < rows; ++r) enqueue_row(r);
    for (int c = 0; c < cols; ++c) enqueue_col(c);

    EliminationResult res;
    res.pivot_row_of_col.assign(cols, -1);
    res.pivot_col_of_row.assign(rows, -1);

    while (true) {
      auto pivot = select_pivot();
      if (!pivot) break;
      const auto [pr, pc] = *pivot;
      eliminate_step(pr, pc);
      res.pivots.push_back({pr, pc});
      res.pivot_row_of_col[pc] = pr;
      res.pivot_col_of_row[pr] = pc;
      res.rank++;
    }
    res.reduced = std::move(m_);
    return res;
  }

 private:
  void enqueue_row(int r) {
    if (row_active_[r] && row_count_[r] > 0) rows_by_count_[row_count_[r]].insert(r);
  }
  void enqueue_col(int c) {
    if (col_active_[c] && col_count_[c] > 0) cols_by_count_[col_count_[c]].insert(c);
  }
  void remove_row_bucket(int r) {
    auto it = rows_by_count_.find(row_count_[r]);
    if (it != rows_by_count_.end()) {
      it->second.erase(r);
      if (it->second.empty()) rows_by_count_.erase(it);
    }
  }
  void remove_col_bucket(int c) {
    auto it = cols_by_count_.find(col_count_[c]);
    if (it != cols_by_count_.end()) {
      it->second.erase(c);
      if (it->second.empty()) cols_by_count_.erase(it);
    }
  }
  void set_row_count(int r, int count) {
    remove_row_bucket(r);
    row_count_[r] = count;
    enqueue_row(r);
  }
  void bump_col_count(int c, int delta) {
    remove_col_bucket(c);
    col_count_[c] += delta;
    enqueue_col(c);
  }

  struct Candidate {
    long score;
    bool non_unit;
    int row;
    int col;
    bool better_than(const Candidate& o) const {
      if (score != o.score) return score < o.score;
      if (non_unit != o.non_unit) return !non_unit;
      if (row != o.row) return row < o.row;
      return col < o.col;
    }
  };

  std::optional<std::pair<int, int>> select_pivot() {
    static constexpr int kCandidateCap = 24;
    std::optional<Candidate> best;
    int examined = 0;
    auto row_it = rows_by_count_.begin();
    auto col_it = cols_by_count_.begin();
    while (row_it != rows_by_count_.end() || col_it != cols_by_count_.end()) {
      int level = std::numeric_limits<int>::max();
      if (row_it != rows_by_count_.end()) level = std::min(level, row_it->first);
      if (col_it != cols_by_count_.end()) level = std::min(level, col_it->first);
      // Every candidate not yet scanned lies in a row and a column of count
      // >= level, so its score is at least (level-1)^2.
      if (best && best->score <= static_cast<long>(level - 1) * (level - 1)) break;
      if (row_it != rows_by_count_.end() && row_it->first == level) {
        for (int r : row_it->second) {
          if (examined >= kCandidateCap && best) break;
          consider_row(r, best);
          examined++;
        }
        ++row_it;
      }
      if (col_it != cols_by_count_.end() && col_it->first == level) {
        for (int c : col_it->second) {
          if (examined >= kCandidateCap && best) break;
          consider_col(c, best);
          examined++;
        }
        ++col_it;
      }
      if (examined >= kCandidateCap && best) break;
    }
    if (!best) return std::nullopt;
    return std::make_pair(best->row, best->col);
  }

  void consider_row(int r, std::optional<Candidate>& best) {
    for (const auto& e : m_.data_[r]) {
      if (!col_active_[e.col]) continue;
      Candidate c{static_cast<long>(row_count_[r] - 1) * (col_count_[e.col] - 1),
                  !(e.value == 1 || e.value == -1), r, e.col};
      if (!best || c.better_than(*best)) best = c;
    }
  }

  void consider_col(int c, std::optional<Candidate>& best) {
    for (int r : col_rows_[c]) {
      if (!row_active_[r]) continue;
      const Rational v = m_.get(r, c);
      if (v == 0) continue;  // stale index entry
      Candidate cand{static_cast<long>(row_count_[r] - 1) * (col_count_[c] - 1),
                     !(v == 1 || v == -1), r, c};
      if (!best || cand.better_than(*best)) best = cand;
    }
  }

  void eliminate_step(int pr, int pc) {
    const Rational pivot_value = m_.get(pr, pc);
    std::vector<int> targets;
    for (int r : col_rows_[pc]) {
      if (r == pr) continue;
      if (!jordan_ && !row_active_[r]) continue;
      if (m_.get(r, pc) == 0) continue;
      targets.push_back(r);
    }
    std::sort(targets.begin(), targets.end());
    targets.erase(std::unique(targets.begin(), targets.end()), targets.end());

    for (int r : targets) {
      const Rational factor = -m_.get(r, pc) / pivot_value;
      apply_row_update(r, factor, pr);
    }

    // Retire the pivot row and column from the active submatrix.
    remove_row_bucket(pr);
    row_active_[pr] = false;
    remove_col_bucket(pc);
    col_active_[pc] = false;
    for (const auto& e : m_.data_[pr])
      if (col_active_[e.col]) bump_col_count(e.col, -1);
  }

  // row[r] += factor * row[pr], maintaining counts for active rows/columns.
  void apply_row_update(int r, const Rational& factor, int pr) {
    const bool track = row_active_[r];
    const auto& src = m_.data_[pr];
    auto& dst = m_.data_[r];
    SparseRationalMatrix::Row merged;
    merged.reserve(dst.size() + src.size());
    auto a = dst.begin();
    auto b = src.begin();
    int active_nnz = 0;
    while (a != dst.end() || b != src.end()) {
      if (b == src.end() || (a != dst.end() && a->col < b->col)) {
        if (col_active_[a->col]) active_nnz++;
        merged.push_back(std::move(*a));
        ++a;
      } else if (a == dst.end() || b->col < a->col) {
        Rational v = factor * b->value;
        if (v != 0) {
          col_rows_[b->col].push_back(r);
          if (col_active_[b->col]) {
            active_nnz++;
            if (track) bump_col_count(b->col, 1);
          }
          merged.push_back({b->col, std::move(v)});
        }
        ++b;
      } else {
        Rational v = a->value + factor * b->value;
        if (v == 0) {
          if (track && col_active_[a->col]) bump_col_count(a->col, -1);
        } else {
          if (col_active_[a->col]) active_nnz++;
          merged.push_back({a->col, std::move(v)});
        }
        ++a;
        ++b;
      }
    }
    dst = std::move(merged);
    if (track) set_row_count(r, active_nnz);
  }

  SparseRationalMatrix m_;
  bool jordan_;
  int pivot_col_limit_;
  std::vector<bool> row_active_, col_active_;
  std::vector<int> row_count_, col_count_;
  std::vector<std::vector<int>> col_rows_;
  std::map<int, std::set<int>> rows_by_count_, cols_by_count_;
};

inline EliminationResult eliminate(const SparseRationalMatrix& m, bool jordan = false,
                                   int pivot_col_limit = -1) {
  return GaussianEliminator(m, jordan, pivot_col_limit).run();
}

inline int matrix_rank(const SparseRationalMatrix& m) { return eliminate(m, false).rank; }

// Basis of the right kernel: one sparse vector per free column, ascending by
// free-column index, free coordinate normalized to 1.
inline std::vector<SparseVector> kernel_basis(const SparseRationalMatrix& m) {
  EliminationResult res = eliminate(m, true);
  const int cols = m.cols();
  std::vector<SparseVector> contrib(cols);
  for (const Pivot& p : res.pivots) {
    const auto& row = res.reduced.row(p.row);
    const Rational pv = res.reduced.get(p.row, p.col);
    for (const auto& e : row) {
      if (e.col == p.col) continue;
      if (res.pivot_row_of_col[e.col] >= 0) continue;  // pivot columns of other rows: none after Jordan
      contrib[e.col].push_back({p.col, -e.value / pv});
    }
  }
  std::vector<SparseVector> basis;
  for (int c = 0; c < cols; ++c) {
    if (res.pivot_row_of_col[c] >= 0) continue;
    SparseVector v = std::move(contrib[c]);
    v.push_back({c, Rational(1)});
    std::sort(v.begin(), v.end(), [](const auto& x, const auto& y) { return x.col < y.col; });
    basis.push_back(std::move(v));
  }
  return basis;
}

// Solves A x = b for every column b of rhs; nullopt if any column is
// inconsistent. One elimination pass over [A | rhs].
inline std::optional<SparseRationalMatrix> solve(const SparseRationalMatrix& a,
                                                 const SparseRationalMatrix& rhs) {
  if (a.rows() != rhs.rows()) throw error(errc::malformed_input, "solve: row mismatch");
  SparseRationalMatrix aug(a.rows(), a.cols() + rhs.cols());
  for (int r = 0; r < a.rows(); ++r) {
    auto& row = aug.mutable_row(r);
    row.reserve(a.row(r).size() + rhs.row(r).size());
    for (const auto& e : a.row(r)) row.push_back({e.col, e.value});
    for (const auto& e : rhs.row(r)) row.push_back({a.cols() + e.col, e.value});
  }
  EliminationResult res = eliminate(aug, true, a.cols());
  for (int r = 0; r < aug.rows(); ++r) {
    if (res.pivot_col_of_row[r] >= 0) continue;
    if (!res.reduced.row(r).empty()) return std::nullopt;  // 0 = nonzero rhs
  }
  SparseRationalMatrix x(a.cols(), rhs.cols());
  for (const Pivot& p : res.pivots) {
    const Rational pv = res.reduced.get(p.row, p.col);
    for (const auto& e : res.reduced.row(p.row)) {
      if (e.col >= a.cols()) x.set(p.col, e.col - a.cols(), e.value / pv);
    }
  }
  return x;
}

// Basis of ker(A) modulo span(B): kernel vectors are generated lazily in
// ascending free-column order and reduced against the span; generation stops
// once `target` independent representatives are found (target < 0: no limit).
// Returns the reduced representatives.
inline std::vector<SparseVector> kernel_mod_span(const SparseRationalMatrix& a,
                                                 const std::vector<SparseVector>& span,
                                                 int target = -1) {
  EliminationResult res = eliminate(a, true);
  std::map<int, SparseVector> pivots;
  auto reduce = [&](SparseVector col) {
    while (!col.empty()) {
      auto it = pivots.find(col.back().col);
      if (it == pivots.end()) break;
      sparse_axpy(col, -col.back().value / it->second.back().value, it->second);
    }
    return col;
  };
  for (const SparseVector& s : span) {
    SparseVector col = reduce(s);
    if (!col.empty()) {
      const int low = col.back().col;
      pivots.emplace(low, std::move(col));
    }
  }
  // Per free column, the kernel vector reads off the reduced pivot rows.
  std::vector<SparseVector> contrib(a.cols());
  for (const Pivot& p : res.pivots) {
    const auto& row = res.reduced.row(p.row);
    const Rational pv = res.reduced.get(p.row, p.col);
    for (const auto& e : row) {
      if (e.col == p.col || res.pivot_row_of_col[e.col] >= 0) continue;
      contrib[e.col].push_back({p.col, -e.value / pv});
    }
  }
  std::vector<SparseVector> accepted;
  for (int c = 0; c < a.cols() && (target < 0 || (int)accepted.size() < target); ++c) {
    if (res.pivot_row_of_col[c] >= 0) continue;
    SparseVector v = std::move(contrib[c]);
    v.push_back({c, Rational(1)});
    std::sort(v.begin(), v.end(), [](const auto& x, const auto& y) { return x.col < y.col; });
    SparseVector reduced = reduce(std::move(v));
    if (!reduced.empty()) {
      const int low = reduced.back().col;
      accepted.push_back(reduced);
      pivots.emplace(low, std::move(reduced));
    }
  }
  return accepted;
}

// Column reduction of `candidates` against span(space), accepting candidates
// that enlarge the span. Pivot = lowest nonzero coordinate; deterministic.
// Returns indices of accepted candidates in ascending order.
inline std::vector<int> independent_columns_mod(const std::vector<SparseVector>& space,
                                                const std::vector<SparseVector>& candidates) {
  std::map<int, SparseVector> pivot_cols;
  auto reduce_column = [&](SparseVector col) {
    while (!col.empty()) {
      const int low = col.back().col;
      auto it = pivot_cols.find(low);
      if (it == pivot_cols.end()) break;
      const Rational factor = -col.back().value / it->second.back().value;
      sparse_axpy(col, factor, it->second);
    }
    return col;
  };
  for (const SparseVector& s : space) {
    SparseVector col = reduce_column(s);
    if (!col.empty()) {
      const int low = col.back().col;
      pivot_cols.emplace(low, std::move(col));
    }
  }
  std::vector<int> kept;
  for (size_t i = 0; i < candidates.size(); ++i) {
    SparseVector col = reduce_column(candidates[i]);
    if (!col.empty()) {
      const int low = col.back().col;
      pivot_cols.emplace(low, std::move(col));
      kept.push_back(static_cast<int>(i));
    }
  }
  return kept;
}

// Signature of a symmetric rational matrix by congruence diagonalization.
// A vanishing diagonal is repaired by a symmetric row/column add on the lowest
// off-diagonal nonzero, which splits hyperbolic blocks into a (+1,-1) pair.
struct SignatureCount {
  int positive = 0;
  int negative = 0;
  int zero = 0;
  int signature() const { return positive - negative; }
};

inline SignatureCount symmetric_signature(const SparseRationalMatrix& s) {
  if (s.rows() != s.cols()) throw error(errc::malformed_input, "signature of non-square matrix");
  const int n = s.rows();
  std::vector<std::vector<Rational>> a(n, std::vector<Rational>(n, Rational(0)));
  for (int r = 0; r < n; ++r)
    for (const auto& e : s.row(r)) a[r][e.col] = e.value;
  for (int r = 0; r < n; ++r)
    for (int c = r + 1; c < n; ++c)
      if (a[r][c] != a[c][r]) throw error(errc::malformed_input, "matrix is not symmetric");

  SignatureCount out;
  std::vector<bool> done(n, false);
  while (true) {
    int k = -1;
    for (int i = 0; i < n; ++i)
      if (!done[i] && a[i][i] != 0) {
        k = i;
        break;
      }
    if (k < 0) {
      int bi = -1, bj = -1;
      for (int i = 0; i < n && bi < 0; ++i) {
        if (done[i]) continue;
        for (int j = i + 1; j < n; ++j) {
          if (!done[j] && a[i][j] != 0) {
            bi = i;
            bj = j;
            break;
          }
        }
      }
      if (bi < 0) break;  // remaining block is identically zero
      for (int c = 0; c < n; ++c) a[bi][c] += a[bj][c];
      for (int r = 0; r < n; ++r) a[r][bi] += a[r][bj];
      k = bi;
    }
    const Rational pivot = a[k][k];
    if (pivot > 0)
      out.positive++;
    else
      out.negative++;
    for (int r = 0; r < n; ++r) {
      if (r == k || a[r][k] == 0) continue;
      const Rational factor = -a[r][k] / pivot;
      for (int c = 0; c < n; ++c) a[r][c] += factor * a[k][c];
    }
    for (int c = 0; c < n; ++c) {
      if (c == k || a[k][c] == 0) continue;
      const Rational factor = -a[k][c] / pivot;
      for (int r = 0; r < n; ++r) a[r][c] += factor * a[r][k];
    }
    done[k] = true;
  }
  for (int i = 0; i < n; ++i)
    if (!done[i]) out.zero++;
  return out;
}

}  // namespace wittkit

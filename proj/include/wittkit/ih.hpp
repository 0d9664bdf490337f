#pragma once

#include <algorithm>
#include <future>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "wittkit/errors.hpp"
#include "wittkit/simplicial_complex.hpp"
#include "wittkit/sparse_matrix.hpp"
#include "wittkit/stratification.hpp"

namespace wittkit {

// ---------------------------------------------------------------------------
// Perversities in the Goresky-MacPherson class:
// p(2) = 0 and p(k) <= p(k+1) <= p(k) + 1.
// ---------------------------------------------------------------------------

class Perversity {
 public:
  Perversity() : n_(1) {}

  static Perversity from_values(int n, std::vector<int> values, std::string label = "custom") {
    if (n < 2) {
      if (!values.empty()) throw error(errc::malformed_input, "perversity values below dimension 2");
      Perversity p;
      p.n_ = n;
      p.label_ = std::move(label);
      return p;
    }
    if (static_cast<int>(values.size()) != n - 1)
      throw error(errc::malformed_input, "perversity needs values p(2)..p(" + std::to_string(n) + ")");
    if (values[0] != 0) throw error(errc::malformed_input, "perversity must have p(2) = 0");
    for (size_t i = 1; i < values.size(); ++i) {
      if (values[i] < values[i - 1] || values[i] > values[i - 1] + 1)
        throw error(errc::malformed_input,
                    "perversity growth violated between k=" + std::to_string(i + 1) + " and k=" +
                        std::to_string(i + 2));
    }
    Perversity p;
    p.n_ = n;
    p.values_ = std::move(values);
    p.label_ = std::move(label);
    return p;
  }

  static Perversity zero(int n) {
    return from_values(n, std::vector<int>(std::max(n - 1, 0), 0), "zero");
  }
  static Perversity top(int n) {
    std::vector<int> v;
    for (int k = 2; k <= n; ++k) v.push_back(k - 2);
    return from_values(n, std::move(v), "top");
  }
  static Perversity lower_middle(int n) {
    std::vector<int> v;
    for (int k = 2; k <= n; ++k) v.push_back((k - 2) / 2);
    return from_values(n, std::move(v), "lower-middle");
  }
  static Perversity upper_middle(int n) {
    std::vector<int> v;
    for (int k = 2; k <= n; ++k) v.push_back((k - 1) / 2);  // ceil((k-2)/2)
    return from_values(n, std::move(v), "upper-middle");
  }

  int ambient_dimension() const { return n_; }
  const std::string& label() const { return label_; }

  int operator()(int k) const {
    if (k < 2 || k > n_) throw error(errc::degree_out_of_range, "perversity argument out of range");
    return values_[k - 2];
  }

  // t - p, where t(k) = k - 2.
  Perversity complementary() const {
    std::vector<int> v;
    for (int k = 2; k <= n_; ++k) v.push_back(k - 2 - values_[k - 2]);
    return from_values(n_, std::move(v), "complement(" + label_ + ")");
  }

  bool pointwise_leq(const Perversity& other) const {
    if (n_ != other.n_) throw error(errc::malformed_input, "perversity dimension mismatch");
    for (size_t i = 0; i < values_.size(); ++i)
      if (values_[i] > other.values_[i]) return false;
    return true;
  }

  bool operator==(const Perversity& other) const {
    return n_ == other.n_ && values_ == other.values_;
  }

  const std::vector<int>& values() const { return values_; }

 private:
  int n_;
  std::vector<int> values_;
  std::string label_;
};

inline std::pair<Perversity, Perversity> middle_perversities(int n) {
  if (n < 2) throw error(errc::degree_out_of_range, "middle perversities need dimension >= 2");
  return {Perversity::lower_middle(n), Perversity::upper_middle(n)};
}

// CLI syntax: lower-middle | upper-middle | zero | top | custom:v2,v3,...,vn
inline Perversity parse_perversity(const std::string& text, int n) {
  if (text == "lower-middle") return Perversity::lower_middle(n);
  if (text == "upper-middle") return Perversity::upper_middle(n);
  if (text == "zero") return Perversity::zero(n);
  if (text == "top") return Perversity::top(n);
  const std::string prefix = "custom:";
  if (text.rfind(prefix, 0) == 0) {
    std::vector<int> values;
    std::stringstream ss(text.substr(prefix.size()));
    std::string item;
    while (std::getline(ss, item, ',')) {
      try {
        values.push_back(std::stoi(item));
      } catch (const std::exception&) {
        throw error(errc::malformed_input, "bad perversity value '" + item + "'");
      }
    }
    return Perversity::from_values(n, std::move(values));
  }
  throw error(errc::malformed_input, "unknown perversity spec '" + text + "'");
}

inline std::vector<Perversity> builtin_perversities(int n) {
  return {Perversity::zero(n), Perversity::lower_middle(n), Perversity::upper_middle(n),
          Perversity::top(n)};
}

// ---------------------------------------------------------------------------
// Allowability and the intersection chain complex.
//
// A simplex sigma of degree i is allowable when for every k in {2..n}
//   dim(sigma cap X_{n-k}) <= i - k + p(k),
// with dim(empty) = -infinity. Skeleta must be full subcomplexes, so the
// intersection is the face spanned by the vertices of sigma lying in X_{n-k}.
// ---------------------------------------------------------------------------

namespace detail {

// Level of each vertex of k (position-indexed), reading X_j membership off f.
inline std::vector<int> vertex_levels(const SimplicialComplex& k, const Filtration& f) {
  std::vector<int> levels(k.count(0), f.ambient_dimension());
  for (int i = 0; i < k.count(0); ++i) levels[i] = f.level_of(k.simplices(0)[i]);
  return levels;
}

}  // namespace detail

inline bool simplex_allowable(const Simplex& sigma, int i, const Perversity& p, int n,
                              const SimplicialComplex& k,
                              const std::vector<int>& vertex_level_by_position) {
  const auto& verts = k.vertices();
  for (int kk = 2; kk <= n; ++kk) {
    const int j = n - kk;
    int vertices_in_skeleton = 0;
    for (int v : sigma) {
      const auto pos = std::lower_bound(verts.begin(), verts.end(), v) - verts.begin();
      if (vertex_level_by_position[pos] <= j) vertices_in_skeleton++;
    }
    if (vertices_in_skeleton == 0) continue;  // empty intersection, dim = -infinity
    if (vertices_in_skeleton - 1 > i - kk + p(kk)) return false;
  }
  return true;
}

// Indices (into the lexicographic degree-i basis) of allowable i-simplices.
inline std::vector<int> allowable_simplices(const SimplicialComplex& k, const Filtration& f,
                                            const Perversity& p, int i) {
  const int n = k.dimension();
  if (i < 0 || i > n) return {};
  const auto levels = detail::vertex_levels(k, f);
  std::vector<int> out;
  const auto& level = k.simplices(i);
  for (int idx = 0; idx < static_cast<int>(level.size()); ++idx)
    if (simplex_allowable(level[idx], i, p, n, k, levels)) out.push_back(idx);
  return out;
}

// IC_i = { xi in span(allowable i-simplices) : d xi in span(allowable (i-1)-simplices) },
// realized as a kernel of the boundary followed by projection onto the
// non-allowable coordinates.
struct ICDegree {
  std::vector<int> allowable;        // ascending simplex indices
  bool all_simplices_allowable = false;
  bool boundary_condition_vacuous = false;  // every (i-1)-simplex allowable
  int dim = 0;
  // Basis of IC_i as chains (coordinates = degree-i simplex indices). When the
  // boundary condition is vacuous the basis is the standard basis on
  // `allowable` and is left empty here.
  std::vector<SparseVector> basis;

  bool identity_basis() const { return boundary_condition_vacuous; }
};

struct IntersectionChainComplex {
  int n = 0;
  std::vector<ICDegree> degrees;  // 0..n
};

inline IntersectionChainComplex intersection_chain_complex(
    const SimplicialComplex& k, const Filtration& f, const Perversity& p,
    const std::vector<SparseRationalMatrix>* boundaries = nullptr) {
  const int n = k.dimension();
  IntersectionChainComplex ic;
  ic.n = n;
  ic.degrees.resize(n + 1);
  std::vector<std::vector<int>> allowable(n + 1);
  for (int i = 0; i <= n; ++i) allowable[i] = allowable_simplices(k, f, p, i);

  for (int i = 0; i <= n; ++i) {
    ICDegree& deg = ic.degrees[i];
    deg.allowable = allowable[i];
    deg.all_simplices_allowable = static_cast<int>(deg.allowable.size()) == k.count(i);
    const bool vacuous =
        i == 0 || static_cast<int>(allowable[i - 1].size()) == k.count(i - 1);
    deg.boundary_condition_vacuous = vacuous;
    if (vacuous) {
      deg.dim = static_cast<int>(deg.allowable.size());
      continue;
    }
    // Rows: non-allowable (i-1)-simplices; columns: allowable i-simplices.
    std::vector<int> bad_rows;
    {
      const auto& allowed = allowable[i - 1];
      size_t ptr = 0;
      for (int r = 0; r < k.count(i - 1); ++r) {
        if (ptr < allowed.size() && allowed[ptr] == r)
          ++ptr;
        else
          bad_rows.push_back(r);
      }
    }
    SparseRationalMatrix full = boundaries ? (*boundaries)[i] : boundary_matrix(k, i);
    SparseRationalMatrix restricted = full.submatrix(bad_rows, deg.allowable);
    const auto kernel = kernel_basis(restricted);
    deg.dim = static_cast<int>(kernel.size());
    deg.basis.reserve(kernel.size());
    for (const auto& v : kernel) {
      SparseVector chain;
      chain.reserve(v.size());
      for (const auto& e : v) chain.push_back({deg.allowable[e.col], e.value});
      deg.basis.push_back(std::move(chain));
    }
  }
  return ic;
}

// ---------------------------------------------------------------------------
// IH ranks and cycle bases
// ---------------------------------------------------------------------------

struct IHOptions {
  int subdivisions = 1;   // barycentric subdivisions before computing
  bool with_bases = true;
  int threads = 1;
};

struct IHResult {
  std::vector<int> ranks;    // degree 0..n
  std::vector<int> ic_dims;  // dim IC_i
  int subdivisions = 0;
  // Cycle bases per degree, as chains of the complex the engine ran on
  // (available when with_bases). Basis vectors are reduced mod boundaries.
  std::vector<std::vector<SparseVector>> bases;
};

// Core computation on a pair whose skeleta are full subcomplexes (vacuously
// true for trivial filtrations). No subdivision happens here. When
// bases_only_degree >= 0, cycle bases are computed for that degree alone.
inline IHResult ih_ranks_on(const SimplicialComplex& k, const Filtration& f, const Perversity& p,
                            bool with_bases = false, int threads = 1,
                            int bases_only_degree = -1) {
  const int n = k.dimension();
  if (p.ambient_dimension() != n)
    throw error(errc::malformed_input, "perversity dimension mismatch");
  std::vector<SparseRationalMatrix> boundaries(n + 1);
  for (int i = 1; i <= n; ++i) boundaries[i] = boundary_matrix(k, i);
  const auto ic = intersection_chain_complex(k, f, p, &boundaries);

  // D_i = boundary restricted to IC_i, as a map into chains of degree i-1.
  std::vector<SparseRationalMatrix> d(n + 2);
  for (int i = 1; i <= n; ++i) {
    const ICDegree& deg = ic.degrees[i];
    if (deg.identity_basis()) {
      if (deg.all_simplices_allowable)
        d[i] = boundaries[i];
      else {
        std::vector<int> all_rows(k.count(i - 1));
        for (int r = 0; r < k.count(i - 1); ++r) all_rows[r] = r;
        d[i] = boundaries[i].submatrix(all_rows, deg.allowable);
      }
    } else {
      d[i] = boundaries[i].multiply(matrix_from_columns(k.count(i), deg.basis));
    }
  }

  std::vector<int> rank_d(n + 2, 0);
  auto rank_task = [&](int i) { return matrix_rank(d[i]); };
  if (threads > 1) {
    std::vector<std::future<int>> futures(n + 1);
    for (int i = 1; i <= n; ++i)
      futures[i] = std::async(std::launch::async, rank_task, i);
    for (int i = 1; i <= n; ++i) rank_d[i] = futures[i].get();
  } else {
    for (int i = 1; i <= n; ++i) rank_d[i] = rank_task(i);
  }

  IHResult result;
  result.ranks.resize(n + 1);
  result.ic_dims.resize(n + 1);
  for (int i = 0; i <= n; ++i) {
    result.ic_dims[i] = ic.degrees[i].dim;
    result.ranks[i] = ic.degrees[i].dim - rank_d[i] - rank_d[i + 1];
  }

  if (with_bases) {
    result.bases.resize(n + 1);
    for (int i = 0; i <= n; ++i) {
      if (bases_only_degree >= 0 && i != bases_only_degree) continue;
      // Cycles of D_i in chain coordinates.
      std::vector<SparseVector> cycles;
      if (i == 0) {
        const ICDegree& deg = ic.degrees[0];
        if (deg.identity_basis()) {
          for (int idx : deg.allowable) cycles.push_back({{idx, Rational(1)}});
        } else {
          cycles = deg.basis;
        }
      } else {
        const auto kernel = kernel_basis(d[i]);
        const ICDegree& deg = ic.degrees[i];
        for (const auto& v : kernel) {
          if (deg.identity_basis()) {
            SparseVector chain;
            for (const auto& e : v) chain.push_back({deg.allowable[e.col], e.value});
            cycles.push_back(std::move(chain));
          } else {
            // chain = basis * v
            SparseVector chain;
            for (const auto& e : v) sparse_axpy(chain, e.value, deg.basis[e.col]);
            cycles.push_back(std::move(chain));
          }
        }
      }
      const std::vector<SparseVector> bounding = (i + 1 <= n) ? columns_of(d[i + 1])
                                                              : std::vector<SparseVector>{};
      // Reduce cycles mod boundaries; keep the reduced representatives.
      std::map<int, SparseVector> pivots;
      auto reduce = [&](SparseVector col) {
        while (!col.empty()) {
          auto it = pivots.find(col.back().col);
          if (it == pivots.end()) break;
          sparse_axpy(col, -col.back().value / it->second.back().value, it->second);
        }
        return col;
      };
      for (const auto& b : bounding) {
        SparseVector col = reduce(b);
        if (!col.empty()) pivots.emplace(col.back().col, std::move(col));
      }
      for (const auto& z : cycles) {
        SparseVector col = reduce(z);
        if (!col.empty()) {
          result.bases[i].push_back(col);
          pivots.emplace(col.back().col, std::move(col));
        }
      }
      if (static_cast<int>(result.bases[i].size()) != result.ranks[i])
        throw error(errc::malformed_input, "internal: cycle basis size disagrees with rank");
    }
  }
  return result;
}

// User-facing entry point. Stratified inputs are computed on a complex
// subdivided max(1, subdivisions) times so skeleta are full; trivial
// filtrations honor the requested count as-is (fullness is vacuous).
inline IHResult ih_ranks(const SimplicialComplex& k, const Filtration& f, const Perversity& p,
                         const IHOptions& opts = {}) {
  if (f.is_trivial()) {
    SimplicialComplex current = k;
    for (int r = 0; r < opts.subdivisions; ++r)
      current = barycentric_subdivide_once(current).complex;
    IHResult res = ih_ranks_on(current, Filtration::trivial(k.dimension()), p, opts.with_bases,
                               opts.threads);
    res.subdivisions = opts.subdivisions;
    return res;
  }
  const int rounds = std::max(1, opts.subdivisions);
  const PreparedSpace space = prepare_space(k, f, rounds);
  IHResult res =
      ih_ranks_on(space.complex, space.filtration, p, opts.with_bases, opts.threads);
  res.subdivisions = rounds;
  return res;
}

// Middle-perversity IH rank vector of a stratified link; the workhorse for
// Witt checks. Trivial link filtrations need no subdivision.
inline std::vector<int> link_ih_ranks(const StratifiedLink& link, const Perversity& p,
                                      int threads = 1) {
  if (link.filtration.is_trivial())
    return ih_ranks_on(link.complex, link.filtration, p, false, threads).ranks;
  IHOptions opts;
  opts.subdivisions = 1;
  opts.with_bases = false;
  opts.threads = threads;
  return ih_ranks(link.complex, link.filtration, p, opts).ranks;
}

// Link of a stratum with the well-definedness check wired to IH: up to three
// sample vertices must produce links with identical lower-middle IH ranks.
inline StratifiedLink verified_stratum_link(const PreparedSpace& space, int stratum_id,
                                            int threads = 1) {
  return stratum_link(space, stratum_id, [threads](const StratifiedLink& link) {
    return link_ih_ranks(link, Perversity::lower_middle(link.complex.dimension()), threads);
  });
}

struct IHComparison {
  std::vector<int> ranks_p;
  std::vector<int> ranks_q;
  std::vector<bool> equal_by_degree;
  bool all_equal = true;
};

inline IHComparison ih_compare(const SimplicialComplex& k, const Filtration& f,
                               const Perversity& p, const Perversity& q,
                               const IHOptions& opts = {}) {
  IHOptions o = opts;
  o.with_bases = false;
  IHComparison cmp;
  cmp.ranks_p = ih_ranks(k, f, p, o).ranks;
  cmp.ranks_q = ih_ranks(k, f, q, o).ranks;
  cmp.equal_by_degree.resize(cmp.ranks_p.size());
  for (size_t i = 0; i < cmp.ranks_p.size(); ++i) {
    cmp.equal_by_degree[i] = cmp.ranks_p[i] == cmp.ranks_q[i];
    if (!cmp.equal_by_degree[i]) cmp.all_equal = false;
  }
  return cmp;
}

}  // namespace wittkit

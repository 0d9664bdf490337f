#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <queue>
#include <string>
#include <vector>

#include <json.hpp>

#include "wittkit/errors.hpp"
#include "wittkit/rational.hpp"
#include "wittkit/sparse_matrix.hpp"

namespace wittkit {

// A simplex is a strictly increasing vertex tuple.
using Simplex = std::vector<int>;

inline Simplex canonical_simplex(Simplex s) {
  std::sort(s.begin(), s.end());
  for (size_t i = 1; i < s.size(); ++i)
    if (s[i] == s[i - 1])
      throw error(errc::malformed_input, "simplex with repeated vertex " + std::to_string(s[i]));
  return s;
}

inline bool is_face(const Simplex& face, const Simplex& of) {
  return std::includes(of.begin(), of.end(), face.begin(), face.end());
}

// A finite, purely n-dimensional simplicial complex, given by its facets,
// with the full face lattice materialized per dimension in lexicographic
// order. Immutable after construction.
class SimplicialComplex {
 public:
  SimplicialComplex() : dim_(-1) {}

  // Facets are canonicalized; purity and facet arity are enforced.
  static SimplicialComplex from_facets(int dimension, std::vector<Simplex> facets,
                                       std::string name = "") {
    if (dimension < 0) throw error(errc::malformed_input, "negative dimension");
    SimplicialComplex k;
    k.dim_ = dimension;
    k.name_ = std::move(name);
    for (Simplex& f : facets) {
      f = canonical_simplex(std::move(f));
      if (static_cast<int>(f.size()) != dimension + 1)
        throw error(errc::non_pure, "facet of dimension " + std::to_string((int)f.size() - 1) +
                                        " in a complex declared " + std::to_string(dimension) +
                                        "-dimensional");
    }
    std::sort(facets.begin(), facets.end());
    const auto dup = std::adjacent_find(facets.begin(), facets.end());
    if (dup != facets.end()) throw error(errc::malformed_input, "duplicate facet");
    if (facets.empty() && dimension > 0)
      throw error(errc::malformed_input, "positive-dimensional complex with no facets");
    k.faces_.assign(dimension + 1, {});
    k.faces_[dimension] = std::move(facets);
    for (int d = dimension; d > 0; --d) {
      std::vector<Simplex> lower;
      lower.reserve(k.faces_[d].size() * (d + 1));
      for (const Simplex& s : k.faces_[d]) {
        for (size_t omit = 0; omit < s.size(); ++omit) {
          Simplex f;
          f.reserve(s.size() - 1);
          for (size_t i = 0; i < s.size(); ++i)
            if (i != omit) f.push_back(s[i]);
          lower.push_back(std::move(f));
        }
      }
      std::sort(lower.begin(), lower.end());
      lower.erase(std::unique(lower.begin(), lower.end()), lower.end());
      k.faces_[d - 1] = std::move(lower);
    }
    k.rebuild_indices();
    return k;
  }

  int dimension() const { return dim_; }
  const std::string& name() const { return name_; }

  const std::vector<Simplex>& simplices(int k) const {
    if (k < 0 || k > dim_) {
      static const std::vector<Simplex> empty;
      return empty;
    }
    return faces_[k];
  }
  const std::vector<Simplex>& facets() const { return faces_[dim_]; }

  int count(int k) const {
    return (k < 0 || k > dim_) ? 0 : static_cast<int>(faces_[k].size());
  }

  std::vector<int> f_vector() const {
    std::vector<int> f(dim_ + 1);
    for (int k = 0; k <= dim_; ++k) f[k] = count(k);
    return f;
  }

  long euler_characteristic() const {
    long chi = 0;
    for (int k = 0; k <= dim_; ++k) chi += (k % 2 == 0 ? 1 : -1) * static_cast<long>(count(k));
    return chi;
  }

  const std::vector<int>& vertices() const { return vertex_list_; }

  // Index of a simplex in the lexicographic basis of its dimension; -1 if absent.
  int index_of(const Simplex& s) const {
    const int k = static_cast<int>(s.size()) - 1;
    if (k < 0 || k > dim_) return -1;
    const auto& level = faces_[k];
    auto it = std::lower_bound(level.begin(), level.end(), s);
    if (it != level.end() && *it == s) return static_cast<int>(it - level.begin());
    return -1;
  }

  bool contains(const Simplex& s) const { return index_of(s) >= 0; }

  // The facets of the subcomplex spanned by all faces of `generators`.
  // Generators need not have uniform dimension.
  static std::vector<Simplex> closure_facets(std::vector<Simplex> generators) {
    std::sort(generators.begin(), generators.end(),
              [](const Simplex& a, const Simplex& b) {
                return a.size() != b.size() ? a.size() > b.size() : a < b;
              });
    std::vector<Simplex> maximal;
    for (const Simplex& g : generators) {
      bool covered = false;
      for (const Simplex& m : maximal)
        if (is_face(g, m)) {
          covered = true;
          break;
        }
      if (!covered) maximal.push_back(g);
    }
    return maximal;
  }

 private:
  void rebuild_indices() {
    vertex_list_.clear();
    for (const Simplex& v : faces_[0]) vertex_list_.push_back(v[0]);
  }

  int dim_;
  std::string name_;
  std::vector<std::vector<Simplex>> faces_;
  std::vector<int> vertex_list_;
};

// ---------------------------------------------------------------------------
// complex-JSON: {"name": string, "dimension": n, "facets": [[int,...],...]}
// ---------------------------------------------------------------------------

inline SimplicialComplex load_complex(const nlohmann::json& doc) {
  if (!doc.is_object()) throw error(errc::malformed_input, "complex document must be an object");
  if (!doc.contains("dimension") || !doc["dimension"].is_number_integer())
    throw error(errc::malformed_input, "missing integer field 'dimension'");
  if (!doc.contains("facets") || !doc["facets"].is_array())
    throw error(errc::malformed_input, "missing array field 'facets'");
  const int n = doc["dimension"].get<int>();
  std::string name = doc.value("name", std::string());
  std::vector<Simplex> facets;
  for (const auto& f : doc["facets"]) {
    if (!f.is_array()) throw error(errc::malformed_input, "facet is not an array");
    Simplex s;
    for (const auto& v : f) {
      if (!v.is_number_integer()) throw error(errc::malformed_input, "vertex id is not an integer");
      s.push_back(v.get<int>());
    }
    facets.push_back(std::move(s));
  }
  return SimplicialComplex::from_facets(n, std::move(facets), std::move(name));
}

inline nlohmann::ordered_json complex_to_json(const SimplicialComplex& k) {
  nlohmann::ordered_json j;
  j["name"] = k.name();
  j["dimension"] = k.dimension();
  nlohmann::ordered_json facets = nlohmann::ordered_json::array();
  for (const Simplex& f : k.facets()) facets.push_back(f);
  j["facets"] = std::move(facets);
  return j;
}

// ---------------------------------------------------------------------------
// Boundary operator
// ---------------------------------------------------------------------------

// Matrix of \partial_k in the lexicographic bases, sign (-1)^i on omission of
// the i-th vertex. k = 0 gives the empty-row zero matrix.
inline SparseRationalMatrix boundary_matrix(const SimplicialComplex& k, int degree) {
  if (degree < 0 || degree > k.dimension())
    throw error(errc::degree_out_of_range,
                "boundary degree " + std::to_string(degree) + " outside [0, " +
                    std::to_string(k.dimension()) + "]");
  if (degree == 0) return SparseRationalMatrix(0, k.count(0));
  SparseRationalMatrix m(k.count(degree - 1), k.count(degree));
  const auto& level = k.simplices(degree);
  for (int c = 0; c < static_cast<int>(level.size()); ++c) {
    const Simplex& s = level[c];
    for (size_t omit = 0; omit < s.size(); ++omit) {
      Simplex f;
      f.reserve(s.size() - 1);
      for (size_t i = 0; i < s.size(); ++i)
        if (i != omit) f.push_back(s[i]);
      const int r = k.index_of(f);
      m.set(r, c, Rational(omit % 2 == 0 ? 1 : -1));
    }
  }
  return m;
}

// ---------------------------------------------------------------------------
// Orientation
// ---------------------------------------------------------------------------

struct OrientedComplex {
  const SimplicialComplex* base;
  std::vector<int> sign;  // per facet index, +1 or -1

  OrientedComplex reversed() const {
    OrientedComplex r = *this;
    for (int& s : r.sign) s = -s;
    return r;
  }
};

namespace detail {

// Sign of facet f's induced orientation on its codimension-one face obtained
// by omitting position i: (-1)^i.
inline int omission_sign(size_t i) { return i % 2 == 0 ? 1 : -1; }

}  // namespace detail

// Breadth-first propagation of facet signs across codimension-one faces shared
// by exactly two facets. The lexicographically first facet of each component
// is seeded +1. Faces shared by more than two facets do not propagate.
inline OrientedComplex orient(const SimplicialComplex& k) {
  const int n = k.dimension();
  const auto& facets = k.facets();
  if (n == 0) {
    OrientedComplex oc{&k, std::vector<int>(facets.size(), 1)};
    return oc;
  }
  // ridge index -> incident (facet, omitted position)
  std::vector<std::vector<std::pair<int, int>>> ridge_cofaces(k.count(n - 1));
  for (int f = 0; f < static_cast<int>(facets.size()); ++f) {
    const Simplex& s = facets[f];
    for (size_t omit = 0; omit < s.size(); ++omit) {
      Simplex r;
      r.reserve(s.size() - 1);
      for (size_t i = 0; i < s.size(); ++i)
        if (i != omit) r.push_back(s[i]);
      ridge_cofaces[k.index_of(r)].push_back({f, static_cast<int>(omit)});
    }
  }
  std::vector<int> sign(facets.size(), 0);
  for (int seed = 0; seed < static_cast<int>(facets.size()); ++seed) {
    if (sign[seed] != 0) continue;
    sign[seed] = 1;
    std::queue<int> queue;
    queue.push(seed);
    while (!queue.empty()) {
      const int f = queue.front();
      queue.pop();
      const Simplex& s = facets[f];
      for (size_t omit = 0; omit < s.size(); ++omit) {
        Simplex r;
        for (size_t i = 0; i < s.size(); ++i)
          if (i != omit) r.push_back(s[i]);
        const auto& cof = ridge_cofaces[k.index_of(r)];
        if (cof.size() != 2) continue;
        for (const auto& [g, gomit] : cof) {
          if (g == f) continue;
          // Induced orientations on the shared ridge must cancel.
          const int needed = -sign[f] * detail::omission_sign(omit) * detail::omission_sign(gomit);
          if (sign[g] == 0) {
            sign[g] = needed;
            queue.push(g);
          } else if (sign[g] != needed) {
            throw error(errc::non_orientable, "orientation conflict at facet " + std::to_string(g));
          }
        }
      }
    }
  }
  return OrientedComplex{&k, std::move(sign)};
}

// ---------------------------------------------------------------------------
// Barycentric subdivision
// ---------------------------------------------------------------------------

// One barycentric subdivision. The new vertex ids are the positions of the old
// simplices in the (dimension, lexicographic) ordering, so the operation is
// deterministic; `vertex_origin` maps each new vertex id to the old simplex it
// subdivides.
struct Subdivision {
  SimplicialComplex complex;
  std::vector<Simplex> vertex_origin;

  int vertex_of(const Simplex& old_simplex) const {
    auto it = std::lower_bound(vertex_origin.begin(), vertex_origin.end(), old_simplex,
                               [](const Simplex& a, const Simplex& b) {
                                 return a.size() != b.size() ? a.size() < b.size() : a < b;
                               });
    if (it != vertex_origin.end() && *it == old_simplex)
      return static_cast<int>(it - vertex_origin.begin());
    return -1;
  }
};

inline Subdivision barycentric_subdivide_once(const SimplicialComplex& k) {
  Subdivision out;
  std::vector<Simplex>& origin = out.vertex_origin;
  for (int d = 0; d <= k.dimension(); ++d)
    for (const Simplex& s : k.simplices(d)) origin.push_back(s);
  // origin is sorted by (size, lex) by construction.
  std::vector<Simplex> new_facets;
  const int n = k.dimension();
  std::vector<int> perm(n + 1);
  for (const Simplex& f : k.facets()) {
    std::iota(perm.begin(), perm.end(), 0);
    // Each permutation of the facet's vertices yields one maximal flag.
    do {
      Simplex flag_simplex(n + 1);
      Simplex partial;
      for (int i = 0; i <= n; ++i) {
        partial.push_back(f[perm[i]]);
        Simplex sorted_partial = partial;
        std::sort(sorted_partial.begin(), sorted_partial.end());
        flag_simplex[i] = out.vertex_of(sorted_partial);
      }
      std::sort(flag_simplex.begin(), flag_simplex.end());
      new_facets.push_back(std::move(flag_simplex));
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
  out.complex = SimplicialComplex::from_facets(n, std::move(new_facets),
                                               k.name().empty() ? "" : k.name() + "'");
  return out;
}

// r-fold subdivision; r = 0 is the identity.
inline SimplicialComplex barycentric_subdivide(const SimplicialComplex& k, int repetitions) {
  if (repetitions < 0) throw error(errc::malformed_input, "negative subdivision count");
  SimplicialComplex current = k;
  for (int r = 0; r < repetitions; ++r) current = barycentric_subdivide_once(current).complex;
  return current;
}

// ---------------------------------------------------------------------------
// Homology oracle
// ---------------------------------------------------------------------------

// Rational Betti numbers via exact sparse elimination:
// beta_k = dim ker d_k - rank d_{k+1}.
inline std::vector<int> homology_ranks(const SimplicialComplex& k) {
  const int n = k.dimension();
  std::vector<int> rank_d(n + 2, 0);
  for (int d = 1; d <= n; ++d) rank_d[d] = matrix_rank(boundary_matrix(k, d));
  std::vector<int> betti(n + 1);
  for (int d = 0; d <= n; ++d) {
    const int dim_kernel = k.count(d) - rank_d[d];
    betti[d] = dim_kernel - rank_d[d + 1];
  }
  return betti;
}

}  // namespace wittkit

#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "wittkit/errors.hpp"
#include "wittkit/simplicial_complex.hpp"

namespace wittkit {

// ---------------------------------------------------------------------------
// Filtration by closed skeleta X_0 <= X_1 <= ... <= X_{n-1} (X_n = K itself).
// Skeleta are stored as full closed simplex lists, sorted by (dim, lex).
// ---------------------------------------------------------------------------

class Filtration {
 public:
  Filtration() : n_(0) {}
  explicit Filtration(int n) : n_(n), skeleta_(std::max(n, 0)) {}

  static Filtration trivial(int n) { return Filtration(n); }

  // Builds X_j as the closure of the union of all generators listed for
  // levels <= j. Throws if a generator exceeds its skeleton dimension.
  static Filtration from_generators(int n, const std::map<int, std::vector<Simplex>>& generators) {
    Filtration f(n);
    std::vector<Simplex> accumulated;
    for (int j = 0; j < n; ++j) {
      auto it = generators.find(j);
      if (it != generators.end()) {
        for (const Simplex& raw : it->second) {
          Simplex s = canonical_simplex(raw);
          if (static_cast<int>(s.size()) - 1 > j)
            throw error(errc::malformed_input,
                        "skeleton " + std::to_string(j) + " lists a simplex of dimension " +
                            std::to_string(static_cast<int>(s.size()) - 1));
          accumulated.push_back(std::move(s));
        }
      }
      f.skeleta_[j] = close_simplices(accumulated);
    }
    for (auto& [level, gens] : generators) {
      (void)gens;
      if (level < 0 || level >= n)
        throw error(errc::malformed_input, "skeleton index " + std::to_string(level) +
                                               " outside [0, " + std::to_string(n - 1) + "]");
    }
    return f;
  }

  int ambient_dimension() const { return n_; }

  bool is_trivial() const {
    for (const auto& s : skeleta_)
      if (!s.empty()) return false;
    return true;
  }

  // All simplices of X_j, j in [0, n-1]; X_n is the whole complex.
  const std::vector<Simplex>& skeleton(int j) const {
    static const std::vector<Simplex> empty;
    if (j < 0) return empty;
    if (j >= n_) throw error(errc::degree_out_of_range, "skeleton index out of range");
    return skeleta_[j];
  }

  bool skeleton_contains(int j, const Simplex& s) const {
    if (j >= n_) return true;
    if (j < 0) return false;
    return std::binary_search(skeleta_[j].begin(), skeleta_[j].end(), s, simplex_order);
  }

  // Smallest j with s in X_j (n if s only lies in X_n).
  int level_of(const Simplex& s) const {
    for (int j = 0; j < n_; ++j)
      if (skeleton_contains(j, s)) return j;
    return n_;
  }

  static bool simplex_order(const Simplex& a, const Simplex& b) {
    return a.size() != b.size() ? a.size() < b.size() : a < b;
  }

  static std::vector<Simplex> close_simplices(const std::vector<Simplex>& generators) {
    std::set<Simplex, decltype(&simplex_order)> all(&simplex_order);
    std::function<void(const Simplex&)> visit = [&](const Simplex& s) {
      if (!all.insert(s).second) return;
      if (s.size() <= 1) return;
      for (size_t omit = 0; omit < s.size(); ++omit) {
        Simplex f;
        f.reserve(s.size() - 1);
        for (size_t i = 0; i < s.size(); ++i)
          if (i != omit) f.push_back(s[i]);
        visit(f);
      }
    };
    for (const Simplex& g : generators) visit(g);
    return std::vector<Simplex>(all.begin(), all.end());
  }

 private:
  int n_;
  std::vector<std::vector<Simplex>> skeleta_;
};

// filtration-JSON: {"skeleta": {"0": [[v],...], "1": [[v,w],...], ...}}
inline Filtration load_filtration(int n, const nlohmann::json& doc) {
  if (doc.is_null()) return Filtration::trivial(n);
  if (!doc.is_object()) throw error(errc::malformed_input, "filtration must be an object");
  std::map<int, std::vector<Simplex>> generators;
  if (doc.contains("skeleta")) {
    if (!doc["skeleta"].is_object())
      throw error(errc::malformed_input, "'skeleta' must be an object keyed by dimension");
    for (const auto& [key, value] : doc["skeleta"].items()) {
      int j = 0;
      try {
        j = std::stoi(key);
      } catch (const std::exception&) {
        throw error(errc::malformed_input, "skeleton key '" + key + "' is not an integer");
      }
      if (!value.is_array()) throw error(errc::malformed_input, "skeleton entry is not an array");
      std::vector<Simplex> gens;
      for (const auto& simplex : value) {
        Simplex s;
        for (const auto& v : simplex) s.push_back(v.get<int>());
        gens.push_back(std::move(s));
      }
      generators[j] = std::move(gens);
    }
  }
  return Filtration::from_generators(n, generators);
}

inline nlohmann::ordered_json filtration_to_json(const Filtration& f) {
  nlohmann::ordered_json skeleta = nlohmann::ordered_json::object();
  for (int j = 0; j < f.ambient_dimension(); ++j) {
    const auto& simplices = f.skeleton(j);
    // Emit only the levels that add something over the previous skeleton.
    std::vector<Simplex> fresh;
    for (const Simplex& s : simplices)
      if (!f.skeleton_contains(j - 1, s)) fresh.push_back(s);
    if (!fresh.empty()) {
      nlohmann::ordered_json arr = nlohmann::ordered_json::array();
      for (const Simplex& s : SimplicialComplex::closure_facets(fresh)) arr.push_back(s);
      skeleta[std::to_string(j)] = std::move(arr);
    }
  }
  nlohmann::ordered_json j;
  j["skeleta"] = std::move(skeleta);
  return j;
}

// ---------------------------------------------------------------------------
// Strata and the frontier poset
// ---------------------------------------------------------------------------

struct Stratum {
  int id = -1;
  int dim = -1;            // geometric dimension (max simplex dimension)
  int level = -1;          // skeleton level j with simplices in X_j \ X_{j-1}
  bool regular = false;    // level == n
  std::vector<Simplex> simplices;  // open part, sorted by (dim, lex)
};

class StrataPoset {
 public:
  int ambient_dimension = 0;
  std::vector<Stratum> strata;
  // less[a][b] true iff stratum a < stratum b (a in the frontier of b).
  std::vector<std::vector<bool>> less;
  std::vector<int> depth_of;  // longest chain strictly above each stratum
  int depth = 0;

  const Stratum& stratum(int id) const { return strata[id]; }
  int size() const { return static_cast<int>(strata.size()); }

  std::vector<int> singular_ids() const {
    std::vector<int> out;
    for (const Stratum& s : strata)
      if (!s.regular) out.push_back(s.id);
    return out;
  }
};

struct PseudomanifoldReport {
  bool pure = true;
  bool ridges_have_two_cofacets = true;
  bool regular_part_dense = true;
  std::vector<Simplex> bad_ridges;      // ridges with cofacet count != 2
  std::vector<Simplex> non_dense_witness;
  bool ok() const { return pure && ridges_have_two_cofacets && regular_part_dense; }
};

namespace detail {

// Marks every simplex that is a face of a regular (level n) simplex.
// Returns per-dimension boolean tables aligned with K's face lists.
inline std::vector<std::vector<bool>> faces_of_regular(const SimplicialComplex& k,
                                                       const Filtration& f) {
  const int n = k.dimension();
  std::vector<std::vector<bool>> marked(n + 1);
  for (int d = 0; d <= n; ++d) marked[d].assign(k.count(d), false);
  for (int d = n; d >= 0; --d) {
    const auto& level = k.simplices(d);
    for (int i = 0; i < static_cast<int>(level.size()); ++i) {
      if (!marked[d][i] && f.level_of(level[i]) == n) marked[d][i] = true;
      if (!marked[d][i] || d == 0) continue;
      const Simplex& s = level[i];
      for (size_t omit = 0; omit < s.size(); ++omit) {
        Simplex face;
        for (size_t j = 0; j < s.size(); ++j)
          if (j != omit) face.push_back(s[j]);
        marked[d - 1][k.index_of(face)] = true;
      }
    }
  }
  return marked;
}

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

}  // namespace detail

inline PseudomanifoldReport check_pseudomanifold(const SimplicialComplex& k, const Filtration& f) {
  PseudomanifoldReport report;
  const int n = k.dimension();
  // (a) purity holds by construction of SimplicialComplex; recorded for the report.
  report.pure = true;
  // (b) every ridge lies in exactly two facets. Ridges have dimension n-1 >
  // n-2, so none can belong to X_{n-2}.
  if (n >= 1) {
    std::vector<int> cofacets(k.count(n - 1), 0);
    for (const Simplex& facet : k.facets()) {
      for (size_t omit = 0; omit < facet.size(); ++omit) {
        Simplex r;
        for (size_t i = 0; i < facet.size(); ++i)
          if (i != omit) r.push_back(facet[i]);
        cofacets[k.index_of(r)]++;
      }
    }
    for (int i = 0; i < k.count(n - 1); ++i) {
      if (cofacets[i] != 2) {
        report.ridges_have_two_cofacets = false;
        report.bad_ridges.push_back(k.simplices(n - 1)[i]);
      }
    }
  }
  // (c) density of the regular part: every simplex is a face of a regular one.
  const auto marked = detail::faces_of_regular(k, f);
  for (int d = 0; d <= n; ++d) {
    for (int i = 0; i < k.count(d); ++i) {
      if (!marked[d][i]) {
        report.regular_part_dense = false;
        report.non_dense_witness.push_back(k.simplices(d)[i]);
      }
    }
  }
  return report;
}

// Strata as connected components of X_j \ X_{j-1}, the frontier partial
// order, density, and per-stratum depth. Stratum ids are assigned by
// (dimension, lexicographically smallest member simplex).
inline StrataPoset validate_filtration(const SimplicialComplex& k, const Filtration& f) {
  const int n = k.dimension();
  if (f.ambient_dimension() != n)
    throw error(errc::malformed_input, "filtration dimension mismatch");

  // No codimension-one stratum: X_{n-1} must equal X_{n-2}.
  if (n >= 1) {
    for (const Simplex& s : f.skeleton(n - 1)) {
      if (!f.skeleton_contains(n - 2, s))
        throw error(errc::codim_one_stratum,
                    "X_" + std::to_string(n - 1) + " strictly contains X_" + std::to_string(n - 2));
    }
  }

  // Density of the regular part.
  {
    const auto marked = detail::faces_of_regular(k, f);
    for (int d = 0; d <= n; ++d)
      for (int i = 0; i < k.count(d); ++i)
        if (!marked[d][i])
          throw error(errc::not_dense, "simplex with no regular cofacet in skeleton level " +
                                           std::to_string(f.level_of(k.simplices(d)[i])));
  }

  // Levels for every simplex, plus flat ids (prefix offsets per dimension).
  std::vector<std::vector<int>> level_of(n + 1);
  std::vector<int> offset(n + 2, 0);
  for (int d = 0; d <= n; ++d) {
    offset[d + 1] = offset[d] + k.count(d);
    level_of[d].resize(k.count(d));
    for (int i = 0; i < k.count(d); ++i) level_of[d][i] = f.level_of(k.simplices(d)[i]);
  }
  const int total = offset[n + 1];

  // Connected components of each open part: simplices are adjacent when one
  // is a face of the other and both lie in the same open part.
  detail::UnionFind uf(total);
  for (int d = 1; d <= n; ++d) {
    for (int i = 0; i < k.count(d); ++i) {
      const Simplex& s = k.simplices(d)[i];
      for (size_t omit = 0; omit < s.size(); ++omit) {
        Simplex face;
        for (size_t j = 0; j < s.size(); ++j)
          if (j != omit) face.push_back(s[j]);
        const int fi = k.index_of(face);
        if (level_of[d][i] == level_of[d - 1][fi]) uf.unite(offset[d] + i, offset[d - 1] + fi);
      }
    }
  }

  std::map<int, std::vector<std::pair<int, int>>> components;  // root -> (dim, index)
  for (int d = 0; d <= n; ++d)
    for (int i = 0; i < k.count(d); ++i) components[uf.find(offset[d] + i)].push_back({d, i});

  StrataPoset poset;
  poset.ambient_dimension = n;
  struct Draft {
    int level;
    int dim;
    std::vector<Simplex> simplices;
    int root;
  };
  std::vector<Draft> drafts;
  for (auto& [root, members] : components) {
    Draft d;
    d.root = root;
    d.level = level_of[members.front().first][members.front().second];
    d.dim = 0;
    for (auto& [dim, idx] : members) {
      d.dim = std::max(d.dim, dim);
      d.simplices.push_back(k.simplices(dim)[idx]);
    }
    std::sort(d.simplices.begin(), d.simplices.end(), Filtration::simplex_order);
    drafts.push_back(std::move(d));
  }
  std::sort(drafts.begin(), drafts.end(), [](const Draft& a, const Draft& b) {
    if (a.dim != b.dim) return a.dim < b.dim;
    return Filtration::simplex_order(a.simplices.front(), b.simplices.front());
  });
  std::vector<int> stratum_of_root_flat(total, -1);
  for (int i = 0; i < static_cast<int>(drafts.size()); ++i) {
    Stratum s;
    s.id = i;
    s.dim = drafts[i].dim;
    s.level = drafts[i].level;
    s.regular = drafts[i].level == n;
    s.simplices = std::move(drafts[i].simplices);
    stratum_of_root_flat[drafts[i].root] = i;
    poset.strata.push_back(std::move(s));
  }
  auto stratum_of = [&](int d, int i) { return stratum_of_root_flat[uf.find(offset[d] + i)]; };

  // Frontier relation with the partial-containment check (axiom i): count, per
  // pair (a, b), how many simplices of a lie in closure(b); a nonzero count
  // short of |a| is a frontier violation. Closures of singular strata (small)
  // are enumerated directly; closures of regular strata are gathered from the
  // face sets of their facets.
  const int m = poset.size();
  poset.less.assign(m, std::vector<bool>(m, false));
  std::vector<std::map<int, size_t>> coverage(m);  // a -> b -> count
  for (int b = 0; b < m; ++b) {
    if (poset.strata[b].regular) continue;
    for (const Simplex& s : Filtration::close_simplices(poset.strata[b].simplices)) {
      const int a = stratum_of(static_cast<int>(s.size()) - 1, k.index_of(s));
      if (a != b) coverage[a][b]++;
    }
  }
  {
    std::map<int, std::set<int>> regular_faces;  // regular stratum -> flat face ids
    for (int fi = 0; fi < k.count(n); ++fi) {
      const Simplex& facet = k.simplices(n)[fi];
      const int b = stratum_of(n, fi);
      const int subsets = (1 << (n + 1)) - 1;
      for (int mask = 1; mask < subsets; ++mask) {
        Simplex face;
        for (int bit = 0; bit <= n; ++bit)
          if (mask & (1 << bit)) face.push_back(facet[bit]);
        const int d = static_cast<int>(face.size()) - 1;
        const int idx = k.index_of(face);
        if (stratum_of(d, idx) != b) regular_faces[b].insert(offset[d] + idx);
      }
    }
    for (auto& [b, faces] : regular_faces) {
      for (int flat : faces) {
        const int d = static_cast<int>(std::upper_bound(offset.begin(), offset.end(), flat) -
                                       offset.begin()) -
                      1;
        coverage[stratum_of(d, flat - offset[d])][b]++;
      }
    }
  }
  for (int a = 0; a < m; ++a) {
    for (auto& [b, cnt] : coverage[a]) {
      if (cnt != poset.strata[a].simplices.size())
        throw error(errc::frontier_violation,
                    "stratum " + std::to_string(a) + " meets the closure of stratum " +
                        std::to_string(b) + " only partially");
      poset.less[a][b] = true;
    }
  }

  // Longest ascending chain above each stratum.
  poset.depth_of.assign(m, -1);
  std::function<int(int)> depth_above = [&](int a) -> int {
    if (poset.depth_of[a] >= 0) return poset.depth_of[a];
    int best = 0;
    for (int b = 0; b < m; ++b)
      if (poset.less[a][b]) best = std::max(best, 1 + depth_above(b));
    return poset.depth_of[a] = best;
  };
  for (int a = 0; a < m; ++a) depth_above(a);
  poset.depth = 0;
  for (int a = 0; a < m; ++a) poset.depth = std::max(poset.depth, poset.depth_of[a]);
  return poset;
}

inline int depth(const StrataPoset& poset) { return poset.depth; }

// ---------------------------------------------------------------------------
// Prepared (subdivided) spaces
// ---------------------------------------------------------------------------

// A complex subdivided r >= 1 times, with the filtration transported, every
// skeleton a full subcomplex, and each vertex tagged with the stratum of the
// original complex whose open part contains it.
struct PreparedSpace {
  SimplicialComplex complex;
  Filtration filtration;
  StrataPoset poset;               // poset of the ORIGINAL input
  std::vector<int> vertex_level;   // per subdivided vertex id
  std::vector<int> vertex_stratum; // per subdivided vertex id -> original stratum
  int subdivisions = 0;

  bool vertex_in_skeleton(int vertex, int j) const {
    if (j >= complex.dimension()) return true;
    if (j < 0) return false;
    return vertex_level[static_cast<size_t>(vertex)] <= j;
  }
};

namespace detail {

inline int stratum_of_simplex(const Simplex& s, const std::map<Simplex, int>& lookup) {
  auto it = lookup.find(s);
  if (it == lookup.end()) throw error(errc::malformed_input, "simplex missing from strata");
  return it->second;
}

}  // namespace detail

inline PreparedSpace prepare_space(const SimplicialComplex& k, const Filtration& f,
                                   int subdivisions) {
  if (subdivisions < 1)
    throw error(errc::malformed_input, "prepare_space requires at least one subdivision");
  PreparedSpace out;
  out.poset = validate_filtration(k, f);
  out.subdivisions = subdivisions;

  // Simplex -> stratum id lookup on the original complex.
  std::map<Simplex, int> stratum_lookup;
  for (const Stratum& s : out.poset.strata)
    for (const Simplex& simplex : s.simplices) stratum_lookup[simplex] = s.id;

  SimplicialComplex current = k;
  Filtration current_f = f;
  std::vector<int> vlevel, vstratum;  // valid after the first round

  for (int round = 0; round < subdivisions; ++round) {
    Subdivision sd = barycentric_subdivide_once(current);

    // Tag each new vertex (an old simplex) with level and original stratum.
    std::vector<int> new_vlevel(sd.vertex_origin.size());
    std::vector<int> new_vstratum(sd.vertex_origin.size());
    for (size_t v = 0; v < sd.vertex_origin.size(); ++v) {
      const Simplex& origin = sd.vertex_origin[v];
      if (round == 0) {
        new_vlevel[v] = current_f.level_of(origin);
        new_vstratum[v] = detail::stratum_of_simplex(origin, stratum_lookup);
      } else {
        // origin is a simplex of the previous subdivided complex; its interior
        // lies in the open stratum of its top (largest-origin) vertex.
        int lvl = 0;
        int top_vertex = origin.back();
        for (int w : origin) lvl = std::max(lvl, vlevel[w]);
        // The chain's top element is the vertex whose own origin has maximal
        // dimension; vertex ids are ordered by (dimension, lex), so it is the
        // largest id in the simplex.
        new_vlevel[v] = lvl;
        new_vstratum[v] = vstratum[top_vertex];
      }
    }

    // Transport the filtration: X_j(Sd) is spanned by vertices of level <= j.
    const int n = current.dimension();
    std::map<int, std::vector<Simplex>> gens;
    for (int d = 0; d <= n; ++d) {
      for (const Simplex& s : sd.complex.simplices(d)) {
        int lvl = 0;
        for (int w : s) lvl = std::max(lvl, new_vlevel[w]);
        if (lvl < n) gens[lvl].push_back(s);
      }
    }
    current = std::move(sd.complex);
    current_f = Filtration::from_generators(n, gens);
    vlevel = std::move(new_vlevel);
    vstratum = std::move(new_vstratum);
  }

  out.complex = std::move(current);
  out.filtration = std::move(current_f);
  out.vertex_level = std::move(vlevel);
  out.vertex_stratum = std::move(vstratum);
  return out;
}

// ---------------------------------------------------------------------------
// Links
// ---------------------------------------------------------------------------

struct StratifiedLink {
  SimplicialComplex complex;
  Filtration filtration;
  int link_dimension = -1;  // f = n - dim Y - 1
  int stratum_id = -1;
  int sample_vertex = -1;
};

// Raw normal-link extraction at a sample simplex of the prepared space. For a
// point stratum the sample is a vertex and this is the (frontier-upward) full
// subcomplex of its vertex link; for a d-dimensional stratum the sample is a
// top-dimensional simplex tau of the open stratum, whose link in the ambient
// complex is the normal link (the vertex link would join in the tangential
// S^{d-1} as well and come out d dimensions too big).
inline StratifiedLink extract_link_at_simplex(const PreparedSpace& space, const Simplex& tau) {
  const SimplicialComplex& k = space.complex;
  const int n = k.dimension();
  const int stratum_id = space.vertex_stratum[tau.front()];
  const Stratum& y = space.poset.stratum(stratum_id);
  if (y.regular)
    throw error(errc::invalid_stratum, "links are only formed for singular strata");
  const int d = y.dim;
  if (static_cast<int>(tau.size()) != d + 1)
    throw error(errc::invalid_stratum, "link sample must be a top-dimensional stratum simplex");

  std::vector<Simplex> link_facets;
  for (const Simplex& facet : k.facets()) {
    if (!std::includes(facet.begin(), facet.end(), tau.begin(), tau.end())) continue;
    Simplex rest;
    for (int w : facet)
      if (!std::binary_search(tau.begin(), tau.end(), w)) rest.push_back(w);
    // Keep only vertices in strata strictly above the stratum of tau.
    Simplex upward;
    for (int w : rest) {
      const int sw = space.vertex_stratum[w];
      if (sw != stratum_id && space.poset.less[stratum_id][sw]) upward.push_back(w);
    }
    if (!upward.empty()) link_facets.push_back(std::move(upward));
  }
  link_facets = SimplicialComplex::closure_facets(std::move(link_facets));
  if (link_facets.empty())
    throw error(errc::link_dimension_mismatch, "empty link at stratum sample");
  const int f_dim = static_cast<int>(link_facets.front().size()) - 1;
  for (const Simplex& s : link_facets)
    if (static_cast<int>(s.size()) - 1 != f_dim)
      throw error(errc::link_dimension_mismatch, "link is not pure");
  if (f_dim != n - d - 1)
    throw error(errc::link_dimension_mismatch,
                "link dimension " + std::to_string(f_dim) + " but expected " +
                    std::to_string(n - d - 1));

  // Relabel vertices 0..V-1 in ascending ambient order.
  std::vector<int> used;
  for (const Simplex& s : link_facets)
    for (int w : s) used.push_back(w);
  std::sort(used.begin(), used.end());
  used.erase(std::unique(used.begin(), used.end()), used.end());
  std::map<int, int> relabel;
  for (size_t i = 0; i < used.size(); ++i) relabel[used[i]] = static_cast<int>(i);
  std::vector<Simplex> relabeled;
  for (const Simplex& s : link_facets) {
    Simplex t;
    for (int w : s) t.push_back(relabel[w]);
    relabeled.push_back(std::move(t));
  }
  StratifiedLink link;
  link.complex = SimplicialComplex::from_facets(f_dim, std::move(relabeled));
  link.link_dimension = f_dim;
  link.stratum_id = stratum_id;
  link.sample_vertex = tau.front();

  // Induced filtration: ambient X_{j+d+1} restricts to skeleton j of the link.
  std::map<int, std::vector<Simplex>> gens;
  for (int dd = 0; dd <= f_dim; ++dd) {
    for (const Simplex& s : link.complex.simplices(dd)) {
      int lvl = 0;
      for (int w : s) lvl = std::max(lvl, space.vertex_level[used[w]]);
      const int link_level = lvl - d - 1;
      if (link_level < f_dim) {
        if (link_level < 0)
          throw error(errc::link_dimension_mismatch, "link simplex below the stratum level");
        gens[link_level].push_back(s);
      }
    }
  }
  link.filtration = Filtration::from_generators(f_dim, gens);
  return link;
}

// Deterministic sample simplices of a stratum (top-dimensional, all vertices
// in the open stratum): first, middle, last in lexicographic order.
inline std::vector<Simplex> stratum_sample_simplices(const PreparedSpace& space, int stratum_id) {
  const Stratum& y = space.poset.stratum(stratum_id);
  std::vector<Simplex> members;
  for (const Simplex& s : space.complex.simplices(y.dim)) {
    bool inside = true;
    for (int v : s)
      if (space.vertex_stratum[v] != stratum_id) inside = false;
    if (inside) members.push_back(s);
  }
  if (members.empty())
    throw error(errc::no_vertex_in_stratum,
                "stratum " + std::to_string(stratum_id) + " has no sample simplex");
  std::vector<Simplex> picks{members.front()};
  if (members.size() >= 3) picks.push_back(members[members.size() / 2]);
  if (members.size() >= 2) picks.push_back(members.back());
  return picks;
}

// Link of a stratum. When `rank_oracle` is provided it is evaluated on up to
// three sample simplices and the results must agree (LinkInconsistent
// otherwise); the oracle is expected to compute IH ranks of the candidate link.
using LinkRankOracle = std::function<std::vector<int>(const StratifiedLink&)>;

inline StratifiedLink stratum_link(const PreparedSpace& space, int stratum_id,
                                   const LinkRankOracle& rank_oracle = {}) {
  const Stratum& y = space.poset.stratum(stratum_id);
  if (y.regular)
    throw error(errc::invalid_stratum, "links are only formed for singular strata");
  const std::vector<Simplex> samples = stratum_sample_simplices(space, stratum_id);
  StratifiedLink first = extract_link_at_simplex(space, samples[0]);
  if (rank_oracle) {
    const std::vector<int> reference = rank_oracle(first);
    for (size_t i = 1; i < samples.size(); ++i) {
      StratifiedLink other = extract_link_at_simplex(space, samples[i]);
      if (rank_oracle(other) != reference)
        throw error(errc::link_inconsistent,
                    "link IH ranks differ between sample simplices of stratum " +
                        std::to_string(stratum_id));
    }
  }
  return first;
}

// ---------------------------------------------------------------------------
// Builders: cone, suspension, product with a manifold
// ---------------------------------------------------------------------------

struct StratifiedComplex {
  SimplicialComplex complex;
  Filtration filtration;
};

inline StratifiedComplex cone(const SimplicialComplex& k, const Filtration& f,
                              std::string name = "") {
  const int n = k.dimension();
  const int apex = k.vertices().empty() ? 0 : k.vertices().back() + 1;
  std::vector<Simplex> facets;
  for (const Simplex& s : k.facets()) {
    Simplex t = s;
    t.push_back(apex);
    facets.push_back(canonical_simplex(std::move(t)));
  }
  SimplicialComplex cone_complex = SimplicialComplex::from_facets(
      n + 1, std::move(facets), name.empty() ? "cone(" + k.name() + ")" : std::move(name));
  // X'_0 = {apex}; X'_j = cone(X_{j-1}) for 1 <= j <= n.
  std::map<int, std::vector<Simplex>> gens;
  gens[0].push_back({apex});
  for (int j = 1; j <= n; ++j) {
    for (const Simplex& s : SimplicialComplex::closure_facets(
             std::vector<Simplex>(f.skeleton(j - 1).begin(), f.skeleton(j - 1).end()))) {
      Simplex t = s;
      t.push_back(apex);
      gens[j].push_back(canonical_simplex(std::move(t)));
    }
  }
  return {std::move(cone_complex), Filtration::from_generators(n + 1, gens)};
}

inline StratifiedComplex suspension(const SimplicialComplex& k, const Filtration& f,
                                    std::string name = "") {
  const int n = k.dimension();
  const int north = k.vertices().empty() ? 0 : k.vertices().back() + 1;
  const int south = north + 1;
  std::vector<Simplex> facets;
  for (const Simplex& s : k.facets()) {
    for (int pole : {north, south}) {
      Simplex t = s;
      t.push_back(pole);
      facets.push_back(canonical_simplex(std::move(t)));
    }
  }
  SimplicialComplex sus = SimplicialComplex::from_facets(
      n + 1, std::move(facets), name.empty() ? "suspension(" + k.name() + ")" : std::move(name));
  std::map<int, std::vector<Simplex>> gens;
  gens[0].push_back({north});
  gens[0].push_back({south});
  for (int j = 1; j <= n; ++j) {
    for (const Simplex& s : SimplicialComplex::closure_facets(
             std::vector<Simplex>(f.skeleton(j - 1).begin(), f.skeleton(j - 1).end()))) {
      for (int pole : {north, south}) {
        Simplex t = s;
        t.push_back(pole);
        gens[j].push_back(canonical_simplex(std::move(t)));
      }
    }
  }
  return {std::move(sus), Filtration::from_generators(n + 1, gens)};
}

// Staircase (order-complex) triangulation of |K x M| for a closed manifold M
// with trivial filtration. Vertex (u, v) gets id pos(u) * |V_M| + pos(v).
inline StratifiedComplex product_with_manifold(const SimplicialComplex& k, const Filtration& f,
                                               const SimplicialComplex& m, std::string name = "") {
  const int p = k.dimension();
  const int q = m.dimension();
  const auto& kv = k.vertices();
  const auto& mv = m.vertices();
  const int vm = static_cast<int>(mv.size());
  auto kpos = [&](int u) {
    return static_cast<int>(std::lower_bound(kv.begin(), kv.end(), u) - kv.begin());
  };
  auto mpos = [&](int v) {
    return static_cast<int>(std::lower_bound(mv.begin(), mv.end(), v) - mv.begin());
  };
  auto pair_id = [&](int u, int v) { return kpos(u) * vm + mpos(v); };

  auto staircases = [&](const Simplex& sigma, const Simplex& tau, std::vector<Simplex>& out) {
    const int a = static_cast<int>(sigma.size()) - 1;
    const int b = static_cast<int>(tau.size()) - 1;
    // Monotone lattice paths from (0,0) to (a,b), as bitmasks of "up" moves.
    std::vector<int> moves(a + b, 0);
    for (int i = a; i < a + b; ++i) moves[i] = 1;
    std::sort(moves.begin(), moves.end());
    do {
      Simplex cell;
      int i = 0, j = 0;
      cell.push_back(pair_id(sigma[0], tau[0]));
      for (int step : moves) {
        if (step == 0)
          ++i;
        else
          ++j;
        cell.push_back(pair_id(sigma[i], tau[j]));
      }
      out.push_back(canonical_simplex(std::move(cell)));
    } while (std::next_permutation(moves.begin(), moves.end()));
  };

  std::vector<Simplex> facets;
  for (const Simplex& sigma : k.facets())
    for (const Simplex& tau : m.facets()) staircases(sigma, tau, facets);
  std::sort(facets.begin(), facets.end());
  facets.erase(std::unique(facets.begin(), facets.end()), facets.end());
  SimplicialComplex prod = SimplicialComplex::from_facets(
      p + q, std::move(facets),
      name.empty() ? k.name() + " x " + m.name() : std::move(name));

  // X'_{j+q} = X_j x M.
  std::map<int, std::vector<Simplex>> gens;
  for (int j = 0; j < p; ++j) {
    const auto closure = SimplicialComplex::closure_facets(
        std::vector<Simplex>(f.skeleton(j).begin(), f.skeleton(j).end()));
    if (closure.empty()) continue;
    std::vector<Simplex> cells;
    for (const Simplex& sigma : closure)
      for (const Simplex& tau : m.facets()) staircases(sigma, tau, cells);
    std::sort(cells.begin(), cells.end());
    cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
    gens[j + q] = std::move(cells);
  }
  return {std::move(prod), Filtration::from_generators(p + q, gens)};
}

}  // namespace wittkit

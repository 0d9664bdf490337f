#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "wittkit/errors.hpp"
#include "wittkit/ih.hpp"
#include "wittkit/simplicial_complex.hpp"
#include "wittkit/sparse_matrix.hpp"
#include "wittkit/stratification.hpp"

namespace wittkit {

// ---------------------------------------------------------------------------
// Witt condition
// ---------------------------------------------------------------------------

struct WittStratumEntry {
  int stratum_id = -1;
  int stratum_dim = -1;
  int link_dimension = -1;
  bool even_link = false;
  int middle_rank = -1;  // rank IH^{lower-middle}_{f/2}(L), -1 when f is odd
  bool pass = true;
};

struct WittReport {
  std::vector<WittStratumEntry> entries;
  bool witt = true;
};

// Every singular stratum with an even-dimensional link must have vanishing
// lower-middle IH in middle degree. Links are themselves stratified, so deep
// strata are handled by the stratified link IH computation.
inline WittReport witt_check(const SimplicialComplex& k, const Filtration& f, int threads = 1,
                             int subdivisions = 1) {
  WittReport report;
  if (f.is_trivial()) {
    validate_filtration(k, f);  // still surface structural errors
    return report;
  }
  const PreparedSpace space = prepare_space(k, f, std::max(1, subdivisions));
  for (int id : space.poset.singular_ids()) {
    WittStratumEntry entry;
    entry.stratum_id = id;
    entry.stratum_dim = space.poset.strata[id].dim;
    const StratifiedLink link = verified_stratum_link(space, id, threads);
    entry.link_dimension = link.link_dimension;
    entry.even_link = link.link_dimension % 2 == 0;
    if (entry.even_link) {
      const auto ranks =
          link_ih_ranks(link, Perversity::lower_middle(link.link_dimension), threads);
      entry.middle_rank = ranks[link.link_dimension / 2];
      entry.pass = entry.middle_rank == 0;
    }
    if (!entry.pass) report.witt = false;
    report.entries.push_back(std::move(entry));
  }
  return report;
}

// ---------------------------------------------------------------------------
// Perverse duality check
// ---------------------------------------------------------------------------

struct DualityReport {
  std::vector<int> ranks_p;
  std::vector<int> ranks_q;
  std::vector<bool> dual_pair_equal;   // rank IH_k^p == rank IH_{n-k}^q
  bool pass = true;
  bool witt_input = false;
  std::vector<bool> middle_self_dual;  // on Witt inputs: lower-middle vs itself
};

inline DualityReport duality_check(const SimplicialComplex& k, const Filtration& f,
                                   const Perversity& p, const IHOptions& opts = {}) {
  const int n = k.dimension();
  DualityReport report;
  IHOptions o = opts;
  o.with_bases = false;
  const Perversity q = p.complementary();
  report.ranks_p = ih_ranks(k, f, p, o).ranks;
  report.ranks_q = ih_ranks(k, f, q, o).ranks;
  report.dual_pair_equal.resize(n + 1);
  for (int deg = 0; deg <= n; ++deg) {
    report.dual_pair_equal[deg] = report.ranks_p[deg] == report.ranks_q[n - deg];
    if (!report.dual_pair_equal[deg]) report.pass = false;
  }
  const WittReport witt = witt_check(k, f, opts.threads);
  report.witt_input = witt.witt;
  if (witt.witt) {
    const auto middle = ih_ranks(k, f, Perversity::lower_middle(n), o).ranks;
    report.middle_self_dual.resize(n + 1);
    for (int deg = 0; deg <= n; ++deg) {
      report.middle_self_dual[deg] = middle[deg] == middle[n - deg];
      if (!report.middle_self_dual[deg]) report.pass = false;
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// Simplicial cup products and the intersection pairing
// ---------------------------------------------------------------------------

namespace detail {

// (phi cup psi)(F) summed over oriented facets: the front p-face / back
// q-face rule in the global (ascending vertex id) order.
inline Rational evaluate_cup_on_fundamental(const SimplicialComplex& k,
                                            const std::vector<int>& facet_signs, int p_deg,
                                            const std::map<int, Rational>& phi,
                                            const std::map<int, Rational>& psi) {
  Rational total(0);
  const int n = k.dimension();
  for (int fi = 0; fi < k.count(n); ++fi) {
    const Simplex& facet = k.facets()[fi];
    const Simplex front(facet.begin(), facet.begin() + p_deg + 1);
    const Simplex back(facet.begin() + p_deg, facet.end());
    const int front_idx = k.index_of(front);
    const int back_idx = k.index_of(back);
    const auto a = phi.find(front_idx);
    if (a == phi.end()) continue;
    const auto b = psi.find(back_idx);
    if (b == psi.end()) continue;
    total += Rational(facet_signs[fi]) * a->second * b->second;
  }
  return total;
}

inline std::map<int, Rational> to_map(const SparseVector& v) {
  std::map<int, Rational> m;
  for (const auto& e : v) m.emplace(e.col, e.value);
  return m;
}

}  // namespace detail

// Signature of an oriented closed 4m-manifold by the cup-product form on
// middle rational cohomology. Kept free of any IH machinery so it can serve
// as an independent cross-check for `signature`.
inline int manifold_signature_oracle(const SimplicialComplex& k, bool reverse_orientation = false) {
  const int n = k.dimension();
  const auto report = check_pseudomanifold(k, Filtration::trivial(n));
  if (!report.ok())
    throw error(errc::not_manifold_input, "input fails closed-pseudomanifold checks");
  if (n % 2 == 1) return 0;
  if (n % 4 != 0) return 0;  // skew form in dimensions 4m+2
  OrientedComplex oc = orient(k);
  if (reverse_orientation) oc = oc.reversed();
  const int m = n / 2;

  // Middle cohomology: cocycles = ker d_{m+1}^T, coboundaries = im d_m^T.
  const auto delta_m = boundary_matrix(k, m + 1).transpose();
  const auto cocycles = kernel_basis(delta_m);
  std::vector<SparseVector> coboundaries;
  if (m >= 1) coboundaries = columns_of(boundary_matrix(k, m).transpose());

  // Reduced representatives of a cohomology basis.
  std::map<int, SparseVector> pivots;
  auto reduce = [&](SparseVector col) {
    while (!col.empty()) {
      auto it = pivots.find(col.back().col);
      if (it == pivots.end()) break;
      sparse_axpy(col, -col.back().value / it->second.back().value, it->second);
    }
    return col;
  };
  for (const auto& b : coboundaries) {
    SparseVector col = reduce(b);
    if (!col.empty()) pivots.emplace(col.back().col, std::move(col));
  }
  std::vector<SparseVector> basis;
  for (const auto& z : cocycles) {
    SparseVector col = reduce(z);
    if (!col.empty()) {
      basis.push_back(col);
      pivots.emplace(col.back().col, std::move(col));
    }
  }

  const int r = static_cast<int>(basis.size());
  SparseRationalMatrix form(r, r);
  for (int a = 0; a < r; ++a) {
    const auto phi = detail::to_map(basis[a]);
    for (int b = a; b < r; ++b) {
      const auto psi = detail::to_map(basis[b]);
      const Rational val = detail::evaluate_cup_on_fundamental(k, oc.sign, m, phi, psi);
      form.set(a, b, val);
      form.set(b, a, val);
    }
  }
  return symmetric_signature(form).signature();
}

// ---------------------------------------------------------------------------
// Intersection pairing on middle IH (depth 0, or depth 1 with isolated
// point singularities) and its signature
// ---------------------------------------------------------------------------

struct PairingMatrix {
  int dimension = 0;
  int middle_rank = 0;
  bool symmetric = true;  // false for dimensions 4m+2 (skew form)
  SparseRationalMatrix matrix;
  int signature = 0;
  int subdivisions = 1;
};

struct PairingOptions {
  int subdivisions = 1;
  bool reverse_orientation = false;
  int threads = 1;
};

namespace detail {

struct RegularPart {
  // Facets of the full subcomplex on regular vertices, as a complex sharing
  // the ambient vertex ids, plus the boundary subcomplex membership tables.
  SimplicialComplex complex;
  std::vector<int> facet_signs;
  std::vector<std::vector<bool>> in_boundary;  // per dim, per simplex index of `complex`
};

inline RegularPart regular_part(const SimplicialComplex& c, const std::vector<int>& vertex_level,
                                bool reverse_orientation) {
  const int n = c.dimension();
  RegularPart out;
  std::vector<Simplex> facets;
  std::vector<int> facet_origin;
  for (int fi = 0; fi < c.count(n); ++fi) {
    const Simplex& facet = c.facets()[fi];
    bool regular = true;
    for (int v : facet)
      if (vertex_level[v] < n) regular = false;
    if (regular) {
      facets.push_back(facet);
      facet_origin.push_back(fi);
    }
  }
  OrientedComplex oc = orient(c);
  if (reverse_orientation) oc = oc.reversed();
  out.complex = SimplicialComplex::from_facets(n, facets, "regular-part");
  out.facet_signs.resize(out.complex.count(n));
  for (int i = 0; i < out.complex.count(n); ++i) {
    const int ambient_index = c.index_of(out.complex.facets()[i]);
    out.facet_signs[i] = oc.sign[ambient_index];
  }
  // Boundary subcomplex: ridges with exactly one cofacet, plus all their faces.
  std::vector<int> ridge_cofacets(out.complex.count(n - 1), 0);
  for (const Simplex& facet : out.complex.facets()) {
    for (size_t omit = 0; omit < facet.size(); ++omit) {
      Simplex ridge;
      for (size_t i = 0; i < facet.size(); ++i)
        if (i != omit) ridge.push_back(facet[i]);
      ridge_cofacets[out.complex.index_of(ridge)]++;
    }
  }
  out.in_boundary.resize(n + 1);
  for (int d = 0; d <= n; ++d) out.in_boundary[d].assign(out.complex.count(d), false);
  for (int i = 0; i < out.complex.count(n - 1); ++i)
    if (ridge_cofacets[i] == 1) out.in_boundary[n - 1][i] = true;
  for (int d = n - 1; d >= 1; --d) {
    for (int i = 0; i < out.complex.count(d); ++i) {
      if (!out.in_boundary[d][i]) continue;
      const Simplex& s = out.complex.simplices(d)[i];
      for (size_t omit = 0; omit < s.size(); ++omit) {
        Simplex face;
        for (size_t j = 0; j < s.size(); ++j)
          if (j != omit) face.push_back(s[j]);
        out.in_boundary[d - 1][out.complex.index_of(face)] = true;
      }
    }
  }
  return out;
}

}  // namespace detail

// Middle-perversity intersection pairing. Middle lower-middle cycles on a
// space with isolated singularities avoid the singular set (the allowability
// bound dim(sigma cap X_0) <= n/2 - n + m(n) is negative), so classes live in
// the regular part M and are paired through H^{n/2}(M, dM): a relative
// cocycle basis is capped with the fundamental class to express the IH basis,
// and the form is the relative cup product evaluated on the fundamental class.
inline PairingMatrix intersection_pairing(const SimplicialComplex& k, const Filtration& f,
                                          const PairingOptions& opts = {}) {
  const int n = k.dimension();
  if (n % 2 == 1)
    throw error(errc::wrong_dimension_parity, "no middle degree in odd dimension");
  const StrataPoset poset = validate_filtration(k, f);
  if (poset.depth > 1) throw error(errc::unsupported_depth, "depth > 1 is unsupported");
  for (const Stratum& s : poset.strata)
    if (!s.regular && s.dim != 0)
      throw error(errc::unsupported_depth, "positive-dimensional singular strata are unsupported");

  // Work on one complex throughout: the (subdivided) prepared space.
  SimplicialComplex complex;
  Filtration filtration(n);
  std::vector<int> vertex_level;
  if (f.is_trivial()) {
    SimplicialComplex current = k;
    for (int r = 0; r < std::max(1, opts.subdivisions); ++r)
      current = barycentric_subdivide_once(current).complex;
    complex = std::move(current);
    filtration = Filtration::trivial(n);
    vertex_level.assign(complex.count(0), n);
  } else {
    PreparedSpace space = prepare_space(k, f, std::max(1, opts.subdivisions));
    complex = std::move(space.complex);
    filtration = std::move(space.filtration);
    vertex_level = std::move(space.vertex_level);
  }

  const int m = n / 2;
  const Perversity lower = Perversity::lower_middle(n);
  const IHResult ih = ih_ranks_on(complex, filtration, lower, true, opts.threads, m);
  const int rank = ih.ranks[m];

  PairingMatrix out;
  out.dimension = n;
  out.middle_rank = rank;
  out.symmetric = n % 4 == 0;
  out.subdivisions = std::max(1, opts.subdivisions);
  out.matrix = SparseRationalMatrix(rank, rank);
  if (rank == 0) return out;

  const detail::RegularPart reg =
      detail::regular_part(complex, vertex_level, opts.reverse_orientation);
  const SimplicialComplex& mcx = reg.complex;

  // Relative middle cohomology H^m(M, dM): cochains on interior m-simplices,
  // kernel of the restricted coboundary, modulo coboundaries of interior
  // (m-1)-cochains. The dimension is computed from two ranks first so the
  // lazy kernel enumeration can stop after exactly that many representatives.
  std::vector<int> interior_m;
  for (int i = 0; i < mcx.count(m); ++i)
    if (!reg.in_boundary[m][i]) interior_m.push_back(i);
  std::vector<int> interior_pos(mcx.count(m), -1);
  for (size_t i = 0; i < interior_m.size(); ++i) interior_pos[interior_m[i]] = (int)i;

  std::vector<int> all_rows(mcx.count(m + 1));
  for (int i = 0; i < mcx.count(m + 1); ++i) all_rows[i] = i;
  const auto delta = boundary_matrix(mcx, m + 1).transpose();
  const auto delta_restricted = delta.submatrix(all_rows, interior_m);

  std::vector<SparseVector> relative_coboundaries;
  if (m >= 1) {
    const auto d_m = boundary_matrix(mcx, m);  // rows (m-1)-simplices, cols m-simplices
    for (int src = 0; src < mcx.count(m - 1); ++src) {
      if (reg.in_boundary[m - 1][src]) continue;
      SparseVector v;
      for (const auto& e : d_m.row(src))
        if (interior_pos[e.col] >= 0) v.push_back({interior_pos[e.col], e.value});
      if (!v.empty()) relative_coboundaries.push_back(std::move(v));
    }
  }
  const int h = static_cast<int>(interior_m.size()) - matrix_rank(delta_restricted) -
                matrix_rank(matrix_from_columns(static_cast<int>(interior_m.size()),
                                                relative_coboundaries));
  const auto rel_basis = kernel_mod_span(delta_restricted, relative_coboundaries, h);
  const int rr = static_cast<int>(rel_basis.size());
  if (rr != h)
    throw error(errc::unsupported_depth, "internal: relative cohomology basis extraction failed");

  // Cup-product form on the harmonic basis.
  SparseRationalMatrix q_form(rr, rr);
  std::vector<std::map<int, Rational>> phi_by_simplex(rr);  // keyed by mcx m-simplex index
  for (int a = 0; a < rr; ++a)
    for (const auto& e : rel_basis[a]) phi_by_simplex[a].emplace(interior_m[e.col], e.value);
  for (int a = 0; a < rr; ++a)
    for (int b = 0; b < rr; ++b) {
      const Rational val = detail::evaluate_cup_on_fundamental(mcx, reg.facet_signs, m,
                                                               phi_by_simplex[a], phi_by_simplex[b]);
      q_form.set(a, b, val);
    }

  // Evaluating a relative cocycle on a middle allowable cycle descends to IH
  // classes (boundaries of allowable (m+1)-chains pair to zero: their
  // pole-touching parts contribute only along dM where phi vanishes). The
  // IH basis b_i is therefore expressed through the harmonic classes by
  // solving q_form * c_i = u_i with u_i[a] = <phi_a, b_i>, and the pairing is
  //   P_ij = c_i^T q_form c_j = c_i^T u_j.
  SparseRationalMatrix u(rr, rank);
  for (int i = 0; i < rank; ++i) {
    for (const auto& e : ih.bases[m][i]) {
      // ambient m-simplex -> simplex of M (same vertex tuple)
      const int midx = mcx.index_of(complex.simplices(m)[e.col]);
      if (midx < 0)
        throw error(errc::unsupported_depth, "middle IH cycle leaves the regular part");
      for (int a = 0; a < rr; ++a) {
        const auto it = phi_by_simplex[a].find(midx);
        if (it != phi_by_simplex[a].end()) u.add(a, i, it->second * e.value);
      }
    }
  }
  const auto coeffs = solve(q_form, u);
  if (!coeffs)
    throw error(errc::unsupported_depth,
                "middle IH basis is not expressible through regular-part duality classes");
  out.matrix = coeffs->transpose().multiply(u);
  if (out.symmetric) out.signature = symmetric_signature(out.matrix).signature();
  return out;
}

inline int signature(const SimplicialComplex& k, const Filtration& f,
                     const PairingOptions& opts = {}) {
  const int n = k.dimension();
  if (n % 4 != 0) return 0;
  return intersection_pairing(k, f, opts).signature;
}

}  // namespace wittkit

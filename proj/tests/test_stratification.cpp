#include <doctest.h>

#include "support/fixtures.hpp"
#include "wittkit/ih.hpp"
#include "wittkit/stratification.hpp"

using namespace wittkit;

TEST_CASE("trivial filtration gives a single depth-0 stratum") {
  const auto s = fixtures::sphere(3);
  const auto poset = validate_filtration(s, Filtration::trivial(3));
  REQUIRE(poset.size() == 1);
  CHECK(poset.strata[0].regular);
  CHECK(poset.strata[0].dim == 3);
  CHECK(depth(poset) == 0);
  const auto report = check_pseudomanifold(s, Filtration::trivial(3));
  CHECK(report.ok());
}

TEST_CASE("suspension of the torus") {
  const auto st = fixtures::sigma_t2();
  CHECK(st.complex.f_vector() == std::vector<int>{9, 35, 56, 28});
  const auto poset = validate_filtration(st.complex, st.filtration);
  REQUIRE(poset.size() == 3);
  int points = 0, regular = 0;
  for (const auto& s : poset.strata) {
    if (s.regular) {
      regular++;
      CHECK(s.dim == 3);
    } else {
      points++;
      CHECK(s.dim == 0);
      CHECK(poset.depth_of[s.id] == 1);
    }
  }
  CHECK(points == 2);
  CHECK(regular == 1);
  CHECK(depth(poset) == 1);
  CHECK(check_pseudomanifold(st.complex, st.filtration).ok());
}

TEST_CASE("double suspension has depth two") {
  const auto sst = fixtures::sigma_sigma_t2();
  const auto poset = validate_filtration(sst.complex, sst.filtration);
  CHECK(depth(poset) == 2);
  int poles = 0, arcs = 0, regular = 0;
  for (const auto& s : poset.strata) {
    if (s.regular)
      regular++;
    else if (s.dim == 0) {
      poles++;
      CHECK(poset.depth_of[s.id] == 2);
    } else if (s.dim == 1) {
      arcs++;
      CHECK(poset.depth_of[s.id] == 1);
    }
  }
  CHECK(poles == 2);
  CHECK(arcs == 2);
  CHECK(regular == 1);
}

TEST_CASE("codimension-one stratum is rejected") {
  const auto s = fixtures::sphere(3);
  std::map<int, std::vector<Simplex>> gens;
  gens[2] = {{0, 1, 2}};
  const auto f = Filtration::from_generators(3, gens);
  CHECK_THROWS_WITH_AS(validate_filtration(s, f), doctest::Contains("CodimOneStratum"), error);
}

TEST_CASE("vertex stratum inside a torus is a valid depth-1 filtration") {
  const auto t = fixtures::torus7();
  std::map<int, std::vector<Simplex>> gens;
  gens[0] = {{0}};
  const auto poset = validate_filtration(t, Filtration::from_generators(2, gens));
  CHECK(poset.size() == 2);
  CHECK(depth(poset) == 1);
}

TEST_CASE("pseudomanifold report flags boundary ridges") {
  const auto k = SimplicialComplex::from_facets(2, {{0, 1, 2}, {1, 2, 3}});
  const auto report = check_pseudomanifold(k, Filtration::trivial(2));
  CHECK(report.pure);
  CHECK(!report.ridges_have_two_cofacets);
  CHECK(report.bad_ridges.size() == 4);
}

TEST_CASE("prepared space tags vertices with strata") {
  const auto st = fixtures::sigma_t2();
  const auto space = prepare_space(st.complex, st.filtration, 1);
  CHECK(space.complex.dimension() == 3);
  CHECK(space.complex.count(0) == 9 + 35 + 56 + 28);
  int pole_vertices = 0;
  for (size_t v = 0; v < space.vertex_stratum.size(); ++v) {
    if (!space.poset.strata[space.vertex_stratum[v]].regular) pole_vertices++;
  }
  CHECK(pole_vertices == 2);  // only the barycenters of the two original poles
  // Skeleta of the prepared space are full subcomplexes.
  const auto& f = space.filtration;
  for (int d = 0; d <= 3; ++d) {
    for (const auto& s : space.complex.simplices(d)) {
      bool all_in = true;
      for (int v : s)
        if (!space.vertex_in_skeleton(v, 0)) all_in = false;
      if (all_in) CHECK(f.skeleton_contains(0, s));
    }
  }
}

TEST_CASE("links of suspension points") {
  SUBCASE("suspension of the torus has torus links") {
    const auto st = fixtures::sigma_t2();
    const auto space = prepare_space(st.complex, st.filtration, 1);
    const auto singular = space.poset.singular_ids();
    REQUIRE(singular.size() == 2);
    const auto link = stratum_link(space, singular[0]);
    CHECK(link.link_dimension == 2);
    CHECK(link.filtration.is_trivial());
    CHECK(homology_ranks(link.complex) == std::vector<int>{1, 2, 1});
    CHECK(space.poset.strata[singular[0]].dim + link.link_dimension + 1 == 3);
  }
  SUBCASE("suspension of the sphere has sphere links") {
    const auto ss = fixtures::sigma_s2();
    const auto space = prepare_space(ss.complex, ss.filtration, 1);
    const auto singular = space.poset.singular_ids();
    REQUIRE(singular.size() == 2);
    const auto link = verified_stratum_link(space, singular[1]);
    CHECK(link.link_dimension == 2);
    CHECK(homology_ranks(link.complex) == std::vector<int>{1, 0, 1});
  }
  SUBCASE("regular stratum has no link") {
    const auto st = fixtures::sigma_t2();
    const auto space = prepare_space(st.complex, st.filtration, 1);
    int regular_id = -1;
    for (const auto& s : space.poset.strata)
      if (s.regular) regular_id = s.id;
    CHECK_THROWS_WITH_AS(stratum_link(space, regular_id), doctest::Contains("InvalidStratum"),
                         error);
  }
  SUBCASE("double suspension: pole links are stratified suspensions") {
    const auto sst = fixtures::sigma_sigma_t2();
    const auto space = prepare_space(sst.complex, sst.filtration, 1);
    for (int id : space.poset.singular_ids()) {
      const auto& stratum = space.poset.strata[id];
      const auto link = stratum_link(space, id);
      CHECK(stratum.dim + link.link_dimension + 1 == 4);
      if (stratum.dim == 0) {
        CHECK(link.link_dimension == 3);
        CHECK(!link.filtration.is_trivial());
        const auto link_poset = validate_filtration(link.complex, link.filtration);
        CHECK(depth(link_poset) == 1);  // depth drops by one
      } else {
        CHECK(link.link_dimension == 2);
        CHECK(link.filtration.is_trivial());
        CHECK(homology_ranks(link.complex) == std::vector<int>{1, 2, 1});
      }
    }
  }
}

TEST_CASE("cone and suspension builders") {
  SUBCASE("cone over a sphere boundary") {
    const auto s = fixtures::sphere(2);
    const auto c = cone(s, Filtration::trivial(2));
    CHECK(c.complex.dimension() == 3);
    CHECK(c.complex.count(3) == 4);
    const auto poset = validate_filtration(c.complex, c.filtration);
    CHECK(depth(poset) == 1);
    // A cone is a pseudomanifold-with-boundary: the ridge condition fails.
    CHECK(!check_pseudomanifold(c.complex, c.filtration).ridges_have_two_cofacets);
  }
  SUBCASE("suspension counts") {
    const auto st = fixtures::sigma_t2();
    CHECK(st.complex.count(0) == 9);
    CHECK(st.complex.count(3) == 28);
  }
}

TEST_CASE("product with a manifold") {
  const auto prod = fixtures::s2_x_s2();
  CHECK(prod.complex.dimension() == 4);
  CHECK(prod.complex.euler_characteristic() == 4);
  CHECK(homology_ranks(prod.complex) == std::vector<int>{1, 0, 2, 0, 1});
  CHECK(check_pseudomanifold(prod.complex, prod.filtration).ok());

  // Product of a stratified space: (Sigma S^1) x S^1 has two circle strata.
  const auto s1 = fixtures::sphere(1);
  const auto ss1 = fixtures::sigma(s1);
  const auto prod2 = product_with_manifold(ss1.complex, ss1.filtration, s1);
  CHECK(prod2.complex.dimension() == 3);
  const auto poset = validate_filtration(prod2.complex, prod2.filtration);
  CHECK(depth(poset) == 1);
  int circle_strata = 0;
  for (const auto& s : poset.strata)
    if (!s.regular) {
      CHECK(s.dim == 1);
      circle_strata++;
    }
  CHECK(circle_strata == 2);
  const auto space = prepare_space(prod2.complex, prod2.filtration, 1);
  for (int id : space.poset.singular_ids()) {
    const auto link = verified_stratum_link(space, id);
    CHECK(link.link_dimension == 1);
    CHECK(homology_ranks(link.complex) == std::vector<int>{1, 1});
  }
}

TEST_CASE("link well-definedness check accepts genuine stratifications") {
  const auto st = fixtures::sigma_t2();
  const auto space = prepare_space(st.complex, st.filtration, 1);
  for (int id : space.poset.singular_ids()) {
    CHECK_NOTHROW(verified_stratum_link(space, id));
  }
}

TEST_CASE("link consistency check raises LinkInconsistent on disagreeing oracles") {
  // A positive-dimensional stratum with several sample simplices; an oracle
  // that reports different ranks per sample must be rejected.
  const auto s1 = fixtures::sphere(1);
  const auto ss1 = fixtures::sigma(s1);
  const auto prod = product_with_manifold(ss1.complex, ss1.filtration, s1);
  const auto space = prepare_space(prod.complex, prod.filtration, 1);
  const auto singular = space.poset.singular_ids();
  REQUIRE(!singular.empty());
  int calls = 0;
  const LinkRankOracle flaky = [&calls](const StratifiedLink&) {
    return std::vector<int>{calls++};
  };
  CHECK_THROWS_WITH_AS(stratum_link(space, singular[0], flaky),
                       doctest::Contains("LinkInconsistent"), error);
}

TEST_CASE("filtration generator above its skeleton dimension is malformed") {
  std::map<int, std::vector<Simplex>> gens;
  gens[1] = {{0, 1, 2}};  // a 2-simplex listed in X_1
  CHECK_THROWS_WITH_AS(Filtration::from_generators(3, gens), doctest::Contains("MalformedInput"),
                       error);
}

TEST_CASE("partial frontier containment raises FrontierViolation") {
  // On the double suspension (poles 9 = N, 10 = S of the outer suspension,
  // with 7 a pole of the inner one): put the edge {7,9} with its endpoints in
  // X_1 and the edge {7,10} in X_2. The closure of the level-2 stratum meets
  // the level-1 stratum only in the vertex 7.
  const auto sst = fixtures::sigma_sigma_t2();
  std::map<int, std::vector<Simplex>> gens;
  gens[0] = {{9}};
  gens[1] = {{7, 9}};
  gens[2] = {{7, 10}};
  const auto f = Filtration::from_generators(4, gens);
  CHECK_THROWS_WITH_AS(validate_filtration(sst.complex, f),
                       doctest::Contains("FrontierViolation"), error);
}

#include <doctest.h>

#include <json.hpp>

#include "support/fixtures.hpp"
#include "wittkit/simplicial_complex.hpp"

using namespace wittkit;

TEST_CASE("loading the tetrahedron boundary") {
  nlohmann::json doc = {
      {"name", "dS3"},
      {"dimension", 2},
      {"facets", {{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {2, 1, 3}}},  // unsorted facet allowed
  };
  const auto k = load_complex(doc);
  CHECK(k.f_vector() == std::vector<int>{4, 6, 4});
  CHECK(k.euler_characteristic() == 2);
  CHECK(k.contains({1, 2, 3}));
}

TEST_CASE("purity violation raises NonPure") {
  nlohmann::json doc = {{"name", "bad"}, {"dimension", 2}, {"facets", {{0, 1, 2}, {3, 4}}}};
  CHECK_THROWS_WITH_AS(load_complex(doc), doctest::Contains("NonPure"), error);
}

TEST_CASE("duplicate facets are rejected") {
  nlohmann::json doc = {{"dimension", 1}, {"facets", {{0, 1}, {1, 0}}}};
  CHECK_THROWS_AS(load_complex(doc), error);
}

TEST_CASE("7-vertex torus has the right f-vector and homology") {
  const auto t = fixtures::torus7();
  CHECK(t.f_vector() == std::vector<int>{7, 21, 14});
  CHECK(t.euler_characteristic() == 0);
  CHECK(homology_ranks(t) == std::vector<int>{1, 2, 1});
}

TEST_CASE("boundary matrices") {
  const auto t = fixtures::torus7();
  SUBCASE("degree zero is the zero matrix") {
    const auto d0 = boundary_matrix(t, 0);
    CHECK(d0.rows() == 0);
    CHECK(d0.cols() == 7);
    CHECK(d0.nonzeros() == 0);
  }
  SUBCASE("single edge has column (-1, +1)") {
    const auto edge = SimplicialComplex::from_facets(1, {{0, 1}});
    const auto d1 = boundary_matrix(edge, 1);
    CHECK(d1.get(0, 0) == -1);
    CHECK(d1.get(1, 0) == 1);
  }
  SUBCASE("d o d = 0") {
    const auto d1 = boundary_matrix(t, 1);
    const auto d2 = boundary_matrix(t, 2);
    CHECK(d1.multiply(d2).nonzeros() == 0);
  }
  SUBCASE("degree out of range") {
    CHECK_THROWS_WITH_AS(boundary_matrix(t, 3), doctest::Contains("DegreeOutOfRange"), error);
  }
}

TEST_CASE("orientation") {
  SUBCASE("sphere orients, deterministic, first facet +1") {
    const auto s = fixtures::sphere(2);
    const auto oc = orient(s);
    CHECK(oc.sign[0] == 1);
    const auto oc2 = orient(s);
    CHECK(oc.sign == oc2.sign);
  }
  SUBCASE("RP^2 is non-orientable") {
    CHECK_THROWS_WITH_AS(orient(fixtures::rp2()), doctest::Contains("NonOrientable"), error);
  }
  SUBCASE("disjoint spheres orient componentwise") {
    const auto s2 = fixtures::sphere(2);
    std::vector<Simplex> facets;
    for (const auto& f : s2.facets()) facets.push_back(f);
    for (const auto& f : s2.facets()) {
      Simplex shifted;
      for (int v : f) shifted.push_back(v + 10);
      facets.push_back(shifted);
    }
    const auto two = SimplicialComplex::from_facets(2, facets);
    const auto oc = orient(two);
    CHECK(oc.sign[0] == 1);
    int first_second_component = -1;
    for (int i = 0; i < static_cast<int>(two.facets().size()); ++i)
      if (two.facets()[i][0] >= 10) {
        first_second_component = i;
        break;
      }
    CHECK(oc.sign[first_second_component] == 1);
  }
  SUBCASE("signed facet sum is a cycle") {
    const auto t = fixtures::torus7();
    const auto oc = orient(t);
    const auto d2 = boundary_matrix(t, 2);
    SparseRationalMatrix fundamental(t.count(2), 1);
    for (int i = 0; i < t.count(2); ++i) fundamental.set(i, 0, Rational(oc.sign[i]));
    CHECK(d2.multiply(fundamental).nonzeros() == 0);
  }
}

TEST_CASE("barycentric subdivision") {
  SUBCASE("zero repetitions is the identity") {
    const auto t = fixtures::torus7();
    const auto same = barycentric_subdivide(t, 0);
    CHECK(same.f_vector() == t.f_vector());
    CHECK(same.facets() == t.facets());
  }
  SUBCASE("single triangle becomes six") {
    const auto tri = SimplicialComplex::from_facets(2, {{0, 1, 2}});
    const auto sd = barycentric_subdivide_once(tri);
    CHECK(sd.complex.f_vector() == std::vector<int>{7, 12, 6});
    CHECK(barycentric_subdivide(tri, 1).f_vector() == std::vector<int>{7, 12, 6});
  }
  SUBCASE("euler characteristic is preserved") {
    const auto s = fixtures::sphere(2);
    const auto sd = barycentric_subdivide_once(s);
    CHECK(sd.complex.euler_characteristic() == 2);
  }
  SUBCASE("homology is invariant under subdivision") {
    const auto t = fixtures::torus7();
    const auto sd = barycentric_subdivide_once(t);
    CHECK(homology_ranks(sd.complex) == homology_ranks(t));
    const auto rp = fixtures::rp2();
    const auto sd2 = barycentric_subdivide_once(rp);
    CHECK(homology_ranks(sd2.complex) == homology_ranks(rp));
  }
}

TEST_CASE("homology oracle on small closed complexes") {
  CHECK(homology_ranks(fixtures::sphere(3)) == std::vector<int>{1, 0, 0, 1});
  CHECK(homology_ranks(fixtures::sphere(1)) == std::vector<int>{1, 1});
  CHECK(homology_ranks(fixtures::rp2()) == std::vector<int>{1, 0, 0});
}

TEST_CASE("euler characteristic equals alternating betti sum") {
  const auto check = [](const SimplicialComplex& k) {
    const auto betti = homology_ranks(k);
    long alt = 0;
    for (size_t i = 0; i < betti.size(); ++i) alt += (i % 2 == 0 ? 1 : -1) * betti[i];
    CHECK(alt == k.euler_characteristic());
  };
  check(fixtures::torus7());
  check(fixtures::rp2());
  check(fixtures::sphere(3));
}

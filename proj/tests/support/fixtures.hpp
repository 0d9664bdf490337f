#pragma once

#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "wittkit/simplicial_complex.hpp"
#include "wittkit/stratification.hpp"

namespace fixtures {

inline nlohmann::json load_json(const std::string& filename) {
  const std::string path = std::string(WITTKIT_TEST_DATA_DIR) + "/" + filename;
  std::ifstream in(path);
  if (!in) throw std::runtime_error("missing test data file: " + path);
  nlohmann::json j;
  in >> j;
  return j;
}

inline wittkit::SimplicialComplex load_data_complex(const std::string& filename) {
  return wittkit::load_complex(load_json(filename));
}

// Boundary of the (k+1)-simplex: the minimal triangulation of S^k.
inline wittkit::SimplicialComplex sphere(int k) {
  std::vector<wittkit::Simplex> facets;
  const int verts = k + 2;
  for (int omit = 0; omit < verts; ++omit) {
    wittkit::Simplex s;
    for (int v = 0; v < verts; ++v)
      if (v != omit) s.push_back(v);
    facets.push_back(std::move(s));
  }
  return wittkit::SimplicialComplex::from_facets(k, std::move(facets), "S^" + std::to_string(k));
}

// The 7-vertex (Moebius-Kantor) torus.
inline wittkit::SimplicialComplex torus7() {
  std::vector<wittkit::Simplex> facets;
  for (int i = 0; i < 7; ++i) {
    facets.push_back({i, (i + 1) % 7, (i + 3) % 7});
    facets.push_back({i, (i + 2) % 7, (i + 3) % 7});
  }
  return wittkit::SimplicialComplex::from_facets(2, std::move(facets), "T^2");
}

// The 6-vertex real projective plane.
inline wittkit::SimplicialComplex rp2() {
  std::vector<wittkit::Simplex> facets = {
      {0, 1, 2}, {0, 1, 3}, {0, 2, 4}, {0, 3, 5}, {0, 4, 5},
      {1, 2, 5}, {1, 3, 4}, {1, 4, 5}, {2, 3, 4}, {2, 3, 5},
  };
  return wittkit::SimplicialComplex::from_facets(2, std::move(facets), "RP^2");
}

inline wittkit::StratifiedComplex sigma(const wittkit::SimplicialComplex& k) {
  return wittkit::suspension(k, wittkit::Filtration::trivial(k.dimension()));
}

inline wittkit::StratifiedComplex sigma_t2() { return sigma(torus7()); }
inline wittkit::StratifiedComplex sigma_s2() { return sigma(sphere(2)); }

inline wittkit::StratifiedComplex sigma_sigma_t2() {
  auto st = sigma_t2();
  return wittkit::suspension(st.complex, st.filtration);
}

inline wittkit::StratifiedComplex s2_x_s2() {
  const auto s2 = sphere(2);
  return wittkit::product_with_manifold(s2, wittkit::Filtration::trivial(2), s2, "S^2 x S^2");
}

}  // namespace fixtures

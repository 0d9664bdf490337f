#pragma once

#include <stdexcept>
#include <string>

namespace wittkit {

enum class errc {
  malformed_input,
  non_pure,
  degree_out_of_range,
  non_orientable,
  codim_one_stratum,
  frontier_violation,
  not_dense,
  no_vertex_in_stratum,
  link_dimension_mismatch,
  link_inconsistent,
  invalid_stratum,
  unsupported_depth,
  not_manifold_input,
  invalid_tree,
  not_pseudomanifold,
  wrong_dimension_parity,
};

inline const char* errc_name(errc c) {
  switch (c) {
    case errc::malformed_input: return "MalformedInput";
    case errc::non_pure: return "NonPure";
    case errc::degree_out_of_range: return "DegreeOutOfRange";
    case errc::non_orientable: return "NonOrientable";
    case errc::codim_one_stratum: return "CodimOneStratum";
    case errc::frontier_violation: return "FrontierViolation";
    case errc::not_dense: return "NotDense";
    case errc::no_vertex_in_stratum: return "NoVertexInStratum";
    case errc::link_dimension_mismatch: return "LinkDimensionMismatch";
    case errc::link_inconsistent: return "LinkInconsistent";
    case errc::invalid_stratum: return "InvalidStratum";
    case errc::unsupported_depth: return "UnsupportedDepth";
    case errc::not_manifold_input: return "NotManifoldInput";
    case errc::invalid_tree: return "InvalidTree";
    case errc::not_pseudomanifold: return "NotPseudomanifold";
    case errc::wrong_dimension_parity: return "WrongDimensionParity";
  }
  return "UnknownError";
}

class error : public std::runtime_error {
 public:
  error(errc code, const std::string& detail)
      : std::runtime_error(std::string(errc_name(code)) + ": " + detail), code_(code), detail_(detail) {}

  errc code() const { return code_; }
  const char* code_name() const { return errc_name(code_); }
  const std::string& detail() const { return detail_; }

 private:
  errc code_;
  std::string detail_;
};

}  // namespace wittkit

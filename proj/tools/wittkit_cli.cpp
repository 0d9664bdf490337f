// wittkit command-line front end: JSON in, JSON out, stable exit codes.
//   0  computed; condition holds (where the subcommand has one)
//   2  computed; condition fails
//   1  input or validation error, with {"error", "detail"} on stdout

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "wittkit/ih.hpp"
#include "wittkit/resolution.hpp"
#include "wittkit/simplicial_complex.hpp"
#include "wittkit/spectral.hpp"
#include "wittkit/stratification.hpp"
#include "wittkit/witt.hpp"

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

int thread_cap() {
  const char* env = std::getenv("WITTKIT_THREADS");
  if (!env) return 1;
  const int n = std::atoi(env);
  return n >= 1 ? n : 1;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw wittkit::error(wittkit::errc::malformed_input, "cannot open '" + path + "'");
  json doc;
  try {
    in >> doc;
  } catch (const json::parse_error& e) {
    throw wittkit::error(wittkit::errc::malformed_input, std::string("JSON parse: ") + e.what());
  }
  return doc;
}

struct ComplexInput {
  wittkit::SimplicialComplex complex;
  wittkit::Filtration filtration;
};

ComplexInput load_complex_input(const std::string& path) {
  const json doc = read_json_file(path);
  ComplexInput input;
  input.complex = wittkit::load_complex(doc);
  input.filtration = wittkit::load_filtration(
      input.complex.dimension(), doc.contains("filtration") ? doc["filtration"] : json());
  return input;
}

void emit(const ordered_json& report, const std::string& out_path) {
  const std::string text = report.dump(2) + "\n";
  if (out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(out_path);
    if (!out) throw wittkit::error(wittkit::errc::malformed_input, "cannot write '" + out_path + "'");
    out << text;
  }
}

ordered_json ranks_json(const std::vector<int>& v) {
  ordered_json arr = ordered_json::array();
  for (int x : v) arr.push_back(x);
  return arr;
}

ordered_json matrix_json(const wittkit::SparseRationalMatrix& m) {
  ordered_json rows = ordered_json::array();
  for (int r = 0; r < m.rows(); ++r) {
    ordered_json row = ordered_json::array();
    for (int c = 0; c < m.cols(); ++c) row.push_back(wittkit::rational_to_string(m.get(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

int run_check(const std::string& input, const std::string& out) {
  const auto in = load_complex_input(input);
  ordered_json report;
  report["name"] = in.complex.name();
  report["dimension"] = in.complex.dimension();
  report["f_vector"] = ranks_json(in.complex.f_vector());
  const auto pm = wittkit::check_pseudomanifold(in.complex, in.filtration);
  ordered_json pj;
  pj["pure"] = pm.pure;
  pj["ridges_have_two_cofacets"] = pm.ridges_have_two_cofacets;
  pj["regular_part_dense"] = pm.regular_part_dense;
  report["pseudomanifold"] = std::move(pj);
  bool filtration_ok = true;
  std::string filtration_error;
  ordered_json strata = ordered_json::array();
  int depth_value = 0;
  try {
    const auto poset = wittkit::validate_filtration(in.complex, in.filtration);
    depth_value = poset.depth;
    for (const auto& s : poset.strata) {
      ordered_json sj;
      sj["id"] = s.id;
      sj["dim"] = s.dim;
      sj["regular"] = s.regular;
      sj["depth"] = poset.depth_of[s.id];
      strata.push_back(std::move(sj));
    }
  } catch (const wittkit::error& e) {
    filtration_ok = false;
    filtration_error = e.code_name();
  }
  report["filtration_valid"] = filtration_ok;
  if (!filtration_ok) report["filtration_error"] = filtration_error;
  report["strata"] = std::move(strata);
  report["depth"] = depth_value;
  const bool ok = pm.ok() && filtration_ok;
  report["ok"] = ok;
  emit(report, out);
  return ok ? 0 : 2;
}

int run_ih(const std::string& input, const std::string& perversity, int subdivisions,
           const std::string& out) {
  const auto in = load_complex_input(input);
  const auto p = wittkit::parse_perversity(perversity, in.complex.dimension());
  wittkit::IHOptions opts;
  opts.subdivisions = subdivisions;
  opts.with_bases = false;
  opts.threads = thread_cap();
  const auto res = wittkit::ih_ranks(in.complex, in.filtration, p, opts);
  ordered_json report;
  report["name"] = in.complex.name();
  report["dimension"] = in.complex.dimension();
  report["perversity"] = p.label();
  report["perversity_values"] = ranks_json(p.values());
  report["subdivisions"] = res.subdivisions;
  report["ranks"] = ranks_json(res.ranks);
  report["ic_dims"] = ranks_json(res.ic_dims);
  emit(report, out);
  return 0;
}

int run_witt(const std::string& input, int subdivisions, const std::string& out) {
  const auto in = load_complex_input(input);
  const auto report = wittkit::witt_check(in.complex, in.filtration, thread_cap(), subdivisions);
  ordered_json j;
  j["name"] = in.complex.name();
  j["dimension"] = in.complex.dimension();
  j["subdivisions"] = subdivisions;
  j["witt"] = report.witt;
  ordered_json strata = ordered_json::array();
  for (const auto& e : report.entries) {
    ordered_json sj;
    sj["stratum"] = e.stratum_id;
    sj["stratum_dim"] = e.stratum_dim;
    sj["link_dimension"] = e.link_dimension;
    sj["even_link"] = e.even_link;
    if (e.even_link) sj["middle_rank"] = e.middle_rank;
    sj["pass"] = e.pass;
    strata.push_back(std::move(sj));
  }
  j["strata"] = std::move(strata);
  emit(j, out);
  return report.witt ? 0 : 2;
}

int run_signature(const std::string& input, int subdivisions, const std::string& out) {
  const auto in = load_complex_input(input);
  const int n = in.complex.dimension();
  ordered_json j;
  j["name"] = in.complex.name();
  j["dimension"] = n;
  if (n % 4 != 0) {
    j["middle_rank"] = 0;
    j["matrix"] = ordered_json::array();
    j["signature"] = 0;
    j["note"] = n % 2 == 0 ? "dimension 2 mod 4: skew form, signature 0"
                           : "odd dimension: signature 0";
    emit(j, out);
    return 0;
  }
  wittkit::PairingOptions opts;
  opts.subdivisions = subdivisions;
  opts.threads = thread_cap();
  const auto pairing = wittkit::intersection_pairing(in.complex, in.filtration, opts);
  j["middle_rank"] = pairing.middle_rank;
  j["matrix"] = matrix_json(pairing.matrix);
  j["signature"] = pairing.signature;
  j["subdivisions"] = pairing.subdivisions;
  emit(j, out);
  return 0;
}

int run_resolve(const std::string& input, const std::string& out) {
  const auto in = load_complex_input(input);
  const auto tree = wittkit::resolve(in.complex, in.filtration, thread_cap());
  const auto ifs = wittkit::validate_ifs(tree);
  ordered_json j = wittkit::resolution_to_json(tree);
  ordered_json ij;
  ij["fibre_dims_distinct"] = ifs.fibre_dims_distinct;
  ij["extremes_depth_zero"] = ifs.extremes_depth_zero;
  ij["order_matches_depth"] = ifs.order_matches_depth;
  ij["ok"] = ifs.ok();
  j["ifs"] = std::move(ij);
  emit(j, out);
  return ifs.ok() ? 0 : 2;
}

int run_indicial(const std::string& input, const std::string& weight,
                 const std::optional<std::string>& alpha, const std::optional<std::string>& epsilon,
                 double tolerance, const std::string& out) {
  const auto spectrum = wittkit::load_spectrum(read_json_file(input));
  const auto a = wittkit::parse_rational(weight);
  const auto roots = wittkit::indicial_roots(spectrum, a, tolerance);
  ordered_json j;
  j["dim_link"] = spectrum.f0;
  j["weight"] = wittkit::rational_to_string(a);
  j["weight_in_range"] = roots.weight_in_range;
  j["tolerance"] = tolerance;
  j["exact"] = roots.all_exact;
  ordered_json rootsj = ordered_json::array();
  ordered_json approx = ordered_json::array();
  ordered_json shifted = ordered_json::array();
  for (size_t i = 0; i < roots.roots.size(); ++i) {
    const auto& r = roots.roots[i];
    ordered_json rj;
    rj["value"] = r.value.to_string();
    rj["approx"] = r.value.approx;
    ordered_json fams = ordered_json::array();
    for (int f : r.families) fams.push_back(f);
    rj["families"] = std::move(fams);
    rootsj.push_back(std::move(rj));
    approx.push_back(r.value.approx);
    shifted.push_back(roots.shifted[i].to_string());
  }
  j["roots"] = std::move(approx);
  j["root_details"] = std::move(rootsj);
  j["shifted"] = std::move(shifted);
  int code = 0;
  if (alpha && epsilon) {
    const auto rep = wittkit::weight_interval_clear(spectrum, a, wittkit::parse_rational(*alpha),
                                                    wittkit::parse_rational(*epsilon), tolerance);
    ordered_json wj;
    wj["alpha"] = wittkit::rational_to_string(rep.window.alpha);
    wj["epsilon"] = wittkit::rational_to_string(rep.window.epsilon);
    wj["delta0_alpha"] = wittkit::rational_to_string(rep.window.delta0_alpha);
    wj["clear"] = rep.clear;
    ordered_json inter = ordered_json::array();
    for (const auto& v : rep.intersection) inter.push_back(v.to_string());
    wj["intersection"] = std::move(inter);
    j["window"] = std::move(wj);
    code = rep.clear ? 0 : 2;
  } else if (alpha || epsilon) {
    throw wittkit::error(wittkit::errc::malformed_input,
                         "--alpha and --epsilon must be given together");
  }
  emit(j, out);
  return code;
}

int run_gap(const std::string& input, const std::string& weight, double tolerance,
            const std::string& out) {
  const auto spectrum = wittkit::load_spectrum(read_json_file(input));
  const auto a = wittkit::parse_rational(weight);
  ordered_json j;
  j["dim_link"] = spectrum.f0;
  j["cutoff_note"] = spectrum.cutoff_note;
  const bool gap = wittkit::check_gap_condition(spectrum, tolerance);
  j["gap_condition"] = gap;
  j["witt_spectral_check"] = wittkit::witt_spectral_check(spectrum);
  j["harmonic_betti"] = ranks_json(spectrum.harmonic_betti());
  const auto rescale = wittkit::rescale_for_gap(spectrum, tolerance);
  ordered_json rj;
  rj["infinite"] = rescale.infinite;
  if (!rescale.infinite) {
    rj["c_max"] = rescale.c_max.to_string();
    rj["c_max_approx"] = rescale.c_max.approx;
    rj["scaled_gap_condition"] = wittkit::check_gap_condition(rescale.scaled, tolerance);
  }
  j["rescale"] = std::move(rj);
  const auto cert = wittkit::normal_injectivity_certificate(spectrum, a, tolerance);
  ordered_json cj;
  cj["status"] = cert.status == wittkit::CertificateStatus::pass        ? "PASS"
                 : cert.status == wittkit::CertificateStatus::incomplete ? "INCOMPLETE"
                                                                         : "FAIL";
  ordered_json viols = ordered_json::array();
  for (const auto& v : cert.violations) {
    ordered_json vj;
    vj["kind"] = v.kind == wittkit::CertificateViolation::Kind::gap ? "gap" : "middle_harmonic";
    vj["degree"] = v.witness.degree;
    vj["lambda"] = v.witness.lambda.to_string();
    viols.push_back(std::move(vj));
  }
  cj["violations"] = std::move(viols);
  cj["missing_degrees"] = ranks_json(cert.missing_degrees);
  cj["weight_in_range"] = cert.weight_in_range;
  j["certificate"] = std::move(cj);
  emit(j, out);
  return gap ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"wittkit: intersection homology, Witt checks, signatures, resolutions,\n"
               "and indicial-root computations for stratified pseudomanifolds"};
  app.require_subcommand(1);

  std::string input, out_path;
  std::string perversity = "lower-middle";
  int subdivisions = 1;
  std::string weight = "1/2";
  std::optional<std::string> alpha, epsilon;
  double tolerance = 1e-9;

  auto add_common = [&](CLI::App* cmd, bool spectrum_input) {
    cmd->add_option("input", input,
                    spectrum_input ? "spectrum-JSON file" : "complex-JSON file (with optional filtration)")
        ->required();
    cmd->add_option("--out", out_path, "write the JSON report to this path instead of stdout");
  };

  auto* check = app.add_subcommand("check", "validate pseudomanifold conditions and the filtration");
  add_common(check, false);

  auto* ih = app.add_subcommand("ih", "intersection homology ranks");
  add_common(ih, false);
  ih->add_option("--perversity", perversity,
                 "lower-middle | upper-middle | zero | top | custom:v2,...,vn");
  ih->add_option("--subdivisions", subdivisions, "barycentric subdivisions (default 1)");

  auto* witt = app.add_subcommand("witt", "decide the Witt condition");
  add_common(witt, false);
  witt->add_option("--subdivisions", subdivisions, "barycentric subdivisions (default 1)");

  auto* sig = app.add_subcommand("signature", "middle intersection pairing and signature");
  add_common(sig, false);
  sig->add_option("--subdivisions", subdivisions, "barycentric subdivisions (default 1)");

  auto* res = app.add_subcommand("resolve", "manifold-with-corners resolution tree");
  add_common(res, false);

  auto* ind = app.add_subcommand("indicial", "indicial-root containment set of a link spectrum");
  add_common(ind, true);
  ind->add_option("--weight", weight, "weight a (rational, default 1/2)");
  std::string alpha_raw, epsilon_raw;
  auto* alpha_opt = ind->add_option("--alpha", alpha_raw, "interval center for the clearance test");
  auto* eps_opt = ind->add_option("--epsilon", epsilon_raw, "interval half-width in (0,1)");
  ind->add_option("--tolerance", tolerance, "root comparison tolerance (default 1e-9)");

  auto* gap = app.add_subcommand("gap", "gap condition, rescaling, and injectivity certificate");
  add_common(gap, true);
  gap->add_option("--weight", weight, "weight a (rational, default 1/2)");
  gap->add_option("--tolerance", tolerance, "comparison tolerance (default 1e-9)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (check->parsed()) return run_check(input, out_path);
    if (ih->parsed()) return run_ih(input, perversity, subdivisions, out_path);
    if (witt->parsed()) return run_witt(input, subdivisions, out_path);
    if (sig->parsed()) return run_signature(input, subdivisions, out_path);
    if (res->parsed()) return run_resolve(input, out_path);
    if (ind->parsed()) {
      if (alpha_opt->count()) alpha = alpha_raw;
      if (eps_opt->count()) epsilon = epsilon_raw;
      return run_indicial(input, weight, alpha, epsilon, tolerance, out_path);
    }
    if (gap->parsed()) return run_gap(input, weight, tolerance, out_path);
  } catch (const wittkit::error& e) {
    nlohmann::ordered_json err;
    err["error"] = e.code_name();
    err["detail"] = e.detail();
    std::cout << err.dump(2) << "\n";
    return 1;
  } catch (const std::exception& e) {
    nlohmann::ordered_json err;
    err["error"] = "InternalError";
    err["detail"] = e.what();
    std::cout << err.dump(2) << "\n";
    return 1;
  }
  return 1;
}

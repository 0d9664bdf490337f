#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "wittkit/errors.hpp"
#include "wittkit/rational.hpp"

namespace wittkit {

// ---------------------------------------------------------------------------
// Spectral values: exact rationals whenever the arithmetic stays rational
// (all inputs rational and square roots of perfect squares), doubles
// otherwise. Every value keeps a double approximation alongside.
// ---------------------------------------------------------------------------

struct SpectralValue {
  double approx = 0.0;
  std::optional<Rational> exact;

  static SpectralValue of(const Rational& q) { return {to_double(q), q}; }
  static SpectralValue of(double d) { return {d, std::nullopt}; }

  static SpectralValue sqrt_of(const SpectralValue& v) {
    if (v.exact) {
      if (const auto root = exact_sqrt(*v.exact)) return of(*root);
      return of(std::sqrt(to_double(*v.exact)));
    }
    return of(std::sqrt(v.approx));
  }

  SpectralValue operator+(const SpectralValue& o) const {
    if (exact && o.exact) return of(Rational(*exact + *o.exact));
    return of(approx + o.approx);
  }
  SpectralValue operator-(const SpectralValue& o) const {
    if (exact && o.exact) return of(Rational(*exact - *o.exact));
    return of(approx - o.approx);
  }
  SpectralValue operator-() const {
    if (exact) return of(Rational(-*exact));
    return of(-approx);
  }

  bool is_zero() const { return exact ? *exact == 0 : approx == 0.0; }

  // Comparison under an absolute tolerance; exact when both sides are exact.
  bool equals(const SpectralValue& o, double tol) const {
    if (exact && o.exact) return *exact == *o.exact;
    return std::abs(approx - o.approx) <= tol;
  }
  bool less_eq(const SpectralValue& o, double tol) const {
    if (exact && o.exact) return *exact <= *o.exact;
    return approx <= o.approx + tol;
  }

  std::string to_string() const {
    if (exact) return rational_to_string(*exact);
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", approx);
    return buf;
  }
};

// ---------------------------------------------------------------------------
// Link spectra
// ---------------------------------------------------------------------------

struct SpectralMode {
  int degree = 0;            // form degree k in {0..f0}
  SpectralValue lambda;      // eigenvalue of the form Laplacian, >= 0
  int multiplicity = 1;
};

struct LinkSpectrum {
  int f0 = 0;                       // link dimension
  std::vector<SpectralMode> modes;  // sorted by (degree, lambda approx)
  std::string cutoff_note;

  static LinkSpectrum create(int f0, std::vector<SpectralMode> modes, std::string note = "") {
    if (f0 < 0) throw error(errc::malformed_input, "negative link dimension");
    for (const auto& m : modes) {
      if (m.degree < 0 || m.degree > f0)
        throw error(errc::malformed_input, "mode degree outside [0, f0]");
      if (m.multiplicity < 1) throw error(errc::malformed_input, "multiplicity must be positive");
      if (m.lambda.exact ? (*m.lambda.exact < 0) : (m.lambda.approx < 0))
        throw error(errc::malformed_input, "negative eigenvalue");
    }
    std::stable_sort(modes.begin(), modes.end(), [](const SpectralMode& a, const SpectralMode& b) {
      if (a.degree != b.degree) return a.degree < b.degree;
      return a.lambda.approx < b.lambda.approx;
    });
    LinkSpectrum s;
    s.f0 = f0;
    s.modes = std::move(modes);
    s.cutoff_note = std::move(note);
    return s;
  }

  // Per-degree count of lambda = 0 modes (with multiplicity).
  std::vector<int> harmonic_betti() const {
    std::vector<int> betti(f0 + 1, 0);
    for (const auto& m : modes)
      if (m.lambda.is_zero()) betti[m.degree] += m.multiplicity;
    return betti;
  }

  std::vector<int> degrees_without_modes() const {
    std::vector<bool> seen(f0 + 1, false);
    for (const auto& m : modes) seen[m.degree] = true;
    std::vector<int> missing;
    for (int k = 0; k <= f0; ++k)
      if (!seen[k]) missing.push_back(k);
    return missing;
  }
};

// spectrum-JSON: {"dim_link": f0, "modes": [{"degree": k, "lambda":
// number-or-rational-string, "multiplicity": m}], "cutoff_note": string}
inline LinkSpectrum load_spectrum(const nlohmann::json& doc) {
  if (!doc.is_object() || !doc.contains("dim_link") || !doc.contains("modes"))
    throw error(errc::malformed_input, "spectrum document needs 'dim_link' and 'modes'");
  std::vector<SpectralMode> modes;
  for (const auto& mj : doc["modes"]) {
    SpectralMode m;
    m.degree = mj.at("degree").get<int>();
    const auto& lam = mj.at("lambda");
    if (lam.is_string())
      m.lambda = SpectralValue::of(parse_rational(lam.get<std::string>()));
    else if (lam.is_number_integer())
      m.lambda = SpectralValue::of(Rational(lam.get<long>()));
    else if (lam.is_number())
      m.lambda = SpectralValue::of(lam.get<double>());
    else
      throw error(errc::malformed_input, "lambda must be a number or rational string");
    m.multiplicity = mj.value("multiplicity", 1);
    modes.push_back(std::move(m));
  }
  return LinkSpectrum::create(doc["dim_link"].get<int>(), std::move(modes),
                              doc.value("cutoff_note", std::string()));
}

inline nlohmann::ordered_json spectrum_to_json(const LinkSpectrum& s) {
  nlohmann::ordered_json j;
  j["dim_link"] = s.f0;
  nlohmann::ordered_json modes = nlohmann::ordered_json::array();
  for (const auto& m : s.modes) {
    nlohmann::ordered_json mj;
    mj["degree"] = m.degree;
    if (m.lambda.exact)
      mj["lambda"] = rational_to_string(*m.lambda.exact);
    else
      mj["lambda"] = m.lambda.approx;
    mj["multiplicity"] = m.multiplicity;
    modes.push_back(std::move(mj));
  }
  j["modes"] = std::move(modes);
  j["cutoff_note"] = s.cutoff_note;
  return j;
}

// Built-in generator: the circle of circumference (circumference_over_pi * pi)
// carries Delta-eigenvalues (2m / circumference_over_pi)^2 on 0- and 1-forms,
// multiplicity 2 for m >= 1, truncated at max_mode.
inline LinkSpectrum circle_spectrum(const Rational& circumference_over_pi, int max_mode = 8) {
  if (circumference_over_pi <= 0)
    throw error(errc::malformed_input, "circumference must be positive");
  std::vector<SpectralMode> modes;
  for (int degree : {0, 1}) {
    modes.push_back({degree, SpectralValue::of(Rational(0)), 1});
    for (int m = 1; m <= max_mode; ++m) {
      Rational lambda = Rational(2 * m) / circumference_over_pi;
      lambda = lambda * lambda;
      modes.push_back({degree, SpectralValue::of(lambda), 2});
    }
  }
  return LinkSpectrum::create(1, std::move(modes),
                              "circle Fourier modes truncated at m = " + std::to_string(max_mode));
}

// ---------------------------------------------------------------------------
// Gap condition and rescaling
// ---------------------------------------------------------------------------

// Spec(de Rham on the link) intersects (-1,1) only at 0 iff every nonzero
// Laplace eigenvalue is >= 1.
inline bool check_gap_condition(const LinkSpectrum& s, double tol = 1e-9) {
  const SpectralValue one = SpectralValue::of(Rational(1));
  for (const auto& m : s.modes) {
    if (m.lambda.is_zero()) continue;
    if (!one.less_eq(m.lambda, tol)) return false;
  }
  return true;
}

// Topological half of the assumption: no middle-degree harmonic forms when
// the link dimension is even.
inline bool witt_spectral_check(const LinkSpectrum& s) {
  if (s.f0 % 2 != 0) return true;
  return s.harmonic_betti()[s.f0 / 2] == 0;
}

struct RescaleResult {
  bool infinite = false;    // no nonzero eigenvalue: any scale works
  SpectralValue c_max;      // sqrt of the smallest nonzero eigenvalue
  LinkSpectrum scaled;      // spectrum under g -> c_max^2 g
};

// Scaling the metric by c^2 scales eigenvalues by c^-2; the largest
// gap-restoring scale is sqrt(lambda_min).
inline RescaleResult rescale_for_gap(const LinkSpectrum& s, double tol = 1e-9) {
  RescaleResult out;
  auto strictly_less = [](const SpectralValue& x, const SpectralValue& y) {
    if (x.exact && y.exact) return *x.exact < *y.exact;
    return x.approx < y.approx;
  };
  const SpectralMode* min_mode = nullptr;
  for (const auto& m : s.modes) {
    if (m.lambda.is_zero()) continue;
    if (!min_mode || strictly_less(m.lambda, min_mode->lambda)) min_mode = &m;
  }
  if (!min_mode) {
    out.infinite = true;
    out.scaled = s;
    return out;
  }
  const SpectralValue lambda_min = min_mode->lambda;
  out.c_max = SpectralValue::sqrt_of(lambda_min);
  LinkSpectrum scaled = s;
  for (auto& m : scaled.modes) {
    if (m.lambda.exact && lambda_min.exact)
      m.lambda = SpectralValue::of(Rational(*m.lambda.exact / *lambda_min.exact));
    else
      m.lambda = SpectralValue::of(m.lambda.approx / lambda_min.approx);
  }
  out.scaled = std::move(scaled);
  if (!check_gap_condition(out.scaled, tol))
    throw error(errc::malformed_input, "internal: rescaled spectrum fails the gap condition");
  return out;
}

// ---------------------------------------------------------------------------
// Indicial roots
// ---------------------------------------------------------------------------

struct IndicialRoot {
  SpectralValue value;
  std::set<int> families;  // subset of {1, 2, 3}
};

struct IndicialRootSet {
  Rational weight;          // a
  bool weight_in_range;     // a in (0,1)
  int f0 = 0;
  double tolerance = 1e-9;
  std::vector<IndicialRoot> roots;      // sorted ascending, deduplicated
  std::vector<SpectralValue> shifted;   // value + f0/2 + 1/2, aligned with roots
  bool all_exact = true;
};

// Containment set for the indicial roots: three families built from the link
// spectrum. Family 1 runs over degrees k != f0/2 carrying harmonic modes;
// families 2 and 3 run over nonzero eigenvalues, with inner shifts
// l in {+-1, +-3} and l' in {+-1}. The set contains the roots; it is not
// claimed to be exactly the root set.
inline IndicialRootSet indicial_roots(const LinkSpectrum& s, const Rational& a,
                                      double tol = 1e-9) {
  IndicialRootSet out;
  out.weight = a;
  out.weight_in_range = a > 0 && a < 1;
  out.f0 = s.f0;
  out.tolerance = tol;
  const Rational half(1, 2);
  const Rational f0_half = Rational(s.f0) * half;
  const Rational base = -f0_half - a;

  std::vector<IndicialRoot> collected;
  auto add = [&](SpectralValue v, int family) {
    for (auto& r : collected) {
      if (r.value.equals(v, tol)) {
        r.families.insert(family);
        if (!v.exact) r.value.exact.reset();
        return;
      }
    }
    collected.push_back({std::move(v), {family}});
  };

  const auto betti = s.harmonic_betti();
  for (int k = 0; k <= s.f0; ++k) {
    if (betti[k] == 0) continue;
    if (Rational(2 * k) == Rational(s.f0)) continue;  // k == f0/2 excluded
    for (int inner : {+1, -1}) {
      Rational magnitude = Rational(k) - f0_half + Rational(inner) * half;
      if (magnitude < 0) magnitude = -magnitude;
      add(SpectralValue::of(Rational(base + magnitude)), 1);
      add(SpectralValue::of(Rational(base - magnitude)), 1);
    }
  }

  auto radical_roots = [&](const SpectralMode& m, const Rational& offset_base, int ell,
                           int family) {
    const Rational shift = Rational(m.degree) - f0_half + Rational(ell) * half;
    SpectralValue radicand;
    if (m.lambda.exact)
      radicand = SpectralValue::of(Rational(*m.lambda.exact + shift * shift));
    else
      radicand = SpectralValue::of(m.lambda.approx + to_double(shift * shift));
    const SpectralValue root = SpectralValue::sqrt_of(radicand);
    const SpectralValue center = SpectralValue::of(offset_base);
    add(center + root, family);
    add(center - root, family);
  };
  for (const auto& m : s.modes) {
    if (m.lambda.is_zero()) continue;
    for (int ell : {1, -1, 3, -3}) radical_roots(m, base, ell, 2);
    for (int ell : {1, -1}) radical_roots(m, Rational(1) + base, ell, 3);
  }

  std::sort(collected.begin(), collected.end(),
            [](const IndicialRoot& x, const IndicialRoot& y) {
              return x.value.approx < y.value.approx;
            });
  out.roots = std::move(collected);
  const Rational shift_amount = f0_half + half;
  for (const auto& r : out.roots) {
    out.shifted.push_back(r.value + SpectralValue::of(shift_amount));
    if (!r.value.exact) out.all_exact = false;
  }
  return out;
}

// Adjoint reflection of the indicial variable: zeta -> -(zeta + f0 + 2a + 1).
// An involution with fixed point -(f0 + 2a + 1)/2.
inline Rational adjoint_reflect(const Rational& zeta, int f0, const Rational& a) {
  return -(zeta + Rational(f0) + 2 * a + 1);
}
inline double adjoint_reflect(double zeta, int f0, double a) { return -(zeta + f0 + 2 * a + 1); }

// The K_nu Bessel mode is excluded from the weighted L^2 space iff
// |nu| + a >= 1 (boundary included).
inline bool bessel_mode_excluded(const SpectralValue& nu, const Rational& a, double tol = 1e-9) {
  SpectralValue abs_nu = nu;
  if (abs_nu.exact) {
    if (*abs_nu.exact < 0) abs_nu = SpectralValue::of(Rational(-*abs_nu.exact));
  } else {
    abs_nu = SpectralValue::of(std::abs(nu.approx));
  }
  const SpectralValue sum = abs_nu + SpectralValue::of(a);
  return SpectralValue::of(Rational(1)).less_eq(sum, tol);
}

// L^2 cutoff: a function in O(x^gamma) lies in x^a L^2(x^{f0} dx) exactly when
// gamma > delta0(a) = a - (f0+1)/2.
inline Rational l2_cutoff(const Rational& gamma, int f0) {
  return gamma - Rational(f0 + 1, 2);
}

struct WeightWindow {
  Rational alpha;
  Rational epsilon;  // in (0,1)
  Rational delta0_alpha;
};

struct WeightIntervalReport {
  WeightWindow window;
  bool clear = false;                     // containment holds
  std::vector<SpectralValue> intersection;  // shifted roots inside the interval
};

// Hypothesis of the integration-by-parts lemma: the shifted root set
// {root + f0/2 + 1/2} meets [alpha - eps, alpha + eps] at most in {alpha}.
inline WeightIntervalReport weight_interval_clear(const LinkSpectrum& s, const Rational& a,
                                                  const Rational& alpha, const Rational& epsilon,
                                                  double tol = 1e-9) {
  if (!(epsilon > 0 && epsilon < 1))
    throw error(errc::malformed_input, "epsilon must lie in (0,1)");
  WeightIntervalReport report;
  report.window = {alpha, epsilon, l2_cutoff(alpha, s.f0)};
  const auto roots = indicial_roots(s, a, tol);
  const SpectralValue lo = SpectralValue::of(Rational(alpha - epsilon));
  const SpectralValue hi = SpectralValue::of(Rational(alpha + epsilon));
  const SpectralValue center = SpectralValue::of(alpha);
  report.clear = true;
  for (const auto& v : roots.shifted) {
    if (lo.less_eq(v, tol) && v.less_eq(hi, tol)) {
      report.intersection.push_back(v);
      if (!v.equals(center, tol)) report.clear = false;
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// Normal-operator injectivity certificate
// ---------------------------------------------------------------------------

enum class CertificateStatus { pass, fail, incomplete };

struct CertificateViolation {
  enum class Kind { gap, middle_harmonic } kind;
  SpectralMode witness;
};

struct InjectivityCertificate {
  CertificateStatus status = CertificateStatus::pass;
  std::vector<CertificateViolation> violations;
  std::vector<int> missing_degrees;  // degrees in {0..f0} with no modes supplied
  bool weight_in_range = true;
};

// PASS requires every nonzero eigenvalue >= 1 and, for even f0, no harmonic
// forms in middle degree. Degrees without any supplied modes downgrade a
// would-be PASS to INCOMPLETE.
inline InjectivityCertificate normal_injectivity_certificate(const LinkSpectrum& s,
                                                             const Rational& a,
                                                             double tol = 1e-9) {
  InjectivityCertificate cert;
  cert.weight_in_range = a > 0 && a < 1;
  const SpectralValue one = SpectralValue::of(Rational(1));
  for (const auto& m : s.modes) {
    if (m.lambda.is_zero()) {
      if (s.f0 % 2 == 0 && m.degree == s.f0 / 2)
        cert.violations.push_back({CertificateViolation::Kind::middle_harmonic, m});
    } else if (!one.less_eq(m.lambda, tol)) {
      cert.violations.push_back({CertificateViolation::Kind::gap, m});
    }
  }
  cert.missing_degrees = s.degrees_without_modes();
  if (!cert.violations.empty())
    cert.status = CertificateStatus::fail;
  else if (!cert.missing_degrees.empty())
    cert.status = CertificateStatus::incomplete;
  else
    cert.status = CertificateStatus::pass;
  return cert;
}

}  // namespace wittkit

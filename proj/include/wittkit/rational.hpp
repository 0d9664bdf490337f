#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>

#include "wittkit/errors.hpp"

namespace wittkit {

using Rational = mpq_class;

// Canonical string form: "p" when the denominator is 1, else "p/q" with q > 0.
inline std::string rational_to_string(const Rational& q) {
  Rational c = q;
  c.canonicalize();
  if (c.get_den() == 1) return c.get_num().get_str();
  return c.get_num().get_str() + "/" + c.get_den().get_str();
}

// Accepts "p", "p/q", and decimal literals like "-0.25" (parsed exactly).
inline Rational parse_rational(const std::string& text) {
  if (text.empty()) throw error(errc::malformed_input, "empty rational literal");
  std::string s = text;
  auto bad = [&]() { return error(errc::malformed_input, "bad rational literal '" + text + "'"); };
  const auto dot = s.find('.');
  if (dot != std::string::npos) {
    if (s.find('/') != std::string::npos) throw bad();
    std::string digits = s.substr(0, dot) + s.substr(dot + 1);
    const size_t frac_len = s.size() - dot - 1;
    if (digits.empty() || frac_len == 0) throw bad();
    try {
      mpz_class num(digits, 10);  // explicit base: no octal surprises on leading zeros
      mpz_class den;
      mpz_ui_pow_ui(den.get_mpz_t(), 10, frac_len);
      Rational r(num, den);
      r.canonicalize();
      return r;
    } catch (const std::invalid_argument&) {
      throw bad();
    }
  }
  try {
    Rational r(s, 10);
    r.canonicalize();
    if (r.get_den() == 0) throw bad();
    return r;
  } catch (const std::invalid_argument&) {
    throw bad();
  }
}

inline double to_double(const Rational& q) { return q.get_d(); }

// Exact square root when the argument is a perfect square of a rational.
inline std::optional<Rational> exact_sqrt(const Rational& q) {
  if (q < 0) return std::nullopt;
  Rational c = q;
  c.canonicalize();
  mpz_class num_root, den_root;
  if (mpz_perfect_square_p(c.get_num().get_mpz_t()) == 0) return std::nullopt;
  if (mpz_perfect_square_p(c.get_den().get_mpz_t()) == 0) return std::nullopt;
  mpz_sqrt(num_root.get_mpz_t(), c.get_num().get_mpz_t());
  mpz_sqrt(den_root.get_mpz_t(), c.get_den().get_mpz_t());
  return Rational(num_root, den_root);
}

}  // namespace wittkit

#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>

#include "dartree/error.hpp"

namespace dartree {

using Integer = mpz_class;
using Rational = mpq_class;

inline Rational make_rational(long num, long den = 1) {
  Rational q(num, den);
  q.canonicalize();
  return q;
}

inline Rational make_rational(const Integer& num, const Integer& den) {
  Rational q(num, den);
  q.canonicalize();
  return q;
}

/// "p/q" in lowest terms, or "p" when the denominator is one.
inline std::string to_string(const Rational& q) { return q.get_str(10); }

/// Parses "p", "p/q" or a terminating decimal such as "0.25".
inline Rational parse_rational(std::string_view text) {
  std::string s(text);
  auto trim = [](std::string& t) {
    const auto b = t.find_first_not_of(" \t");
    const auto e = t.find_last_not_of(" \t");
    t = (b == std::string::npos) ? std::string() : t.substr(b, e - b + 1);
  };
  trim(s);
  if (s.empty()) fail(ErrorKind::MalformedInput, "empty rational literal");
  Rational q;
  try {
    if (const auto dot = s.find('.'); dot != std::string::npos && s.find('/') == std::string::npos) {
      std::string digits = s.substr(0, dot) + s.substr(dot + 1);
      const auto frac = s.size() - dot - 1;
      Integer den;
      mpz_ui_pow_ui(den.get_mpz_t(), 10, static_cast<unsigned long>(frac));
      q = Rational(Integer(digits), den);
    } else {
      if (q.set_str(s, 10) != 0) fail(ErrorKind::MalformedInput, "bad rational literal '" + s + "'");
      if (q.get_den() == 0) fail(ErrorKind::MalformedInput, "zero denominator in '" + s + "'");
    }
  } catch (const std::invalid_argument&) {
    fail(ErrorKind::MalformedInput, "bad rational literal '" + s + "'");
  }
  q.canonicalize();
  return q;
}

inline Integer factorial(unsigned long n) {
  Integer r;
  mpz_fac_ui(r.get_mpz_t(), n);
  return r;
}

/// Rising factorial x (x+1) ... (x+n-1); empty product is 1.
inline Rational rising(const Rational& x, unsigned long n) {
  Rational r = 1;
  for (unsigned long j = 0; j < n; ++j) r *= x + Rational(static_cast<long>(j));
  return r;
}

inline double to_double(const Rational& q) { return q.get_d(); }

}  // namespace dartree

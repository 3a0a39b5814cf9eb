#pragma once

/**
 * @file radical.hpp
 * @brief Exact real numbers of the form  sum_i q_i * sqrt(r_i).
 *
 * Multishift weights are square roots of rationals. Square roots of distinct
 * squarefree positive integers are linearly independent over Q, so keeping a
 * map  radicand -> rational coefficient  with squarefree radicands gives a
 * canonical representation that is closed under +, -, * and has an exact
 * zero test. This lets operator identities (adjoints, moment norms,
 * diagonality) be checked without floating point.
 */

#include <cmath>
#include <map>
#include <string>
#include <utility>

#include "dartree/rational.hpp"

namespace dartree {

namespace detail {

/// Splits n > 0 as n = s^2 * r with r squarefree. Trial division handles the
/// small primes that occur in weights; a cofactor with only large prime
/// factors is resolved exactly when it has at most two of them.
inline std::pair<Integer, Integer> square_split(Integer n) {
  if (n <= 0) fail(ErrorKind::InvalidParameter, "square_split of non-positive integer");
  Integer s = 1, r = 1;
  constexpr unsigned long kBound = 100000;
  bool exhausted = true;
  for (unsigned long p = 2;; p += (p == 2 ? 1 : 2)) {
    if (Integer(p) * p > n) break;
    if (p > kBound) {
      exhausted = false;
      break;
    }
    if (mpz_divisible_ui_p(n.get_mpz_t(), p) == 0) continue;
    int e = 0;
    while (mpz_divisible_ui_p(n.get_mpz_t(), p) != 0) {
      mpz_divexact_ui(n.get_mpz_t(), n.get_mpz_t(), p);
      ++e;
    }
    for (int k = 0; k < e / 2; ++k) s *= p;
    if (e % 2) r *= p;
  }
  if (n > 1) {
    if (exhausted) {
      r *= n;  // n is prime
    } else if (mpz_perfect_square_p(n.get_mpz_t()) != 0) {
      Integer root;
      mpz_sqrt(root.get_mpz_t(), n.get_mpz_t());
      s *= root;
    } else {
      // every prime factor exceeds kBound, so below kBound^3 there are at most two
      const Integer cube = Integer(kBound) * kBound * kBound;
      if (n >= cube) fail(ErrorKind::InvalidParameter, "radicand too large to factor: " + n.get_str());
      r *= n;
    }
  }
  return {s, r};
}

}  // namespace detail

class Radical {
 public:
  Radical() = default;
  Radical(const Rational& q) {  // NOLINT(google-explicit-constructor)
    if (q != 0) terms_.emplace(Integer(1), q);
  }
  Radical(long v) : Radical(Rational(v)) {}  // NOLINT(google-explicit-constructor)

  /// sqrt(q) for q >= 0.
  static Radical sqrt(const Rational& q) {
    if (q < 0) fail(ErrorKind::InvalidParameter, "sqrt of negative rational");
    if (q == 0) return {};
    // sqrt(n/m) = sqrt(n*m)/m
    const Integer nm = q.get_num() * q.get_den();
    auto [s, r] = detail::square_split(nm);
    Radical out;
    Rational coef(s, q.get_den());
    coef.canonicalize();
    out.terms_.emplace(r, coef);
    return out;
  }

  bool is_zero() const { return terms_.empty(); }
  bool is_rational() const { return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first == 1); }

  Rational rational_value() const {
    if (!is_rational()) fail(ErrorKind::InvalidParameter, "radical is irrational: " + str());
    return terms_.empty() ? Rational(0) : terms_.begin()->second;
  }

  double to_double() const {
    double v = 0;
    for (const auto& [r, q] : terms_) v += q.get_d() * std::sqrt(r.get_d());
    return v;
  }

  std::string str() const {
    if (terms_.empty()) return "0";
    std::string s;
    for (const auto& [r, q] : terms_) {
      if (!s.empty()) s += " + ";
      s += "(" + q.get_str() + ")";
      if (r != 1) s += "*sqrt(" + r.get_str() + ")";
    }
    return s;
  }

  Radical& operator+=(const Radical& o) {
    for (const auto& [r, q] : o.terms_) add_term(r, q);
    return *this;
  }
  Radical& operator-=(const Radical& o) {
    for (const auto& [r, q] : o.terms_) add_term(r, -q);
    return *this;
  }
  Radical operator-() const {
    Radical out = *this;
    for (auto& [r, q] : out.terms_) q = -q;
    return out;
  }
  friend Radical operator+(Radical a, const Radical& b) { return a += b; }
  friend Radical operator-(Radical a, const Radical& b) { return a -= b; }

  friend Radical operator*(const Radical& a, const Radical& b) {
    Radical out;
    for (const auto& [ra, qa] : a.terms_) {
      for (const auto& [rb, qb] : b.terms_) {
        // sqrt(ra) sqrt(rb) = g sqrt((ra/g)(rb/g)) with g = gcd(ra, rb)
        Integer g;
        mpz_gcd(g.get_mpz_t(), ra.get_mpz_t(), rb.get_mpz_t());
        Integer r = (ra / g) * (rb / g);
        out.add_term(r, qa * qb * Rational(g));
      }
    }
    return out;
  }
  Radical& operator*=(const Radical& o) { return *this = *this * o; }

  friend bool operator==(const Radical& a, const Radical& b) { return a.terms_ == b.terms_; }
  friend bool operator!=(const Radical& a, const Radical& b) { return !(a == b); }

 private:
  void add_term(const Integer& r, const Rational& q) {
    if (q == 0) return;
    auto it = terms_.find(r);
    if (it == terms_.end()) {
      terms_.emplace(r, q);
      return;
    }
    it->second += q;
    if (it->second == 0) terms_.erase(it);
  }

  std::map<Integer, Rational> terms_;
};

/// Scalar-type hooks used by the templated vector/operator code.
template <class T>
struct ScalarTraits;

template <>
struct ScalarTraits<double> {
  static double from_rational(const Rational& q) { return q.get_d(); }
  static double sqrt_of(const Rational& q) { return std::sqrt(q.get_d()); }
  static bool is_zero(double x) { return x == 0.0; }
  static double to_double(double x) { return x; }
};

template <>
struct ScalarTraits<Radical> {
  static Radical from_rational(const Rational& q) { return Radical(q); }
  static Radical sqrt_of(const Rational& q) { return Radical::sqrt(q); }
  static bool is_zero(const Radical& x) { return x.is_zero(); }
  static double to_double(const Radical& x) { return x.to_double(); }
};

template <>
struct ScalarTraits<Rational> {
  static Rational from_rational(const Rational& q) { return q; }
  static bool is_zero(const Rational& x) { return x == 0; }
  static double to_double(const Rational& x) { return x.get_d(); }
};

}  // namespace dartree

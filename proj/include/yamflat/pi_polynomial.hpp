#pragma once

#include <map>
#include <string>
#include <string_view>

#include "yamflat/interval.hpp"
#include "yamflat/rational.hpp"

namespace yamflat {

/// Laurent polynomial in pi with rational coefficients, e.g. 8*pi^2 or 2/3*pi^-1.
/// pi is transcendental, so such a value is zero iff every coefficient is zero,
/// and a nonzero value always has a decidable sign.
class PiPolynomial {
 public:
  PiPolynomial() = default;
  PiPolynomial(const Rational& c, int pi_exponent = 0);  // NOLINT(google-explicit-constructor)
  PiPolynomial(long c) : PiPolynomial(Rational(c)) {}     // NOLINT(google-explicit-constructor)

  static PiPolynomial pi_power(int k) { return PiPolynomial(Rational(1), k); }

  /// Grammar: term (('+'|'-') term)*, term := [rational] ['*'] ['pi' ['^' int]].
  static PiPolynomial parse(std::string_view text);

  const std::map<int, Rational>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_monomial() const { return terms_.size() == 1; }
  bool is_rational() const { return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first == 0); }
  Rational coefficient(int k) const;

  PiPolynomial& operator+=(const PiPolynomial& o);
  PiPolynomial& operator-=(const PiPolynomial& o);
  PiPolynomial& operator*=(const PiPolynomial& o);

  friend PiPolynomial operator+(PiPolynomial a, const PiPolynomial& b) { return a += b; }
  friend PiPolynomial operator-(PiPolynomial a, const PiPolynomial& b) { return a -= b; }
  friend PiPolynomial operator*(PiPolynomial a, const PiPolynomial& b) { return a *= b; }
  PiPolynomial operator-() const;

  friend bool operator==(const PiPolynomial& a, const PiPolynomial& b) { return a.terms_ == b.terms_; }

  /// Integer power; negative exponents require a monomial.
  PiPolynomial pow(long n) const;
  /// Division by a nonzero monomial.
  PiPolynomial divided_by(const PiPolynomial& monomial) const;

  Interval enclose(mpfr_prec_t precision) const;

  /// "8*pi^2", "25/3", "2/3*pi^-1", "4*pi + 1/2".
  std::string to_string() const;

 private:
  void normalize();
  std::map<int, Rational> terms_;
};

}  // namespace yamflat

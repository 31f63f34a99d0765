#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>
#include <vector>

namespace yamflat {

using Integer = mpz_class;
using Rational = mpq_class;
using RationalVector = std::vector<Rational>;

/// Parses "p/q", "-7", "0.125" or "1.5e-3" into an exact rational.
/// Decimal input is read digit-exactly, never through a binary double.
Rational parse_rational(std::string_view text);

/// Canonical text: "p/q", or "p" when the denominator is one.
std::string to_string(const Rational& q);

/// The exact binary value of a finite double.
Rational rational_from_double(double x);

/// Shortest round-trip decimal of x, then read exactly ("0.1" -> 1/10).
Rational rational_from_decimal_double(double x);

/// n/d in canonical form (mpq_class(n, d) alone does not reduce).
inline Rational ratio(const Integer& n, const Integer& d) {
  Rational q(n, d);
  q.canonicalize();
  return q;
}

/// Nearest double (mpq_get_d truncates).
double to_double(const Rational& q);

Integer floor_of(const Rational& q);
Integer ceil_of(const Rational& q);

inline bool is_integer(const Rational& q) { return q.get_den() == 1; }

/// Exact integer k-th root when it exists.
bool exact_root(const Integer& value, unsigned long k, Integer& root);

Rational dot(const RationalVector& a, const RationalVector& b);

}  // namespace yamflat

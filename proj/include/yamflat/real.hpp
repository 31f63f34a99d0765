#pragma once

#include <memory>
#include <optional>
#include <string>

#include "yamflat/interval.hpp"
#include "yamflat/pi_polynomial.hpp"
#include "yamflat/rational.hpp"

namespace yamflat {

/// Working precision for comparisons that cannot be decided symbolically.
inline constexpr int kDefaultPrecisionBits = 128;

/// A real number kept exactly as a PiPolynomial whenever the operations allow,
/// and otherwise as an expression DAG that can be enclosed at any precision.
///
/// Comparisons are certified: exact values are decided symbolically (zero test)
/// and by interval refinement (sign); anything else is decided by interval
/// evaluation up to the requested precision, or fails with UndecidableComparison.
class Real {
 public:
  Real();
  Real(long v);                   // NOLINT(google-explicit-constructor)
  Real(const Rational& q);        // NOLINT(google-explicit-constructor)
  Real(const PiPolynomial& p);    // NOLINT(google-explicit-constructor)

  static Real pi() { return Real(PiPolynomial::pi_power(1)); }
  /// Accepts the PiPolynomial grammar ("8*pi/3" is not accepted; write "8/3*pi").
  static Real parse(std::string_view text);
  /// The exact binary value of x.
  static Real from_double(double x) { return Real(rational_from_double(x)); }

  bool is_exact() const;
  /// Non-null iff the value is held exactly.
  const PiPolynomial* exact() const;

  Interval enclose(mpfr_prec_t precision) const;
  double to_double() const;

  /// Exact text when available, otherwise a 17-digit decimal prefixed by "~".
  std::string to_string() const;

  friend Real operator+(const Real& a, const Real& b);
  friend Real operator-(const Real& a, const Real& b);
  friend Real operator*(const Real& a, const Real& b);
  friend Real operator/(const Real& a, const Real& b);
  Real operator-() const;

  Real& operator+=(const Real& o) { return *this = *this + o; }
  Real& operator-=(const Real& o) { return *this = *this - o; }
  Real& operator*=(const Real& o) { return *this = *this * o; }

  /// Integer power.
  Real pow(long n) const;
  /// Real power with rational exponent; the base must be positive unless the exponent is an integer.
  Real pow(const Rational& exponent) const;
  Real sqrt() const { return pow(Rational(1, 2)); }

  struct Node;

 private:
  explicit Real(std::shared_ptr<const Node> node);
  std::shared_ptr<const Node> node_;
};

/// Certified sign. Throws UndecidableComparison when the value cannot be
/// separated from zero within `precision_bits` (exact nonzero values are
/// allowed eight times that budget, since their sign is always decidable).
int sign(const Real& x, int precision_bits = kDefaultPrecisionBits);

/// Certified three-way comparison: -1, 0, +1.
int compare(const Real& a, const Real& b, int precision_bits = kDefaultPrecisionBits);

/// Comparison that reports undecidable cases instead of throwing.
std::optional<int> try_compare(const Real& a, const Real& b, int precision_bits = kDefaultPrecisionBits);

/// Smallest-effort rational upper / lower bounds of x (from an enclosure).
Rational upper_bound(const Real& x, int precision_bits = kDefaultPrecisionBits);
Rational lower_bound(const Real& x, int precision_bits = kDefaultPrecisionBits);

/// max(a, b) with a certified comparison.
Real max(const Real& a, const Real& b, int precision_bits = kDefaultPrecisionBits);

}  // namespace yamflat

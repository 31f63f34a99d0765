#pragma once

#include <mpfr.h>

#include <optional>
#include <string>

#include "yamflat/rational.hpp"

namespace yamflat {

/// Closed interval [lo, hi] with MPFR endpoints and outward rounding.
/// Every operation returns an enclosure of the exact result.
class Interval {
 public:
  explicit Interval(mpfr_prec_t precision = 128);
  Interval(const Rational& q, mpfr_prec_t precision);
  Interval(const Interval& other);
  Interval(Interval&& other) noexcept;
  Interval& operator=(const Interval& other);
  Interval& operator=(Interval&& other) noexcept;
  ~Interval();

  static Interval pi(mpfr_prec_t precision);

  mpfr_prec_t precision() const { return precision_; }

  double lower() const { return mpfr_get_d(lo_, MPFR_RNDD); }
  double upper() const { return mpfr_get_d(hi_, MPFR_RNDU); }
  double midpoint() const;

  /// Exact rational values of the endpoints.
  Rational lower_rational() const;
  Rational upper_rational() const;

  /// +1 / -1 when the sign is certain, 0 for the degenerate point interval {0},
  /// nullopt when the interval straddles zero.
  std::optional<int> certain_sign() const;
  bool contains_zero() const;
  bool overlaps(const Interval& other) const;

  friend Interval operator+(const Interval& a, const Interval& b);
  friend Interval operator-(const Interval& a, const Interval& b);
  friend Interval operator*(const Interval& a, const Interval& b);
  friend Interval operator/(const Interval& a, const Interval& b);
  Interval operator-() const;

  Interval inverse() const;
  Interval pow(long n) const;
  /// Principal k-th root; requires lo >= 0.
  Interval root(unsigned long k) const;
  Interval sqrt() const { return root(2); }

  std::string to_string(int digits = 20) const;

 private:
  mpfr_prec_t precision_;
  mpfr_t lo_;
  mpfr_t hi_;
};

}  // namespace yamflat

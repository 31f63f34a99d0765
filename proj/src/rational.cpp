#include "yamflat/rational.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <stdexcept>

#include <mpfr.h>

#include "yamflat/errors.hpp"

namespace yamflat {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidLattice: return "InvalidLattice";
    case ErrorCode::InvalidInput: return "InvalidInput";
    case ErrorCode::InvalidGroup: return "InvalidGroup";
    case ErrorCode::EnumerationOverflow: return "EnumerationOverflow";
    case ErrorCode::Unsupported: return "Unsupported";
    case ErrorCode::NotIsometricAction: return "NotIsometricAction";
    case ErrorCode::IrreducibleUnexpected: return "IrreducibleUnexpected";
    case ErrorCode::NonIntegerMultiplicity: return "NonIntegerMultiplicity";
    case ErrorCode::IncompleteInput: return "IncompleteInput";
    case ErrorCode::UndecidableComparison: return "UndecidableComparison";
    case ErrorCode::NonPositiveScal: return "NonPositiveScal";
    case ErrorCode::GridTooCoarse: return "GridTooCoarse";
    case ErrorCode::BudgetExhausted: return "BudgetExhausted";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

[[noreturn]] void bad(std::string_view text) {
  throw Error(ErrorCode::ParseError, "not a rational: '" + std::string(text) + "'");
}

Rational parse_decimal(std::string_view s, std::string_view original) {
  bool negative = false;
  if (!s.empty() && (s.front() == '+' || s.front() == '-')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  std::string digits;
  long exponent = 0;
  bool seen_point = false;
  bool any_digit = false;
  std::size_t i = 0;
  for (; i < s.size(); ++i) {
    char c = s[i];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      digits.push_back(c);
      any_digit = true;
      if (seen_point) --exponent;
    } else if (c == '.' && !seen_point) {
      seen_point = true;
    } else {
      break;
    }
  }
  if (!any_digit) bad(original);
  if (i < s.size()) {
    if (s[i] != 'e' && s[i] != 'E') bad(original);
    std::string_view exp_text = s.substr(i + 1);
    if (!exp_text.empty() && exp_text.front() == '+') exp_text.remove_prefix(1);
    long e = 0;
    auto [ptr, ec] = std::from_chars(exp_text.data(), exp_text.data() + exp_text.size(), e);
    if (ec != std::errc() || ptr != exp_text.data() + exp_text.size()) bad(original);
    exponent += e;
  }
  Integer mantissa(digits, 10);
  Integer scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(exponent)));
  Rational q = exponent >= 0 ? Rational(mantissa * scale) : Rational(mantissa, scale);
  q.canonicalize();
  return negative ? Rational(-q) : q;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string_view s = trim(text);
  if (s.empty()) bad(text);
  auto slash = s.find('/');
  if (slash == std::string_view::npos) return parse_decimal(s, text);
  Rational num = parse_decimal(trim(s.substr(0, slash)), text);
  Rational den = parse_decimal(trim(s.substr(slash + 1)), text);
  if (den == 0) throw Error(ErrorCode::ParseError, "zero denominator in '" + std::string(text) + "'");
  return num / den;
}

std::string to_string(const Rational& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

Rational rational_from_double(double x) {
  if (!std::isfinite(x)) throw Error(ErrorCode::InvalidInput, "non-finite value");
  Rational q;
  mpq_set_d(q.get_mpq_t(), x);
  return q;
}

Rational rational_from_decimal_double(double x) {
  if (!std::isfinite(x)) throw Error(ErrorCode::InvalidInput, "non-finite value");
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  if (ec != std::errc()) throw Error(ErrorCode::InvalidInput, "cannot format double");
  return parse_rational(std::string_view(buf, static_cast<std::size_t>(ptr - buf)));
}

Integer floor_of(const Rational& q) {
  Integer r;
  mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

Integer ceil_of(const Rational& q) {
  Integer r;
  mpz_cdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

bool exact_root(const Integer& value, unsigned long k, Integer& root) {
  if (k == 0) return false;
  if (value < 0) {
    if (k % 2 == 0) return false;
    Integer pos = -value;
    if (!exact_root(pos, k, root)) return false;
    root = -root;
    return true;
  }
  return mpz_root(root.get_mpz_t(), value.get_mpz_t(), k) != 0;
}

Rational dot(const RationalVector& a, const RationalVector& b) {
  if (a.size() != b.size()) throw Error(ErrorCode::InvalidInput, "dot: dimension mismatch");
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace yamflat

namespace yamflat {

double to_double(const Rational& q) {
  mpfr_t x;
  mpfr_init2(x, 53);
  mpfr_set_q(x, q.get_mpq_t(), MPFR_RNDN);
  const double out = mpfr_get_d(x, MPFR_RNDN);
  mpfr_clear(x);
  return out;
}

}  // namespace yamflat

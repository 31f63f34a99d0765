#include "yamflat/pi_polynomial.hpp"

#include <cctype>
#include <charconv>

#include "yamflat/errors.hpp"

namespace yamflat {

PiPolynomial::PiPolynomial(const Rational& c, int pi_exponent) {
  if (c != 0) terms_.emplace(pi_exponent, c);
}

Rational PiPolynomial::coefficient(int k) const {
  auto it = terms_.find(k);
  return it == terms_.end() ? Rational(0) : it->second;
}

void PiPolynomial::normalize() {
  for (auto it = terms_.begin(); it != terms_.end();) {
    if (it->second == 0) {
      it = terms_.erase(it);
    } else {
      ++it;
    }
  }
}

PiPolynomial& PiPolynomial::operator+=(const PiPolynomial& o) {
  for (const auto& [k, c] : o.terms_) terms_[k] += c;
  normalize();
  return *this;
}

PiPolynomial& PiPolynomial::operator-=(const PiPolynomial& o) {
  for (const auto& [k, c] : o.terms_) terms_[k] -= c;
  normalize();
  return *this;
}

PiPolynomial& PiPolynomial::operator*=(const PiPolynomial& o) {
  std::map<int, Rational> out;
  for (const auto& [k1, c1] : terms_) {
    for (const auto& [k2, c2] : o.terms_) out[k1 + k2] += c1 * c2;
  }
  terms_ = std::move(out);
  normalize();
  return *this;
}

PiPolynomial PiPolynomial::operator-() const {
  PiPolynomial r = *this;
  for (auto& [k, c] : r.terms_) c = -c;
  return r;
}

PiPolynomial PiPolynomial::pow(long n) const {
  if (n < 0) {
    if (!is_monomial()) throw Error(ErrorCode::InvalidInput, "negative power of a non-monomial");
    const auto& [k, c] = *terms_.begin();
    Rational inv = 1 / c;
    return PiPolynomial(inv, -k).pow(-n);
  }
  PiPolynomial result(1);
  PiPolynomial base = *this;
  while (n > 0) {
    if (n & 1) result *= base;
    n >>= 1;
    if (n > 0) base *= base;
  }
  return result;
}

PiPolynomial PiPolynomial::divided_by(const PiPolynomial& monomial) const {
  if (!monomial.is_monomial()) throw Error(ErrorCode::InvalidInput, "division by a non-monomial");
  return *this * monomial.pow(-1);
}

Interval PiPolynomial::enclose(mpfr_prec_t precision) const {
  Interval sum(Rational(0), precision);
  if (terms_.empty()) return sum;
  Interval pi = Interval::pi(precision);
  for (const auto& [k, c] : terms_) {
    sum = sum + Interval(c, precision) * pi.pow(k);
  }
  return sum;
}

std::string PiPolynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  bool first = true;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const int k = it->first;
    Rational c = it->second;
    if (!first) {
      out += c < 0 ? " - " : " + ";
      c = abs(c);
    }
    std::string power;
    if (k == 1) {
      power = "pi";
    } else if (k != 0) {
      power = "pi^" + std::to_string(k);
    }
    if (power.empty()) {
      out += yamflat::to_string(c);
    } else if (c == 1) {
      out += power;
    } else if (c == -1) {
      out += "-" + power;
    } else {
      out += yamflat::to_string(c) + "*" + power;
    }
    first = false;
  }
  return out;
}

namespace {

class TermParser {
 public:
  explicit TermParser(std::string_view s) : s_(s) {}

  PiPolynomial parse() {
    PiPolynomial total;
    skip_space();
    int sign = 1;
    if (peek() == '-') {
      sign = -1;
      ++pos_;
    } else if (peek() == '+') {
      ++pos_;
    }
    total += sign == 1 ? term() : -term();
    for (;;) {
      skip_space();
      if (pos_ >= s_.size()) break;
      char op = s_[pos_];
      if (op != '+' && op != '-') fail();
      ++pos_;
      total += op == '+' ? term() : -term();
    }
    return total;
  }

 private:
  char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }

  void skip_space() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  [[noreturn]] void fail() const {
    throw Error(ErrorCode::ParseError, "cannot parse pi-polynomial '" + std::string(s_) + "'");
  }

  PiPolynomial term() {
    skip_space();
    Rational coeff = 1;
    bool have_coeff = false;
    std::size_t start = pos_;
    while (pos_ < s_.size()) {
      char c = s_[pos_];
      bool exp_sign = (c == '-' || c == '+') && pos_ > start && (s_[pos_ - 1] == 'e' || s_[pos_ - 1] == 'E');
      if (std::isdigit(static_cast<unsigned char>(c)) || c == '.' || c == '/' || c == 'e' || c == 'E' || exp_sign) {
        ++pos_;
      } else {
        break;
      }
    }
    if (pos_ > start) {
      coeff = parse_rational(s_.substr(start, pos_ - start));
      have_coeff = true;
    }
    skip_space();
    if (peek() == '*') {
      ++pos_;
      skip_space();
    }
    int k = 0;
    if (s_.substr(pos_, 2) == "pi") {
      pos_ += 2;
      k = 1;
      skip_space();
      if (peek() == '^') {
        ++pos_;
        skip_space();
        std::size_t e0 = pos_;
        if (peek() == '-' || peek() == '+') ++pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        auto text = s_.substr(e0, pos_ - e0);
        if (!text.empty() && text.front() == '+') text.remove_prefix(1);
        auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), k);
        if (ec != std::errc() || ptr != text.data() + text.size()) fail();
      }
    } else if (!have_coeff) {
      fail();
    }
    return PiPolynomial(coeff, k);
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace

PiPolynomial PiPolynomial::parse(std::string_view text) { return TermParser(text).parse(); }

}  // namespace yamflat

#include <doctest.h>

#include <random>

#include "yamflat/errors.hpp"
#include "yamflat/real.hpp"

using namespace yamflat;

TEST_SUITE("numeric") {
  TEST_CASE("decimal text is read exactly") {
    CHECK(parse_rational("0.1") == ratio(1, 10));
    CHECK(parse_rational("1.5e-3") == ratio(3, 2000));
    CHECK(parse_rational("-7") == -7);
    CHECK(parse_rational("6/4") == ratio(3, 2));
    CHECK(rational_from_decimal_double(0.1) == ratio(1, 10));
    CHECK(rational_from_double(0.1) != ratio(1, 10));
    CHECK_THROWS_AS(parse_rational("1/0"), Error);
    CHECK_THROWS_AS(parse_rational("abc"), Error);
  }

  TEST_CASE("ratio canonicalizes") {
    const Rational q = ratio(6, -4);
    CHECK(q.get_num() == -3);
    CHECK(q.get_den() == 2);
    CHECK(to_string(ratio(10, 5)) == "2");
  }

  TEST_CASE("pi enclosure") {
    const Interval p = Interval::pi(200);
    CHECK(p.lower() <= 3.141592653589793);
    CHECK(p.upper() >= 3.141592653589793);
    CHECK(p.upper_rational() - p.lower_rational() < Rational(1) / Rational(Integer(1) << 190));
  }

  TEST_CASE("pi polynomial text round trip") {
    for (const char* text : {"8*pi^2", "2/3*pi^-1", "4*pi + 1/2", "25/3", "0", "-pi"}) {
      const PiPolynomial p = PiPolynomial::parse(text);
      CHECK(PiPolynomial::parse(p.to_string()) == p);
    }
    CHECK(PiPolynomial::parse("8*pi^2").to_string() == "8*pi^2");
    CHECK((PiPolynomial(2, 1) * PiPolynomial(ratio(1, 2), -1)).to_string() == "1");
  }

  TEST_CASE("real powers stay exact when they can") {
    const Real t = Real(PiPolynomial(ratio(2, 3), -1)).sqrt();
    CHECK_FALSE(t.is_exact());
    REQUIRE(t.pow(2).is_exact());
    CHECK(t.pow(2).to_string() == "2/3*pi^-1");
    CHECK(t.pow(-2).to_string() == "3/2*pi");
    CHECK(Real(PiPolynomial(ratio(9, 4), 2)).sqrt().to_string() == "3/2*pi");
    CHECK(Real(PiPolynomial(8, 6)).pow(ratio(1, 3)).to_string() == "2*pi^2");
    CHECK(std::abs(t.to_double() - 0.46065886596178063) < 1e-15);
  }

  TEST_CASE("certified comparisons") {
    CHECK(compare(Real::pi(), Real(ratio(22, 7))) < 0);
    CHECK(compare(Real::pi(), Real(ratio(333, 106))) > 0);
    CHECK(compare(Real(PiPolynomial(8, 1)) / Real(3), Real::parse("8/3*pi")) == 0);
    CHECK(sign(Real::pi() * Real::pi() - Real(PiPolynomial(1, 2))) == 0);
    // Two different radicals for the same number cannot be separated numerically.
    const Real a = Real(12) * Real(PiPolynomial(ratio(8, 3), 2)).sqrt();
    const Real b = Real(PiPolynomial(8, 1)) * Real(6).sqrt();
    CHECK_FALSE(try_compare(a, b).has_value());
    CHECK_THROWS_AS(compare(a, b), Error);
    CHECK(compare(a.pow(2), b.pow(2)) == 0);
  }

  TEST_CASE("comparison agrees with rational order (property)") {
    std::mt19937 rng(7);
    std::uniform_int_distribution<int> n(-50, 50), d(1, 30);
    for (int i = 0; i < 300; ++i) {
      const Rational x = ratio(n(rng), d(rng)), y = ratio(n(rng), d(rng));
      const int expect = x < y ? -1 : (x > y ? 1 : 0);
      CHECK(compare(Real(x), Real(y)) == expect);
      CHECK(compare(Real(x) + Real::pi(), Real(y) + Real::pi()) == expect);
    }
  }

  TEST_CASE("bounds bracket the value") {
    const Real x = Real(2).sqrt() * Real::pi();
    CHECK(lower_bound(x) < rational_from_double(x.to_double() + 1e-12));
    CHECK(upper_bound(x) > rational_from_double(x.to_double() - 1e-12));
    CHECK(lower_bound(x) <= upper_bound(x));
  }
}

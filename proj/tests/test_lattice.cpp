#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "oracles.hpp"
#include "yamflat/errors.hpp"
#include "yamflat/lattice.hpp"

using namespace yamflat;

TEST_SUITE("lattice") {
  TEST_CASE("singular bases are rejected") {
    CHECK_THROWS_AS(Lattice(RationalMatrix{{1, 2}, {2, 4}}), Error);
  }

  TEST_CASE("Z^2 shells") {
    const auto list = enumerate_short_vectors(Lattice::integer(2), 2);
    REQUIRE(list.vectors.size() == 8);
    CHECK(list.vectors[0].norm_sq == 1);
    CHECK(list.vectors[4].norm_sq == 2);
  }

  TEST_CASE("enumeration matches box search") {
    std::mt19937 rng(11);
    for (int trial = 0; trial < 30; ++trial) {
      const std::size_t d = 1 + trial % 3;
      const Lattice l = oracle::random_lattice(rng, d);
      const Rational r2 = ratio(1 + trial, 2);
      const auto got = enumerate_short_vectors(l, r2);
      const auto want = oracle::box_search(l, r2);
      REQUIRE(got.vectors.size() == want.size());
      for (const auto& v : got.vectors) CHECK(want.at(v.coords) == v.norm_sq);
    }
  }

  TEST_CASE("enumeration limit") {
    EnumerationLimits lim;
    lim.max_count = 10;
    CHECK_THROWS_AS(enumerate_short_vectors(Lattice::integer(2), 100, lim), Error);
  }

  TEST_CASE("dual lattice") {
    const Lattice l(RationalMatrix{{2, 1}, {0, 3}});
    const Lattice dl = dual(l);
    CHECK(dl.gram() == l.gram().inverse());
    CHECK(dual(dl).same_point_set(l));
    CHECK(dl.covolume() == ratio(1, 6));
  }

  TEST_CASE("covering radius") {
    CHECK(std::abs(covering_radius(Lattice::integer(2), 1e-9) - std::sqrt(0.5)) < 1e-9);
    CHECK(std::abs(covering_radius(Lattice::integer(3), 1e-9) - std::sqrt(0.75)) < 1e-9);
    // Hexagonal lattice: circumradius of the unit triangle.
    const Lattice hex(RationalMatrix{{1, ratio(1, 2)}, {0, ratio(13, 15)}});
    const double want = oracle::grid_covering_radius(hex, 300);
    const double got = covering_radius(hex, 1e-7);
    CHECK(got >= want - 1e-7);
    CHECK(got <= want + 0.01);
    std::mt19937 rng(5);
    for (int i = 0; i < 6; ++i) {
      const Lattice l = oracle::random_lattice(rng, 2);
      const double g = covering_radius(l, 1e-7);
      const double w = oracle::grid_covering_radius(l, 200);
      CHECK(g >= w - 1e-7);
      CHECK(g <= w + 0.05 * (1 + w));
    }
  }

  TEST_CASE("sublattice counts") {
    for (long k = 1; k <= 12; ++k) {
      CHECK(static_cast<long>(sublattices_of_index(Lattice::integer(2), k).size()) == oracle::divisor_sigma(k));
    }
    for (long k = 1; k <= 8; ++k) {
      CHECK(static_cast<long>(sublattices_of_index(Lattice::integer(3), k).size()) == oracle::sublattice_count_3(k));
    }
  }

  TEST_CASE("sublattices are distinct with the right index") {
    const Lattice base(RationalMatrix{{1, ratio(1, 2)}, {0, 2}});
    const auto subs = sublattices_of_index(base, 6);
    for (std::size_t i = 0; i < subs.size(); ++i) {
      CHECK(subs[i].covolume() == 6 * base.covolume());
      for (std::size_t c = 0; c < 2; ++c) CHECK(base.contains(subs[i].basis().column(c)));
      for (std::size_t j = 0; j < i; ++j) CHECK_FALSE(subs[i].same_point_set(subs[j]));
    }
  }

  TEST_CASE("nested chain") {
    const auto chain = nested_chain(Lattice::integer(2), {2, 3, 2});
    REQUIRE(chain.size() == 4);
    CHECK(chain[0].covolume() == 1);
    CHECK(chain[3].covolume() == 12);
    for (std::size_t i = 1; i < chain.size(); ++i)
      for (std::size_t c = 0; c < 2; ++c) CHECK(chain[i - 1].contains(chain[i].basis().column(c)));
  }
}

#include <doctest.h>

#include <random>

#include "groups.hpp"
#include "oracles.hpp"
#include "scenarios.hpp"
#include "yamflat/errors.hpp"

using namespace yamflat;

namespace {

const double kT1 = 0.46065886596178063;  // sqrt(2 / (3 pi))

// Closed factor with only the eigenvalue 0 below 2 pi^2 and scal chosen so that the
// threshold is pi^2: crossings of the e_1 branch then sit at rational t = 1/(2p).
Scenario rational_crossing_scenario() {
  ClosedFactor f;
  f.dim = 2;
  f.scal = Real(PiPolynomial(3, 2));
  f.volume = Real(1);
  f.spectrum.entries.push_back({Real(0), 1});
  f.spectrum.cutoff = Real(PiPolynomial(2, 2));
  return Scenario{f, CrystalGroup::torus(Lattice::integer(2)), projection_onto({{1, 0}}), CollapseEnd::Zero};
}

}  // namespace

TEST_SUITE("bifurcation") {
  TEST_CASE("scenario validation") {
    const Scenario s = fixtures::s2_t2();
    CHECK_NOTHROW(validate_scenario(s));
    CHECK(s.threshold().to_string() == "8/3*pi");
    Scenario big = s;
    big.flat = CrystalGroup::torus(Lattice(RationalMatrix{{2, 0}, {0, 1}}));
    CHECK_THROWS_AS(validate_scenario(big), Error);
    Scenario round = s;
    round.closed = round_sphere(2, Real(1), Real(100));
    CHECK_THROWS_AS(validate_scenario(round), Error);
    Scenario torsion = s;
    torsion.flat = CrystalGroup(Lattice::integer(2), {AffineMap::identity(2), {fixtures::diag({-1, -1}), fixtures::vec({0, 0})}});
    torsion.projection.reset();
    CHECK_THROWS_AS(validate_scenario(torsion), Error);
  }

  TEST_CASE("index at reference parameters") {
    const Scenario s = fixtures::s2_t2();
    CHECK(index_at(s, 1).index == 1);
    CHECK(index_at(s, ratio(1, 5)).index == 5);
    CHECK(index_at(s, 10).index == 9);
    CHECK(index_at(s, ratio(1, 10)).index == 9);
    CHECK(index_at(fixtures::s2_t2(false), ratio(1, 10)).index == 1);
  }

  TEST_CASE("index matches the floor formula at random parameters") {
    const Scenario s = fixtures::s2_t2();
    std::mt19937 rng(3);
    std::uniform_int_distribution<long> num(50, 2000);
    for (int i = 0; i < 100; ++i) {
      const Rational t = ratio(num(rng), 1000);
      CHECK(index_at(s, t).index == oracle::s2t2_index(t.get_d()));
    }
  }

  TEST_CASE("equalities are excluded and reported") {
    const Scenario s = rational_crossing_scenario();
    const IndexResult r = index_at(s, ratio(1, 2));
    CHECK(r.index == 1);
    REQUIRE(r.equalities.size() == 1);
    CHECK(r.equalities[0].multiplicity == 2);
    CHECK(index_at(s, ratio(49, 100)).index == 3);
  }

  TEST_CASE("condition (a)") {
    const Scenario s = fixtures::s2_t2();
    CHECK(condition_a_check(s, Real(ratio(3, 10))).holds);
    CHECK(condition_a_check(s, Real(ratio(3, 10))).witnesses.empty());
    const Real t1 = Real(PiPolynomial(ratio(2, 3), -1)).sqrt();
    const auto r = condition_a_check(s, t1);
    CHECK_FALSE(r.holds);
    REQUIRE(r.witnesses.size() == 1);
    CHECK(r.witnesses[0].branch.a == 1);
    CHECK(r.witnesses[0].branch.b == 0);
    CHECK(r.witnesses[0].branch.multiplicity == 2);  // p = +1 and p = -1
    CHECK(condition_a_check(s, t1 / Real(3)).witnesses.size() == 1);
  }

  TEST_CASE("flat branches") {
    const auto br = flat_branches(fixtures::s2_t2(), 2);
    REQUIRE(br.size() == 4);
    CHECK((br[0].a == 0 && br[0].b == 0 && br[0].multiplicity == 1));
    CHECK((br[1].a == 0 && br[1].b == 1 && br[1].multiplicity == 2));
    CHECK((br[2].a == 1 && br[2].b == 0 && br[2].multiplicity == 2));
    CHECK((br[3].a == 1 && br[3].b == 1 && br[3].multiplicity == 4));
    Scenario k = fixtures::s2_t2();
    k.flat = CrystalGroup(Lattice(RationalMatrix{{1, 0}, {0, 2}}), fixtures::klein().holonomy());
    const auto kb = flat_branches(k, 4);
    for (const auto& b : kb)
      if (b.b == 0 && b.a != 0) CHECK(b.a.get_num() % 4 == 0);  // odd p along e_1 cancel
  }

  TEST_CASE("crossings in closed form") {
    const Scenario s = fixtures::s2_t2();
    const auto pts = d_rho_crossings(s, s.threshold(), ratio(1, 10), 1);
    REQUIRE(pts.size() == 4);
    const std::vector<std::string> exact{"(1/24*pi^-1)^(1/2)", "(2/27*pi^-1)^(1/2)", "(1/6*pi^-1)^(1/2)",
                                         "(2/3*pi^-1)^(1/2)"};
    for (std::size_t k = 0; k < 4; ++k) {
      const double want = kT1 / static_cast<double>(4 - k);
      CHECK(pts[k].t_lo.get_d() <= want + 1e-15);
      CHECK(pts[k].t_hi.get_d() >= want - 1e-15);
      CHECK(pts[k].t_exact_text == exact[k]);
    }
    CHECK(d_rho_crossings(s, s.threshold(), ratio(1, 2), 1).empty());
    CHECK(d_rho_crossings(s, Real(1), ratio(1, 2), 1).empty());
    CHECK(d_rho_crossings(fixtures::s2_t2(false), s.threshold(), ratio(1, 10), 1).empty());
  }

  TEST_CASE("crossings at the interval ends count") {
    const Scenario s = rational_crossing_scenario();
    const auto pts = d_rho_crossings(s, s.threshold(), ratio(1, 4), ratio(1, 2));
    REQUIRE(pts.size() == 2);
    CHECK(pts[0].t_lo == ratio(1, 4));
    CHECK(pts[1].t_hi == ratio(1, 2));
  }

  TEST_CASE("scan of the reference scenario") {
    const Scenario s = fixtures::s2_t2();
    const ScanReport r = scan(s, ratio(1, 10), 1, 91);
    REQUIRE(r.instants.size() == 4);
    for (std::size_t k = 0; k < 4; ++k) {
      const auto& x = r.instants[k];
      const double want = kT1 / static_cast<double>(k + 1);
      CHECK(x.t_lo.get_d() <= want);
      CHECK(x.t_hi.get_d() >= want);
      CHECK(Rational(x.t_hi - x.t_lo) <= ratio(9, 10) / Rational(Integer(1) << 40));
      CHECK(x.jump == 2);
      CHECK(x.condition_a);
      CHECK(x.t_exact.has_value());
    }
    CHECK(r.accumulation.monotone_toward_end);
    CHECK(r.accumulation.index_at_start == 1);
    CHECK(r.accumulation.index_at_end == 9);
    CHECK(r.warnings.empty());
  }

  TEST_CASE("index is constant between instants (sampled)") {
    const Scenario s = fixtures::s2_t2();
    const ScanReport r = scan(s, ratio(1, 10), 1, 31);
    std::vector<Rational> edges{1};
    for (const auto& x : r.instants) {
      edges.push_back(x.t_hi);
      edges.push_back(x.t_lo);
    }
    edges.push_back(ratio(1, 10));
    for (std::size_t k = 0; k + 1 < edges.size(); k += 2) {
      const Rational hi = edges[k], lo = edges[k + 1];
      const long ref = index_at(s, hi).index;
      for (int j = 1; j <= 10; ++j) CHECK(index_at(s, lo + (hi - lo) * ratio(j, 11)).index == ref);
    }
  }

  TEST_CASE("empty scans") {
    CHECK(scan(fixtures::s2_t2(), ratio(1, 2), 1, 11).instants.empty());
    CHECK(scan(fixtures::s2_t2(false), ratio(1, 10), 1, 11).instants.empty());
    Scenario circle = fixtures::s2_t2(false);
    circle.flat = CrystalGroup::torus(Lattice::integer(1));
    CHECK(scan(circle, ratio(1, 10), 1, 11).instants.empty());
    CHECK_THROWS_AS(scan(fixtures::s2_t2(), 1, ratio(1, 2), 11), Error);
    CHECK_THROWS_AS(scan(fixtures::s2_t2(), ratio(1, 2), 1, 1), Error);
  }

  TEST_CASE("coarse grids refine, then give up") {
    const ScanReport r = scan(fixtures::s2_t2(), ratio(1, 10), 1, 2);
    CHECK(r.instants.size() == 4);
    BifurcationOptions o;
    o.refine_budget = 1;
    try {
      scan(fixtures::s2_t2(), ratio(1, 10), 1, 2, o);
      FAIL("expected GridTooCoarse");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::GridTooCoarse);
    }
  }

  TEST_CASE("expansion direction") {
    Scenario s = fixtures::s2_t2();
    s.end = CollapseEnd::Infinity;
    const ScanReport r = scan(s, 1, 10, 46);
    REQUIRE(r.instants.size() == 4);
    for (std::size_t k = 0; k < 4; ++k) {
      CHECK(r.instants[k].t_lo.get_d() <= static_cast<double>(k + 1) / kT1);
      CHECK(r.instants[k].t_hi.get_d() >= static_cast<double>(k + 1) / kT1);
      CHECK(r.instants[k].jump == -2);
    }
  }

  TEST_CASE("threads do not change the report") {
    BifurcationOptions one, many;
    many.threads = 4;
    const ScanReport a = scan(fixtures::s2_t2(), ratio(1, 10), 1, 91, one);
    const ScanReport b = scan(fixtures::s2_t2(), ratio(1, 10), 1, 91, many);
    REQUIRE(a.instants.size() == b.instants.size());
    CHECK(a.grid == b.grid);
    for (std::size_t k = 0; k < a.instants.size(); ++k) {
      CHECK(a.instants[k].t_lo == b.instants[k].t_lo);
      CHECK(a.instants[k].t_hi == b.instants[k].t_hi);
    }
  }

  TEST_CASE("scaling the whole product leaves the index unchanged") {
    const Scenario s = fixtures::s2_t2();
    Scenario scaled = s;
    scaled.closed = round_sphere(2, Real(PiPolynomial(16, 1)), Real(PiPolynomial(64, 1)));
    scaled.flat = CrystalGroup::torus(Lattice(RationalMatrix{{ratio(1, 2), 0}, {0, ratio(1, 2)}}));
    std::mt19937 rng(9);
    std::uniform_int_distribution<long> num(60, 1500);
    for (int i = 0; i < 20; ++i) {
      const Rational t = ratio(num(rng), 1000);
      CHECK(index_at(scaled, t).index == index_at(s, t).index);
    }
  }

  TEST_CASE("lower bound and accumulation") {
    const Scenario s = fixtures::s2_t2();
    CHECK(index_lower_bound(s, ratio(1, 10)) == 9);
    const auto ev = accumulation_diagnostic(s, 10);
    REQUIRE(ev.steps.size() == 10);
    CHECK(ev.strictly_increasing);
    CHECK(ev.bounds_hold);
    for (std::size_t k = 0; k < 10; ++k) {
      const long kk = static_cast<long>(k) + 1;
      CHECK(ev.steps[k].index_above == 1 + 2 * (kk - 1));
      CHECK(ev.steps[k].index_below == 1 + 2 * kk);
      CHECK(std::abs(ev.steps[k].instant.t_lo.get_d() - kT1 / static_cast<double>(kk)) < 1e-9);
    }
    CHECK_THROWS_AS(accumulation_diagnostic(fixtures::s2_t2(false), 3), Error);
  }

  TEST_CASE("Klein bottle factor keeps only even branches") {
    Scenario s = fixtures::s2_t2();
    s.flat = CrystalGroup(Lattice(RationalMatrix{{1, 0}, {0, 2}}), fixtures::klein().holonomy());
    validate_scenario(s);
    const ScanReport r = scan(s, ratio(1, 5), 1, 41);
    REQUIRE(r.instants.size() == 1);
    CHECK(std::abs(r.instants[0].t_lo.get_d() - kT1 / 2) < 1e-9);
    CHECK(r.instants[0].jump == 2);
  }
}

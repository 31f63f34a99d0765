#include <doctest.h>

#include <random>

#include "groups.hpp"
#include "oracles.hpp"
#include "yamflat/errors.hpp"

using namespace yamflat;
using fixtures::diag;
using fixtures::vec;

TEST_SUITE("crystal") {
  TEST_CASE("translations are reduced into the cell") {
    const CrystalGroup g(Lattice::integer(2), {AffineMap::identity(2), {diag({1, -1}), vec({ratio(5, 2), -3})}});
    CHECK(g.holonomy()[1].translation == vec({ratio(1, 2), 0}));
  }

  TEST_CASE("validation accepts the corpus") {
    for (const auto& [name, entry] : fixtures::torsion_corpus()) {
      INFO(name);
      CHECK(validate_group(entry.first).valid());
    }
  }

  TEST_CASE("validation names the failing invariant") {
    const RationalMatrix rot4{{0, -1}, {1, 0}};
    const CrystalGroup open(Lattice::integer(2), {AffineMap::identity(2), {rot4, vec({0, 0})}});
    const auto r1 = validate_group(open);
    REQUIRE_FALSE(r1.valid());
    CHECK(r1.summary().find("closed under products") != std::string::npos);

    const CrystalGroup skew(Lattice::integer(2), {AffineMap::identity(2), {RationalMatrix{{1, 1}, {0, 1}}, vec({0, 0})}});
    CHECK_FALSE(validate_group(skew).valid());

    const CrystalGroup stretched(Lattice(RationalMatrix{{1, 0}, {0, 2}}),
                                 {AffineMap::identity(2), {RationalMatrix{{0, 1}, {1, 0}}, vec({0, 0})}});
    CHECK_FALSE(validate_group(stretched).valid());

    CHECK_THROWS_AS(CrystalGroup(Lattice::integer(1), {{diag({-1}), vec({0})}}), Error);
  }

  TEST_CASE("torsion verdicts agree with the finite-order search") {
    for (const auto& [name, entry] : fixtures::torsion_corpus()) {
      INFO(name);
      const auto verdict = is_torsion_free(entry.first);
      CHECK(verdict.torsion_free == entry.second);
      CHECK(verdict.torsion_free == !oracle::finite_order_element(entry.first).has_value());
      if (!verdict.torsion_free) {
        REQUIRE(verdict.element.has_value());
        REQUIRE(verdict.fixed_point.has_value());
        CHECK(verdict.element->apply(*verdict.fixed_point) == *verdict.fixed_point);
      }
    }
  }

  TEST_CASE("cone membership") {
    const CrystalGroup k = fixtures::klein();
    CHECK(cone_membership(k, diag({2, 3})));
    CHECK_FALSE(cone_membership(k, RationalMatrix{{1, 1}, {0, 1}}));
    const CrystalGroup torus = CrystalGroup::torus(Lattice::integer(2));
    CHECK(cone_membership(torus, RationalMatrix{{1, 1}, {0, 1}}));
  }

  TEST_CASE("invariant subspaces") {
    const RationalMatrix pk = find_invariant_subspace(fixtures::klein());
    CHECK(pk == diag({1, 0}));
    CHECK(find_invariant_subspace(CrystalGroup::torus(Lattice::integer(3))) == diag({1, 0, 0}));
    const CrystalGroup hw = fixtures::hantzsche_wendt();
    const RationalMatrix p = find_invariant_subspace(hw);
    CHECK(p * p == p);
    CHECK(p.is_symmetric());
    CHECK(p.rank() == 1);
    for (const auto& g : hw.holonomy()) CHECK(g.linear * p == p * g.linear);
  }

  TEST_CASE("collapse family") {
    const CollapseFamily f(fixtures::klein(), diag({1, 0}));
    CHECK(f.dim_e() == 1);
    const RationalMatrix a = collapse_map(f, ratio(1, 3));
    CHECK(a == RationalMatrix{{3, 0}, {0, ratio(1, 3)}});
    CHECK(a.determinant() == 1);
    const CrystalGroup c = conjugate_group(f.group(), a, vec({0, 0}));
    CHECK(validate_group(c).valid());
    CHECK(is_torsion_free(c).torsion_free);
    CHECK(c.lattice().covolume() == 1);
    CHECK_THROWS_AS(CollapseFamily(fixtures::klein(), projection_onto({vec({1, 1})})), Error);
    CHECK_THROWS_AS(collapse_map(f, 0), Error);
  }

  TEST_CASE("conjugation outside the cone is refused") {
    try {
      conjugate_group(fixtures::klein(), RationalMatrix{{1, 1}, {0, 1}}, vec({0, 0}));
      FAIL("expected NotIsometricAction");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::NotIsometricAction);
    }
  }

  TEST_CASE("conjugation by a translation keeps the holonomy") {
    const CrystalGroup hw = fixtures::hantzsche_wendt();
    const CrystalGroup moved = conjugate_group(hw, RationalMatrix::identity(3), vec({ratio(1, 3), 0, ratio(1, 5)}));
    CHECK(validate_group(moved).valid());
    CHECK(is_torsion_free(moved).torsion_free);
    for (std::size_t i = 0; i < hw.order(); ++i) CHECK(moved.holonomy()[i].linear == hw.holonomy()[i].linear);
  }
}

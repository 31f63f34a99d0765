#pragma once

#include <string>
#include <utility>
#include <vector>

#include "yamflat/crystal.hpp"

namespace fixtures {

using namespace yamflat;

inline RationalMatrix diag(std::initializer_list<long> d) {
  RationalVector v;
  for (long x : d) v.push_back(x);
  return RationalMatrix::diagonal(v);
}

inline RationalVector vec(std::initializer_list<Rational> v) { return RationalVector(v); }

inline CrystalGroup klein() {
  return CrystalGroup(Lattice::integer(2), {AffineMap::identity(2), {diag({1, -1}), vec({ratio(1, 2), 0})}});
}

inline CrystalGroup hantzsche_wendt() {
  return CrystalGroup(Lattice::integer(3), {AffineMap::identity(3),
                                            {diag({1, -1, -1}), vec({ratio(1, 2), ratio(1, 2), 0})},
                                            {diag({-1, 1, -1}), vec({0, ratio(1, 2), ratio(1, 2)})},
                                            {diag({-1, -1, 1}), vec({ratio(1, 2), 0, ratio(1, 2)})}});
}

// Named corpus with the expected torsion-freeness verdict.
inline std::vector<std::pair<std::string, std::pair<CrystalGroup, bool>>> torsion_corpus() {
  const Rational h = ratio(1, 2);
  RationalMatrix rot4{{0, -1, 0}, {1, 0, 0}, {0, 0, 1}};
  std::vector<std::pair<std::string, std::pair<CrystalGroup, bool>>> c;
  c.push_back({"circle", {CrystalGroup::torus(Lattice::integer(1)), true}});
  c.push_back({"torus2", {CrystalGroup::torus(Lattice::integer(2)), true}});
  c.push_back({"torus3", {CrystalGroup::torus(Lattice::integer(3)), true}});
  c.push_back({"klein", {klein(), true}});
  c.push_back({"point inversion 2d",
               {CrystalGroup(Lattice::integer(2), {AffineMap::identity(2), {diag({-1, -1}), vec({0, 0})}}), false}});
  c.push_back({"point inversion 1d",
               {CrystalGroup(Lattice::integer(1), {AffineMap::identity(1), {diag({-1}), vec({h})}}), false}});
  c.push_back({"mirror 2d", {CrystalGroup(Lattice::integer(2), {AffineMap::identity(2), {diag({1, -1}), vec({0, 0})}}), false}});
  c.push_back({"mirror 2d shifted normal",
               {CrystalGroup(Lattice::integer(2), {AffineMap::identity(2), {diag({1, -1}), vec({0, h})}}), false}});
  c.push_back({"hantzsche-wendt", {hantzsche_wendt(), true}});
  c.push_back({"hantzsche-wendt without translations",
               {CrystalGroup(Lattice::integer(3), {AffineMap::identity(3),
                                                   {diag({1, -1, -1}), vec({0, 0, 0})},
                                                   {diag({-1, 1, -1}), vec({0, 0, 0})},
                                                   {diag({-1, -1, 1}), vec({0, 0, 0})}}),
                false}});
  c.push_back({"half-turn screw", {CrystalGroup(Lattice::integer(3), {AffineMap::identity(3), {diag({-1, -1, 1}), vec({0, 0, h})}}), true}});
  c.push_back({"half-turn axis", {CrystalGroup(Lattice::integer(3), {AffineMap::identity(3), {diag({-1, -1, 1}), vec({h, 0, 0})}}), false}});
  c.push_back({"quarter-turn screw",
               {CrystalGroup(Lattice::integer(3), {AffineMap::identity(3),
                                                   {rot4, vec({0, 0, ratio(1, 4)})},
                                                   {rot4 * rot4, vec({0, 0, h})},
                                                   {rot4 * rot4 * rot4, vec({0, 0, ratio(3, 4)})}}),
                true}});
  return c;
}

}  // namespace fixtures

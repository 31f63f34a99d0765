#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "yamflat/matrix.hpp"
#include "yamflat/rational.hpp"

namespace yamflat {

/// Full-rank lattice in R^d; the columns of the basis are the generators.
class Lattice {
 public:
  /// Throws InvalidLattice unless the basis is square and invertible.
  explicit Lattice(RationalMatrix basis);

  static Lattice integer(std::size_t d) { return Lattice(RationalMatrix::identity(d)); }

  std::size_t dim() const { return basis_.rows(); }
  const RationalMatrix& basis() const { return basis_; }
  RationalMatrix gram() const { return basis_.transpose() * basis_; }
  Rational covolume() const { return abs(basis_.determinant()); }

  /// B c for integer coordinates c.
  RationalVector point(const std::vector<long>& coords) const;
  /// B^{-1} v.
  RationalVector coordinates(const RationalVector& v) const;
  bool contains(const RationalVector& v) const;

  /// Same point set, i.e. the bases differ by a unimodular change.
  bool same_point_set(const Lattice& other) const;

  friend bool operator==(const Lattice& a, const Lattice& b) { return a.basis_ == b.basis_; }

 private:
  RationalMatrix basis_;
};

/// The dual lattice {y : <y, x> in Z for all x in L}, with basis (B^t)^{-1}.
Lattice dual(const Lattice& lattice);

struct ShortVector {
  std::vector<long> coords;  // with respect to the lattice basis
  Rational norm_sq;
};

struct ShortVectorList {
  Rational radius_sq;
  std::vector<ShortVector> vectors;  // sorted by (norm, coordinates)
};

struct EnumerationLimits {
  std::size_t max_count = 4'000'000;
};

/// All nonzero lattice vectors with squared norm <= radius_sq, certified complete.
/// Coordinate ranges come from an exact LDL^t factorization of the Gram matrix.
ShortVectorList enumerate_short_vectors(const Lattice& lattice, const Rational& radius_sq,
                                        const EnumerationLimits& limits = {});

/// Maximal distance from a point of R^d to the lattice, to within `tolerance`.
/// Supported for d <= 4.
double covering_radius(const Lattice& lattice, double tolerance);

/// Every sublattice of index k, ordered by its lower-triangular Hermite normal form
/// (row-major, lexicographic). Each has basis B H.
std::vector<Lattice> sublattices_of_index(const Lattice& lattice, long k, const EnumerationLimits& limits = {});

/// The lattice itself followed by Gamma_1 > Gamma_2 > ... with the requested indices,
/// each step taking the first sublattice in HNF order.
std::vector<Lattice> nested_chain(const Lattice& lattice, const std::vector<long>& degrees);

}  // namespace yamflat

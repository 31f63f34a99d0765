#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "yamflat/lattice.hpp"
#include "yamflat/matrix.hpp"

namespace yamflat {

/// x -> A x + v.
struct AffineMap {
  RationalMatrix linear;
  RationalVector translation;

  static AffineMap identity(std::size_t d) { return {RationalMatrix::identity(d), RationalVector(d)}; }

  std::size_t dim() const { return translation.size(); }
  RationalVector apply(const RationalVector& x) const { return linear * x + translation; }
  bool is_orthogonal() const { return (linear.transpose() * linear).is_identity(); }

  AffineMap inverse() const;
  /// (A,v)(B,w) = (AB, Aw + v).
  friend AffineMap operator*(const AffineMap& f, const AffineMap& g) {
    return {f.linear * g.linear, f.linear * g.translation + f.translation};
  }
  friend bool operator==(const AffineMap& a, const AffineMap& b) {
    return a.linear == b.linear && a.translation == b.translation;
  }
};

/// A crystallographic group given by its translation lattice and one coset
/// representative (B_i, v_i) per holonomy element, with (B_0, v_0) = (I, 0).
/// Translations are kept reduced into the half-open fundamental cell.
class CrystalGroup {
 public:
  CrystalGroup(Lattice lattice, std::vector<AffineMap> holonomy);

  static CrystalGroup torus(Lattice lattice);

  const Lattice& lattice() const { return lattice_; }
  const std::vector<AffineMap>& holonomy() const { return holonomy_; }
  std::size_t dim() const { return lattice_.dim(); }
  std::size_t order() const { return holonomy_.size(); }
  bool trivial_holonomy() const { return holonomy_.size() == 1; }

  /// Lattice coordinates of v reduced into [0, 1)^d, mapped back to R^d.
  RationalVector reduce(const RationalVector& v) const;

 private:
  Lattice lattice_;
  std::vector<AffineMap> holonomy_;
};

struct ValidationFailure {
  std::string invariant;
  std::size_t i = 0;
  std::size_t j = 0;
  std::string detail;
};

struct ValidationReport {
  std::vector<ValidationFailure> failures;
  bool valid() const { return failures.empty(); }
  std::string summary() const;
};

ValidationReport validate_group(const CrystalGroup& group);

struct TorsionVerdict {
  bool torsion_free = true;
  /// When not torsion free: the offending coset and a finite-order element of it
  /// together with one of its fixed points.
  std::optional<std::size_t> coset;
  std::optional<AffineMap> element;
  std::optional<RationalVector> fixed_point;
};

/// Exact criterion: the coset (B, v + L) contains an element of finite order iff
/// S v lies in S L for S = I + B + ... + B^{k-1}, k = ord(B).
/// Throws InvalidGroup if validation fails.
TorsionVerdict is_torsion_free(const CrystalGroup& group);

/// True iff A^t A commutes with every holonomy matrix.
bool cone_membership(const CrystalGroup& group, const RationalMatrix& a);

/// Exact orthogonal projection onto a proper nontrivial rational invariant
/// subspace of the holonomy representation (span(e_1) for trivial holonomy).
RationalMatrix find_invariant_subspace(const CrystalGroup& group);

/// Orthogonal projection onto the span of the given vectors.
RationalMatrix projection_onto(const std::vector<RationalVector>& spanning);

class CollapseFamily {
 public:
  /// Validates P^2 = P = P^t, 1 <= dim E <= d - 1 and that E is holonomy invariant.
  CollapseFamily(CrystalGroup group, RationalMatrix projection);

  static CollapseFamily automatic(CrystalGroup group);

  const CrystalGroup& group() const { return group_; }
  const RationalMatrix& projection() const { return projection_; }
  RationalMatrix complement() const { return RationalMatrix::identity(dim()) - projection_; }
  std::size_t dim() const { return group_.dim(); }
  std::size_t dim_e() const { return dim_e_; }

 private:
  CrystalGroup group_;
  RationalMatrix projection_;
  std::size_t dim_e_;
};

/// A_t = t^(dim E - d) P + t^(dim E) P^perp; det A_t = 1 and A_t lies in the cone.
RationalMatrix collapse_map(const CollapseFamily& family, const Rational& t);

/// (A, v) G (A, v)^{-1}: lattice -> A(lattice), (B, w) -> (A B A^{-1}, A w + (I - A B A^{-1}) v).
/// Throws NotIsometricAction when A is outside the cone.
CrystalGroup conjugate_group(const CrystalGroup& group, const RationalMatrix& a, const RationalVector& v);

}  // namespace yamflat

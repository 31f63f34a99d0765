#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "yamflat/crystal.hpp"
#include "yamflat/lattice.hpp"
#include "yamflat/real.hpp"

namespace yamflat {

struct SpectrumEntry {
  Real eigenvalue;
  long multiplicity = 0;
};

/// Laplace eigenvalues strictly below `cutoff`, distinct and increasing, with
/// multiplicities. `certificate` records why the list is complete.
struct SpectrumSlice {
  std::vector<SpectrumEntry> entries;
  Real cutoff;
  std::string source;
  std::string certificate;

  /// Eigenvalues repeated by multiplicity; lambda_0 = 0 first.
  std::vector<Real> expanded() const;
  long total_multiplicity() const;
};

struct SpectralOptions {
  int precision_bits = kDefaultPrecisionBits;
  EnumerationLimits limits;
};

/// Vol(S^m) = 2 pi^{(m+1)/2} / Gamma((m+1)/2), exact: always a rational multiple of a power of pi.
Real sphere_volume(int m);

/// Round sphere of curvature radius R, given through 1/R^2: eigenvalues j(j+m-1)/R^2
/// with multiplicity C(m+j, j) - C(m+j-2, j-2).
SpectrumSlice sphere_spectrum(int m, const Real& inv_radius_sq, const Real& cutoff, const SpectralOptions& options = {});

/// Flat torus R^d / L: eigenvalues 4 pi^2 |x|^2 over the dual lattice.
SpectrumSlice torus_spectrum(const Lattice& lattice, const Real& cutoff, const SpectralOptions& options = {});

/// Holonomy character sums on dual-lattice exponentials e^{2 pi i <x, .>}.
/// For a set of dual vectors closed under the holonomy action, `multiplicity`
/// is the dimension of the invariant part of their span.
class HolonomyCharacter {
 public:
  explicit HolonomyCharacter(const CrystalGroup& group);

  /// Coordinates are with respect to the dual basis (B^t)^{-1}.
  long multiplicity(const std::vector<std::vector<long>>& dual_coords) const;

 private:
  std::size_t order_;
  std::vector<RationalMatrix> dual_action_;   // x -> B^t x in dual coordinates
  std::vector<RationalVector> translation_;   // v_i in lattice coordinates
};

/// Spectrum of the closed flat manifold R^d / G (G torsion free).
SpectrumSlice bieberbach_spectrum(const CrystalGroup& group, const Real& cutoff, const SpectralOptions& options = {});

/// Riemannian product: all sums below cutoff, multiplicities multiplied and merged.
SpectrumSlice product_spectrum(const SpectrumSlice& a, const SpectrumSlice& b, const Real& cutoff,
                               const SpectralOptions& options = {});

enum class BoundStatus { Satisfied, Violated, Inconclusive };

struct ChengRow {
  long j = 0;
  Real eigenvalue;
  double bound = 0;
  double margin = 0;  // bound - eigenvalue
  BoundStatus status = BoundStatus::Satisfied;
};

struct ChengReport {
  std::vector<ChengRow> rows;
  long violations = 0;
  long inconclusive = 0;
};

/// lambda_j <= 2 j^2 d (d+4) / diam^2 for j = 1..j_max, indexing with multiplicity.
/// When `diameter_certified` is false the diameter is only an upper bound, so a
/// failed inequality is reported as inconclusive rather than violated.
ChengReport cheng_bound_check(const SpectrumSlice& spectrum, int d, double diameter, long j_max,
                              bool diameter_certified = true, const SpectralOptions& options = {});

struct FlatDiameter {
  double value = 0;
  bool upper_bound_only = false;
};

/// Diameter of R^d / G: the covering radius of the translation lattice, exact for
/// tori and an upper bound otherwise.
FlatDiameter flat_diameter(const CrystalGroup& group, double tolerance);

enum class FactorKind { Sphere, Custom };

struct ClosedFactor {
  FactorKind kind = FactorKind::Custom;
  int dim = 0;
  Real scal;
  Real volume;
  SpectrumSlice spectrum;
};

/// Round S^m with the given 1/R^2: scal = m(m-1)/R^2, volume = Vol(S^m) R^m.
ClosedFactor round_sphere(int m, const Real& inv_radius_sq, const Real& cutoff, const SpectralOptions& options = {});
/// Round S^m rescaled to unit volume.
ClosedFactor unit_volume_sphere(int m, const Real& cutoff, const SpectralOptions& options = {});

}  // namespace yamflat

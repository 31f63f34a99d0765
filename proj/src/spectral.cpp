#include "yamflat/spectral.hpp"

#include <algorithm>
#include <cmath>

#include "yamflat/errors.hpp"

namespace yamflat {

std::vector<Real> SpectrumSlice::expanded() const {
  std::vector<Real> out;
  for (const auto& e : entries)
    for (long k = 0; k < e.multiplicity; ++k) out.push_back(e.eigenvalue);
  return out;
}

long SpectrumSlice::total_multiplicity() const {
  long n = 0;
  for (const auto& e : entries) n += e.multiplicity;
  return n;
}

namespace {

Integer binomial(long n, long k) {
  if (k < 0 || n < 0 || k > n) return 0;
  Integer r;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return r;
}

Integer factorial(long n) {
  Integer r;
  mpz_fac_ui(r.get_mpz_t(), static_cast<unsigned long>(n));
  return r;
}

Real four_pi_sq_times(const Rational& q) { return Real(PiPolynomial(4 * q, 2)); }

// Rational radius bound for dual-lattice enumeration: every eigenvalue
// 4 pi^2 n below `cutoff` has n <= the returned value.
Rational dual_radius_for(const Real& cutoff, int precision_bits) {
  Rational r = upper_bound(cutoff / Real(PiPolynomial(4, 2)), precision_bits);
  return r < 0 ? Rational(0) : r;
}

}  // namespace

Real sphere_volume(int m) {
  if (m < 0) throw Error(ErrorCode::InvalidInput, "sphere dimension must be nonnegative");
  if (m % 2 == 1) {
    const long k = (m + 1) / 2;
    return Real(PiPolynomial(ratio(2, factorial(k - 1)), static_cast<int>(k)));
  }
  const long k = m / 2;
  Integer four_k;
  mpz_ui_pow_ui(four_k.get_mpz_t(), 4, static_cast<unsigned long>(k));
  return Real(PiPolynomial(ratio(2 * four_k * factorial(k), factorial(2 * k)), static_cast<int>(k)));
}

SpectrumSlice sphere_spectrum(int m, const Real& inv_radius_sq, const Real& cutoff, const SpectralOptions& options) {
  if (m < 2) throw Error(ErrorCode::InvalidInput, "sphere spectrum needs m >= 2");
  if (sign(inv_radius_sq, options.precision_bits) <= 0) throw Error(ErrorCode::InvalidInput, "radius must be positive");
  SpectrumSlice slice;
  slice.cutoff = cutoff;
  slice.source = "sphere S^" + std::to_string(m) + " 1/R^2=" + inv_radius_sq.to_string();
  for (long j = 0;; ++j) {
    Real lambda = Real(Rational(j * (j + m - 1))) * inv_radius_sq;
    if (compare(lambda, cutoff, options.precision_bits) >= 0) {
      slice.certificate = "closed form; first excluded level j=" + std::to_string(j);
      break;
    }
    Integer mult = binomial(m + j, j) - binomial(m + j - 2, j - 2);
    slice.entries.push_back({lambda, mult.get_si()});
  }
  return slice;
}

SpectrumSlice torus_spectrum(const Lattice& lattice, const Real& cutoff, const SpectralOptions& options) {
  SpectrumSlice slice;
  slice.cutoff = cutoff;
  slice.source = "flat torus d=" + std::to_string(lattice.dim());
  if (sign(cutoff, options.precision_bits) <= 0) {
    slice.certificate = "empty: cutoff <= 0";
    return slice;
  }
  const Rational radius = dual_radius_for(cutoff, options.precision_bits);
  const auto list = enumerate_short_vectors(dual(lattice), radius, options.limits);
  slice.certificate = "dual lattice enumeration, radius_sq=" + to_string(radius);
  slice.entries.push_back({Real(0), 1});
  for (std::size_t i = 0; i < list.vectors.size();) {
    std::size_t j = i;
    while (j < list.vectors.size() && list.vectors[j].norm_sq == list.vectors[i].norm_sq) ++j;
    Real lambda = four_pi_sq_times(list.vectors[i].norm_sq);
    if (compare(lambda, cutoff, options.precision_bits) < 0)
      slice.entries.push_back({lambda, static_cast<long>(j - i)});
    i = j;
  }
  return slice;
}

HolonomyCharacter::HolonomyCharacter(const CrystalGroup& group) : order_(group.order()) {
  const RationalMatrix& basis = group.lattice().basis();
  const RationalMatrix dual_basis = basis.transpose().inverse();
  const RationalMatrix dual_inv = dual_basis.inverse();
  const RationalMatrix basis_inv = basis.inverse();
  for (const auto& g : group.holonomy()) {
    dual_action_.push_back(dual_inv * g.linear.transpose() * dual_basis);
    translation_.push_back(basis_inv * g.translation);
  }
}

long HolonomyCharacter::multiplicity(const std::vector<std::vector<long>>& dual_coords) const {
  // Trace of f -> f o (B, v) on span{e_x}: sum over x with B^t x = x of e^{2 pi i <x, v>},
  // and <x, v> = k . c for dual coordinates k and lattice coordinates c of v.
  long double total = 0;
  for (std::size_t g = 0; g < order_; ++g) {
    const RationalMatrix& action = dual_action_[g];
    const RationalVector& c = translation_[g];
    for (const auto& k : dual_coords) {
      RationalVector kv(k.size());
      for (std::size_t i = 0; i < k.size(); ++i) kv[i] = k[i];
      if (action * kv != kv) continue;
      Rational phase = dot(kv, c);
      phase -= Rational(floor_of(phase));
      total += std::cos(2.0L * 3.141592653589793238462643383279502884L * static_cast<long double>(phase.get_d()));
    }
  }
  const long double m = total / static_cast<long double>(order_);
  const long double rounded = std::nearbyint(m);
  if (std::fabs(m - rounded) > 1e-6L || rounded < 0) {
    throw Error(ErrorCode::NonIntegerMultiplicity,
                "character sum " + std::to_string(static_cast<double>(m)) + " is not a nonnegative integer");
  }
  return static_cast<long>(rounded);
}

SpectrumSlice bieberbach_spectrum(const CrystalGroup& group, const Real& cutoff, const SpectralOptions& options) {
  auto verdict = is_torsion_free(group);
  if (!verdict.torsion_free) throw Error(ErrorCode::InvalidGroup, "group has torsion; quotient is not a manifold");
  SpectrumSlice slice;
  slice.cutoff = cutoff;
  slice.source = "flat manifold d=" + std::to_string(group.dim()) + " |H|=" + std::to_string(group.order());
  if (sign(cutoff, options.precision_bits) <= 0) {
    slice.certificate = "empty: cutoff <= 0";
    return slice;
  }
  const HolonomyCharacter character(group);
  const Rational radius = dual_radius_for(cutoff, options.precision_bits);
  const auto list = enumerate_short_vectors(dual(group.lattice()), radius, options.limits);
  slice.certificate = "dual lattice enumeration with holonomy character sums, radius_sq=" + to_string(radius);
  slice.entries.push_back({Real(0), 1});
  for (std::size_t i = 0; i < list.vectors.size();) {
    std::size_t j = i;
    std::vector<std::vector<long>> shell;
    while (j < list.vectors.size() && list.vectors[j].norm_sq == list.vectors[i].norm_sq) shell.push_back(list.vectors[j++].coords);
    Real lambda = four_pi_sq_times(list.vectors[i].norm_sq);
    if (compare(lambda, cutoff, options.precision_bits) < 0) {
      long mult = character.multiplicity(shell);
      if (mult > 0) slice.entries.push_back({lambda, mult});
    }
    i = j;
  }
  return slice;
}

SpectrumSlice product_spectrum(const SpectrumSlice& a, const SpectrumSlice& b, const Real& cutoff,
                               const SpectralOptions& options) {
  const int bits = options.precision_bits;
  if (compare(a.cutoff, cutoff, bits) < 0 || compare(b.cutoff, cutoff, bits) < 0)
    throw Error(ErrorCode::IncompleteInput, "factor spectra must be complete up to the product cutoff");
  std::vector<SpectrumEntry> sums;
  for (const auto& x : a.entries) {
    for (const auto& y : b.entries) {
      Real s = x.eigenvalue + y.eigenvalue;
      if (compare(s, cutoff, bits) < 0) sums.push_back({s, x.multiplicity * y.multiplicity});
    }
  }
  std::sort(sums.begin(), sums.end(),
            [bits](const SpectrumEntry& p, const SpectrumEntry& q) { return compare(p.eigenvalue, q.eigenvalue, bits) < 0; });
  SpectrumSlice slice;
  slice.cutoff = cutoff;
  slice.source = "product (" + a.source + ") x (" + b.source + ")";
  slice.certificate = "both factors complete below the product cutoff; eigenvalues are nonnegative";
  for (auto& s : sums) {
    if (!slice.entries.empty() && compare(slice.entries.back().eigenvalue, s.eigenvalue, bits) == 0) {
      slice.entries.back().multiplicity += s.multiplicity;
    } else {
      slice.entries.push_back(std::move(s));
    }
  }
  return slice;
}

ChengReport cheng_bound_check(const SpectrumSlice& spectrum, int d, double diameter, long j_max,
                              bool diameter_certified, const SpectralOptions& options) {
  if (!(diameter > 0)) throw Error(ErrorCode::InvalidInput, "diameter must be positive");
  const auto values = spectrum.expanded();
  if (static_cast<long>(values.size()) <= j_max)
    throw Error(ErrorCode::IncompleteInput, "spectrum holds " + std::to_string(values.size()) +
                                                " eigenvalues with multiplicity; need index " + std::to_string(j_max));
  ChengReport report;
  for (long j = 1; j <= j_max; ++j) {
    const double bound = 2.0 * static_cast<double>(j * j) * d * (d + 4) / (diameter * diameter);
    ChengRow row;
    row.j = j;
    row.eigenvalue = values[static_cast<std::size_t>(j)];
    row.bound = bound;
    row.margin = bound - row.eigenvalue.to_double();
    if (compare(row.eigenvalue, Real::from_double(bound), options.precision_bits) <= 0) {
      row.status = BoundStatus::Satisfied;
    } else if (diameter_certified) {
      row.status = BoundStatus::Violated;
      ++report.violations;
    } else {
      row.status = BoundStatus::Inconclusive;
      ++report.inconclusive;
    }
    report.rows.push_back(std::move(row));
  }
  return report;
}

FlatDiameter flat_diameter(const CrystalGroup& group, double tolerance) {
  FlatDiameter out;
  out.value = covering_radius(group.lattice(), tolerance);
  out.upper_bound_only = !group.trivial_holonomy();
  return out;
}

ClosedFactor round_sphere(int m, const Real& inv_radius_sq, const Real& cutoff, const SpectralOptions& options) {
  ClosedFactor f;
  f.kind = FactorKind::Sphere;
  f.dim = m;
  f.scal = Real(static_cast<long>(m * (m - 1))) * inv_radius_sq;
  f.volume = sphere_volume(m) * inv_radius_sq.pow(ratio(-m, 2));
  f.spectrum = sphere_spectrum(m, inv_radius_sq, cutoff, options);
  return f;
}

ClosedFactor unit_volume_sphere(int m, const Real& cutoff, const SpectralOptions& options) {
  return round_sphere(m, sphere_volume(m).pow(ratio(2, m)), cutoff, options);
}

}  // namespace yamflat

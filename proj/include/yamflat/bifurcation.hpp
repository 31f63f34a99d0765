#pragma once

#include <optional>
#include <string>
#include <vector>

#include "yamflat/crystal.hpp"
#include "yamflat/real.hpp"
#include "yamflat/spectral.hpp"

namespace yamflat {

enum class CollapseEnd { Zero, Infinity };

/// A product M x F with (M, g) closed of constant positive scalar curvature and
/// F = R^d / G flat, deformed through the collapse family A_t (or held fixed
/// when no projection is given).
struct Scenario {
  ClosedFactor closed;
  CrystalGroup flat;
  std::optional<RationalMatrix> projection;
  CollapseEnd end = CollapseEnd::Zero;

  int total_dim() const { return closed.dim + static_cast<int>(flat.dim()); }
  /// scal_g / (dim M + dim F - 1).
  Real threshold() const;
  /// A_t, or the identity for a constant family.
  RationalMatrix deformation(const Rational& t) const;
  /// Exponents (p, q) in lambda(t) = 4 pi^2 (a t^p + b t^-q); (0, 0) without collapse.
  std::pair<long, long> exponents() const;
};

/// Checks unit volumes, scal > 0, torsion-freeness, and that the closed spectrum
/// is complete up to the threshold. Throws InvalidInput / InvalidGroup.
void validate_scenario(const Scenario& scenario, int precision_bits = kDefaultPrecisionBits);

struct BifurcationOptions {
  int precision_bits = kDefaultPrecisionBits;
  EnumerationLimits limits;
  unsigned threads = 1;
  /// Extra grid points allowed when separating crossings.
  std::size_t refine_budget = 4096;
  /// Instants are bisected to width (t_max - t_min) / 2^bisection_bits.
  int bisection_bits = 40;
};

struct EqualityPair {
  std::size_t closed_entry = 0;  // index into the closed spectrum entries
  Real closed_eigenvalue;
  Real flat_eigenvalue;
  long multiplicity = 0;  // closed mult x flat mult
};

struct IndexResult {
  long index = 0;
  /// Pairs with lambda_M + lambda_F exactly equal to the threshold (excluded from the count).
  std::vector<EqualityPair> equalities;
};

/// Number of pairs (j1, j2), with multiplicity, with lambda_j1(M) + lambda_j2(F, h_t) < threshold.
/// The flat spectrum comes from enumerating the dual lattice of A_t(lattice).
IndexResult index_at(const Scenario& scenario, const Rational& t, const BifurcationOptions& options = {});

/// One t-dependent flat eigenvalue family: 4 pi^2 (a t^p + b t^-q), a = |P y|^2, b = |P^perp y|^2
/// for dual vectors y of the base lattice, with the quotient multiplicity of the class.
struct FlatBranch {
  Rational a;
  Rational b;
  long multiplicity = 0;
};

/// Classes of base dual vectors with |y|^2 <= norm_bound, with positive multiplicity,
/// ordered by (a + b, a).
std::vector<FlatBranch> flat_branches(const Scenario& scenario, const Rational& norm_bound,
                                      const BifurcationOptions& options = {});

/// lambda(t) for a branch.
Real branch_value(const FlatBranch& branch, const Real& t, std::pair<long, long> exponents);

struct ConditionAWitness {
  std::size_t closed_entry = 0;
  Real closed_eigenvalue;
  FlatBranch branch;
};

struct ConditionAResult {
  bool holds = true;
  std::vector<ConditionAWitness> witnesses;
};

/// True iff threshold - lambda_j(M) is not a flat eigenvalue for every lambda_j(M) < threshold.
/// Accepts algebraic t (e.g. a crossing instant) as well as rational t.
ConditionAResult condition_a_check(const Scenario& scenario, const Real& t, const BifurcationOptions& options = {});

struct Crossing {
  Rational t_lo;
  Rational t_hi;
  std::optional<Real> t_exact;
  std::string t_exact_text;
  /// When the crossing is t = root_base^(1/root_degree) with root_base exact.
  std::optional<PiPolynomial> root_base;
  long root_degree = 0;
  std::size_t closed_entry = 0;
  FlatBranch branch;
  long multiplicity = 0;
};

/// Points of D_rho in [t_min, t_max]: the t with rho - lambda_j(M) = lambda(t) for some branch.
/// Coincident solutions from different (j, branch) pairs are merged; members lists them all.
struct CrossingPoint {
  Rational t_lo;
  Rational t_hi;
  std::optional<Real> t_exact;
  std::string t_exact_text;
  std::vector<Crossing> members;
};

std::vector<CrossingPoint> d_rho_crossings(const Scenario& scenario, const Real& rho, const Rational& t_min,
                                           const Rational& t_max, const BifurcationOptions& options = {});

struct Instant {
  Rational t_lo;
  Rational t_hi;
  std::optional<std::string> t_exact;
  /// i(t_lo) - i(t_hi): the change of the index as t decreases through the instant.
  long jump = 0;
  bool condition_a = false;
};

struct AccumulationSummary {
  bool monotone_toward_end = true;
  long index_at_start = 0;
  long index_at_end = 0;
};

struct ScanReport {
  std::vector<std::pair<Rational, long>> grid;
  std::vector<Instant> instants;
  AccumulationSummary accumulation;
  std::vector<std::string> warnings;
};

/// Index curve on a uniform grid of `steps` points, followed by certified isolation of every jump.
ScanReport scan(const Scenario& scenario, const Rational& t_min, const Rational& t_max, long steps,
                const BifurcationOptions& options = {});

/// #{flat eigenvalues < threshold - lambda_N0(M)}, N0 the last closed eigenvalue below the threshold.
long index_lower_bound(const Scenario& scenario, const Rational& t, const BifurcationOptions& options = {});

struct AccumulationStep {
  Instant instant;
  long index_above = 0;
  long index_below = 0;
  long lower_bound = 0;  // at the point on the collapse side
  bool bound_holds = true;
};

struct AccumulationEvidence {
  std::vector<AccumulationStep> steps;
  bool strictly_increasing = true;
  bool bounds_hold = true;
};

/// The first k_max instants from `start` toward the collapse end, found by scanning
/// successive windows [t/2, t] (or [t, 2t]); BudgetExhausted if they are not found.
AccumulationEvidence accumulation_diagnostic(const Scenario& scenario, long k_max, const Rational& start = 1,
                                             const BifurcationOptions& options = {});

}  // namespace yamflat

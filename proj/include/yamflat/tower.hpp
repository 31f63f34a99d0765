#pragma once

#include <string>
#include <vector>

#include "yamflat/real.hpp"

namespace yamflat {

/// (M x S, g + lambda h) with g and h of constant scalar curvature.
struct ProductMetricData {
  Real scal_g;
  Real vol_g;
  int dim_m = 0;
  Real scal_h;
  Real vol_h;
  int dim_f = 0;
  Real lambda = Real(1);

  int n() const { return dim_m + dim_f; }
  Real combined_scal() const { return scal_g + scal_h / lambda; }
  Real combined_volume() const;
};

/// max(0, -scal_h / scal_g).
Real lambda_zero(const Real& scal_g, const Real& scal_h, int precision_bits = kDefaultPrecisionBits);

/// Vol^{2/n} scal. Throws NonPositiveScal when lambda <= lambda_zero.
Real hilbert_einstein_value(const ProductMetricData& p, int precision_bits = kDefaultPrecisionBits);

/// Y(S^n) = n(n-1) Vol(S^n)^{2/n}.
Real sphere_yamabe_threshold(int n);

struct ForcingDegree {
  long degree = 1;
  /// A - Y at degree and at degree - 1 (the latter is zero-or-negative).
  Real margin;
  Real margin_previous;
  /// A = Y exactly at degree - 1.
  bool equality_previous = false;
};

/// Least N with (N vol)^{2/n} scal > Y(S^n), compared through exact powers:
/// (N vol)^2 scal^n against Y^n. UndecidableComparison when that cannot be settled.
ForcingDegree minimal_forcing_degree(const ProductMetricData& p, int precision_bits = kDefaultPrecisionBits);

struct LedgerRow {
  long degree = 0;
  long cumulative_degree = 0;
  Real volume;
  Real a_value;
  bool crossed = false;
};

struct Ledger {
  std::vector<LedgerRow> rows;
  /// First crossed level (1-based), 0 if none.
  std::size_t first_crossed = 0;
  /// Crossed levels carry pairwise distinct A-values.
  bool crossed_levels_distinct = true;
};

Ledger tower_simulate(const ProductMetricData& p, const std::vector<long>& degrees,
                      int precision_bits = kDefaultPrecisionBits);

enum class ScalRegime { Positive, Zero, Negative };

struct SingularScal {
  long value = 0;
  ScalRegime regime = ScalRegime::Zero;
};

/// (m - 2k - 2)(m - 1) for 0 <= k <= m - 2.
SingularScal singular_scal(long m, long k);

std::string regime_name(ScalRegime r);

}  // namespace yamflat

#include "yamflat/tower.hpp"

#include <cmath>

#include "yamflat/errors.hpp"
#include "yamflat/spectral.hpp"

namespace yamflat {

namespace {

// sign of (N vol)^{2/n} scal - Y, via (N vol)^2 scal^n - Y^n (all positive).
int compare_degree(const ProductMetricData& p, long degree, int bits) {
  const int n = p.n();
  const Real lhs = (Real(degree) * p.combined_volume()).pow(2) * p.combined_scal().pow(n);
  const Real rhs = Real(static_cast<long>(n) * (n - 1)).pow(n) * sphere_volume(n).pow(2);
  return compare(lhs, rhs, bits);
}

Real a_at(const ProductMetricData& p, long degree) {
  return (Real(degree) * p.combined_volume()).pow(ratio(2, p.n())) * p.combined_scal();
}

void check(const ProductMetricData& p, int bits) {
  if (p.n() < 3) throw Error(ErrorCode::InvalidInput, "product dimension must be at least 3");
  if (sign(p.scal_g, bits) <= 0) throw Error(ErrorCode::InvalidInput, "scal_g must be positive");
  if (sign(p.vol_g, bits) <= 0 || sign(p.vol_h, bits) <= 0)
    throw Error(ErrorCode::InvalidInput, "volumes must be positive");
  if (sign(p.lambda, bits) <= 0) throw Error(ErrorCode::InvalidInput, "lambda must be positive");
  if (compare(p.lambda, lambda_zero(p.scal_g, p.scal_h, bits), bits) <= 0 || sign(p.combined_scal(), bits) <= 0)
    throw Error(ErrorCode::NonPositiveScal, "lambda must exceed lambda_0");
}

}  // namespace

Real ProductMetricData::combined_volume() const { return vol_g * lambda.pow(ratio(dim_f, 2)) * vol_h; }

Real lambda_zero(const Real& scal_g, const Real& scal_h, int bits) {
  if (sign(scal_g, bits) <= 0) throw Error(ErrorCode::InvalidInput, "scal_g must be positive");
  return max(Real(0), -scal_h / scal_g, bits);
}

Real hilbert_einstein_value(const ProductMetricData& p, int bits) {
  check(p, bits);
  return a_at(p, 1);
}

Real sphere_yamabe_threshold(int n) {
  if (n < 3) throw Error(ErrorCode::InvalidInput, "need n >= 3");
  return Real(static_cast<long>(n) * (n - 1)) * sphere_volume(n).pow(ratio(2, n));
}

ForcingDegree minimal_forcing_degree(const ProductMetricData& p, int bits) {
  check(p, bits);
  const Real y = sphere_yamabe_threshold(p.n());
  ForcingDegree out;
  // Float guess, then certified correction.
  const double ratio_guess = y.to_double() / a_at(p, 1).to_double();
  long n = std::max(1L, static_cast<long>(std::ceil(std::pow(ratio_guess, p.n() / 2.0))) - 1);
  while (n > 1 && compare_degree(p, n - 1, bits) > 0) --n;
  while (compare_degree(p, n, bits) <= 0) ++n;
  out.degree = n;
  out.margin = a_at(p, n) - y;
  if (n > 1) {
    out.equality_previous = compare_degree(p, n - 1, bits) == 0;
    out.margin_previous = out.equality_previous ? Real(0) : a_at(p, n - 1) - y;
  }
  return out;
}

Ledger tower_simulate(const ProductMetricData& p, const std::vector<long>& degrees, int bits) {
  check(p, bits);
  Ledger ledger;
  long cumulative = 1;
  std::vector<Real> crossed_values;
  for (long d : degrees) {
    if (d < 1) throw Error(ErrorCode::InvalidInput, "covering degrees must be positive");
    cumulative *= d;
    LedgerRow row;
    row.degree = d;
    row.cumulative_degree = cumulative;
    row.volume = Real(cumulative) * p.combined_volume();
    row.a_value = a_at(p, cumulative);
    row.crossed = compare_degree(p, cumulative, bits) > 0;
    if (row.crossed) {
      if (ledger.first_crossed == 0) ledger.first_crossed = ledger.rows.size() + 1;
      for (const auto& v : crossed_values)
        if (compare(v, row.a_value, bits) == 0) ledger.crossed_levels_distinct = false;
      crossed_values.push_back(row.a_value);
    }
    ledger.rows.push_back(std::move(row));
  }
  return ledger;
}

SingularScal singular_scal(long m, long k) {
  if (m < 3) throw Error(ErrorCode::InvalidInput, "need m >= 3");
  if (k < 0 || k > m - 2) throw Error(ErrorCode::InvalidInput, "need 0 <= k <= m - 2");
  SingularScal s;
  s.value = (m - 2 * k - 2) * (m - 1);
  s.regime = s.value > 0 ? ScalRegime::Positive : s.value == 0 ? ScalRegime::Zero : ScalRegime::Negative;
  return s;
}

std::string regime_name(ScalRegime r) {
  switch (r) {
    case ScalRegime::Positive: return "positive";
    case ScalRegime::Zero: return "zero";
    case ScalRegime::Negative: return "negative";
  }
  return "";
}

}  // namespace yamflat

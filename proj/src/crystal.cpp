#include "yamflat/crystal.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <random>

#include "yamflat/errors.hpp"

namespace yamflat {

namespace {

Rational rational_pow(const Rational& base, long n) {
  if (n < 0) return rational_pow(1 / base, -n);
  Integer num, den;
  mpz_pow_ui(num.get_mpz_t(), base.get_num_mpz_t(), static_cast<unsigned long>(n));
  mpz_pow_ui(den.get_mpz_t(), base.get_den_mpz_t(), static_cast<unsigned long>(n));
  return Rational(num, den);
}

bool commute(const RationalMatrix& a, const RationalMatrix& b) { return a * b == b * a; }

}  // namespace

AffineMap AffineMap::inverse() const {
  RationalMatrix inv = linear.inverse();
  return {inv, Rational(-1) * (inv * translation)};
}

CrystalGroup::CrystalGroup(Lattice lattice, std::vector<AffineMap> holonomy)
    : lattice_(std::move(lattice)), holonomy_(std::move(holonomy)) {
  const std::size_t d = lattice_.dim();
  if (holonomy_.empty()) holonomy_.push_back(AffineMap::identity(d));
  for (const auto& g : holonomy_) {
    if (g.linear.rows() != d || g.linear.cols() != d || g.translation.size() != d)
      throw Error(ErrorCode::InvalidGroup, "holonomy representative has the wrong dimension");
  }
  if (!holonomy_.front().linear.is_identity())
    throw Error(ErrorCode::InvalidGroup, "first holonomy representative must have linear part I");
  for (auto& g : holonomy_) g.translation = reduce(g.translation);
}

CrystalGroup CrystalGroup::torus(Lattice lattice) {
  const std::size_t d = lattice.dim();
  return CrystalGroup(std::move(lattice), {AffineMap::identity(d)});
}

RationalVector CrystalGroup::reduce(const RationalVector& v) const {
  RationalVector c = lattice_.coordinates(v);
  for (auto& x : c) x -= Rational(floor_of(x));
  return lattice_.basis() * c;
}

std::string ValidationReport::summary() const {
  if (failures.empty()) return "valid";
  std::string out;
  for (const auto& f : failures) {
    if (!out.empty()) out += "; ";
    out += f.invariant + " (" + std::to_string(f.i) + "," + std::to_string(f.j) + ")";
    if (!f.detail.empty()) out += ": " + f.detail;
  }
  return out;
}

ValidationReport validate_group(const CrystalGroup& group) {
  ValidationReport report;
  const auto& reps = group.holonomy();
  const Lattice& lattice = group.lattice();
  const RationalMatrix& basis = lattice.basis();
  const RationalMatrix basis_inv = basis.inverse();

  if (!reps.front().linear.is_identity() || !lattice.contains(reps.front().translation))
    report.failures.push_back({"first representative is a pure translation", 0, 0, ""});

  for (std::size_t i = 0; i < reps.size(); ++i) {
    if (!reps[i].is_orthogonal())
      report.failures.push_back({"linear part orthogonal", i, i, reps[i].linear.to_string()});
    if (!is_unimodular(basis_inv * reps[i].linear * basis))
      report.failures.push_back({"linear part preserves the lattice", i, i, reps[i].linear.to_string()});
    for (std::size_t j = i + 1; j < reps.size(); ++j)
      if (reps[i].linear == reps[j].linear)
        report.failures.push_back({"distinct holonomy elements", i, j, ""});
  }

  for (std::size_t i = 0; i < reps.size(); ++i) {
    for (std::size_t j = 0; j < reps.size(); ++j) {
      const AffineMap prod = reps[i] * reps[j];
      auto k = std::find_if(reps.begin(), reps.end(), [&](const AffineMap& r) { return r.linear == prod.linear; });
      if (k == reps.end()) {
        report.failures.push_back({"holonomy closed under products", i, j, ""});
        continue;
      }
      if (!lattice.contains(prod.translation - k->translation)) {
        report.failures.push_back({"coset closure modulo the lattice", i, j,
                                   "v_i + B_i v_j - v_k not in lattice (k=" +
                                       std::to_string(static_cast<std::size_t>(k - reps.begin())) + ")"});
      }
    }
  }
  return report;
}

TorsionVerdict is_torsion_free(const CrystalGroup& group) {
  auto report = validate_group(group);
  if (!report.valid()) throw Error(ErrorCode::InvalidGroup, report.summary());
  const RationalMatrix& basis = group.lattice().basis();
  const RationalMatrix basis_inv = basis.inverse();
  const std::size_t d = group.dim();

  for (std::size_t i = 1; i < group.order(); ++i) {
    const AffineMap& g = group.holonomy()[i];
    const RationalMatrix action = basis_inv * g.linear * basis;  // integral
    RationalMatrix power = action;
    RationalMatrix s = RationalMatrix::identity(d);
    std::size_t order = 1;
    while (!power.is_identity()) {
      s = s + power;
      power = power * action;
      if (++order > 1000) throw Error(ErrorCode::InvalidGroup, "holonomy element of infinite order");
    }
    const RationalVector c = basis_inv * g.translation;
    auto n = solve_in_column_lattice(s, s * c);
    if (!n) continue;
    RationalVector lambda(d);
    for (std::size_t k = 0; k < d; ++k) lambda[k] = Rational((*n)[k]);
    AffineMap element{g.linear, g.translation - basis * lambda};
    auto fixed = (RationalMatrix::identity(d) - g.linear).solve(element.translation);
    TorsionVerdict v;
    v.torsion_free = false;
    v.coset = i;
    v.element = element;
    v.fixed_point = fixed;
    return v;
  }
  return {};
}

bool cone_membership(const CrystalGroup& group, const RationalMatrix& a) {
  if (!a.is_square() || a.rows() != group.dim()) throw Error(ErrorCode::InvalidInput, "matrix has the wrong shape");
  if (a.determinant() == 0) throw Error(ErrorCode::InvalidInput, "matrix is singular");
  const RationalMatrix ata = a.transpose() * a;
  return std::all_of(group.holonomy().begin(), group.holonomy().end(),
                     [&](const AffineMap& g) { return commute(ata, g.linear); });
}

RationalMatrix projection_onto(const std::vector<RationalVector>& spanning) {
  if (spanning.empty()) throw Error(ErrorCode::InvalidInput, "empty spanning set");
  RationalMatrix v = RationalMatrix::from_columns(spanning);
  // Keep an independent subset of columns.
  RationalMatrix reduced = v;
  auto pivots = row_reduce(reduced);
  std::vector<RationalVector> cols;
  for (auto p : pivots) cols.push_back(v.column(p));
  v = RationalMatrix::from_columns(cols);
  const RationalMatrix vt = v.transpose();
  return v * (vt * v).inverse() * vt;
}

namespace {

struct Candidate {
  std::size_t dim;
  RationalMatrix rref;  // rows span the subspace
  RationalMatrix projection;
};

bool candidate_less(const Candidate& a, const Candidate& b) {
  if (a.dim != b.dim) return a.dim < b.dim;
  // Earlier pivots first, then larger leading entries.
  for (std::size_t r = 0; r < a.dim; ++r) {
    auto ra = a.rref.row(r), rb = b.rref.row(r);
    for (std::size_t c = 0; c < ra.size(); ++c)
      if (ra[c] != rb[c]) return ra[c] > rb[c];
  }
  return false;
}

Candidate make_candidate(const std::vector<RationalVector>& basis) {
  RationalMatrix rows = RationalMatrix::from_columns(basis).transpose();
  auto pivots = row_reduce(rows);
  RationalMatrix trimmed(pivots.size(), rows.cols());
  for (std::size_t r = 0; r < pivots.size(); ++r)
    for (std::size_t c = 0; c < rows.cols(); ++c) trimmed(r, c) = rows(r, c);
  return {pivots.size(), trimmed, projection_onto(basis)};
}

// Rational eigenspaces of a rational symmetric matrix. Rational eigenvalues of
// D*S (D clearing denominators) are integers, so rounding the numerical
// eigenvalues and checking exactly is complete.
std::vector<std::vector<RationalVector>> rational_eigenspaces(const RationalMatrix& s) {
  const std::size_t d = s.rows();
  Integer den = 1;
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), s(i, j).get_den_mpz_t());
  const RationalMatrix scaled = Rational(den) * s;
  Eigen::MatrixXd m(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = scaled(i, j).get_d();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m, Eigen::EigenvaluesOnly);
  std::vector<Integer> tried;
  std::vector<std::vector<RationalVector>> spaces;
  for (Eigen::Index k = 0; k < solver.eigenvalues().size(); ++k) {
    const long nearest = std::lround(solver.eigenvalues()(k));
    for (long r = nearest - 1; r <= nearest + 1; ++r) {
      if (std::find(tried.begin(), tried.end(), Integer(r)) != tried.end()) continue;
      tried.emplace_back(r);
      auto kernel = (scaled - Rational(r) * RationalMatrix::identity(d)).kernel();
      if (!kernel.empty()) spaces.push_back(std::move(kernel));
    }
  }
  return spaces;
}

}  // namespace

RationalMatrix find_invariant_subspace(const CrystalGroup& group) {
  const std::size_t d = group.dim();
  if (d < 2) throw Error(ErrorCode::InvalidInput, "invariant splitting needs d >= 2");
  if (group.trivial_holonomy()) {
    RationalMatrix p(d, d);
    p(0, 0) = 1;
    return p;
  }
  auto report = validate_group(group);
  if (!report.valid()) throw Error(ErrorCode::InvalidGroup, report.summary());

  std::mt19937 rng(20240611u);
  std::uniform_int_distribution<int> entry(-3, 3);
  const int seed_budget = 32;
  for (int attempt = 0; attempt < seed_budget; ++attempt) {
    RationalMatrix seed(d, d);
    if (attempt == 0) {
      for (std::size_t i = 0; i < d; ++i) seed(i, i) = static_cast<long>(i + 1);
    } else {
      for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = i; j < d; ++j) seed(i, j) = seed(j, i) = entry(rng);
    }
    RationalMatrix avg(d, d);
    for (const auto& g : group.holonomy()) avg = avg + g.linear.transpose() * seed * g.linear;
    std::vector<Candidate> candidates;
    for (const auto& space : rational_eigenspaces(avg)) {
      if (space.size() == 0 || space.size() == d) continue;
      candidates.push_back(make_candidate(space));
    }
    if (!candidates.empty()) {
      std::sort(candidates.begin(), candidates.end(), candidate_less);
      return candidates.front().projection;
    }
  }
  throw Error(ErrorCode::IrreducibleUnexpected,
              "no rational invariant splitting found within " + std::to_string(seed_budget) + " seeds");
}

CollapseFamily::CollapseFamily(CrystalGroup group, RationalMatrix projection)
    : group_(std::move(group)), projection_(std::move(projection)), dim_e_(0) {
  const std::size_t d = group_.dim();
  if (projection_.rows() != d || projection_.cols() != d)
    throw Error(ErrorCode::InvalidInput, "projection has the wrong shape");
  if (!(projection_ * projection_ == projection_) || !projection_.is_symmetric())
    throw Error(ErrorCode::InvalidInput, "projection must be symmetric and idempotent");
  dim_e_ = projection_.rank();
  if (dim_e_ < 1 || dim_e_ + 1 > d) throw Error(ErrorCode::InvalidInput, "invariant subspace must be proper and nontrivial");
  for (const auto& g : group_.holonomy())
    if (!commute(g.linear, projection_))
      throw Error(ErrorCode::InvalidInput, "subspace is not invariant under holonomy");
}

CollapseFamily CollapseFamily::automatic(CrystalGroup group) {
  RationalMatrix p = find_invariant_subspace(group);
  return CollapseFamily(std::move(group), std::move(p));
}

RationalMatrix collapse_map(const CollapseFamily& family, const Rational& t) {
  if (t <= 0) throw Error(ErrorCode::InvalidInput, "collapse parameter must be positive");
  const long d = static_cast<long>(family.dim());
  const long e = static_cast<long>(family.dim_e());
  return rational_pow(t, e - d) * family.projection() + rational_pow(t, e) * family.complement();
}

CrystalGroup conjugate_group(const CrystalGroup& group, const RationalMatrix& a, const RationalVector& v) {
  if (!cone_membership(group, a)) throw Error(ErrorCode::NotIsometricAction, "A^t A does not commute with the holonomy");
  const std::size_t d = group.dim();
  if (v.size() != d) throw Error(ErrorCode::InvalidInput, "translation has the wrong dimension");
  const RationalMatrix a_inv = a.inverse();
  std::vector<AffineMap> reps;
  reps.reserve(group.order());
  for (const auto& g : group.holonomy()) {
    RationalMatrix b = a * g.linear * a_inv;
    RationalVector w = a * g.translation + (RationalMatrix::identity(d) - b) * v;
    reps.push_back({std::move(b), std::move(w)});
  }
  return CrystalGroup(Lattice(a * group.lattice().basis()), std::move(reps));
}

}  // namespace yamflat

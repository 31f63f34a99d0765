#include "yamflat/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>

#include "yamflat/errors.hpp"

namespace yamflat {

Lattice::Lattice(RationalMatrix basis) : basis_(std::move(basis)) {
  if (basis_.rows() == 0 || !basis_.is_square())
    throw Error(ErrorCode::InvalidLattice, "basis must be a nonempty square matrix");
  if (basis_.determinant() == 0) throw Error(ErrorCode::InvalidLattice, "basis is singular");
}

RationalVector Lattice::point(const std::vector<long>& coords) const {
  RationalVector c(coords.size());
  for (std::size_t i = 0; i < coords.size(); ++i) c[i] = coords[i];
  return basis_ * c;
}

RationalVector Lattice::coordinates(const RationalVector& v) const { return basis_.inverse() * v; }

bool Lattice::contains(const RationalVector& v) const {
  for (const auto& c : coordinates(v))
    if (!is_integer(c)) return false;
  return true;
}

bool Lattice::same_point_set(const Lattice& other) const {
  if (dim() != other.dim()) return false;
  return is_unimodular(basis_.inverse() * other.basis_);
}

Lattice dual(const Lattice& lattice) {
  RationalMatrix inv;
  try {
    inv = lattice.basis().transpose().inverse();
  } catch (const Error&) {
    throw Error(ErrorCode::InvalidLattice, "singular basis has no dual");
  }
  return Lattice(std::move(inv));
}

namespace {

struct LdlFactor {
  std::vector<Rational> diag;             // D_i
  std::vector<std::vector<Rational>> mu;  // mu[j][i] = L_ji for j > i
};

LdlFactor ldl(const RationalMatrix& gram) {
  const std::size_t d = gram.rows();
  LdlFactor f{std::vector<Rational>(d), std::vector<std::vector<Rational>>(d, std::vector<Rational>(d))};
  for (std::size_t i = 0; i < d; ++i) {
    Rational di = gram(i, i);
    for (std::size_t k = 0; k < i; ++k) di -= f.mu[i][k] * f.mu[i][k] * f.diag[k];
    if (di <= 0) throw Error(ErrorCode::InvalidLattice, "Gram matrix is not positive definite");
    f.diag[i] = di;
    for (std::size_t j = i + 1; j < d; ++j) {
      Rational s = gram(j, i);
      for (std::size_t k = 0; k < i; ++k) s -= f.mu[j][k] * f.mu[i][k] * f.diag[k];
      f.mu[j][i] = s / di;
    }
  }
  return f;
}

long to_long_checked(const Integer& z) {
  if (!z.fits_slong_p()) throw Error(ErrorCode::EnumerationOverflow, "coordinate exceeds 64-bit range");
  return z.get_si();
}

// Integer interval {x : D (x - c)^2 <= rem}, possibly empty (lo > hi).
std::pair<long, long> coordinate_range(const Rational& d, const Rational& c, const Rational& rem) {
  auto fits = [&](long x) {
    Rational y = Rational(x) - c;
    return d * y * y <= rem;
  };
  const double s = std::sqrt(std::max(0.0, Rational(rem / d).get_d()));
  const double cd = c.get_d();
  long lo = to_long_checked(Integer(std::ceil(cd - s)));
  long hi = to_long_checked(Integer(std::floor(cd + s)));
  // Exact correction of the double estimate.
  while (fits(lo - 1)) --lo;
  while (lo <= hi && !fits(lo)) ++lo;
  while (fits(hi + 1)) ++hi;
  while (hi >= lo && !fits(hi)) --hi;
  return {lo, hi};
}

}  // namespace

ShortVectorList enumerate_short_vectors(const Lattice& lattice, const Rational& radius_sq,
                                        const EnumerationLimits& limits) {
  if (radius_sq < 0) throw Error(ErrorCode::InvalidInput, "radius_sq must be nonnegative");
  const std::size_t d = lattice.dim();
  const LdlFactor f = ldl(lattice.gram());
  ShortVectorList out{radius_sq, {}};
  std::vector<long> x(d, 0);

  std::function<void(std::size_t, const Rational&)> recurse = [&](std::size_t level, const Rational& used) {
    Rational center = 0;
    for (std::size_t j = level + 1; j < d; ++j) center -= f.mu[j][level] * x[j];
    const Rational rem = radius_sq - used;
    auto [lo, hi] = coordinate_range(f.diag[level], center, rem);
    for (long v = lo; v <= hi; ++v) {
      x[level] = v;
      Rational y = Rational(v) - center;
      Rational now = used + f.diag[level] * y * y;
      if (level == 0) {
        if (std::any_of(x.begin(), x.end(), [](long c) { return c != 0; })) {
          if (out.vectors.size() >= limits.max_count)
            throw Error(ErrorCode::EnumerationOverflow,
                        "more than " + std::to_string(limits.max_count) + " vectors below radius");
          out.vectors.push_back({x, now});
        }
      } else {
        recurse(level - 1, now);
      }
    }
    x[level] = 0;
  };
  recurse(d - 1, Rational(0));

  std::sort(out.vectors.begin(), out.vectors.end(), [](const ShortVector& a, const ShortVector& b) {
    if (a.norm_sq != b.norm_sq) return a.norm_sq < b.norm_sq;
    return a.coords < b.coords;
  });
  return out;
}

namespace {

// Squared distance from fractional coordinates u to the integer lattice under the
// Gram form, by Fincke-Pohst around a real center.
class NearestPointSolver {
 public:
  explicit NearestPointSolver(const RationalMatrix& gram) : d_(gram.rows()), g_(d_ * d_), diag_(d_), mu_(d_ * d_) {
    for (std::size_t i = 0; i < d_; ++i)
      for (std::size_t j = 0; j < d_; ++j) g_[i * d_ + j] = gram(i, j).get_d();
    for (std::size_t i = 0; i < d_; ++i) {
      double di = g_[i * d_ + i];
      for (std::size_t k = 0; k < i; ++k) di -= mu_[i * d_ + k] * mu_[i * d_ + k] * diag_[k];
      diag_[i] = di;
      for (std::size_t j = i + 1; j < d_; ++j) {
        double s = g_[j * d_ + i];
        for (std::size_t k = 0; k < i; ++k) s -= mu_[j * d_ + k] * mu_[i * d_ + k] * diag_[k];
        mu_[j * d_ + i] = s / di;
      }
    }
  }

  double form(const std::vector<double>& y) const {
    double s = 0;
    for (std::size_t i = 0; i < d_; ++i)
      for (std::size_t j = 0; j < d_; ++j) s += y[i] * g_[i * d_ + j] * y[j];
    return s;
  }

  double distance_sq(const std::vector<double>& u) const {
    std::vector<double> y(d_);
    for (std::size_t i = 0; i < d_; ++i) y[i] = std::nearbyint(u[i]) - u[i];
    best_ = form(y) * (1 + 1e-12) + 1e-300;
    x_.assign(d_, 0.0);
    search(d_ - 1, 0.0, u);
    return best_;
  }

 private:
  void search(std::size_t level, double used, const std::vector<double>& u) const {
    // coordinate y_i = x_i - u_i; center for x_i
    double shift = 0;
    for (std::size_t j = level + 1; j < d_; ++j) shift += mu_[j * d_ + level] * (x_[j] - u[j]);
    const double center = u[level] - shift;
    const double rem = best_ - used;
    if (rem < 0) return;
    const double s = std::sqrt(rem / diag_[level]);
    const long lo = static_cast<long>(std::ceil(center - s));
    const long hi = static_cast<long>(std::floor(center + s));
    for (long v = lo; v <= hi; ++v) {
      x_[level] = static_cast<double>(v);
      const double y = static_cast<double>(v) - center;
      const double now = used + diag_[level] * y * y;
      if (now > best_) continue;
      if (level == 0) {
        best_ = now;
      } else {
        search(level - 1, now, u);
      }
    }
  }

  std::size_t d_;
  std::vector<double> g_;
  std::vector<double> diag_;
  std::vector<double> mu_;
  mutable std::vector<double> x_;
  mutable double best_ = 0;
};

bool orthogonal_columns(const RationalMatrix& b) {
  const std::size_t d = b.cols();
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i + 1; j < d; ++j)
      if (dot(b.column(i), b.column(j)) != 0) return false;
  return true;
}

}  // namespace

double covering_radius(const Lattice& lattice, double tolerance) {
  const std::size_t d = lattice.dim();
  if (d > 4) throw Error(ErrorCode::Unsupported, "covering radius supported for d <= 4");
  if (!(tolerance > 0)) throw Error(ErrorCode::InvalidInput, "tolerance must be positive");
  const RationalMatrix& b = lattice.basis();
  if (orthogonal_columns(b)) {
    Rational s = 0;
    for (std::size_t j = 0; j < d; ++j) s += dot(b.column(j), b.column(j));
    return 0.5 * std::sqrt(s.get_d());
  }

  // Branch and bound over the unit cube of fractional coordinates; the distance
  // function is 1-Lipschitz, so f(center) + (max corner offset) bounds a box.
  const NearestPointSolver solver(lattice.gram());
  std::vector<double> bd(d * d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) bd[i * d + j] = b(i, j).get_d();
  auto reach = [&](const std::vector<double>& half) {
    double best = 0;
    for (unsigned mask = 0; mask < (1u << d); ++mask) {
      double s = 0;
      for (std::size_t i = 0; i < d; ++i) {
        double v = 0;
        for (std::size_t j = 0; j < d; ++j) v += bd[i * d + j] * ((mask >> j) & 1 ? half[j] : -half[j]);
        s += v * v;
      }
      best = std::max(best, s);
    }
    return std::sqrt(best);
  };

  struct Box {
    double upper;
    std::vector<double> center;
    std::vector<double> half;
    bool operator<(const Box& o) const { return upper < o.upper; }
  };
  std::priority_queue<Box> queue;
  double best = 0;
  auto push = [&](std::vector<double> center, std::vector<double> half) {
    const double f = std::sqrt(solver.distance_sq(center));
    best = std::max(best, f);
    queue.push({f + reach(half), std::move(center), std::move(half)});
  };
  const int initial = 4;
  std::vector<std::size_t> idx(d, 0);
  for (;;) {
    std::vector<double> c(d), h(d, 0.5 / initial);
    for (std::size_t i = 0; i < d; ++i) c[i] = (static_cast<double>(idx[i]) + 0.5) / initial;
    push(c, h);
    std::size_t k = 0;
    while (k < d && ++idx[k] == static_cast<std::size_t>(initial)) idx[k++] = 0;
    if (k == d) break;
  }
  const std::size_t budget = 20'000'000;
  std::size_t processed = 0;
  while (!queue.empty()) {
    Box box = queue.top();
    if (box.upper - best <= tolerance) return best;
    queue.pop();
    if (++processed > budget) throw Error(ErrorCode::BudgetExhausted, "covering radius refinement budget exceeded");
    std::size_t split = 0;
    double widest = -1;
    for (std::size_t j = 0; j < d; ++j) {
      double len = 0;
      for (std::size_t i = 0; i < d; ++i) len += bd[i * d + j] * bd[i * d + j];
      len = std::sqrt(len) * box.half[j];
      if (len > widest) {
        widest = len;
        split = j;
      }
    }
    std::vector<double> h = box.half;
    h[split] *= 0.5;
    for (int side : {-1, 1}) {
      std::vector<double> c = box.center;
      c[split] += side * h[split];
      push(c, h);
    }
  }
  return best;
}

std::vector<Lattice> sublattices_of_index(const Lattice& lattice, long k, const EnumerationLimits& limits) {
  if (k < 1) throw Error(ErrorCode::InvalidInput, "index must be positive");
  const std::size_t d = lattice.dim();
  std::vector<RationalMatrix> forms;
  std::vector<long> diag(d);

  std::function<void(std::size_t, long)> choose_diag = [&](std::size_t i, long remaining) {
    if (i + 1 == d) {
      diag[i] = remaining;
      // Off-diagonal entries H[r][c], c < r, range over [0, H[r][r]).
      std::vector<std::pair<std::size_t, std::size_t>> slots;
      for (std::size_t r = 0; r < d; ++r)
        for (std::size_t c = 0; c < r; ++c) slots.emplace_back(r, c);
      RationalMatrix h(d, d);
      for (std::size_t r = 0; r < d; ++r) h(r, r) = diag[r];
      std::function<void(std::size_t)> fill = [&](std::size_t s) {
        if (s == slots.size()) {
          if (forms.size() >= limits.max_count)
            throw Error(ErrorCode::EnumerationOverflow, "too many sublattices of index " + std::to_string(k));
          forms.push_back(h);
          return;
        }
        auto [r, c] = slots[s];
        for (long v = 0; v < diag[r]; ++v) {
          h(r, c) = v;
          fill(s + 1);
        }
        h(r, c) = 0;
      };
      fill(0);
      return;
    }
    for (long a = 1; a <= remaining; ++a) {
      if (remaining % a != 0) continue;
      diag[i] = a;
      choose_diag(i + 1, remaining / a);
    }
  };
  choose_diag(0, k);

  auto flat_less = [d](const RationalMatrix& a, const RationalMatrix& b) {
    for (std::size_t r = 0; r < d; ++r)
      for (std::size_t c = 0; c < d; ++c)
        if (a(r, c) != b(r, c)) return a(r, c) < b(r, c);
    return false;
  };
  std::sort(forms.begin(), forms.end(), flat_less);
  std::vector<Lattice> out;
  out.reserve(forms.size());
  for (const auto& h : forms) out.emplace_back(lattice.basis() * h);
  return out;
}

std::vector<Lattice> nested_chain(const Lattice& lattice, const std::vector<long>& degrees) {
  if (degrees.empty()) throw Error(ErrorCode::InvalidInput, "nested chain needs at least one degree");
  std::vector<Lattice> chain{lattice};
  for (long deg : degrees) {
    if (deg < 2) throw Error(ErrorCode::InvalidInput, "chain degrees must be >= 2");
    auto subs = sublattices_of_index(chain.back(), deg);
    chain.push_back(subs.front());
  }
  return chain;
}

}  // namespace yamflat

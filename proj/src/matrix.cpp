#include "yamflat/matrix.hpp"

#include "yamflat/errors.hpp"

namespace yamflat {

RationalMatrix::RationalMatrix(std::initializer_list<std::initializer_list<Rational>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw Error(ErrorCode::InvalidInput, "ragged matrix literal");
    for (const auto& v : r) data_.push_back(v);
  }
}

RationalMatrix RationalMatrix::identity(std::size_t n) {
  RationalMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

RationalMatrix RationalMatrix::diagonal(const RationalVector& diag) {
  RationalMatrix m(diag.size(), diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  return m;
}

RationalMatrix RationalMatrix::from_columns(const std::vector<RationalVector>& columns) {
  if (columns.empty()) return {};
  RationalMatrix m(columns.front().size(), columns.size());
  for (std::size_t j = 0; j < columns.size(); ++j) {
    if (columns[j].size() != m.rows_) throw Error(ErrorCode::InvalidInput, "columns of unequal length");
    for (std::size_t i = 0; i < m.rows_; ++i) m(i, j) = columns[j][i];
  }
  return m;
}

RationalVector RationalMatrix::column(std::size_t j) const {
  RationalVector v(rows_);
  for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
  return v;
}

RationalVector RationalMatrix::row(std::size_t i) const {
  return RationalVector(data_.begin() + static_cast<long>(i * cols_),
                        data_.begin() + static_cast<long>((i + 1) * cols_));
}

RationalMatrix RationalMatrix::transpose() const {
  RationalMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

std::vector<std::size_t> row_reduce(RationalMatrix& m) {
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    std::size_t p = r;
    while (p < m.rows() && m(p, c) == 0) ++p;
    if (p == m.rows()) continue;
    if (p != r)
      for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(p, j), m(r, j));
    Rational inv = 1 / m(r, c);
    for (std::size_t j = c; j < m.cols(); ++j) m(r, j) *= inv;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == r || m(i, c) == 0) continue;
      Rational f = m(i, c);
      for (std::size_t j = c; j < m.cols(); ++j) m(i, j) -= f * m(r, j);
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

Rational RationalMatrix::determinant() const {
  if (!is_square()) throw Error(ErrorCode::InvalidInput, "determinant of a non-square matrix");
  RationalMatrix m = *this;
  Rational det = 1;
  const std::size_t n = rows_;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && m(p, c) == 0) ++p;
    if (p == n) return 0;
    if (p != c) {
      for (std::size_t j = 0; j < n; ++j) std::swap(m(p, j), m(c, j));
      det = -det;
    }
    det *= m(c, c);
    for (std::size_t i = c + 1; i < n; ++i) {
      if (m(i, c) == 0) continue;
      Rational f = m(i, c) / m(c, c);
      for (std::size_t j = c; j < n; ++j) m(i, j) -= f * m(c, j);
    }
  }
  return det;
}

std::size_t RationalMatrix::rank() const {
  RationalMatrix m = *this;
  return row_reduce(m).size();
}

RationalMatrix RationalMatrix::inverse() const {
  if (!is_square()) throw Error(ErrorCode::InvalidInput, "inverse of a non-square matrix");
  const std::size_t n = rows_;
  RationalMatrix aug(n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = (*this)(i, j);
    aug(i, n + i) = 1;
  }
  auto pivots = row_reduce(aug);
  if (pivots.size() < n || pivots[n - 1] != n - 1) throw Error(ErrorCode::InvalidInput, "singular matrix");
  RationalMatrix inv(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inv(i, j) = aug(i, n + j);
  return inv;
}

std::vector<RationalVector> RationalMatrix::kernel() const {
  RationalMatrix m = *this;
  auto pivots = row_reduce(m);
  std::vector<bool> is_pivot(cols_, false);
  for (auto p : pivots) is_pivot[p] = true;
  std::vector<RationalVector> basis;
  for (std::size_t free = 0; free < cols_; ++free) {
    if (is_pivot[free]) continue;
    RationalVector v(cols_);
    v[free] = 1;
    for (std::size_t k = 0; k < pivots.size(); ++k) v[pivots[k]] = -m(k, free);
    basis.push_back(std::move(v));
  }
  return basis;
}

std::optional<RationalVector> RationalMatrix::solve(const RationalVector& b) const {
  if (b.size() != rows_) throw Error(ErrorCode::InvalidInput, "solve: dimension mismatch");
  RationalMatrix aug(rows_, cols_ + 1);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) aug(i, j) = (*this)(i, j);
    aug(i, cols_) = b[i];
  }
  auto pivots = row_reduce(aug);
  if (!pivots.empty() && pivots.back() == cols_) return std::nullopt;
  RationalVector x(cols_);
  for (std::size_t k = 0; k < pivots.size(); ++k) x[pivots[k]] = aug(k, cols_);
  return x;
}

bool RationalMatrix::is_integral() const {
  for (const auto& v : data_)
    if (!is_integer(v)) return false;
  return true;
}

bool RationalMatrix::is_identity() const {
  if (!is_square()) return false;
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j)
      if ((*this)(i, j) != (i == j ? 1 : 0)) return false;
  return true;
}

bool RationalMatrix::is_symmetric() const { return is_square() && *this == transpose(); }

bool RationalMatrix::is_zero() const {
  for (const auto& v : data_)
    if (v != 0) return false;
  return true;
}

RationalMatrix operator*(const RationalMatrix& a, const RationalMatrix& b) {
  if (a.cols_ != b.rows_) throw Error(ErrorCode::InvalidInput, "matrix product: dimension mismatch");
  RationalMatrix c(a.rows_, b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i)
    for (std::size_t k = 0; k < a.cols_; ++k) {
      const Rational& aik = a(i, k);
      if (aik == 0) continue;
      for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

RationalVector operator*(const RationalMatrix& a, const RationalVector& x) {
  if (a.cols_ != x.size()) throw Error(ErrorCode::InvalidInput, "matrix-vector product: dimension mismatch");
  RationalVector y(a.rows_);
  for (std::size_t i = 0; i < a.rows_; ++i)
    for (std::size_t j = 0; j < a.cols_; ++j) y[i] += a(i, j) * x[j];
  return y;
}

RationalMatrix operator+(const RationalMatrix& a, const RationalMatrix& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw Error(ErrorCode::InvalidInput, "matrix sum: dimension mismatch");
  RationalMatrix c = a;
  for (std::size_t i = 0; i < c.data_.size(); ++i) c.data_[i] += b.data_[i];
  return c;
}

RationalMatrix operator-(const RationalMatrix& a, const RationalMatrix& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw Error(ErrorCode::InvalidInput, "matrix difference: dimension mismatch");
  RationalMatrix c = a;
  for (std::size_t i = 0; i < c.data_.size(); ++i) c.data_[i] -= b.data_[i];
  return c;
}

RationalMatrix operator*(const Rational& s, const RationalMatrix& a) {
  RationalMatrix c = a;
  for (auto& v : c.data_) v *= s;
  return c;
}

bool operator==(const RationalMatrix& a, const RationalMatrix& b) {
  return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
}

std::string RationalMatrix::to_string() const {
  std::string out = "[";
  for (std::size_t i = 0; i < rows_; ++i) {
    out += i ? ", [" : "[";
    for (std::size_t j = 0; j < cols_; ++j) {
      if (j) out += ", ";
      out += yamflat::to_string((*this)(i, j));
    }
    out += "]";
  }
  return out + "]";
}

RationalVector operator+(const RationalVector& a, const RationalVector& b) {
  if (a.size() != b.size()) throw Error(ErrorCode::InvalidInput, "vector sum: dimension mismatch");
  RationalVector c = a;
  for (std::size_t i = 0; i < c.size(); ++i) c[i] += b[i];
  return c;
}

RationalVector operator-(const RationalVector& a, const RationalVector& b) {
  if (a.size() != b.size()) throw Error(ErrorCode::InvalidInput, "vector difference: dimension mismatch");
  RationalVector c = a;
  for (std::size_t i = 0; i < c.size(); ++i) c[i] -= b[i];
  return c;
}

RationalVector operator*(const Rational& s, const RationalVector& v) {
  RationalVector c = v;
  for (auto& x : c) x *= s;
  return c;
}

std::optional<std::vector<Integer>> solve_in_column_lattice(const RationalMatrix& integral, const RationalVector& b) {
  if (!integral.is_integral()) throw Error(ErrorCode::InvalidInput, "column lattice needs an integral matrix");
  const std::size_t d = integral.rows();
  const std::size_t m = integral.cols();
  if (b.size() != d) throw Error(ErrorCode::InvalidInput, "column lattice: dimension mismatch");
  std::vector<std::vector<Integer>> h(d, std::vector<Integer>(m));
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < m; ++j) h[i][j] = integral(i, j).get_num();
  std::vector<std::vector<Integer>> u(m, std::vector<Integer>(m));
  for (std::size_t j = 0; j < m; ++j) u[j][j] = 1;

  // Unimodular column operations to a lower echelon form H = A U.
  auto combine = [&](std::size_t c, std::size_t j, const Integer& s, const Integer& t, const Integer& p, const Integer& q) {
    // col_c <- s col_c + t col_j ; col_j <- p col_c + q col_j (using old values)
    for (std::size_t i = 0; i < d; ++i) {
      Integer x = h[i][c], y = h[i][j];
      h[i][c] = s * x + t * y;
      h[i][j] = p * x + q * y;
    }
    for (std::size_t i = 0; i < m; ++i) {
      Integer x = u[i][c], y = u[i][j];
      u[i][c] = s * x + t * y;
      u[i][j] = p * x + q * y;
    }
  };
  std::vector<std::pair<std::size_t, std::size_t>> pivots;  // (row, col)
  std::size_t c = 0;
  for (std::size_t r = 0; r < d && c < m; ++r) {
    for (std::size_t j = c + 1; j < m; ++j) {
      if (h[r][j] == 0) continue;
      Integer a = h[r][c], bb = h[r][j], g, s, t;
      mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), a.get_mpz_t(), bb.get_mpz_t());
      Integer p = -bb / g, q = a / g;
      combine(c, j, s, t, p, q);
    }
    if (h[r][c] != 0) {
      pivots.emplace_back(r, c);
      ++c;
    }
  }
  std::vector<Integer> y(m);
  std::size_t next = 0;
  for (std::size_t r = 0; r < d; ++r) {
    Rational residual = b[r];
    for (std::size_t k = 0; k < next; ++k) residual -= Rational(h[r][pivots[k].second] * y[pivots[k].second]);
    if (next < pivots.size() && pivots[next].first == r) {
      Rational coeff = residual / Rational(h[r][pivots[next].second]);
      if (!is_integer(coeff)) return std::nullopt;
      y[pivots[next].second] = coeff.get_num();
      ++next;
    } else if (residual != 0) {
      return std::nullopt;
    }
  }
  std::vector<Integer> x(m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) x[i] += u[i][j] * y[j];
  return x;
}

bool is_unimodular(const RationalMatrix& a) {
  if (!a.is_square() || !a.is_integral()) return false;
  Rational det = a.determinant();
  return det == 1 || det == -1;
}

}  // namespace yamflat

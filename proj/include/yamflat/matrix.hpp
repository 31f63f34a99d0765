#pragma once

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <string>
#include <vector>

#include "yamflat/rational.hpp"

namespace yamflat {

/// Dense row-major matrix over the rationals. Dimensions here are small (d <= 4
/// for lattices, a few dozen for eigenspace work), so no attempt at blocking.
class RationalMatrix {
 public:
  RationalMatrix() = default;
  RationalMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  RationalMatrix(std::initializer_list<std::initializer_list<Rational>> rows);

  static RationalMatrix identity(std::size_t n);
  static RationalMatrix diagonal(const RationalVector& diag);
  static RationalMatrix from_columns(const std::vector<RationalVector>& columns);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }

  Rational& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Rational& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  RationalVector column(std::size_t j) const;
  RationalVector row(std::size_t i) const;

  RationalMatrix transpose() const;
  Rational determinant() const;
  std::size_t rank() const;
  /// Throws InvalidInput when singular.
  RationalMatrix inverse() const;
  /// Basis of {x : A x = 0}.
  std::vector<RationalVector> kernel() const;
  /// Some solution of A x = b, if one exists.
  std::optional<RationalVector> solve(const RationalVector& b) const;

  bool is_integral() const;
  bool is_identity() const;
  bool is_symmetric() const;
  bool is_zero() const;

  friend RationalMatrix operator*(const RationalMatrix& a, const RationalMatrix& b);
  friend RationalVector operator*(const RationalMatrix& a, const RationalVector& x);
  friend RationalMatrix operator+(const RationalMatrix& a, const RationalMatrix& b);
  friend RationalMatrix operator-(const RationalMatrix& a, const RationalMatrix& b);
  friend RationalMatrix operator*(const Rational& s, const RationalMatrix& a);
  friend bool operator==(const RationalMatrix& a, const RationalMatrix& b);

  std::string to_string() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> data_;
};

RationalVector operator+(const RationalVector& a, const RationalVector& b);
RationalVector operator-(const RationalVector& a, const RationalVector& b);
RationalVector operator*(const Rational& s, const RationalVector& v);

/// Reduced row echelon form in place; returns pivot columns.
std::vector<std::size_t> row_reduce(RationalMatrix& m);

/// Membership test for the Z-span of the columns of an integral matrix.
/// On success returns integer coefficients x with A x = b.
std::optional<std::vector<Integer>> solve_in_column_lattice(const RationalMatrix& integral, const RationalVector& b);

/// True iff A is integral with determinant +-1.
bool is_unimodular(const RationalMatrix& a);

}  // namespace yamflat

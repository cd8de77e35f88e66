#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace ccn {

using Vector = std::vector<double>;

/// Dense row-major matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix identity(std::size_t n);
  static Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows);
  /// Adopts `data` (row-major); throws ValidationError on a size mismatch.
  static Matrix from_data(std::size_t rows, std::size_t cols, Vector data);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  std::span<double> data() noexcept { return data_; }
  std::span<const double> data() const noexcept { return data_; }
  const Vector& storage() const noexcept { return data_; }

  Vector col(std::size_t c) const;
  Matrix transpose() const;

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  Vector data_;
};

Matrix operator*(const Matrix& a, const Matrix& b);
Matrix operator+(const Matrix& a, const Matrix& b);
Matrix operator-(const Matrix& a, const Matrix& b);
Matrix operator*(double s, const Matrix& a);

Vector matvec(const Matrix& a, std::span<const double> x);
double dot(std::span<const double> a, std::span<const double> b);
double max_abs(const Matrix& a);
double frobenius(const Matrix& a);
bool is_symmetric(const Matrix& a, double tol);

Matrix select_rows(const Matrix& a, std::span<const std::size_t> rows);
Matrix select_cols(const Matrix& a, std::span<const std::size_t> cols);
/// [a | b]; both must have the same number of rows.
Matrix hstack(const Matrix& a, const Matrix& b);
/// Rows of `b` appended below `a`.
Matrix vstack(const Matrix& a, const Matrix& b);

}  // namespace ccn

// Copyright 2026 The ONG Authors
// SPDX-License-Identifier: Apache-2.0

// Dense row-major double-precision matrices and the handful of operations the
// attention and guidance code needs. Every reduction runs sequentially in index
// order, so results are bit-reproducible across runs and threads.

#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace ong {

/// Default threshold below which a squared row norm counts as zero.
inline constexpr double kZeroNormEps = 1e-12;

class Matrix {
 public:
  Matrix() = default;
  /// Zero-filled rows x cols matrix.
  Matrix(std::size_t rows, std::size_t cols);
  /// Takes ownership of row-major `entries`; throws DimensionError unless
  /// entries.size() == rows * cols.
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> entries);

  static Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows);
  static Matrix identity(std::size_t n);
  static Matrix filled(std::size_t rows, std::size_t cols, double value);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }

  double operator()(std::size_t r, std::size_t c) const { return entries_[r * cols_ + c]; }
  double& operator()(std::size_t r, std::size_t c) { return entries_[r * cols_ + c]; }

  std::span<const double> row(std::size_t r) const { return {entries_.data() + r * cols_, cols_}; }
  std::span<double> row(std::size_t r) { return {entries_.data() + r * cols_, cols_}; }

  std::span<const double> data() const noexcept { return entries_; }
  std::span<double> data() noexcept { return entries_; }

  bool all_finite() const noexcept;
  bool same_shape(const Matrix& other) const noexcept {
    return rows_ == other.rows_ && cols_ == other.cols_;
  }
  /// "RxC", used in error messages.
  std::string shape_string() const;

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> entries_;
};

/// Per-head matrices of identical shape.
class HeadStack {
 public:
  HeadStack() = default;
  /// Throws DimensionError if `heads` is empty or shapes differ.
  explicit HeadStack(std::vector<Matrix> heads);

  std::size_t heads() const noexcept { return heads_.size(); }
  std::size_t rows() const noexcept { return heads_.empty() ? 0 : heads_.front().rows(); }
  std::size_t cols() const noexcept { return heads_.empty() ? 0 : heads_.front().cols(); }

  const Matrix& operator[](std::size_t h) const { return heads_[h]; }
  auto begin() const noexcept { return heads_.begin(); }
  auto end() const noexcept { return heads_.end(); }

  friend bool operator==(const HeadStack&, const HeadStack&) = default;

 private:
  std::vector<Matrix> heads_;
};

double dot(std::span<const double> a, std::span<const double> b);
double squared_norm(std::span<const double> a);

Matrix matmul(const Matrix& a, const Matrix& b);
/// a * b^T without materialising the transpose.
Matrix matmul_transposed(const Matrix& a, const Matrix& b);
Matrix transpose(const Matrix& m);
Matrix add(const Matrix& a, const Matrix& b);
Matrix subtract(const Matrix& a, const Matrix& b);
Matrix scale(const Matrix& m, double factor);

/// Rows [begin, begin + count).
Matrix slice_rows(const Matrix& m, std::size_t begin, std::size_t count);
/// Columns [begin, begin + count).
Matrix slice_cols(const Matrix& m, std::size_t begin, std::size_t count);
/// Stacks `top` above `bottom`; column counts must agree.
Matrix vstack(const Matrix& top, const Matrix& bottom);
/// Concatenates along columns; row counts must agree.
Matrix hstack(std::span<const Matrix> parts);

/// Row-wise softmax of `scale * m`, max-subtracted. Throws InputError on
/// non-finite input or a non-positive scale.
Matrix softmax_rows(const Matrix& m, double scale);

/// Row i of the result is the projection of a_i onto b_i. Rows whose squared
/// norm in `b` is <= eps project to zero.
Matrix row_project(const Matrix& a, const Matrix& b, double eps = kZeroNormEps);

/// a - row_project(a, b, eps): the component of each a_i orthogonal to b_i.
Matrix row_reject(const Matrix& a, const Matrix& b, double eps = kZeroNormEps);

}  // namespace ong

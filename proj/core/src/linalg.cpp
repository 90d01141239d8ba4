// Copyright 2026 The ONG Authors
// SPDX-License-Identifier: Apache-2.0

#include "ong/linalg.hpp"

#include <algorithm>
#include <cmath>

#include "ong/errors.hpp"

namespace ong {
namespace {

[[noreturn]] void shape_mismatch(const char* op, const Matrix& a, const Matrix& b) {
  throw DimensionError(std::string(op) + ": incompatible shapes " + a.shape_string() + " and " +
                       b.shape_string());
}

void require_same_shape(const char* op, const Matrix& a, const Matrix& b) {
  if (!a.same_shape(b)) shape_mismatch(op, a, b);
}

}  // namespace

Matrix::Matrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), entries_(rows * cols, 0.0) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
  if (entries_.size() != rows * cols) {
    throw DimensionError("matrix " + std::to_string(rows) + "x" + std::to_string(cols) +
                         " needs " + std::to_string(rows * cols) + " entries, got " +
                         std::to_string(entries_.size()));
  }
}

Matrix Matrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  const std::size_t n = rows.size();
  const std::size_t m = n == 0 ? 0 : rows.begin()->size();
  std::vector<double> entries;
  entries.reserve(n * m);
  for (const auto& r : rows) {
    if (r.size() != m) throw DimensionError("from_rows: ragged row list");
    entries.insert(entries.end(), r.begin(), r.end());
  }
  return Matrix(n, m, std::move(entries));
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::filled(std::size_t rows, std::size_t cols, double value) {
  return Matrix(rows, cols, std::vector<double>(rows * cols, value));
}

bool Matrix::all_finite() const noexcept {
  return std::all_of(entries_.begin(), entries_.end(), [](double x) { return std::isfinite(x); });
}

std::string Matrix::shape_string() const {
  return std::to_string(rows_) + "x" + std::to_string(cols_);
}

HeadStack::HeadStack(std::vector<Matrix> heads) : heads_(std::move(heads)) {
  if (heads_.empty()) throw DimensionError("head stack needs at least one head");
  for (std::size_t h = 1; h < heads_.size(); ++h) {
    if (!heads_[h].same_shape(heads_.front())) {
      throw DimensionError("head " + std::to_string(h) + " has shape " + heads_[h].shape_string() +
                           ", expected " + heads_.front().shape_string());
    }
  }
}

double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw DimensionError("dot: lengths " + std::to_string(a.size()) + " and " +
                         std::to_string(b.size()));
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += a[i] * b[i];
  return sum;
}

double squared_norm(std::span<const double> a) { return dot(a, a); }

Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) shape_mismatch("matmul", a, b);
  Matrix out(a.rows(), b.cols());
  // i-k-j order: each out(i, j) still accumulates over k in increasing order.
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto out_row = out.row(i);
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      const auto b_row = b.row(k);
      for (std::size_t j = 0; j < b.cols(); ++j) out_row[j] += aik * b_row[j];
    }
  }
  return out;
}

Matrix matmul_transposed(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.cols()) shape_mismatch("matmul_transposed", a, b);
  Matrix out(a.rows(), b.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < b.rows(); ++j) out(i, j) = dot(a.row(i), b.row(j));
  }
  return out;
}

Matrix transpose(const Matrix& m) {
  Matrix out(m.cols(), m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) out(j, i) = m(i, j);
  }
  return out;
}

Matrix add(const Matrix& a, const Matrix& b) {
  require_same_shape("add", a, b);
  Matrix out = a;
  auto o = out.data();
  auto d = b.data();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] += d[i];
  return out;
}

Matrix subtract(const Matrix& a, const Matrix& b) {
  require_same_shape("subtract", a, b);
  Matrix out = a;
  auto o = out.data();
  auto d = b.data();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] -= d[i];
  return out;
}

Matrix scale(const Matrix& m, double factor) {
  Matrix out = m;
  for (double& x : out.data()) x *= factor;
  return out;
}

Matrix slice_rows(const Matrix& m, std::size_t begin, std::size_t count) {
  if (begin + count > m.rows()) {
    throw DimensionError("slice_rows: [" + std::to_string(begin) + ", " +
                         std::to_string(begin + count) + ") out of range for " + m.shape_string());
  }
  const auto first = m.data().begin() + static_cast<std::ptrdiff_t>(begin * m.cols());
  return Matrix(count, m.cols(),
                std::vector<double>(first, first + static_cast<std::ptrdiff_t>(count * m.cols())));
}

Matrix slice_cols(const Matrix& m, std::size_t begin, std::size_t count) {
  if (begin + count > m.cols()) {
    throw DimensionError("slice_cols: [" + std::to_string(begin) + ", " +
                         std::to_string(begin + count) + ") out of range for " + m.shape_string());
  }
  Matrix out(m.rows(), count);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < count; ++j) out(i, j) = m(i, begin + j);
  }
  return out;
}

Matrix vstack(const Matrix& top, const Matrix& bottom) {
  if (top.cols() != bottom.cols()) shape_mismatch("vstack", top, bottom);
  std::vector<double> entries(top.data().begin(), top.data().end());
  entries.insert(entries.end(), bottom.data().begin(), bottom.data().end());
  return Matrix(top.rows() + bottom.rows(), top.cols(), std::move(entries));
}

Matrix hstack(std::span<const Matrix> parts) {
  if (parts.empty()) return {};
  std::size_t cols = 0;
  for (const auto& p : parts) {
    if (p.rows() != parts.front().rows()) shape_mismatch("hstack", parts.front(), p);
    cols += p.cols();
  }
  Matrix out(parts.front().rows(), cols);
  for (std::size_t i = 0; i < out.rows(); ++i) {
    auto dst = out.row(i).begin();
    for (const auto& p : parts) dst = std::copy(p.row(i).begin(), p.row(i).end(), dst);
  }
  return out;
}

Matrix softmax_rows(const Matrix& m, double scale) {
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw InputError("softmax_rows: scale must be positive and finite");
  }
  if (!m.all_finite()) throw InputError("softmax_rows: non-finite input");
  Matrix out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    const auto in = m.row(i);
    auto dst = out.row(i);
    if (in.empty()) continue;
    double peak = in[0] * scale;
    for (double x : in) peak = std::max(peak, x * scale);
    double total = 0.0;
    for (std::size_t j = 0; j < in.size(); ++j) {
      dst[j] = std::exp(in[j] * scale - peak);
      total += dst[j];
    }
    for (double& x : dst) x /= total;
  }
  return out;
}

Matrix row_project(const Matrix& a, const Matrix& b, double eps) {
  require_same_shape("row_project", a, b);
  if (!(eps >= 0.0)) throw InputError("row_project: eps must be >= 0");
  Matrix out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const double bb = squared_norm(b.row(i));
    if (bb <= eps) continue;
    const double coeff = dot(a.row(i), b.row(i)) / bb;
    const auto src = b.row(i);
    auto dst = out.row(i);
    for (std::size_t j = 0; j < dst.size(); ++j) dst[j] = coeff * src[j];
  }
  return out;
}

Matrix row_reject(const Matrix& a, const Matrix& b, double eps) {
  return subtract(a, row_project(a, b, eps));
}

}  // namespace ong

#include "specnorm/matrix.hpp"

#include "specnorm/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace specnorm {

namespace {

void require_shape(std::size_t rows, std::size_t cols) {
  if (rows == 0 || cols == 0)
    throw DimensionError("matrix must have at least one row and one column");
}

void require_same_shape(const DenseMatrix &a, const DenseMatrix &b,
                        const char *op) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw DimensionError(std::string(op) + ": shape mismatch " +
                         std::to_string(a.rows()) + "x" +
                         std::to_string(a.cols()) + " vs " +
                         std::to_string(b.rows()) + "x" +
                         std::to_string(b.cols()));
}

} // namespace

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols) {
  require_shape(rows, cols);
}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols,
                         std::vector<Complex> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  require_shape(rows, cols);
  if (data_.size() != rows * cols)
    throw DimensionError("entry count " + std::to_string(data_.size()) +
                         " does not match " + std::to_string(rows) + "x" +
                         std::to_string(cols));
  require_finite(*this, "DenseMatrix");
}

DenseMatrix::DenseMatrix(
    std::initializer_list<std::initializer_list<Complex>> rows)
    : rows_(rows.size()), cols_(rows.size() ? rows.begin()->size() : 0) {
  require_shape(rows_, cols_);
  data_.reserve(rows_ * cols_);
  for (const auto &row : rows) {
    if (row.size() != cols_)
      throw DimensionError("ragged initializer list");
    data_.insert(data_.end(), row.begin(), row.end());
  }
  require_finite(*this, "DenseMatrix");
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    m(i, i) = 1.0;
  return m;
}

DenseMatrix DenseMatrix::zeros(std::size_t rows, std::size_t cols) {
  return DenseMatrix(rows, cols);
}

DenseMatrix DenseMatrix::diagonal(std::span<const Complex> diag) {
  DenseMatrix m(diag.size(), diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i)
    m(i, i) = diag[i];
  require_finite(m, "DenseMatrix::diagonal");
  return m;
}

DenseMatrix DenseMatrix::from_columns(const std::vector<CVector> &columns) {
  if (columns.empty())
    throw DimensionError("from_columns: no columns");
  DenseMatrix m(columns.front().size(), columns.size());
  for (std::size_t j = 0; j < columns.size(); ++j)
    m.set_column(j, columns[j]);
  require_finite(m, "DenseMatrix::from_columns");
  return m;
}

CVector DenseMatrix::column(std::size_t j) const {
  CVector c(rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    c[i] = (*this)(i, j);
  return c;
}

void DenseMatrix::set_column(std::size_t j, std::span<const Complex> v) {
  if (v.size() != rows_)
    throw DimensionError("set_column: length mismatch");
  for (std::size_t i = 0; i < rows_; ++i)
    (*this)(i, j) = v[i];
}

DenseMatrix DenseMatrix::adjoint() const {
  DenseMatrix r(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j)
      r(j, i) = std::conj((*this)(i, j));
  return r;
}

bool DenseMatrix::all_finite() const noexcept {
  return std::all_of(data_.begin(), data_.end(), [](const Complex &c) {
    return std::isfinite(c.real()) && std::isfinite(c.imag());
  });
}

DenseMatrix operator*(const DenseMatrix &a, const DenseMatrix &b) {
  if (a.cols() != b.rows())
    throw DimensionError("matrix product: inner dimensions differ");
  DenseMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Complex aik = a(i, k);
      if (aik == Complex{})
        continue;
      for (std::size_t j = 0; j < b.cols(); ++j)
        c(i, j) += aik * b(k, j);
    }
  return c;
}

DenseMatrix operator+(const DenseMatrix &a, const DenseMatrix &b) {
  require_same_shape(a, b, "operator+");
  DenseMatrix c = a;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      c(i, j) += b(i, j);
  return c;
}

DenseMatrix operator-(const DenseMatrix &a, const DenseMatrix &b) {
  require_same_shape(a, b, "operator-");
  DenseMatrix c = a;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      c(i, j) -= b(i, j);
  return c;
}

DenseMatrix operator*(Complex alpha, const DenseMatrix &a) {
  DenseMatrix c = a;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      c(i, j) *= alpha;
  return c;
}

CVector operator*(const DenseMatrix &a, std::span<const Complex> x) {
  if (a.cols() != x.size())
    throw DimensionError("matrix-vector product: length mismatch");
  CVector y(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    Complex s{};
    for (std::size_t j = 0; j < a.cols(); ++j)
      s += a(i, j) * x[j];
    y[i] = s;
  }
  return y;
}

DenseMatrix shifted(const DenseMatrix &a, Complex z) {
  require_square(a, "shifted");
  DenseMatrix m = Complex(-1.0) * a;
  for (std::size_t i = 0; i < a.rows(); ++i)
    m(i, i) += z;
  return m;
}

double frobenius_norm(const DenseMatrix &a) {
  // Scaled accumulation keeps huge or tiny entries from over/underflowing.
  double scale = 0.0;
  double ssq = 1.0;
  for (const Complex &c : a.entries())
    for (double part : {c.real(), c.imag()}) {
      const double v = std::abs(part);
      if (v == 0.0)
        continue;
      if (scale < v) {
        ssq = 1.0 + ssq * (scale / v) * (scale / v);
        scale = v;
      } else {
        ssq += (v / scale) * (v / scale);
      }
    }
  return scale * std::sqrt(ssq);
}

double off_diagonal_norm(const DenseMatrix &a) {
  DenseMatrix off = a;
  for (std::size_t i = 0; i < std::min(a.rows(), a.cols()); ++i)
    off(i, i) = 0.0;
  return frobenius_norm(off);
}

double unitarity_defect(const DenseMatrix &x) {
  return frobenius_norm(x.adjoint() * x - DenseMatrix::identity(x.cols()));
}

double tolerance_scale(const DenseMatrix &a) {
  return std::max(1.0, frobenius_norm(a));
}

Complex dot(std::span<const Complex> x, std::span<const Complex> y) {
  if (x.size() != y.size())
    throw DimensionError("dot: length mismatch");
  Complex s{};
  for (std::size_t i = 0; i < x.size(); ++i)
    s += std::conj(x[i]) * y[i];
  return s;
}

double norm2(std::span<const Complex> x) {
  double scale = 0.0;
  for (const Complex &c : x)
    scale = std::max(scale, std::abs(c));
  if (scale == 0.0)
    return 0.0;
  double ssq = 0.0;
  for (const Complex &c : x)
    ssq += std::norm(c / scale);
  return scale * std::sqrt(ssq);
}

void scale_in_place(std::span<Complex> x, Complex alpha) {
  for (Complex &c : x)
    c *= alpha;
}

Complex normalize_phase(std::span<Complex> x, double threshold) {
  const double nrm = norm2(x);
  if (nrm == 0.0)
    return 1.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double mag = std::abs(x[i]);
    if (mag > threshold * nrm) {
      const Complex factor = std::conj(x[i]) / mag;
      scale_in_place(x, factor);
      x[i] = Complex(std::abs(x[i]), 0.0);
      return factor;
    }
  }
  return 1.0;
}

void require_finite(const DenseMatrix &a, const char *where) {
  if (!a.all_finite())
    throw NonFiniteError(std::string(where) + ": non-finite matrix entry");
}

void require_square(const DenseMatrix &a, const char *where) {
  if (!a.is_square())
    throw DimensionError(std::string(where) + ": matrix must be square, got " +
                         std::to_string(a.rows()) + "x" +
                         std::to_string(a.cols()));
}

} // namespace specnorm

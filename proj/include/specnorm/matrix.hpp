#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace specnorm {

using Complex = std::complex<double>;
using CVector = std::vector<Complex>;

/// Dense row-major complex matrix. Construction rejects empty shapes and
/// non-finite entries; element access through operator() is unchecked.
class DenseMatrix {
public:
  DenseMatrix(std::size_t rows, std::size_t cols);
  DenseMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries);
  DenseMatrix(std::initializer_list<std::initializer_list<Complex>> rows);

  static DenseMatrix identity(std::size_t n);
  static DenseMatrix zeros(std::size_t rows, std::size_t cols);
  static DenseMatrix diagonal(std::span<const Complex> diag);
  /// Matrix whose columns are the given vectors (all of equal length).
  static DenseMatrix from_columns(const std::vector<CVector> &columns);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool is_square() const noexcept { return rows_ == cols_; }

  Complex &operator()(std::size_t i, std::size_t j) noexcept {
    return data_[i * cols_ + j];
  }
  const Complex &operator()(std::size_t i, std::size_t j) const noexcept {
    return data_[i * cols_ + j];
  }

  std::span<const Complex> entries() const noexcept { return data_; }

  CVector column(std::size_t j) const;
  void set_column(std::size_t j, std::span<const Complex> v);

  DenseMatrix adjoint() const;
  bool all_finite() const noexcept;

  friend bool operator==(const DenseMatrix &, const DenseMatrix &) = default;

private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<Complex> data_;
};

DenseMatrix operator*(const DenseMatrix &a, const DenseMatrix &b);
DenseMatrix operator+(const DenseMatrix &a, const DenseMatrix &b);
DenseMatrix operator-(const DenseMatrix &a, const DenseMatrix &b);
DenseMatrix operator*(Complex alpha, const DenseMatrix &a);
CVector operator*(const DenseMatrix &a, std::span<const Complex> x);

/// zI - A, formed explicitly.
DenseMatrix shifted(const DenseMatrix &a, Complex z);

double frobenius_norm(const DenseMatrix &a);
/// Frobenius norm of the strictly off-diagonal part.
double off_diagonal_norm(const DenseMatrix &a);
/// ||X* X - I||_F.
double unitarity_defect(const DenseMatrix &x);
/// max(1, ||A||_F), the scale every relative tolerance is measured against.
double tolerance_scale(const DenseMatrix &a);

// Vector helpers. `dot` conjugates its first argument.
Complex dot(std::span<const Complex> x, std::span<const Complex> y);
double norm2(std::span<const Complex> x);
void scale_in_place(std::span<Complex> x, Complex alpha);
/// Rotates x so its first component with modulus above `threshold` times
/// ||x|| is real and nonnegative. Returns the applied factor.
Complex normalize_phase(std::span<Complex> x, double threshold = 1e-12);

/// Throws NonFiniteError if any entry is NaN or Inf.
void require_finite(const DenseMatrix &a, const char *where);
/// Throws DimensionError if `a` is not square.
void require_square(const DenseMatrix &a, const char *where);

} // namespace specnorm

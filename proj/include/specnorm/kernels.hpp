#pragma once

#include "specnorm/matrix.hpp"

#include <cstddef>
#include <vector>

namespace specnorm {

/// Iteration limits and acceptance thresholds for the dense kernels.
/// Relative thresholds are multiplied by max(1, ||A||_F).
struct KernelConfig {
  double unitary_tol = 1e-10;
  double recon_tol = 1e-10;
  /// An eigenvalue request must lie this close (relative) to the spectrum.
  double eig_tol = 1e-6;
  /// Required relative residual ||Ax - lambda x|| of inverse iteration.
  double resid_tol = 1e-10;
  /// Shifted QR budget is max_qr_iters_per_dim * n sweeps in total.
  std::size_t max_qr_iters_per_dim = 30;
  std::size_t max_jacobi_sweeps = 30;
  std::size_t max_inv_iters = 50;
};

struct QrResult {
  DenseMatrix Q; ///< rows x rows, unitary
  DenseMatrix R; ///< rows x cols, upper triangular with real nonnegative diagonal
};

struct SchurResult {
  DenseMatrix Q; ///< unitary
  DenseMatrix T; ///< upper triangular, A = Q T Q*
  std::vector<Complex> eigenvalues; ///< diag(T), in the order produced
};

struct SvdResult {
  DenseMatrix U; ///< rows x rows
  std::vector<double> sigma; ///< min(rows, cols) values, non-increasing
  DenseMatrix V; ///< cols x cols
};

/// Householder QR of a tall or square matrix. R's diagonal is made real
/// nonnegative, so the factorization is unique for full column rank.
QrResult householder_qr(const DenseMatrix &a);

/// Unitary reduction to upper Hessenberg form: A = Q H Q*.
struct HessenbergResult {
  DenseMatrix Q;
  DenseMatrix H;
};
HessenbergResult hessenberg(const DenseMatrix &a);

/// Complex Schur form via Hessenberg reduction and single-shift QR with
/// Wilkinson shifts. Throws ConvergenceError once the sweep budget is spent.
SchurResult schur(const DenseMatrix &a, const KernelConfig &cfg = {});

/// Eigenvalues only; same algorithm as schur().
std::vector<Complex> eigenvalues(const DenseMatrix &a,
                                 const KernelConfig &cfg = {});

/// One-sided (Hestenes) Jacobi SVD. Each right singular vector is phase
/// normalized; the matching left vector receives the same phase.
SvdResult svd(const DenseMatrix &a, const KernelConfig &cfg = {});

double smallest_singular_value(const DenseMatrix &a,
                               const KernelConfig &cfg = {});

/// n * eps * sigma_1: the default numerical-rank threshold.
double default_rank_tol(const DenseMatrix &a, const KernelConfig &cfg = {});

/// Number of singular values strictly greater than `tol`.
std::size_t rank_with_tol(const DenseMatrix &a, double tol,
                          const KernelConfig &cfg = {});

/// Unit eigenvector for an eigenvalue by inverse iteration.
CVector eigenvector(const DenseMatrix &a, Complex lambda,
                    const KernelConfig &cfg = {});

/// Modified Gram-Schmidt. `rel_tol` scales the dependence threshold, which
/// is rel_tol * max input norm; the default is length * eps.
std::vector<CVector> gram_schmidt_orthonormalize(const std::vector<CVector> &vectors,
                                                 double rel_tol = -1.0);

} // namespace specnorm

#pragma once

#include "specnorm/kernels.hpp"
#include "specnorm/matrix.hpp"

#include <cstddef>
#include <vector>

namespace specnorm {

struct EigenCluster {
  Complex lambda; ///< multiplicity-weighted mean of the members
  std::size_t multiplicity;
};

/// Eigenvalues with multiplicity plus their distinct (clustered) values.
struct Spectrum {
  std::vector<Complex> all_eigenvalues;
  std::vector<EigenCluster> clusters;
  double source_scale = 0.0; ///< ||A||_F of the matrix the spectrum came from
  double cluster_tol = 0.0;
};

struct WeylReport {
  double sigma_1;
  double sigma_n;
  double abs_lambda_max;
  double abs_lambda_min;
  bool upper_ok; ///< sigma_1 >= |lambda|_max - tol
  bool lower_ok; ///< |lambda|_min >= sigma_n - tol
  double tol;
};

/// Default cluster tolerance, 1e-7 * max(1, ||A||_F).
double default_cluster_tol(const DenseMatrix &a);

/// Single-linkage clustering at `cluster_tol`. Clusters are ordered by the
/// lowest raw index they contain.
Spectrum cluster_spectrum(const std::vector<Complex> &raw, double scale,
                          double cluster_tol);

/// schur() followed by cluster_spectrum(). A negative `cluster_tol`
/// selects default_cluster_tol(a).
Spectrum compute_spectrum(const DenseMatrix &a, double cluster_tol = -1.0,
                          const KernelConfig &cfg = {});

struct Distance {
  double d;
  std::size_t nearest_index;
};

/// Distance from z to the nearest cluster representative; ties go to the
/// lowest index.
Distance dist_to_spectrum(Complex z, const Spectrum &s);

/// sigma_min(zI - A) with zI - A formed explicitly.
double shifted_smallest_singular(const DenseMatrix &a, Complex z,
                                 const KernelConfig &cfg = {});

/// d(z) - s(z). Never below -1e-9 * max(1, ||A||_F) for a correct kernel.
double gap(const DenseMatrix &a, Complex z, const Spectrum &s,
           const KernelConfig &cfg = {});

/// Default one-sided tolerance for gap(): 1e-9 * max(1, ||A||_F).
double default_gap_tol(const DenseMatrix &a);

/// Checks sigma_1 >= |lambda_1| and |lambda_n| >= sigma_n. A negative
/// `tol` selects 1e-9 * max(1, ||M||_F).
WeylReport weyl_bounds_check(const DenseMatrix &m, double tol = -1.0,
                             const KernelConfig &cfg = {});

} // namespace specnorm

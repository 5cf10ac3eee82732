#pragma once

#include "specnorm/kernels.hpp"
#include "specnorm/matrix.hpp"

#include <cstddef>
#include <cstdint>
#include <vector>

namespace specnorm {

struct ScanRegion {
  double re_min;
  double re_max;
  double im_min;
  double im_max;
};

enum class SampleFlag { Ok, AtEigenvalue, Failed };

const char *to_string(SampleFlag f) noexcept;

struct ScanSample {
  Complex z;
  double s;     ///< sigma_min(zI - A); NaN when the kernel failed
  double d;     ///< dist(z, spectrum)
  double ratio; ///< s / d; 1 at eigenvalues, NaN on failure
  SampleFlag flag;
};

struct GridScan {
  ScanRegion region;
  std::size_t nx;
  std::size_t ny;
  std::vector<ScanSample> samples; ///< row-major: imaginary part outer
  std::size_t failures = 0;
};

/// Uniform grid including both endpoints of each interval; a single node
/// along an axis sits at the lower bound. Nodes with d <= n * eps * scale
/// are flagged as at-eigenvalue.
GridScan scan_grid(const DenseMatrix &a, const ScanRegion &region,
                   std::size_t nx, std::size_t ny, double cluster_tol = -1.0,
                   const KernelConfig &cfg = {});

/// Default region: the square of half-width 2 max(1, ||A||_F) around the
/// eigenvalue centroid.
ScanRegion default_scan_region(const DenseMatrix &a, const KernelConfig &cfg = {});

struct CorollaryReport {
  Complex center;
  double radius;
  std::size_t samples;
  double max_abs_gap;
  Complex worst_z;
};

/// Samples z uniformly in the disc of radius 2 ||A||_F (1 if A = 0)
/// around the eigenvalue centroid and records the largest |d(z) - s(z)|.
CorollaryReport check_corollary(const DenseMatrix &a, std::size_t samples,
                                std::uint64_t seed, double cluster_tol = -1.0,
                                const KernelConfig &cfg = {});

} // namespace specnorm

#include "specnorm/scan.hpp"

#include "specnorm/errors.hpp"
#include "specnorm/spectral_distance.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

namespace specnorm {

namespace {

double node(double lo, double hi, std::size_t i, std::size_t count) {
  if (count == 1)
    return lo;
  if (i + 1 == count)
    return hi;
  return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
}

Complex centroid(const std::vector<Complex> &eig) {
  Complex c{};
  for (const Complex &e : eig)
    c += e;
  return c / static_cast<double>(eig.size());
}

} // namespace

const char *to_string(SampleFlag f) noexcept {
  switch (f) {
  case SampleFlag::Ok:
    return "ok";
  case SampleFlag::AtEigenvalue:
    return "eig";
  case SampleFlag::Failed:
    return "fail";
  }
  return "unknown";
}

GridScan scan_grid(const DenseMatrix &a, const ScanRegion &region,
                   std::size_t nx, std::size_t ny, double cluster_tol,
                   const KernelConfig &cfg) {
  require_square(a, "scan_grid");
  if (nx == 0 || ny == 0)
    throw DimensionError("scan_grid: grid needs at least one node per axis");
  if (!(region.re_min <= region.re_max) || !(region.im_min <= region.im_max))
    throw Error("scan_grid: empty region");

  const Spectrum spec = compute_spectrum(a, cluster_tol, cfg);
  const double flag_tol = static_cast<double>(a.rows()) *
                          std::numeric_limits<double>::epsilon() *
                          tolerance_scale(a);

  GridScan out{region, nx, ny, {}, 0};
  out.samples.reserve(nx * ny);
  for (std::size_t j = 0; j < ny; ++j)
    for (std::size_t i = 0; i < nx; ++i) {
      ScanSample smp;
      smp.z = Complex(node(region.re_min, region.re_max, i, nx),
                      node(region.im_min, region.im_max, j, ny));
      smp.d = dist_to_spectrum(smp.z, spec).d;
      try {
        smp.s = shifted_smallest_singular(a, smp.z, cfg);
        if (smp.d <= flag_tol) {
          smp.ratio = 1.0;
          smp.flag = SampleFlag::AtEigenvalue;
        } else {
          smp.ratio = smp.s / smp.d;
          smp.flag = SampleFlag::Ok;
        }
      } catch (const ConvergenceError &) {
        smp.s = std::numeric_limits<double>::quiet_NaN();
        smp.ratio = std::numeric_limits<double>::quiet_NaN();
        smp.flag = SampleFlag::Failed;
        ++out.failures;
      }
      out.samples.push_back(smp);
    }
  return out;
}

ScanRegion default_scan_region(const DenseMatrix &a, const KernelConfig &cfg) {
  const Complex c = centroid(eigenvalues(a, cfg));
  const double h = 2.0 * tolerance_scale(a);
  return {c.real() - h, c.real() + h, c.imag() - h, c.imag() + h};
}

CorollaryReport check_corollary(const DenseMatrix &a, std::size_t samples,
                                std::uint64_t seed, double cluster_tol,
                                const KernelConfig &cfg) {
  require_square(a, "check_corollary");
  const Spectrum spec = compute_spectrum(a, cluster_tol, cfg);
  CorollaryReport r{};
  r.center = centroid(spec.all_eigenvalues);
  r.radius = 2.0 * frobenius_norm(a);
  if (r.radius == 0.0)
    r.radius = 1.0;
  r.samples = samples;

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::size_t k = 0; k < samples; ++k) {
    const double rho = r.radius * std::sqrt(unit(rng));
    const double theta = 2.0 * std::numbers::pi * unit(rng);
    const Complex z = r.center + std::polar(rho, theta);
    const double g = std::abs(gap(a, z, spec, cfg));
    if (k == 0 || g > r.max_abs_gap) {
      r.max_abs_gap = g;
      r.worst_z = z;
    }
  }
  return r;
}

} // namespace specnorm

#include "specnorm/spectral_distance.hpp"

#include "specnorm/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace specnorm {

namespace {

struct DisjointSets {
  std::vector<std::size_t> parent;

  explicit DisjointSets(std::size_t n) : parent(n) {
    std::iota(parent.begin(), parent.end(), std::size_t{0});
  }

  std::size_t find(std::size_t x) {
    while (parent[x] != x)
      x = parent[x] = parent[parent[x]];
    return x;
  }

  // Smaller root wins so cluster order follows the lowest raw index.
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b)
      parent[std::max(a, b)] = std::min(a, b);
  }
};

std::vector<EigenCluster> collect(const std::vector<Complex> &raw,
                                  DisjointSets &sets) {
  std::vector<std::size_t> slot(raw.size(), raw.size());
  std::vector<EigenCluster> out;
  std::vector<Complex> sums;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const std::size_t root = sets.find(i);
    if (slot[root] == raw.size()) {
      slot[root] = out.size();
      out.push_back({Complex{}, 0});
      sums.emplace_back();
    }
    sums[slot[root]] += raw[i];
    ++out[slot[root]].multiplicity;
  }
  for (std::size_t k = 0; k < out.size(); ++k)
    out[k].lambda = sums[k] / static_cast<double>(out[k].multiplicity);
  return out;
}

} // namespace

double default_cluster_tol(const DenseMatrix &a) {
  return 1e-7 * tolerance_scale(a);
}

Spectrum cluster_spectrum(const std::vector<Complex> &raw, double scale,
                          double cluster_tol) {
  if (raw.empty())
    throw DimensionError("cluster_spectrum: empty eigenvalue list");
  const std::size_t n = raw.size();
  DisjointSets sets(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (std::abs(raw[i] - raw[j]) <= cluster_tol)
        sets.unite(i, j);

  std::vector<EigenCluster> clusters = collect(raw, sets);
  // Means of two single-linkage clusters can still land within the
  // tolerance of each other; merge until representatives are separated.
  // Cluster k corresponds to the k-th smallest root, since roots are the
  // lowest member index.
  for (bool merged = true; merged;) {
    merged = false;
    for (std::size_t a = 0; a < clusters.size() && !merged; ++a)
      for (std::size_t b = a + 1; b < clusters.size() && !merged; ++b)
        if (std::abs(clusters[a].lambda - clusters[b].lambda) <= cluster_tol) {
          std::vector<std::size_t> roots;
          for (std::size_t i = 0; i < n; ++i)
            if (sets.find(i) == i)
              roots.push_back(i);
          sets.unite(roots[a], roots[b]);
          clusters = collect(raw, sets);
          merged = true;
        }
  }

  Spectrum s;
  s.all_eigenvalues = raw;
  s.clusters = std::move(clusters);
  s.source_scale = scale;
  s.cluster_tol = cluster_tol;
  return s;
}

Spectrum compute_spectrum(const DenseMatrix &a, double cluster_tol,
                          const KernelConfig &cfg) {
  require_square(a, "compute_spectrum");
  if (cluster_tol < 0.0)
    cluster_tol = default_cluster_tol(a);
  return cluster_spectrum(eigenvalues(a, cfg), frobenius_norm(a), cluster_tol);
}

Distance dist_to_spectrum(Complex z, const Spectrum &s) {
  Distance best{std::numeric_limits<double>::infinity(), 0};
  for (std::size_t k = 0; k < s.clusters.size(); ++k) {
    const double d = std::abs(z - s.clusters[k].lambda);
    if (d < best.d)
      best = {d, k};
  }
  return best;
}

double shifted_smallest_singular(const DenseMatrix &a, Complex z,
                                 const KernelConfig &cfg) {
  require_square(a, "shifted_smallest_singular");
  return smallest_singular_value(shifted(a, z), cfg);
}

double gap(const DenseMatrix &a, Complex z, const Spectrum &s,
           const KernelConfig &cfg) {
  return dist_to_spectrum(z, s).d - shifted_smallest_singular(a, z, cfg);
}

double default_gap_tol(const DenseMatrix &a) {
  return 1e-9 * tolerance_scale(a);
}

WeylReport weyl_bounds_check(const DenseMatrix &m, double tol,
                             const KernelConfig &cfg) {
  require_square(m, "weyl_bounds_check");
  if (tol < 0.0)
    tol = 1e-9 * tolerance_scale(m);
  const std::vector<Complex> eig = eigenvalues(m, cfg);
  const std::vector<double> sig = svd(m, cfg).sigma;

  WeylReport r{};
  r.sigma_1 = sig.front();
  r.sigma_n = sig.back();
  r.abs_lambda_max = 0.0;
  r.abs_lambda_min = std::numeric_limits<double>::infinity();
  for (const Complex &e : eig) {
    r.abs_lambda_max = std::max(r.abs_lambda_max, std::abs(e));
    r.abs_lambda_min = std::min(r.abs_lambda_min, std::abs(e));
  }
  r.tol = tol;
  r.upper_ok = r.sigma_1 >= r.abs_lambda_max - tol;
  r.lower_ok = r.abs_lambda_min >= r.sigma_n - tol;
  return r;
}

} // namespace specnorm

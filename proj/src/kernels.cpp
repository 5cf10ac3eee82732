#include "specnorm/kernels.hpp"

#include "specnorm/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace specnorm {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

/// Householder vector v with (I - 2 v v* / v*v) x = alpha e_1.
/// Returns false when the tail of x is already zero (no reflection needed).
bool make_reflector(std::span<const Complex> x, CVector &v) {
  double tail = 0.0;
  for (std::size_t i = 1; i < x.size(); ++i)
    tail = std::max(tail, std::abs(x[i]));
  if (tail == 0.0)
    return false;
  const double nrm = norm2(x);
  const Complex phase =
      std::abs(x[0]) == 0.0 ? Complex(1.0) : x[0] / std::abs(x[0]);
  v.assign(x.begin(), x.end());
  v[0] += phase * nrm;
  return true;
}

// Rows [r0, rows) of `m`, columns [c0, cols): m <- (I - 2vv*/v*v) m.
void reflect_rows(DenseMatrix &m, const CVector &v, std::size_t r0,
                  std::size_t c0) {
  double vv = 0.0;
  for (const Complex &c : v)
    vv += std::norm(c);
  for (std::size_t j = c0; j < m.cols(); ++j) {
    Complex w{};
    for (std::size_t i = 0; i < v.size(); ++i)
      w += std::conj(v[i]) * m(r0 + i, j);
    w *= 2.0 / vv;
    for (std::size_t i = 0; i < v.size(); ++i)
      m(r0 + i, j) -= w * v[i];
  }
}

// Columns [c0, c0 + len(v)) of `m`, all rows: m <- m (I - 2vv*/v*v).
void reflect_cols(DenseMatrix &m, const CVector &v, std::size_t c0) {
  double vv = 0.0;
  for (const Complex &c : v)
    vv += std::norm(c);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Complex w{};
    for (std::size_t k = 0; k < v.size(); ++k)
      w += m(i, c0 + k) * v[k];
    w *= 2.0 / vv;
    for (std::size_t k = 0; k < v.size(); ++k)
      m(i, c0 + k) -= w * std::conj(v[k]);
  }
}

struct Givens {
  double c;
  Complex s;
};

// [c s; -conj(s) c] [x; y] = [r; 0]
Givens make_givens(Complex x, Complex y) {
  if (y == Complex{})
    return {1.0, Complex{}};
  if (x == Complex{})
    return {0.0, std::conj(y) / std::abs(y)};
  const double ax = std::abs(x);
  const double nrm = std::hypot(ax, std::abs(y));
  return {ax / nrm, (x / ax) * std::conj(y) / nrm};
}

Complex wilkinson_shift(const DenseMatrix &h, std::size_t hi) {
  const Complex a = h(hi - 1, hi - 1);
  const Complex b = h(hi - 1, hi);
  const Complex c = h(hi, hi - 1);
  const Complex d = h(hi, hi);
  const Complex mid = 0.5 * (a + d);
  const Complex half = 0.5 * (a - d);
  const Complex disc = std::sqrt(half * half + b * c);
  const Complex r1 = mid + disc;
  const Complex r2 = mid - disc;
  return std::abs(r1 - d) <= std::abs(r2 - d) ? r1 : r2;
}

// One explicit shifted QR step on the active window [lo, hi]; updates the
// parts of H outside the window and accumulates into Q so that A = Q H Q*
// keeps holding for the full matrix.
void qr_step(DenseMatrix &h, DenseMatrix &q, std::size_t lo, std::size_t hi,
             Complex mu) {
  const std::size_t n = h.rows();
  for (std::size_t k = lo; k <= hi; ++k)
    h(k, k) -= mu;

  std::vector<Givens> rots;
  rots.reserve(hi - lo);
  for (std::size_t k = lo; k < hi; ++k) {
    const Givens g = make_givens(h(k, k), h(k + 1, k));
    for (std::size_t j = k; j < n; ++j) {
      const Complex t1 = h(k, j);
      const Complex t2 = h(k + 1, j);
      h(k, j) = g.c * t1 + g.s * t2;
      h(k + 1, j) = -std::conj(g.s) * t1 + g.c * t2;
    }
    h(k + 1, k) = 0.0;
    rots.push_back(g);
  }

  for (std::size_t k = lo; k < hi; ++k) {
    const Givens &g = rots[k - lo];
    const std::size_t last = std::min(k + 1, hi);
    for (std::size_t i = 0; i <= last; ++i) {
      const Complex t1 = h(i, k);
      const Complex t2 = h(i, k + 1);
      h(i, k) = g.c * t1 + std::conj(g.s) * t2;
      h(i, k + 1) = -g.s * t1 + g.c * t2;
    }
    for (std::size_t i = 0; i < n; ++i) {
      const Complex t1 = q(i, k);
      const Complex t2 = q(i, k + 1);
      q(i, k) = g.c * t1 + std::conj(g.s) * t2;
      q(i, k + 1) = -g.s * t1 + g.c * t2;
    }
  }

  for (std::size_t k = lo; k <= hi; ++k)
    h(k, k) += mu;
}

// LU with partial pivoting, in place. Pivots smaller than `floor` are
// raised to it. Returns the smallest pivot modulus before flooring.
double lu_factor(DenseMatrix &m, std::vector<std::size_t> &perm,
                 double floor = 0.0) {
  const std::size_t n = m.rows();
  perm.resize(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  double min_pivot = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(m(i, k)) > std::abs(m(p, k)))
        p = i;
    if (p != k) {
      for (std::size_t j = 0; j < n; ++j)
        std::swap(m(k, j), m(p, j));
      std::swap(perm[k], perm[p]);
    }
    min_pivot = std::min(min_pivot, std::abs(m(k, k)));
    if (std::abs(m(k, k)) < floor)
      m(k, k) = floor;
    const Complex piv = m(k, k);
    if (piv == Complex{})
      continue;
    for (std::size_t i = k + 1; i < n; ++i) {
      const Complex f = m(i, k) / piv;
      m(i, k) = f;
      for (std::size_t j = k + 1; j < n; ++j)
        m(i, j) -= f * m(k, j);
    }
  }
  return min_pivot;
}

CVector lu_solve(const DenseMatrix &lu, const std::vector<std::size_t> &perm,
                 std::span<const Complex> b) {
  const std::size_t n = lu.rows();
  CVector x(n);
  for (std::size_t i = 0; i < n; ++i) {
    Complex s = b[perm[i]];
    for (std::size_t j = 0; j < i; ++j)
      s -= lu(i, j) * x[j];
    x[i] = s;
  }
  for (std::size_t i = n; i-- > 0;) {
    Complex s = x[i];
    for (std::size_t j = i + 1; j < n; ++j)
      s -= lu(i, j) * x[j];
    x[i] = s / lu(i, i);
  }
  return x;
}

// Two modified Gram-Schmidt passes of w against `basis`; returns ||w||.
double project_out(CVector &w, const std::vector<CVector> &basis) {
  for (int pass = 0; pass < 2; ++pass)
    for (const CVector &q : basis) {
      const Complex c = dot(q, w);
      for (std::size_t i = 0; i < w.size(); ++i)
        w[i] -= c * q[i];
    }
  return norm2(w);
}

struct TallSvd {
  std::vector<CVector> u; // rows-long, one per column of A
  std::vector<double> sigma;
  std::vector<CVector> v; // cols-long
};

// Hestenes one-sided Jacobi on the columns of a (rows >= cols).
TallSvd jacobi_tall(const DenseMatrix &a, const KernelConfig &cfg) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  std::vector<CVector> w(n), v(n, CVector(n));
  for (std::size_t j = 0; j < n; ++j) {
    w[j] = a.column(j);
    v[j][j] = 1.0;
  }

  const double tol = static_cast<double>(m) * kEps;
  // Columns below this squared norm are rounding noise of a null direction.
  double negligible = 0.0;
  for (const CVector &col : w)
    for (const Complex &x : col)
      negligible += std::norm(x);
  negligible *= tol * tol;
  bool converged = n == 1;
  double max_off = 0.0;
  std::size_t sweep = 0;
  for (; sweep < cfg.max_jacobi_sweeps && !converged; ++sweep) {
    bool rotated = false;
    max_off = 0.0;
    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) {
        double alpha = 0.0, beta = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
          alpha += std::norm(w[p][i]);
          beta += std::norm(w[q][i]);
        }
        if (alpha <= negligible || beta <= negligible)
          continue;
        const Complex gamma = dot(w[p], w[q]);
        const double g = std::abs(gamma);
        const double off = g / std::sqrt(alpha * beta);
        max_off = std::max(max_off, off);
        if (off <= tol)
          continue;
        rotated = true;

        const double zeta = (beta - alpha) / (2.0 * g);
        const double t = (zeta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        const Complex ph = gamma / g;
        auto rotate = [&](CVector &xp, CVector &xq) {
          for (std::size_t i = 0; i < xp.size(); ++i) {
            const Complex a_p = xp[i];
            const Complex a_q = std::conj(ph) * xq[i];
            xp[i] = c * a_p - s * a_q;
            xq[i] = ph * (s * a_p + c * a_q);
          }
        };
        rotate(w[p], w[q]);
        rotate(v[p], v[q]);
      }
    converged = !rotated;
  }
  if (!converged)
    throw ConvergenceError("svd: one-sided Jacobi did not converge after " +
                               std::to_string(sweep) +
                               " sweeps; off-diagonal residual " +
                               std::to_string(max_off),
                           sweep, max_off);

  std::vector<double> norms(n);
  for (std::size_t j = 0; j < n; ++j)
    norms[j] = norm2(w[j]);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return norms[x] > norms[y];
  });

  TallSvd out;
  out.sigma.reserve(n);
  for (std::size_t j : order) {
    out.sigma.push_back(norms[j]);
    out.v.push_back(v[j]);
  }

  // Left vectors: normalized columns, re-orthogonalized in order; columns
  // that vanish or fail re-orthogonalization are completed below.
  std::vector<CVector> basis;
  std::vector<bool> filled(m, false);
  out.u.assign(m, CVector{});
  for (std::size_t k = 0; k < n; ++k) {
    const double sig = out.sigma[k];
    if (sig <= std::numeric_limits<double>::min())
      continue;
    CVector u = w[order[k]];
    scale_in_place(u, 1.0 / sig);
    const double r = project_out(u, basis);
    if (r < 0.5)
      continue;
    scale_in_place(u, 1.0 / r);
    basis.push_back(u);
    out.u[k] = u;
    filled[k] = true;
  }
  for (std::size_t k = 0; k < m; ++k) {
    if (filled[k])
      continue;
    // Pick the coordinate vector with the largest residual.
    CVector best;
    double best_r = -1.0;
    for (std::size_t i = 0; i < m; ++i) {
      CVector e(m);
      e[i] = 1.0;
      const double r = project_out(e, basis);
      if (r > best_r + 1e-12) {
        best_r = r;
        best = std::move(e);
      }
    }
    scale_in_place(best, 1.0 / best_r);
    basis.push_back(best);
    out.u[k] = best;
    filled[k] = true;
  }
  return out;
}

} // namespace

QrResult householder_qr(const DenseMatrix &a) {
  require_finite(a, "householder_qr");
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  if (m < n)
    throw DimensionError("householder_qr: rows (" + std::to_string(m) +
                         ") < cols (" + std::to_string(n) + ")");
  DenseMatrix r = a;
  DenseMatrix q = DenseMatrix::identity(m);
  CVector x, v;
  for (std::size_t k = 0; k < n && k + 1 < m; ++k) {
    x.resize(m - k);
    for (std::size_t i = k; i < m; ++i)
      x[i - k] = r(i, k);
    if (!make_reflector(x, v))
      continue;
    reflect_rows(r, v, k, k);
    reflect_cols(q, v, k);
    for (std::size_t i = k + 1; i < m; ++i)
      r(i, k) = 0.0;
  }
  for (std::size_t k = 0; k < n; ++k) {
    const double mag = std::abs(r(k, k));
    if (mag == 0.0)
      continue;
    const Complex p = r(k, k) / mag;
    for (std::size_t j = k; j < n; ++j)
      r(k, j) *= std::conj(p);
    r(k, k) = mag;
    for (std::size_t i = 0; i < m; ++i)
      q(i, k) *= p;
  }
  return {std::move(q), std::move(r)};
}

HessenbergResult hessenberg(const DenseMatrix &a) {
  require_square(a, "hessenberg");
  require_finite(a, "hessenberg");
  const std::size_t n = a.rows();
  DenseMatrix h = a;
  DenseMatrix q = DenseMatrix::identity(n);
  CVector x, v;
  for (std::size_t k = 0; k + 2 < n; ++k) {
    x.resize(n - k - 1);
    for (std::size_t i = k + 1; i < n; ++i)
      x[i - k - 1] = h(i, k);
    if (!make_reflector(x, v))
      continue;
    reflect_rows(h, v, k + 1, 0);
    reflect_cols(h, v, k + 1);
    reflect_cols(q, v, k + 1);
    for (std::size_t i = k + 2; i < n; ++i)
      h(i, k) = 0.0;
  }
  return {std::move(q), std::move(h)};
}

SchurResult schur(const DenseMatrix &a, const KernelConfig &cfg) {
  auto [q, h] = hessenberg(a);
  const std::size_t n = h.rows();
  const double hnorm = frobenius_norm(h);
  const std::size_t budget = cfg.max_qr_iters_per_dim * n;

  std::size_t total = 0;
  std::size_t since_deflation = 0;
  std::size_t hi = n - 1;
  while (hi > 0) {
    std::size_t lo = hi;
    for (; lo > 0; --lo) {
      double tst = std::abs(h(lo - 1, lo - 1)) + std::abs(h(lo, lo));
      if (tst == 0.0)
        tst = hnorm;
      if (std::abs(h(lo, lo - 1)) <= kEps * tst) {
        h(lo, lo - 1) = 0.0;
        break;
      }
    }
    if (lo == hi) {
      --hi;
      since_deflation = 0;
      continue;
    }
    if (total >= budget)
      throw ConvergenceError("schur: shifted QR did not converge after " +
                                 std::to_string(total) + " iterations",
                             total, std::abs(h(hi, hi - 1)));
    ++total;
    ++since_deflation;
    Complex mu;
    if (since_deflation % 10 == 0)
      mu = h(hi, hi) + 0.75 * std::abs(h(hi, hi - 1)); // exceptional shift
    else
      mu = wilkinson_shift(h, hi);
    qr_step(h, q, lo, hi, mu);
  }

  for (std::size_t i = 1; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j)
      h(i, j) = 0.0;
  std::vector<Complex> eig(n);
  for (std::size_t i = 0; i < n; ++i)
    eig[i] = h(i, i);
  return {std::move(q), std::move(h), std::move(eig)};
}

std::vector<Complex> eigenvalues(const DenseMatrix &a, const KernelConfig &cfg) {
  return schur(a, cfg).eigenvalues;
}

SvdResult svd(const DenseMatrix &a, const KernelConfig &cfg) {
  require_finite(a, "svd");
  const bool wide = a.rows() < a.cols();
  TallSvd t = jacobi_tall(wide ? a.adjoint() : a, cfg);
  // For a wide input A* = U' S V'*, hence A = V' S U'*.
  std::vector<CVector> &left = wide ? t.v : t.u;
  std::vector<CVector> &right = wide ? t.u : t.v;
  const std::size_t k = t.sigma.size();

  for (std::size_t j = 0; j < right.size(); ++j) {
    const Complex f = normalize_phase(right[j]);
    if (j < k && t.sigma[j] > 0.0)
      scale_in_place(left[j], f);
  }
  for (std::size_t j = 0; j < left.size(); ++j)
    if (j >= k || t.sigma[j] == 0.0)
      normalize_phase(left[j]);

  return {DenseMatrix::from_columns(left), std::move(t.sigma),
          DenseMatrix::from_columns(right)};
}

double smallest_singular_value(const DenseMatrix &a, const KernelConfig &cfg) {
  require_square(a, "smallest_singular_value");
  return svd(a, cfg).sigma.back();
}

double default_rank_tol(const DenseMatrix &a, const KernelConfig &cfg) {
  const double n = static_cast<double>(std::max(a.rows(), a.cols()));
  return n * kEps * svd(a, cfg).sigma.front();
}

std::size_t rank_with_tol(const DenseMatrix &a, double tol,
                          const KernelConfig &cfg) {
  if (!(tol >= 0.0))
    throw Error("rank_with_tol: tolerance must be nonnegative");
  const auto sig = svd(a, cfg).sigma;
  return static_cast<std::size_t>(
      std::count_if(sig.begin(), sig.end(), [tol](double s) { return s > tol; }));
}

CVector eigenvector(const DenseMatrix &a, Complex lambda,
                    const KernelConfig &cfg) {
  require_square(a, "eigenvector");
  require_finite(a, "eigenvector");
  if (!std::isfinite(lambda.real()) || !std::isfinite(lambda.imag()))
    throw NonFiniteError("eigenvector: non-finite shift");
  const std::size_t n = a.rows();
  const double scale = tolerance_scale(a);

  double nearest = std::numeric_limits<double>::infinity();
  for (const Complex &e : eigenvalues(a, cfg))
    nearest = std::min(nearest, std::abs(e - lambda));
  if (nearest > cfg.eig_tol * scale)
    throw SpectrumError("eigenvector: shift is " + std::to_string(nearest) +
                        " away from the nearest eigenvalue");

  DenseMatrix lu = shifted(a, lambda);
  std::vector<std::size_t> perm;
  lu_factor(lu, perm, kEps * scale);

  CVector x(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i + 1);
    x[i] = Complex(1.0 + 0.5 * std::cos(2.399963 * t), 0.5 * std::sin(1.3 * t));
  }
  scale_in_place(x, 1.0 / norm2(x));

  double resid = std::numeric_limits<double>::infinity();
  for (std::size_t it = 1; it <= cfg.max_inv_iters; ++it) {
    x = lu_solve(lu, perm, x);
    const double nrm = norm2(x);
    if (!(nrm > 0.0) || !std::isfinite(nrm))
      throw ConvergenceError("eigenvector: inverse iteration broke down", it,
                             resid);
    scale_in_place(x, 1.0 / nrm);
    CVector r = a * x;
    for (std::size_t i = 0; i < n; ++i)
      r[i] -= lambda * x[i];
    resid = norm2(r);
    if (resid <= cfg.resid_tol * scale) {
      normalize_phase(x);
      return x;
    }
  }
  throw ConvergenceError("eigenvector: inverse iteration stagnated at residual " +
                             std::to_string(resid),
                         cfg.max_inv_iters, resid);
}

std::vector<CVector> gram_schmidt_orthonormalize(const std::vector<CVector> &vectors,
                                                 double rel_tol) {
  if (vectors.empty())
    return {};
  const std::size_t len = vectors.front().size();
  if (len == 0)
    throw DimensionError("gram_schmidt_orthonormalize: empty vectors");
  double scale = 0.0;
  for (const CVector &v : vectors) {
    if (v.size() != len)
      throw DimensionError("gram_schmidt_orthonormalize: length mismatch");
    for (const Complex &c : v)
      if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
        throw NonFiniteError("gram_schmidt_orthonormalize: non-finite entry");
    scale = std::max(scale, norm2(v));
  }
  if (rel_tol < 0.0)
    rel_tol = static_cast<double>(len) * kEps;
  const double threshold = rel_tol * scale;

  std::vector<CVector> out;
  out.reserve(vectors.size());
  for (std::size_t idx = 0; idx < vectors.size(); ++idx) {
    CVector w = vectors[idx];
    const double r = project_out(w, out);
    if (r <= threshold)
      throw DependenceError("gram_schmidt_orthonormalize: vector " +
                                std::to_string(idx) +
                                " is linearly dependent on its predecessors",
                            idx);
    scale_in_place(w, 1.0 / r);
    out.push_back(std::move(w));
  }
  return out;
}

} // namespace specnorm

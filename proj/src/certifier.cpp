#include "specnorm/certifier.hpp"

#include "specnorm/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace specnorm {

namespace {

std::string fmt_complex(Complex c) {
  return "(" + std::to_string(c.real()) + ", " + std::to_string(c.imag()) + ")";
}

} // namespace

ResolvedTolerances CertifyConfig::resolve(const DenseMatrix &a) const {
  const double scale = tolerance_scale(a);
  return {tol_eq.value_or(1e-8 * scale),
          cluster_tol.value_or(1e-7 * scale),
          probe_angle,
          tie_margin,
          lemma_tol,
          tol_cert};
}

const char *to_string(Verdict v) noexcept {
  return v == Verdict::Normal ? "Normal" : "Nonnormal";
}

ProbeSet select_probes(const Spectrum &s, const ProbePolicy &policy) {
  const std::size_t p = s.clusters.size();
  const Complex dir = std::polar(1.0, policy.angle);
  ProbeSet out;
  out.probes.reserve(p);
  for (std::size_t k = 0; k < p; ++k) {
    double radius;
    if (p == 1) {
      radius = std::max(1.0, s.source_scale) / 2.0;
    } else {
      double delta = std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < p; ++j)
        if (j != k)
          delta = std::min(delta,
                           std::abs(s.clusters[j].lambda - s.clusters[k].lambda));
      radius = (1.0 - policy.tie_margin) * delta / 2.0;
    }
    out.probes.push_back({s.clusters[k].lambda + radius * dir, k, radius});
  }
  return out;
}

ProbeEvidence criterion_holds(const DenseMatrix &a, Complex z, Complex lambda,
                              double tol_eq, const KernelConfig &cfg) {
  ProbeEvidence e;
  e.z = z;
  e.lambda = lambda;
  e.d = std::abs(z - lambda);
  e.s = shifted_smallest_singular(a, z, cfg);
  e.gap = e.d - e.s;
  e.passed = e.gap <= tol_eq;
  return e;
}

bool left_eigvec_check(const DenseMatrix &a, Complex lambda,
                       std::span<const Complex> x, double tol) {
  require_square(a, "left_eigvec_check");
  if (x.size() != a.rows())
    throw DimensionError("left_eigvec_check: vector length mismatch");
  // (x* A)_j - lambda conj(x_j)
  CVector r(a.cols());
  for (std::size_t j = 0; j < a.cols(); ++j) {
    Complex s{};
    for (std::size_t i = 0; i < a.rows(); ++i)
      s += std::conj(x[i]) * a(i, j);
    r[j] = s - lambda * std::conj(x[j]);
  }
  return norm2(r) <= tol * frobenius_norm(a);
}

SemisimpleResult semisimple_check(const DenseMatrix &a, Complex lambda,
                                  double tol, const Spectrum &spectrum,
                                  const KernelConfig &cfg) {
  require_square(a, "semisimple_check");
  const std::size_t n = a.rows();
  const double thr = tol * tolerance_scale(a);
  const DenseMatrix b = shifted(a, lambda);
  const std::size_t ker1 = n - rank_with_tol(b, thr, cfg);
  const std::size_t ker2 = n - rank_with_tol(b * b, thr * thr, cfg);
  const std::size_t m =
      spectrum.clusters[dist_to_spectrum(lambda, spectrum).nearest_index]
          .multiplicity;
  return {ker1 == ker2, m, ker1};
}

SemisimpleResult semisimple_check(const DenseMatrix &a, Complex lambda,
                                  double tol, const KernelConfig &cfg) {
  return semisimple_check(a, lambda, tol, compute_spectrum(a, -1.0, cfg), cfg);
}

EigspaceCluster eigenspace_cluster(const DenseMatrix &a, Complex lambda,
                                   std::size_t algebraic_multiplicity,
                                   double tol, const KernelConfig &cfg) {
  require_square(a, "eigenspace_cluster");
  const std::size_t n = a.rows();
  const SvdResult f = svd(shifted(a, lambda), cfg);
  const double thr = tol * tolerance_scale(a);
  EigspaceCluster c;
  c.lambda = lambda;
  c.algebraic_multiplicity = algebraic_multiplicity;
  for (std::size_t j = n; j-- > 0;) {
    if (f.sigma[j] > thr)
      break;
    c.basis.push_back(f.V.column(j));
  }
  // Smallest singular value first is the order they were found; keep the
  // basis in ascending column order instead.
  std::reverse(c.basis.begin(), c.basis.end());
  c.geometric_multiplicity = c.basis.size();
  return c;
}

bool cross_orthogonality_check(const std::vector<EigspaceCluster> &clusters,
                               double tol) {
  for (std::size_t k = 0; k < clusters.size(); ++k)
    for (std::size_t l = k + 1; l < clusters.size(); ++l)
      for (const CVector &q : clusters[k].basis)
        for (const CVector &r : clusters[l].basis)
          if (std::abs(dot(q, r)) > tol)
            return false;
  return true;
}

DenseMatrix build_orthonormal_eigenbasis(const DenseMatrix &a,
                                         const std::vector<EigspaceCluster> &clusters,
                                         double tol_cert) {
  require_square(a, "build_orthonormal_eigenbasis");
  const std::size_t n = a.rows();
  std::vector<CVector> columns;
  std::vector<Complex> lambdas;
  for (const EigspaceCluster &c : clusters)
    for (const CVector &q : c.basis) {
      columns.push_back(q);
      lambdas.push_back(c.lambda);
    }
  if (columns.size() != n)
    throw IndeterminateError("eigenbasis: eigenspaces supply " +
                             std::to_string(columns.size()) +
                             " vectors for dimension " + std::to_string(n));

  std::vector<CVector> ortho;
  try {
    ortho = gram_schmidt_orthonormalize(columns);
  } catch (const DependenceError &e) {
    throw IndeterminateError(std::string("eigenbasis: ") + e.what());
  }

  const double anorm = frobenius_norm(a);
  for (std::size_t j = 0; j < n; ++j) {
    CVector r = a * ortho[j];
    for (std::size_t i = 0; i < n; ++i)
      r[i] -= lambdas[j] * ortho[j][i];
    if (norm2(r) > tol_cert * anorm)
      throw IndeterminateError("eigenbasis: column " + std::to_string(j) +
                               " is not an eigenvector of " +
                               fmt_complex(lambdas[j]) + " within tolerance");
  }
  DenseMatrix u = DenseMatrix::from_columns(ortho);
  if (unitarity_defect(u) > tol_cert)
    throw IndeterminateError("eigenbasis: Gram-Schmidt output is not unitary");
  if (off_diagonal_norm(u.adjoint() * a * u) > tol_cert * anorm)
    throw IndeterminateError("eigenbasis: U*AU is not diagonal within tolerance");
  return u;
}

double commutator_normality_oracle(const DenseMatrix &a) {
  require_square(a, "commutator_normality_oracle");
  const DenseMatrix ah = a.adjoint();
  return frobenius_norm(ah * a - a * ah);
}

NormalityCertificate certify(const DenseMatrix &a, const CertifyConfig &cfg) {
  require_square(a, "certify");
  require_finite(a, "certify");
  NormalityCertificate cert;
  cert.config_echo = cfg.resolve(a);
  const ResolvedTolerances &tol = cert.config_echo;
  cert.residuals.commutator = commutator_normality_oracle(a);

  try {
    cert.spectrum =
        cluster_spectrum(eigenvalues(a, cfg.kernel), frobenius_norm(a),
                         tol.cluster_tol);
    const ProbeSet probes =
        select_probes(cert.spectrum, {tol.probe_angle, tol.tie_margin});
    for (const Probe &p : probes.probes) {
      ProbeEvidence e =
          criterion_holds(a, p.z, cert.spectrum.clusters[p.cluster_index].lambda,
                          tol.tol_eq, cfg.kernel);
      if (!e.passed && !cert.witness)
        cert.witness = e;
      cert.evidence.push_back(e);
    }
    if (cert.witness) {
      cert.verdict = Verdict::Nonnormal;
      return cert;
    }

    for (const EigenCluster &c : cert.spectrum.clusters) {
      EigspaceCluster es = eigenspace_cluster(a, c.lambda, c.multiplicity,
                                              tol.lemma_tol, cfg.kernel);
      const SemisimpleResult ss = semisimple_check(a, c.lambda, tol.lemma_tol,
                                                   cert.spectrum, cfg.kernel);
      if (!ss.is_semisimple || ss.algebraic_multiplicity != ss.geometric_multiplicity)
        throw IndeterminateError(
            "probes passed but eigenvalue " + fmt_complex(c.lambda) +
            " is not semisimple at tolerance (m=" +
            std::to_string(ss.algebraic_multiplicity) +
            ", s=" + std::to_string(ss.geometric_multiplicity) + ")");
      for (const CVector &q : es.basis)
        if (!left_eigvec_check(a, c.lambda, q, tol.lemma_tol))
          throw IndeterminateError("probes passed but an eigenvector of " +
                                   fmt_complex(c.lambda) +
                                   " is not a left eigenvector");
      cert.eigenspaces.push_back(std::move(es));
    }
    if (!cross_orthogonality_check(cert.eigenspaces, tol.lemma_tol))
      throw IndeterminateError(
          "probes passed but eigenspaces are not mutually orthogonal");

    DenseMatrix u = build_orthonormal_eigenbasis(a, cert.eigenspaces, tol.tol_cert);
    cert.residuals.unitarity = unitarity_defect(u);
    cert.residuals.diagonalization = off_diagonal_norm(u.adjoint() * a * u);
    cert.eigenbasis = std::move(u);
    cert.verdict = Verdict::Normal;
    return cert;
  } catch (const ConvergenceError &e) {
    throw IndeterminateError(std::string("kernel failure: ") + e.what());
  }
}

} // namespace specnorm

#pragma once

#include "specnorm/kernels.hpp"
#include "specnorm/matrix.hpp"
#include "specnorm/spectral_distance.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace specnorm {

struct ProbePolicy {
  double angle = 0.0;       ///< direction of z_k - lambda_k
  double tie_margin = 1e-3; ///< radius shrink that keeps lambda_k strictly nearest
};

struct Probe {
  Complex z;
  std::size_t cluster_index;
  double radius;
};

struct ProbeSet {
  std::vector<Probe> probes;
};

struct ProbeEvidence {
  Complex z;
  Complex lambda;
  double d = 0.0;   ///< |z - lambda|
  double s = 0.0;   ///< sigma_min(zI - A)
  double gap = 0.0; ///< d - s
  bool passed = false;
};

/// One distinct eigenvalue with its numerically computed eigenspace.
struct EigspaceCluster {
  Complex lambda;
  std::size_t algebraic_multiplicity = 0;
  std::size_t geometric_multiplicity = 0;
  std::vector<CVector> basis;
};

struct SemisimpleResult {
  bool is_semisimple;
  std::size_t algebraic_multiplicity;
  std::size_t geometric_multiplicity;
};

/// Thresholds used for one certification run, after defaults are resolved
/// against the input's scale.
struct ResolvedTolerances {
  double tol_eq;
  double cluster_tol;
  double probe_angle;
  double tie_margin;
  double lemma_tol;
  double tol_cert;
};

struct CertifyConfig {
  /// Probe equality tolerance; default 1e-8 * max(1, ||A||_F).
  std::optional<double> tol_eq;
  /// Eigenvalue clustering tolerance; default 1e-7 * max(1, ||A||_F).
  std::optional<double> cluster_tol;
  double probe_angle = 0.0;
  double tie_margin = 1e-3;
  /// Relative tolerance for the eigenvector/semisimplicity/orthogonality checks.
  double lemma_tol = 1e-7;
  /// Acceptance threshold for the attached eigenbasis.
  double tol_cert = 1e-8;
  KernelConfig kernel;

  ResolvedTolerances resolve(const DenseMatrix &a) const;
};

enum class Verdict { Normal, Nonnormal };

const char *to_string(Verdict v) noexcept;

struct CertificateResiduals {
  std::optional<double> unitarity;       ///< ||U*U - I||_F
  std::optional<double> diagonalization; ///< ||offdiag(U*AU)||_F
  double commutator = 0.0;               ///< ||A*A - AA*||_F
};

struct NormalityCertificate {
  Verdict verdict = Verdict::Nonnormal;
  std::vector<ProbeEvidence> evidence;
  std::optional<ProbeEvidence> witness; ///< first failing probe
  std::optional<DenseMatrix> eigenbasis;
  std::vector<EigspaceCluster> eigenspaces;
  CertificateResiduals residuals;
  ResolvedTolerances config_echo{};
  Spectrum spectrum;
};

/// One probe per cluster: z_k = lambda_k + r_k e^{i angle}, with r_k just
/// under half the distance to the nearest other cluster. A single cluster
/// uses r = max(1, ||A||_F) / 2.
ProbeSet select_probes(const Spectrum &s, const ProbePolicy &policy = {});

ProbeEvidence criterion_holds(const DenseMatrix &a, Complex z, Complex lambda,
                              double tol_eq, const KernelConfig &cfg = {});

/// Full normality decision. Throws IndeterminateError when a kernel fails
/// or when passing probes do not lead to a verified eigenbasis.
NormalityCertificate certify(const DenseMatrix &a, const CertifyConfig &cfg = {});

/// ||x* A - lambda x*||_2 <= tol * ||A||_F.
bool left_eigvec_check(const DenseMatrix &a, Complex lambda,
                       std::span<const Complex> x, double tol);

/// Compares dim ker(lambda I - A) at tol * scale with dim ker((lambda I - A)^2)
/// at (tol * scale)^2; scale is max(1, ||A||_F).
SemisimpleResult semisimple_check(const DenseMatrix &a, Complex lambda,
                                  double tol, const Spectrum &spectrum,
                                  const KernelConfig &cfg = {});
SemisimpleResult semisimple_check(const DenseMatrix &a, Complex lambda,
                                  double tol, const KernelConfig &cfg = {});

/// Eigenspace of lambda: the right singular vectors of lambda I - A whose
/// singular values are at most tol * max(1, ||A||_F).
EigspaceCluster eigenspace_cluster(const DenseMatrix &a, Complex lambda,
                                   std::size_t algebraic_multiplicity,
                                   double tol, const KernelConfig &cfg = {});

/// |<q, q'>| <= tol for every pair of basis vectors from distinct clusters.
bool cross_orthogonality_check(const std::vector<EigspaceCluster> &clusters,
                               double tol);

/// Concatenates the cluster bases and polishes them with Gram-Schmidt.
/// Throws IndeterminateError if the bases do not span C^n or the result
/// fails the tol_cert checks.
DenseMatrix build_orthonormal_eigenbasis(const DenseMatrix &a,
                                         const std::vector<EigspaceCluster> &clusters,
                                         double tol_cert = 1e-8);

/// ||A*A - AA*||_F. Shares no code path with the spectral routines.
double commutator_normality_oracle(const DenseMatrix &a);

} // namespace specnorm

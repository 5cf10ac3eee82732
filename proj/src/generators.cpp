#include "specnorm/generators.hpp"

#include "specnorm/errors.hpp"
#include "specnorm/kernels.hpp"

#include <cmath>
#include <random>
#include <string>

namespace specnorm {

namespace {

class GaussianSource {
public:
  explicit GaussianSource(std::uint64_t seed) : rng_(seed) {}

  Complex complex() {
    const double x = normal_(rng_);
    const double y = normal_(rng_);
    return Complex(x, y) / std::sqrt(2.0);
  }

  DenseMatrix ginibre(std::size_t n) {
    DenseMatrix g(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        g(i, j) = complex();
    return g;
  }

private:
  std::mt19937_64 rng_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

DenseMatrix random_normal(GaussianSource &src, std::size_t n) {
  const DenseMatrix q = householder_qr(src.ginibre(n)).Q;
  std::vector<Complex> lambda(n);
  for (Complex &l : lambda)
    l = src.complex();
  return q * DenseMatrix::diagonal(lambda) * q.adjoint();
}

} // namespace

const char *to_string(MatrixKind k) noexcept {
  switch (k) {
  case MatrixKind::Normal:
    return "normal";
  case MatrixKind::Hermitian:
    return "hermitian";
  case MatrixKind::Unitary:
    return "unitary";
  case MatrixKind::Jordan:
    return "jordan";
  case MatrixKind::Ginibre:
    return "ginibre";
  case MatrixKind::NearNormal:
    return "near_normal";
  }
  return "unknown";
}

MatrixKind parse_matrix_kind(std::string_view name) {
  for (MatrixKind k : kAllMatrixKinds)
    if (name == to_string(k))
      return k;
  throw Error("unknown matrix kind '" + std::string(name) + "'");
}

DenseMatrix generate_matrix(MatrixKind kind, std::size_t n, std::uint64_t seed,
                            std::optional<double> param) {
  if (n == 0)
    throw DimensionError("generate_matrix: n must be at least 1");
  if (param && !std::isfinite(*param))
    throw NonFiniteError("generate_matrix: non-finite parameter");
  GaussianSource src(seed);
  switch (kind) {
  case MatrixKind::Normal:
    return random_normal(src, n);
  case MatrixKind::Hermitian: {
    const DenseMatrix g = src.ginibre(n);
    return Complex(0.5) * (g + g.adjoint());
  }
  case MatrixKind::Unitary:
    return householder_qr(src.ginibre(n)).Q;
  case MatrixKind::Jordan: {
    const Complex lambda = param ? Complex(*param) : src.complex();
    DenseMatrix j(n, n);
    for (std::size_t i = 0; i < n; ++i) {
      j(i, i) = lambda;
      if (i + 1 < n)
        j(i, i + 1) = 1.0;
    }
    return j;
  }
  case MatrixKind::Ginibre:
    return src.ginibre(n);
  case MatrixKind::NearNormal: {
    if (!param || *param < 0.0)
      throw Error("generate_matrix: near_normal needs a parameter eps >= 0");
    DenseMatrix a = random_normal(src, n);
    if (*param == 0.0)
      return a;
    DenseMatrix noise = src.ginibre(n);
    noise = Complex(1.0 / frobenius_norm(noise)) * noise;
    return a + Complex(*param * frobenius_norm(a)) * noise;
  }
  }
  throw Error("generate_matrix: unhandled kind");
}

} // namespace specnorm

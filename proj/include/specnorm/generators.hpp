#pragma once

#include "specnorm/matrix.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>

namespace specnorm {

enum class MatrixKind { Normal, Hermitian, Unitary, Jordan, Ginibre, NearNormal };

inline constexpr MatrixKind kAllMatrixKinds[] = {
    MatrixKind::Normal, MatrixKind::Hermitian, MatrixKind::Unitary,
    MatrixKind::Jordan, MatrixKind::Ginibre,   MatrixKind::NearNormal};

const char *to_string(MatrixKind k) noexcept;
/// Accepts the names printed by to_string ("near_normal", ...).
MatrixKind parse_matrix_kind(std::string_view name);

/// Seeded test matrices.
///
///  - normal:      Q diag(lambda) Q*, Q from the QR of a complex Gaussian draw
///  - hermitian:   (G + G*) / 2
///  - unitary:     Q
///  - jordan:      J_n(lambda); lambda = param when given, else drawn from seed
///  - ginibre:     G, entries (x + iy)/sqrt(2) with x, y standard normal
///  - near_normal: normal + param * ||normal||_F * N, N a unit-Frobenius
///                 Ginibre draw; param is required and must be >= 0
///
/// Output is a deterministic function of (kind, n, seed, param) on a fixed
/// platform.
DenseMatrix generate_matrix(MatrixKind kind, std::size_t n, std::uint64_t seed,
                            std::optional<double> param = std::nullopt);

} // namespace specnorm

#pragma once

#include "specnorm/certifier.hpp"
#include "specnorm/matrix.hpp"
#include "specnorm/scan.hpp"
#include "specnorm/spectral_distance.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>
#include <string_view>

namespace specnorm {

using Json = nlohmann::ordered_json;

struct MatrixFile {
  DenseMatrix matrix;
  Json meta = Json::object();
};

// Matrix documents: {"n": N, "entries": [[[re, im], ...], ...], "meta": {...}}
// Doubles are written in shortest round-trip form, so write-then-read
// reproduces every entry bit for bit.
std::string matrix_to_json(const DenseMatrix &a, const Json &meta = Json::object());
MatrixFile parse_matrix_json(std::string_view text);
MatrixFile read_matrix(const std::filesystem::path &path);
void write_matrix(const std::filesystem::path &path, const DenseMatrix &a,
                  const Json &meta = Json::object());

/// Shortest decimal that parses back to the same double.
std::string format_double(double x);

/// Header `re,im,s,d,ratio,flag`, one row per node in scan order.
std::string scan_to_csv(const GridScan &scan);
Json scan_to_json(const GridScan &scan);
void write_scan_csv(const std::filesystem::path &path, const GridScan &scan);

/// 64-bit FNV-1a over the shape and the bit patterns of the entries, as 16
/// lowercase hex digits.
std::string matrix_hash(const DenseMatrix &a);

Json certificate_to_json(const NormalityCertificate &cert, const DenseMatrix &a);
void write_certificate(const std::filesystem::path &path,
                       const NormalityCertificate &cert, const DenseMatrix &a);

Json weyl_to_json(const WeylReport &r);

/// Writes `text` to `path`, replacing its contents. Throws IoError.
void write_text(const std::filesystem::path &path, std::string_view text);

} // namespace specnorm

#include "specnorm/io.hpp"

#include "specnorm/errors.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iterator>
#include <sstream>

namespace specnorm {

namespace {

Json complex_json(Complex c) { return Json::array({c.real(), c.imag()}); }

Json evidence_json(const ProbeEvidence &e) {
  return {{"z", complex_json(e.z)},
          {"lambda", complex_json(e.lambda)},
          {"d", e.d},
          {"s", e.s},
          {"gap", e.gap},
          {"passed", e.passed}};
}

Json matrix_entries(const DenseMatrix &a) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < a.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < a.cols(); ++j)
      row.push_back(complex_json(a(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json optional_number(const std::optional<double> &x) {
  return x ? Json(*x) : Json(nullptr);
}

// NaN and Inf have no JSON spelling.
Json finite_or_null(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

double entry_part(const Json &v, std::size_t i, std::size_t j, const char *part) {
  if (!v.is_number())
    throw ParseError("entries[" + std::to_string(i) + "][" + std::to_string(j) +
                     "]: " + part + " part is not a number");
  const double x = v.get<double>();
  if (!std::isfinite(x))
    throw ParseError("entries[" + std::to_string(i) + "][" + std::to_string(j) +
                     "]: " + part + " part is not finite");
  return x;
}

} // namespace

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string matrix_to_json(const DenseMatrix &a, const Json &meta) {
  Json doc;
  doc["n"] = a.rows();
  doc["entries"] = matrix_entries(a);
  doc["meta"] = meta;
  return doc.dump(2) + "\n";
}

MatrixFile parse_matrix_json(std::string_view text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::exception &e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object())
    throw ParseError("matrix document must be a JSON object");
  if (!doc.contains("n") || !doc["n"].is_number_integer() ||
      doc["n"].get<std::int64_t>() < 1)
    throw ParseError("field 'n' must be a positive integer");
  const auto n = static_cast<std::size_t>(doc["n"].get<std::int64_t>());
  if (!doc.contains("entries") || !doc["entries"].is_array())
    throw ParseError("field 'entries' must be an array of rows");
  const Json &rows = doc["entries"];
  if (rows.size() != n)
    throw ParseError("'entries' has " + std::to_string(rows.size()) +
                     " rows but n = " + std::to_string(n));

  std::vector<Complex> data;
  data.reserve(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    const Json &row = rows[i];
    if (!row.is_array() || row.size() != n)
      throw ParseError("row " + std::to_string(i) + " has " +
                       std::to_string(row.is_array() ? row.size() : 0) +
                       " entries but n = " + std::to_string(n));
    for (std::size_t j = 0; j < n; ++j) {
      const Json &e = row[j];
      if (!e.is_array() || e.size() != 2)
        throw ParseError("entries[" + std::to_string(i) + "][" +
                         std::to_string(j) + "] must be a [re, im] pair");
      data.emplace_back(entry_part(e[0], i, j, "real"),
                        entry_part(e[1], i, j, "imaginary"));
    }
  }

  MatrixFile out{DenseMatrix(n, n, std::move(data))};
  if (doc.contains("meta")) {
    if (!doc["meta"].is_object())
      throw ParseError("field 'meta' must be an object");
    out.meta = doc["meta"];
  }
  return out;
}

MatrixFile read_matrix(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw IoError("cannot open '" + path.string() + "' for reading");
  const std::string text((std::istreambuf_iterator<char>(in)),
                         std::istreambuf_iterator<char>());
  try {
    return parse_matrix_json(text);
  } catch (const ParseError &e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

void write_text(const std::filesystem::path &path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
    throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out)
    throw IoError("write to '" + path.string() + "' failed");
}

void write_matrix(const std::filesystem::path &path, const DenseMatrix &a,
                  const Json &meta) {
  write_text(path, matrix_to_json(a, meta));
}

std::string scan_to_csv(const GridScan &scan) {
  std::ostringstream os;
  os << "re,im,s,d,ratio,flag\n";
  for (const ScanSample &s : scan.samples)
    os << format_double(s.z.real()) << ',' << format_double(s.z.imag()) << ','
       << format_double(s.s) << ',' << format_double(s.d) << ','
       << format_double(s.ratio) << ',' << to_string(s.flag) << '\n';
  return os.str();
}

Json scan_to_json(const GridScan &scan) {
  Json samples = Json::array();
  for (const ScanSample &s : scan.samples)
    samples.push_back({{"z", complex_json(s.z)},
                       {"s", finite_or_null(s.s)},
                       {"d", s.d},
                       {"ratio", finite_or_null(s.ratio)},
                       {"flag", to_string(s.flag)}});
  return {{"region",
           {scan.region.re_min, scan.region.re_max, scan.region.im_min,
            scan.region.im_max}},
          {"grid", {scan.nx, scan.ny}},
          {"failures", scan.failures},
          {"samples", std::move(samples)}};
}

void write_scan_csv(const std::filesystem::path &path, const GridScan &scan) {
  write_text(path, scan_to_csv(scan));
}

std::string matrix_hash(const DenseMatrix &a) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](std::uint64_t word) {
    for (int b = 0; b < 8; ++b) {
      h ^= (word >> (8 * b)) & 0xffU;
      h *= 0x100000001b3ULL;
    }
  };
  mix(a.rows());
  mix(a.cols());
  for (const Complex &c : a.entries()) {
    mix(std::bit_cast<std::uint64_t>(c.real()));
    mix(std::bit_cast<std::uint64_t>(c.imag()));
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i, h >>= 4)
    out[static_cast<std::size_t>(i)] = kHex[h & 0xfU];
  return out;
}

Json certificate_to_json(const NormalityCertificate &cert, const DenseMatrix &a) {
  Json probes = Json::array();
  for (const ProbeEvidence &e : cert.evidence)
    probes.push_back(evidence_json(e));

  Json clusters = Json::array();
  for (const EigenCluster &c : cert.spectrum.clusters)
    clusters.push_back(
        {{"lambda", complex_json(c.lambda)}, {"multiplicity", c.multiplicity}});
  Json eigs = Json::array();
  for (const Complex &e : cert.spectrum.all_eigenvalues)
    eigs.push_back(complex_json(e));

  Json spaces = Json::array();
  for (const EigspaceCluster &c : cert.eigenspaces)
    spaces.push_back({{"lambda", complex_json(c.lambda)},
                      {"algebraic_multiplicity", c.algebraic_multiplicity},
                      {"geometric_multiplicity", c.geometric_multiplicity}});

  const ResolvedTolerances &t = cert.config_echo;
  Json doc;
  doc["verdict"] = to_string(cert.verdict);
  doc["matrix"] = {{"n", a.rows()},
                   {"hash", matrix_hash(a)},
                   {"frobenius_norm", frobenius_norm(a)}};
  doc["tolerances"] = {{"tol_eq", t.tol_eq},         {"cluster_tol", t.cluster_tol},
                       {"probe_angle", t.probe_angle}, {"tie_margin", t.tie_margin},
                       {"lemma_tol", t.lemma_tol},   {"tol_cert", t.tol_cert}};
  doc["spectrum"] = {{"eigenvalues", std::move(eigs)},
                     {"clusters", std::move(clusters)}};
  doc["probes"] = std::move(probes);
  doc["witness"] = cert.witness ? evidence_json(*cert.witness) : Json(nullptr);
  doc["residuals"] = {{"unitarity", optional_number(cert.residuals.unitarity)},
                      {"diagonalization",
                       optional_number(cert.residuals.diagonalization)},
                      {"commutator", cert.residuals.commutator}};
  doc["eigenspaces"] = std::move(spaces);
  doc["eigenbasis"] =
      cert.eigenbasis ? matrix_entries(*cert.eigenbasis) : Json(nullptr);
  return doc;
}

void write_certificate(const std::filesystem::path &path,
                       const NormalityCertificate &cert, const DenseMatrix &a) {
  write_text(path, certificate_to_json(cert, a).dump(2) + "\n");
}

Json weyl_to_json(const WeylReport &r) {
  return {{"sigma_1", r.sigma_1},
          {"sigma_n", r.sigma_n},
          {"abs_lambda_max", r.abs_lambda_max},
          {"abs_lambda_min", r.abs_lambda_min},
          {"upper_ok", r.upper_ok},
          {"lower_ok", r.lower_ok},
          {"tol", r.tol}};
}

} // namespace specnorm

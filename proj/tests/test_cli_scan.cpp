#include "specnorm/certifier.hpp"
#include "specnorm/cli.hpp"
#include "specnorm/errors.hpp"
#include "specnorm/generators.hpp"
#include "specnorm/io.hpp"
#include "specnorm/scan.hpp"

#include "test_support.hpp"

#include <gtest/gtest.h>

#include <bit>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

using namespace specnorm;
namespace fs = std::filesystem;

namespace {

const DenseMatrix kJ2{{0.0, 1.0}, {0.0, 0.0}};

struct RunResult {
  int code;
  std::string out;
  std::string err;
};

RunResult run_cli(const std::vector<std::string> &args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

class TempDir {
public:
  TempDir() {
    std::random_device rd;
    path_ = fs::temp_directory_path() /
            ("specnorm_test_" + std::to_string(rd()) + std::to_string(rd()));
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  fs::path operator/(const std::string &name) const { return path_ / name; }

private:
  fs::path path_;
};

std::string slurp(const fs::path &p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

bool bit_equal(const DenseMatrix &a, const DenseMatrix &b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    return false;
  for (std::size_t i = 0; i < a.entries().size(); ++i) {
    const Complex x = a.entries()[i], y = b.entries()[i];
    if (std::bit_cast<std::uint64_t>(x.real()) != std::bit_cast<std::uint64_t>(y.real()) ||
        std::bit_cast<std::uint64_t>(x.imag()) != std::bit_cast<std::uint64_t>(y.imag()))
      return false;
  }
  return true;
}

} // namespace

// ---------------------------------------------------------------- generators

TEST(GenerateMatrix, JordanWithZeroEigenvalue) {
  const DenseMatrix j = generate_matrix(MatrixKind::Jordan, 2, 5, 0.0);
  EXPECT_EQ(j, kJ2);
}

TEST(GenerateMatrix, HermitianIsNormal) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const DenseMatrix h = generate_matrix(MatrixKind::Hermitian, 1 + seed % 8, seed);
    const double f = frobenius_norm(h);
    EXPECT_LE(commutator_normality_oracle(h), 1e-12 * f * f);
    EXPECT_EQ(h, h.adjoint());
  }
}

TEST(GenerateMatrix, NearNormalAtZeroIsNormal) {
  for (std::uint64_t seed = 0; seed < 10; ++seed)
    EXPECT_EQ(generate_matrix(MatrixKind::NearNormal, 4, seed, 0.0),
              generate_matrix(MatrixKind::Normal, 4, seed));
}

TEST(GenerateMatrix, NearNormalPerturbationHasRequestedSize) {
  const DenseMatrix base = generate_matrix(MatrixKind::Normal, 5, 9);
  const DenseMatrix pert = generate_matrix(MatrixKind::NearNormal, 5, 9, 1e-3);
  EXPECT_NEAR(frobenius_norm(pert - base), 1e-3 * frobenius_norm(base), 1e-15);
}

TEST(GenerateMatrix, UnitaryAndDeterministic) {
  const DenseMatrix q = generate_matrix(MatrixKind::Unitary, 6, 3);
  EXPECT_LE(unitarity_defect(q), 1e-12);
  for (MatrixKind k : kAllMatrixKinds) {
    const std::optional<double> p =
        k == MatrixKind::NearNormal ? std::optional(1e-2) : std::nullopt;
    EXPECT_EQ(generate_matrix(k, 5, 77, p), generate_matrix(k, 5, 77, p));
    EXPECT_FALSE(generate_matrix(k, 5, 77, p) == generate_matrix(k, 5, 78, p))
        << to_string(k);
  }
}

TEST(GenerateMatrix, Errors) {
  EXPECT_THROW(parse_matrix_kind("banded"), Error);
  EXPECT_THROW(generate_matrix(MatrixKind::Normal, 0, 1), Error);
  EXPECT_THROW(generate_matrix(MatrixKind::NearNormal, 3, 1), Error);
  EXPECT_THROW(generate_matrix(MatrixKind::NearNormal, 3, 1, -1.0), Error);
  for (MatrixKind k : kAllMatrixKinds)
    EXPECT_EQ(parse_matrix_kind(to_string(k)), k);
}

// ---------------------------------------------------------------- scan

TEST(ScanGrid, OneByOneZero) {
  const GridScan g = scan_grid(DenseMatrix::zeros(1, 1), {-1, 1, -1, 1}, 3, 3);
  ASSERT_EQ(g.samples.size(), 9u);
  EXPECT_EQ(g.failures, 0u);
  for (std::size_t k = 0; k < 9; ++k) {
    const ScanSample &s = g.samples[k];
    EXPECT_NEAR(s.s, std::abs(s.z), 1e-15);
    EXPECT_NEAR(s.d, std::abs(s.z), 1e-15);
    EXPECT_NEAR(s.ratio, 1.0, 1e-15);
    EXPECT_EQ(s.flag, k == 4 ? SampleFlag::AtEigenvalue : SampleFlag::Ok);
  }
  // Row-major, imaginary part outer, endpoints included.
  EXPECT_EQ(g.samples[0].z, Complex(-1.0, -1.0));
  EXPECT_EQ(g.samples[1].z, Complex(0.0, -1.0));
  EXPECT_EQ(g.samples[3].z, Complex(-1.0, 0.0));
  EXPECT_EQ(g.samples[8].z, Complex(1.0, 1.0));
}

TEST(ScanGrid, JordanRatioAtOne) {
  const GridScan g = scan_grid(kJ2, {1, 1, 0, 0}, 1, 1);
  ASSERT_EQ(g.samples.size(), 1u);
  EXPECT_EQ(g.samples[0].z, Complex(1.0));
  EXPECT_EQ(g.samples[0].d, 1.0);
  EXPECT_NEAR(g.samples[0].s, 0.6180339887498949, 1e-12);
  EXPECT_NEAR(g.samples[0].ratio, 0.6180339887498949, 1e-12);
}

TEST(ScanGrid, NormalRatiosAreOne) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const DenseMatrix a = generate_matrix(MatrixKind::Normal, 5, seed);
    const GridScan g = scan_grid(a, default_scan_region(a), 15, 15);
    for (const ScanSample &s : g.samples)
      if (s.flag == SampleFlag::Ok)
        EXPECT_GE(s.ratio, 1.0 - 1e-6);
  }
}

TEST(ScanGrid, RatioBoundAcrossFamilies) {
  for (MatrixKind k : kAllMatrixKinds)
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
      const std::optional<double> p =
          k == MatrixKind::NearNormal ? std::optional(1e-3) : std::nullopt;
      const DenseMatrix a = generate_matrix(k, 2 + seed, seed, p);
      const GridScan g = scan_grid(a, default_scan_region(a), 11, 9);
      EXPECT_EQ(g.samples.size(), 99u);
      for (const ScanSample &s : g.samples)
        if (s.flag == SampleFlag::Ok) {
          EXPECT_GE(s.ratio, 0.0);
          EXPECT_LE(s.ratio, 1.0 + 1e-9) << to_string(k);
        }
    }
}

TEST(ScanGrid, KernelFailureMarksSamples) {
  KernelConfig cfg;
  cfg.max_jacobi_sweeps = 1;
  std::mt19937_64 rng(5);
  const DenseMatrix a = testing_support::random_matrix(rng, 6, 6);
  const GridScan g = scan_grid(a, {-1, 1, -1, 1}, 2, 2, 1e-7);
  const GridScan bad = [&] {
    try {
      return scan_grid(a, {-1, 1, -1, 1}, 2, 2, 1e-7, cfg);
    } catch (const ConvergenceError &) {
      return GridScan{}; // spectrum itself may fail
    }
  }();
  EXPECT_EQ(g.failures, 0u);
  if (!bad.samples.empty()) {
    EXPECT_EQ(bad.failures, 4u);
    for (const ScanSample &s : bad.samples) {
      EXPECT_EQ(s.flag, SampleFlag::Failed);
      EXPECT_TRUE(std::isnan(s.s));
    }
  }
}

TEST(CheckCorollary, NormalVersusJordan) {
  const DenseMatrix a = generate_matrix(MatrixKind::Normal, 6, 1);
  const CorollaryReport r = check_corollary(a, 200, 1);
  EXPECT_EQ(r.samples, 200u);
  EXPECT_NEAR(r.radius, 2.0 * frobenius_norm(a), 1e-12);
  EXPECT_LE(r.max_abs_gap, 1e-8 * std::max(1.0, frobenius_norm(a)));
  EXPECT_GT(check_corollary(kJ2, 200, 1).max_abs_gap, 0.1);
  EXPECT_EQ(check_corollary(DenseMatrix::zeros(2, 2), 10, 1).radius, 1.0);
}

// ---------------------------------------------------------------- io

TEST(MatrixIo, RoundTripIsBitExact) {
  TempDir dir;
  write_matrix(dir / "d.json", DenseMatrix::diagonal(std::vector<Complex>{1.0, 2.0}));
  EXPECT_TRUE(bit_equal(read_matrix(dir / "d.json").matrix,
                        DenseMatrix::diagonal(std::vector<Complex>{1.0, 2.0})));

  std::mt19937_64 rng(7);
  for (int k = 0; k < 20; ++k) {
    DenseMatrix a = testing_support::random_matrix(rng, 1 + k % 6, 1 + k % 6,
                                                   std::pow(10.0, k - 10));
    a(0, 0) = Complex(0.1 + 0.2, -0.0);
    write_matrix(dir / "r.json", a, {{"k", k}});
    const MatrixFile f = read_matrix(dir / "r.json");
    EXPECT_TRUE(bit_equal(f.matrix, a));
    EXPECT_EQ(f.meta["k"], k);
  }
}

TEST(MatrixIo, ParseErrors) {
  try {
    parse_matrix_json(R"({"n": 2, "entries": [[[1,0],[0,0]], [[0,0],[1,0]], [[0,0],[0,0]]]})");
    FAIL();
  } catch (const ParseError &e) {
    EXPECT_NE(std::string(e.what()).find("3 rows"), std::string::npos) << e.what();
  }
  EXPECT_THROW(parse_matrix_json("{"), ParseError);
  EXPECT_THROW(parse_matrix_json(R"({"n": 1, "entries": [[[1]]]})"), ParseError);
  EXPECT_THROW(parse_matrix_json(R"({"n": 1, "entries": [[["a", 0]]]})"), ParseError);
  EXPECT_THROW(parse_matrix_json(R"({"n": 1, "entries": [[[1e400, 0]]]})"), ParseError);
  EXPECT_THROW(parse_matrix_json(R"({"n": 2, "entries": [[[1,0]], [[0,0],[1,0]]]})"),
               ParseError);
  EXPECT_THROW(read_matrix("/nonexistent/path/m.json"), IoError);
}

TEST(ScanIo, CsvShape) {
  const GridScan g = scan_grid(kJ2, {-1, 1, -1, 1}, 2, 2);
  const std::string csv = scan_to_csv(g);
  std::istringstream in(csv);
  std::string line;
  std::vector<std::string> lines;
  while (std::getline(in, line))
    lines.push_back(line);
  ASSERT_EQ(lines.size(), 5u);
  EXPECT_EQ(lines[0], "re,im,s,d,ratio,flag");
  EXPECT_EQ(lines[1].substr(0, 6), "-1,-1,");

  TempDir dir;
  write_scan_csv(dir / "s.csv", g);
  EXPECT_EQ(slurp(dir / "s.csv"), csv);
}

TEST(CertificateIo, SchemaKeys) {
  const NormalityCertificate c = certify(kJ2);
  const Json j = certificate_to_json(c, kJ2);
  for (const char *key : {"verdict", "matrix", "tolerances", "spectrum", "probes",
                          "witness", "residuals"})
    EXPECT_TRUE(j.contains(key)) << key;
  EXPECT_EQ(j["verdict"], "Nonnormal");
  EXPECT_EQ(j["matrix"]["hash"], matrix_hash(kJ2));
  EXPECT_NE(matrix_hash(kJ2), matrix_hash(kJ2.adjoint()));
}

// ---------------------------------------------------------------- cli

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run_cli({"certify", "--kind", "hermitian", "--n", "6", "--seed", "1"}).code, 0);
  EXPECT_EQ(run_cli({"certify", "--kind", "jordan", "--n", "2", "--eps", "0"}).code, 1);
  EXPECT_EQ(run_cli({"certify", "--kind", "jordan", "--n", "2", "--eps", "0",
                     "--tol-eq", "1"}).code,
            2);
  EXPECT_EQ(run_cli({"frobnicate"}).code, 3);
  EXPECT_EQ(run_cli({}).code, 3);
  EXPECT_EQ(run_cli({"certify"}).code, 3);
  EXPECT_EQ(run_cli({"certify", "--kind", "banded"}).code, 3);
  EXPECT_EQ(run_cli({"certify", "--input", "/nonexistent.json"}).code, 3);
  EXPECT_EQ(run_cli({"certify", "--input", "x", "--kind", "normal"}).code, 3);
  EXPECT_EQ(run_cli({"scan", "--kind", "normal", "--region", "1,0,0,1"}).code, 3);
  EXPECT_EQ(run_cli({"scan", "--kind", "normal", "--format", "xml"}).code, 3);
  EXPECT_EQ(run_cli({"gen", "--kind", "near_normal"}).code, 3);
  EXPECT_EQ(run_cli({"--help"}).code, 0);
}

TEST(Cli, CertifyWritesWitness) {
  TempDir dir;
  const auto r = run_cli({"certify", "--kind", "jordan", "--n", "2", "--eps", "0",
                          "--output", (dir / "c.json").string()});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("verdict: Nonnormal"), std::string::npos);
  const Json j = Json::parse(slurp(dir / "c.json"));
  EXPECT_EQ(j["verdict"], "Nonnormal");
  EXPECT_NEAR(j["witness"]["gap"].get<double>(), 1.0 - std::sqrt(0.5), 1e-12);
}

TEST(Cli, IndeterminateCertificate) {
  TempDir dir;
  const auto r = run_cli({"certify", "--kind", "jordan", "--n", "2", "--eps", "0",
                          "--tol-eq", "1", "--output", (dir / "c.json").string()});
  EXPECT_EQ(r.code, 2);
  EXPECT_EQ(Json::parse(slurp(dir / "c.json"))["verdict"], "Indeterminate");
}

TEST(Cli, WeylAndCorollary) {
  const auto w = run_cli({"weyl", "--kind", "ginibre", "--n", "5", "--seed", "2"});
  EXPECT_EQ(w.code, 0);
  const Json j = Json::parse(w.out);
  EXPECT_TRUE(j["upper_ok"].get<bool>());
  EXPECT_TRUE(j["lower_ok"].get<bool>());

  const auto c = run_cli({"check-corollary", "--kind", "normal", "--n", "6"});
  EXPECT_EQ(c.code, 0);
  EXPECT_TRUE(Json::parse(c.out)["consistent"].get<bool>());
  EXPECT_EQ(run_cli({"check-corollary", "--kind", "jordan", "--n", "3"}).code, 1);
}

TEST(Cli, GenThenCertifyFromFile) {
  TempDir dir;
  const std::string path = (dir / "m.json").string();
  ASSERT_EQ(run_cli({"gen", "--kind", "unitary", "--n", "5", "--seed", "4",
                     "--output", path}).code,
            0);
  EXPECT_TRUE(bit_equal(read_matrix(path).matrix,
                        generate_matrix(MatrixKind::Unitary, 5, 4)));
  EXPECT_EQ(read_matrix(path).meta["kind"], "unitary");
  EXPECT_EQ(run_cli({"certify", "--input", path}).code, 0);
}

TEST(Cli, OutputsAreDeterministic) {
  const std::vector<std::vector<std::string>> cmds = {
      {"scan", "--kind", "near_normal", "--eps", "1e-3", "--n", "4", "--seed", "3",
       "--grid", "7,5"},
      {"scan", "--kind", "ginibre", "--n", "3", "--format", "json"},
      {"gen", "--kind", "ginibre", "--n", "4", "--seed", "11"},
      {"check-corollary", "--kind", "normal", "--n", "4", "--seed", "8"},
  };
  for (const auto &cmd : cmds) {
    const auto a = run_cli(cmd);
    const auto b = run_cli(cmd);
    EXPECT_EQ(a.code, b.code);
    EXPECT_EQ(a.out, b.out);
    EXPECT_FALSE(a.out.empty());
  }
  TempDir dir;
  const std::vector<std::string> cert = {"certify", "--kind", "normal", "--n", "5",
                                         "--seed", "6", "--output"};
  auto c1 = cert, c2 = cert;
  c1.push_back((dir / "a.json").string());
  c2.push_back((dir / "b.json").string());
  EXPECT_EQ(run_cli(c1).code, 0);
  EXPECT_EQ(run_cli(c2).code, 0);
  EXPECT_EQ(slurp(dir / "a.json"), slurp(dir / "b.json"));
}

TEST(Cli, SeedFromEnvironment) {
  const std::vector<std::string> gen = {"gen", "--kind", "ginibre", "--n", "3"};
  auto explicit_seed = gen;
  explicit_seed.insert(explicit_seed.end(), {"--seed", "42"});
  ::setenv("SPECNORM_SEED", "42", 1);
  const auto from_env = run_cli(gen);
  const auto overridden = run_cli({"gen", "--kind", "ginibre", "--n", "3", "--seed", "7"});
  ::setenv("SPECNORM_SEED", "nope", 1);
  const auto bad = run_cli(gen);
  ::unsetenv("SPECNORM_SEED");
  EXPECT_EQ(from_env.out, run_cli(explicit_seed).out);
  EXPECT_NE(overridden.out, from_env.out);
  EXPECT_EQ(bad.code, 3);
}

TEST(Cli, ScanCsvHasOneRowPerNode) {
  const auto r = run_cli({"scan", "--kind", "normal", "--n", "3", "--grid", "4,3"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 13);
}

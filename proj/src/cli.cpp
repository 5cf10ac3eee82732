#include "specnorm/cli.hpp"

#include "specnorm/certifier.hpp"
#include "specnorm/errors.hpp"
#include "specnorm/generators.hpp"
#include "specnorm/io.hpp"
#include "specnorm/scan.hpp"
#include "specnorm/spectral_distance.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <cstdlib>
#include <optional>
#include <ostream>
#include <sstream>

namespace specnorm::cli {

namespace {

class UsageError : public Error {
public:
  using Error::Error;
};

struct Options {
  std::string input;
  std::string output;
  std::optional<double> tol_eq;
  std::optional<double> cluster_tol;
  double probe_angle = 0.0;
  std::vector<double> region;
  std::vector<std::size_t> grid;
  std::string kind;
  std::size_t n = 4;
  std::optional<std::uint64_t> seed;
  std::optional<double> eps;
  std::string format;
  std::size_t samples = 200;
};

std::uint64_t resolve_seed(const Options &o) {
  if (o.seed)
    return *o.seed;
  if (const char *env = std::getenv("SPECNORM_SEED")) {
    std::uint64_t v = 0;
    std::istringstream is(env);
    if (!(is >> v) || !is.eof())
      throw UsageError(std::string("SPECNORM_SEED is not an unsigned integer: '") +
                       env + "'");
    return v;
  }
  return 0;
}

Json generator_meta(const Options &o) {
  Json meta = {{"kind", o.kind}, {"n", o.n}, {"seed", resolve_seed(o)}};
  meta["param"] = o.eps ? Json(*o.eps) : Json(nullptr);
  return meta;
}

DenseMatrix generate_from(const Options &o) {
  MatrixKind kind;
  try {
    kind = parse_matrix_kind(o.kind);
  } catch (const Error &e) {
    throw UsageError(e.what());
  }
  if (o.n == 0)
    throw UsageError("--n must be at least 1");
  try {
    return generate_matrix(kind, o.n, resolve_seed(o), o.eps);
  } catch (const Error &e) {
    throw UsageError(e.what());
  }
}

// Matrix from --input, or generated from --kind/--n/--seed/--eps.
DenseMatrix load_matrix(const Options &o) {
  if (!o.input.empty() && !o.kind.empty())
    throw UsageError("give either --input or --kind, not both");
  if (!o.input.empty())
    return read_matrix(o.input).matrix;
  if (!o.kind.empty())
    return generate_from(o);
  throw UsageError("a matrix is required: pass --input PATH or --kind K");
}

void emit(const Options &o, std::ostream &out, const std::string &text) {
  if (o.output.empty())
    out << text;
  else
    write_text(o.output, text);
}

std::string dump(const Json &j) { return j.dump(2) + "\n"; }

CertifyConfig certify_config(const Options &o) {
  CertifyConfig cfg;
  cfg.tol_eq = o.tol_eq;
  cfg.cluster_tol = o.cluster_tol;
  cfg.probe_angle = o.probe_angle;
  return cfg;
}

int cmd_certify(const Options &o, std::ostream &out, std::ostream &err) {
  const DenseMatrix a = load_matrix(o);
  NormalityCertificate cert;
  try {
    cert = certify(a, certify_config(o));
  } catch (const IndeterminateError &e) {
    err << "indeterminate: " << e.what() << "\n";
    out << "verdict: Indeterminate\n";
    if (!o.output.empty())
      write_text(o.output, dump({{"verdict", "Indeterminate"},
                                 {"reason", e.what()},
                                 {"matrix", {{"n", a.rows()}, {"hash", matrix_hash(a)}}}}));
    return kIndeterminate;
  }
  out << "verdict: " << to_string(cert.verdict) << "\n";
  if (cert.witness)
    out << "witness: z = " << format_double(cert.witness->z.real()) << " + "
        << format_double(cert.witness->z.imag())
        << "i, gap = " << format_double(cert.witness->gap) << "\n";
  out << "commutator residual: " << format_double(cert.residuals.commutator)
      << "\n";
  if (!o.output.empty())
    write_certificate(o.output, cert, a);
  return cert.verdict == Verdict::Normal ? kNormal : kNonnormal;
}

int cmd_scan(const Options &o, std::ostream &out, std::ostream &err) {
  const DenseMatrix a = load_matrix(o);
  ScanRegion region;
  if (o.region.empty()) {
    region = default_scan_region(a);
  } else {
    region = {o.region[0], o.region[1], o.region[2], o.region[3]};
    if (!(region.re_min <= region.re_max && region.im_min <= region.im_max))
      throw UsageError("--region must satisfy a <= b and c <= d");
  }
  std::size_t nx = 21, ny = 21;
  if (!o.grid.empty()) {
    nx = o.grid[0];
    ny = o.grid[1];
  }
  if (nx == 0 || ny == 0)
    throw UsageError("--grid needs positive node counts");

  const GridScan scan = scan_grid(a, region, nx, ny, o.cluster_tol.value_or(-1.0));
  if (o.format == "json")
    emit(o, out, dump(scan_to_json(scan)));
  else
    emit(o, out, scan_to_csv(scan));
  err << "scan: " << scan.samples.size() << " nodes, " << scan.failures
      << " failed; region " << format_double(region.re_min) << ","
      << format_double(region.re_max) << "," << format_double(region.im_min)
      << "," << format_double(region.im_max) << "\n";
  return scan.failures == 0 ? kNormal : kIndeterminate;
}

int cmd_weyl(const Options &o, std::ostream &out, std::ostream &) {
  const DenseMatrix a = load_matrix(o);
  const WeylReport r = weyl_bounds_check(a);
  emit(o, out, dump(weyl_to_json(r)));
  return r.upper_ok && r.lower_ok ? kNormal : kIndeterminate;
}

int cmd_gen(const Options &o, std::ostream &out, std::ostream &) {
  if (o.kind.empty())
    throw UsageError("gen requires --kind");
  const DenseMatrix a = generate_from(o);
  emit(o, out, matrix_to_json(a, generator_meta(o)));
  return kNormal;
}

int cmd_check_corollary(const Options &o, std::ostream &out, std::ostream &err) {
  const DenseMatrix a = load_matrix(o);
  const CertifyConfig cfg = certify_config(o);
  const ResolvedTolerances tol = cfg.resolve(a);
  const CorollaryReport rep =
      check_corollary(a, o.samples, resolve_seed(o), tol.cluster_tol);

  std::string verdict;
  int code;
  try {
    const NormalityCertificate cert = certify(a, cfg);
    verdict = to_string(cert.verdict);
    code = cert.verdict == Verdict::Normal ? kNormal : kNonnormal;
  } catch (const IndeterminateError &e) {
    err << "indeterminate: " << e.what() << "\n";
    verdict = "Indeterminate";
    code = kIndeterminate;
  }
  const bool consistent = !(code == kNormal && rep.max_abs_gap > tol.tol_eq);
  if (!consistent) {
    err << "check-corollary: certify reported Normal but max |gap| "
        << format_double(rep.max_abs_gap) << " exceeds tol_eq "
        << format_double(tol.tol_eq) << "\n";
    code = kIndeterminate;
  }

  Json doc = {{"center", {rep.center.real(), rep.center.imag()}},
              {"radius", rep.radius},
              {"samples", rep.samples},
              {"seed", resolve_seed(o)},
              {"max_abs_gap", rep.max_abs_gap},
              {"worst_z", {rep.worst_z.real(), rep.worst_z.imag()}},
              {"tol_eq", tol.tol_eq},
              {"certify_verdict", verdict},
              {"consistent", consistent}};
  emit(o, out, dump(doc));
  return code;
}

} // namespace

int run(const std::vector<std::string> &args, std::ostream &out,
        std::ostream &err) {
  CLI::App app{"Normality certification via shifted smallest singular values",
               "specnorm"};
  app.require_subcommand(1);
  Options o;

  auto add_matrix_opts = [&o](CLI::App *sub) {
    sub->add_option("--input", o.input, "Matrix JSON file");
    sub->add_option("--kind", o.kind,
                    "Generate the matrix instead: normal, hermitian, unitary, "
                    "jordan, ginibre, near_normal");
    sub->add_option("--n", o.n, "Generated matrix dimension")->default_val(4);
    sub->add_option("--seed", o.seed, "Generator / sampling seed (env SPECNORM_SEED)");
    sub->add_option("--eps", o.eps,
                    "Generator parameter (near_normal eps, jordan eigenvalue)");
    sub->add_option("--output", o.output, "Output path (default stdout)");
  };
  auto add_tol_opts = [&o](CLI::App *sub) {
    sub->add_option("--tol-eq", o.tol_eq, "Probe equality tolerance (absolute)");
    sub->add_option("--cluster-tol", o.cluster_tol,
                    "Eigenvalue clustering tolerance (absolute)");
    sub->add_option("--probe-angle", o.probe_angle, "Probe direction in radians");
  };

  CLI::App *certify_cmd = app.add_subcommand("certify", "Decide normality");
  add_matrix_opts(certify_cmd);
  add_tol_opts(certify_cmd);

  CLI::App *scan_cmd = app.add_subcommand("scan", "Grid scan of s(z) and d(z)");
  add_matrix_opts(scan_cmd);
  scan_cmd->add_option("--cluster-tol", o.cluster_tol,
                       "Eigenvalue clustering tolerance (absolute)");
  scan_cmd->add_option("--region", o.region, "re_min,re_max,im_min,im_max")
      ->delimiter(',')
      ->expected(4);
  scan_cmd->add_option("--grid", o.grid, "NX,NY")->delimiter(',')->expected(2);
  scan_cmd->add_option("--format", o.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}))
      ->default_val("csv");

  CLI::App *weyl_cmd = app.add_subcommand("weyl", "Weyl singular-value bounds");
  add_matrix_opts(weyl_cmd);

  CLI::App *gen_cmd = app.add_subcommand("gen", "Generate a test matrix");
  add_matrix_opts(gen_cmd);

  CLI::App *cc_cmd = app.add_subcommand(
      "check-corollary", "Randomized d(z) = s(z) check cross-validated with certify");
  add_matrix_opts(cc_cmd);
  add_tol_opts(cc_cmd);
  cc_cmd->add_option("--samples", o.samples, "Number of random z")->default_val(200);

  std::vector<std::string> argv_store;
  argv_store.reserve(args.size() + 1);
  argv_store.emplace_back("specnorm");
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char *> argv;
  for (const std::string &s : argv_store)
    argv.push_back(s.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp &) {
    out << app.help();
    return kNormal;
  } catch (const CLI::ParseError &e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  }

  try {
    if (certify_cmd->parsed())
      return cmd_certify(o, out, err);
    if (scan_cmd->parsed())
      return cmd_scan(o, out, err);
    if (weyl_cmd->parsed())
      return cmd_weyl(o, out, err);
    if (gen_cmd->parsed())
      return cmd_gen(o, out, err);
    if (cc_cmd->parsed())
      return cmd_check_corollary(o, out, err);
  } catch (const UsageError &e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const ParseError &e) {
    err << "parse error: " << e.what() << "\n";
    return kUsage;
  } catch (const IoError &e) {
    err << "I/O error: " << e.what() << "\n";
    return kUsage;
  } catch (const ConvergenceError &e) {
    err << "indeterminate: " << e.what() << "\n";
    return kIndeterminate;
  } catch (const Error &e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception &e) {
    err << "error: " << e.what() << "\n";
    return kIndeterminate;
  }
  return kUsage;
}

} // namespace specnorm::cli

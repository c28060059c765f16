#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "rlspec/charpoly.hpp"
#include "rlspec/io.hpp"
#include "rlspec/numfun.hpp"
#include "rlspec/spectrum.hpp"
#include "rlspec/traceclass.hpp"

namespace rlspec::cli {

namespace {

using io::json;

struct RunConfig {
  double tol_imag = 1e-8;
  double tol_residual = 1e-8;
  double pd_threshold = 1e-10;
  int n_rays = 0;
  std::uint64_t seed = 1;
  bool exact = false;
  bool as_json = false;
  std::string sos_kind = "eigen";
  std::string input;
  std::string symbol;
  std::string out;
  std::string sos_out;
  std::string svg;
  std::string format;
  std::string grid = "polar:0.5,2,16,16";
  double lambda_min = 0.0;
  Eigen::Index n = 0;
};

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

void check_positive(double v, const char* what) {
  if (!(v > 0.0)) throw io::ValidationError(std::string(what) + " must be positive");
}

RealLinearOperator load_operator(const std::string& path) { return io::operator_from_json(io::load_json_file(path)); }

// Writes to the file, or to out when no path was given.
void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty()) {
    out << text;
  } else {
    io::write_text_file(path, text);
  }
}

std::vector<Complex> parse_grid(const std::string& spec) {
  const std::string prefix = "polar:";
  if (spec.rfind(prefix, 0) != 0) throw io::ValidationError("--grid: expected polar:rmin,rmax,nr,ntheta");
  std::vector<double> v;
  std::stringstream ss(spec.substr(prefix.size()));
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      v.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw io::ValidationError("--grid: '" + item + "' is not a number");
    }
  }
  if (v.size() != 4) throw io::ValidationError("--grid: expected four values rmin,rmax,nr,ntheta");
  const double rmin = v[0];
  const double rmax = v[1];
  const auto nr = static_cast<int>(v[2]);
  const auto nt = static_cast<int>(v[3]);
  if (!(rmin > 0.0) || rmax < rmin || nr < 1 || nt < 1 || v[2] != nr || v[3] != nt) {
    throw io::ValidationError("--grid: need 0 < rmin <= rmax and integer counts >= 1");
  }
  std::vector<Complex> grid;
  for (int i = 0; i < nr; ++i) {
    const double r = nr == 1 ? rmin : rmin + (rmax - rmin) * i / (nr - 1);
    for (int j = 0; j < nt; ++j) grid.push_back(std::polar(r, 2.0 * std::numbers::pi * j / nt));
  }
  return grid;
}

int cmd_info(const RunConfig& cfg, std::ostream& out) {
  const auto R = load_operator(cfg.input);
  const CoeffMatrix cm = coeff_matrix(R);
  Eigen::SelfAdjointEigenSolver<Matrix> es(cm.H, Eigen::EigenvaluesOnly);
  const RealVector eig = es.eigenvalues();
  const double big = eig.cwiseAbs().maxCoeff();
  const double cls_tol = cfg.pd_threshold * big;
  const std::string cls = eig(0) > cls_tol ? "positive definite"
                          : eig(0) >= -cls_tol ? "positive semidefinite"
                                               : "indefinite";
  const auto certs = emptiness_certificates(R, cfg.pd_threshold);
  const auto noeig = no_eigenvalue_certificate(R);
  std::string verdict = "undetermined";
  if (certs.pd_certificate || noeig.certified) verdict = "empty";
  if (certs.real_axis_zero) verdict = "nonempty";

  // Sampled consistency between H and the determinant.
  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> N(0.0, 1.0);
  double sample_err = 0.0;
  for (int k = 0; k < 16; ++k) {
    const Complex l(N(rng), N(rng));
    const double scale = std::pow(1.0 + std::abs(l), 2.0 * static_cast<double>(R.n()));
    sample_err = std::max(sample_err, std::abs(eval_coeff_matrix(cm.H, l) - charpoly_eval(R, l)) / scale);
  }

  if (cfg.as_json) {
    json j;
    j["n"] = R.n();
    j["operator_norm"] = operator_norm(R);
    j["schatten_1"] = schatten_norm(R, 1.0);
    j["schatten_2"] = schatten_norm(R, 2.0);
    j["det_complexification"] = certs.det_complexification;
    j["H"] = io::coeff_matrix_to_json(cm);
    j["H_eigenvalues"] = std::vector<double>(eig.data(), eig.data() + eig.size());
    j["H_class"] = cls;
    j["pd_certificate"] = certs.pd_certificate.has_value();
    if (certs.real_axis_zero) {
      j["real_axis_zero"] = {{"r", certs.real_axis_zero->r}, {"value", certs.real_axis_zero->value}};
    } else {
      j["real_axis_zero"] = nullptr;
    }
    j["no_eigenvalue_certificate"] = {{"certified", noeig.certified}, {"margin", noeig.margin}};
    j["spectrum"] = verdict;
    j["sampled_check"] = {{"seed", cfg.seed}, {"samples", 16}, {"max_scaled_error", sample_err}};
    out << io::dump_json(j) << '\n';
    return ok;
  }
  out << "n: " << R.n() << '\n';
  out << "operator norm: " << num(operator_norm(R)) << '\n';
  out << "schatten norms: p=1 " << num(schatten_norm(R, 1.0)) << ", p=2 " << num(schatten_norm(R, 2.0)) << '\n';
  out << "det of complexification: " << num(certs.det_complexification) << '\n';
  out << "H eigenvalues:";
  for (Eigen::Index i = 0; i < eig.size(); ++i) out << ' ' << num(eig(i));
  out << '\n';
  out << "H: " << cls << '\n';
  if (certs.pd_certificate) out << "certificate: H positive definite, spectrum empty\n";
  if (noeig.certified) out << "certificate: no eigenvalues, margin " << num(noeig.margin) << '\n';
  if (certs.real_axis_zero) out << "certificate: real-axis zero at r = " << num(certs.real_axis_zero->r) << '\n';
  out << "spectrum: " << verdict << '\n';
  out << "sampled check (seed " << cfg.seed << "): max scaled error " << num(sample_err) << '\n';
  return ok;
}

int cmd_charpoly(const RunConfig& cfg, std::ostream& out) {
  const auto R = load_operator(cfg.input);
  CoeffOptions opts;
  opts.mode = cfg.exact ? CoeffMode::exact : CoeffMode::interpolation;
  const CoeffMatrix cm = coeff_matrix(R, opts);
  emit(cfg.out, io::dump_json(io::coeff_matrix_to_json(cm)) + "\n", out);
  if (!cfg.sos_out.empty()) {
    const auto sos = cfg.sos_kind == "cholesky" ? cholesky_sos(cm.H, cfg.pd_threshold) : sos_decompose(cm.H);
    io::write_text_file(cfg.sos_out, io::dump_json(io::sos_to_json(sos)) + "\n");
  }
  return ok;
}

int cmd_spectrum(const RunConfig& cfg, std::ostream& out) {
  const auto R = load_operator(cfg.input);
  const auto cloud = spectrum_sweep(R, cfg.n_rays, cfg.tol_imag, cfg.tol_residual);
  std::ostringstream csv;
  io::write_spectrum_csv(csv, cloud);
  emit(cfg.out, csv.str(), out);
  if (!cfg.svg.empty()) {
    std::ostringstream svg;
    io::write_spectrum_svg(svg, cloud, operator_norm(R));
    io::write_text_file(cfg.svg, svg.str());
  }
  if (!cfg.out.empty()) {
    out << cloud.points.size() << " points on " << cloud.n_rays << " lines, " << cloud.rejected << " rejected\n";
  }
  return ok;
}

int cmd_numfun(const RunConfig& cfg, std::ostream& out) {
  const auto R = load_operator(cfg.input);
  const auto rep = range_and_coverage(R, cfg.n_rays);
  std::string format = cfg.format;
  if (format.empty()) {
    const bool csv = cfg.out.size() >= 4 && cfg.out.compare(cfg.out.size() - 4, 4, ".csv") == 0;
    format = csv ? "csv" : "json";
  }
  if (format == "csv") {
    std::ostringstream os;
    io::write_ray_minima_csv(os, rep);
    emit(cfg.out, os.str(), out);
  } else {
    emit(cfg.out, io::dump_json(io::numfun_report_to_json(rep)) + "\n", out);
  }
  if (!cfg.out.empty()) {
    out << "range [" << num(rep.range_min) << ", " << num(rep.range_max) << "], fov [" << num(rep.fov_min) << ", "
        << num(rep.fov_max) << "]\n";
  }
  return ok;
}

int cmd_friedrichs(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto s = io::symbol_from_json(io::load_json_file(cfg.symbol));
  if (cfg.n < 1) throw io::ValidationError("--n must be positive");
  for (const auto& w : decay_warnings(s, cfg.n)) err << "warning: " << w << '\n';
  emit(cfg.out, io::dump_json(io::operator_to_json(truncation(s, cfg.n))) + "\n", out);
  return ok;
}

int cmd_phi(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto s = io::symbol_from_json(io::load_json_file(cfg.symbol));
  if (cfg.n < 1) throw io::ValidationError("--nmax must be positive");
  const auto grid = parse_grid(cfg.grid);
  std::vector<Eigen::Index> n_list;
  for (Eigen::Index n = 1; n < cfg.n; n *= 2) n_list.push_back(n);
  n_list.push_back(cfg.n);
  const auto table = phi_converge(s, grid, n_list, cfg.lambda_min);
  for (const auto& w : table.warnings) err << "warning: " << w << '\n';
  std::ostringstream csv;
  io::write_phi_csv(csv, table);
  emit(cfg.out, csv.str(), out);
  return ok;
}

void report_error(std::ostream& err, bool as_json, int code, const std::string& kind, const std::string& message) {
  if (as_json) {
    json j;
    j["error"] = {{"code", code}, {"kind", kind}, {"message", message}};
    err << io::dump_json(j) << '\n';
  } else {
    err << "error: " << message << '\n';
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  bool error_json = std::find(args.begin(), args.end(), "--error-json") != args.end();

  CLI::App app{"Spectra, characteristic polynomials and numerical functions of real linear operators", "rlspec"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_flag("--error-json", error_json, "Report failures as JSON on stderr");

  auto* info = app.add_subcommand("info", "Summarize an operator");
  info->add_option("op-file", cfg.input, "Operator JSON")->required();
  info->add_flag("--json", cfg.as_json, "Print the report as JSON");
  info->add_option("--seed", cfg.seed, "Seed for the sampled coefficient check");
  info->add_option("--pd-threshold", cfg.pd_threshold, "Relative eigenvalue threshold for definiteness");

  auto* charpoly = app.add_subcommand("charpoly", "Coefficient matrix and sum-of-squares form");
  charpoly->add_option("op-file", cfg.input, "Operator JSON")->required();
  charpoly->add_flag("--exact", cfg.exact, "Use the minor expansion instead of interpolation");
  charpoly->add_option("--out", cfg.out, "Coefficient matrix JSON (default stdout)");
  charpoly->add_option("--sos", cfg.sos_out, "Sum-of-squares JSON");
  charpoly->add_option("--sos-kind", cfg.sos_kind, "eigen or cholesky")->check(CLI::IsMember({"eigen", "cholesky"}));
  charpoly->add_option("--pd-threshold", cfg.pd_threshold, "Relative eigenvalue threshold for Cholesky");

  auto* spectrum = app.add_subcommand("spectrum", "Spectrum point cloud");
  spectrum->add_option("op-file", cfg.input, "Operator JSON")->required();
  spectrum->add_option("--rays", cfg.n_rays, "Lines through the origin")->default_val(64);
  spectrum->add_option("--tol", cfg.tol_imag, "Realness tolerance for ray eigenvalues")->default_val(1e-8);
  spectrum->add_option("--tol-residual", cfg.tol_residual, "Residual tolerance for accepted points")->default_val(1e-8);
  spectrum->add_option("--out", cfg.out, "CSV output (default stdout)");
  spectrum->add_option("--svg", cfg.svg, "SVG scatter output");

  auto* numfun = app.add_subcommand("numfun", "Range of the numerical function against W(H)");
  numfun->add_option("op-file", cfg.input, "Operator JSON")->required();
  numfun->add_option("--rays", cfg.n_rays, "Rays over [0, 2 pi)")->default_val(128);
  numfun->add_option("--out", cfg.out, "Report path; .csv selects per-ray minima (default stdout JSON)");
  numfun->add_option("--format", cfg.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));

  auto* friedrichs = app.add_subcommand("friedrichs", "Truncate a Friedrichs operator symbol");
  friedrichs->add_option("--symbol", cfg.symbol, "Symbol JSON")->required();
  friedrichs->add_option("--n", cfg.n, "Truncation size")->required();
  friedrichs->add_option("--out", cfg.out, "Operator JSON (default stdout)");

  auto* phi = app.add_subcommand("phi", "Characteristic function of symbol truncations");
  phi->add_option("--symbol", cfg.symbol, "Symbol JSON")->required();
  phi->add_option("--nmax", cfg.n, "Largest truncation; sizes double up to it")->required();
  phi->add_option("--grid", cfg.grid, "polar:rmin,rmax,nr,ntheta")->capture_default_str();
  phi->add_option("--lambda-min", cfg.lambda_min, "Smallest admissible |lambda| (default 0.1 x symbol scale)");
  phi->add_option("--out", cfg.out, "CSV output (default stdout)");

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return ok;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return ok;
  } catch (const CLI::ParseError& e) {
    report_error(err, error_json, validation_failure, "usage", e.what());
    return validation_failure;
  }

  try {
    if (cfg.n_rays < 0 || ((*spectrum || *numfun) && cfg.n_rays < 1)) {
      throw io::ValidationError("--rays must be at least 1");
    }
    check_positive(cfg.tol_imag, "--tol");
    check_positive(cfg.tol_residual, "--tol-residual");
    check_positive(cfg.pd_threshold, "--pd-threshold");
    if (*info) return cmd_info(cfg, out);
    if (*charpoly) return cmd_charpoly(cfg, out);
    if (*spectrum) return cmd_spectrum(cfg, out);
    if (*numfun) return cmd_numfun(cfg, out);
    if (*friedrichs) return cmd_friedrichs(cfg, out, err);
    if (*phi) return cmd_phi(cfg, out, err);
  } catch (const io::ValidationError& e) {
    report_error(err, error_json, validation_failure, "validation", e.what());
    return validation_failure;
  } catch (const std::invalid_argument& e) {
    report_error(err, error_json, validation_failure, "validation", e.what());
    return validation_failure;
  } catch (const NotPositiveDefinite& e) {
    report_error(err, error_json, numerical_failure, "not-positive-definite", e.what());
    return numerical_failure;
  } catch (const std::exception& e) {
    report_error(err, error_json, numerical_failure, "numerical", e.what());
    return numerical_failure;
  }
  return ok;
}

}  // namespace rlspec::cli

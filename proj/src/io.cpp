#include "rlspec/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace rlspec::io {

namespace {

void dump_value(const json& j, int indent, int depth, std::string& out) {
  const auto pad = [&](int d) {
    if (indent >= 0) {
      out += '\n';
      out.append(static_cast<std::size_t>(indent * d), ' ');
    }
  };
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ',';
        first = false;
        pad(depth + 1);
        out += json(it.key()).dump();
        out += indent >= 0 ? ": " : ":";
        dump_value(it.value(), indent, depth + 1, out);
      }
      pad(depth);
      out += '}';
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      // Arrays of scalars stay on one line.
      bool flat = true;
      for (const auto& e : j) flat = flat && !e.is_structured();
      out += '[';
      bool first = true;
      for (const auto& e : j) {
        if (!first) out += flat ? ", " : ",";
        first = false;
        if (!flat) pad(depth + 1);
        dump_value(e, indent, depth + 1, out);
      }
      if (!flat) pad(depth);
      out += ']';
      return;
    }
    case json::value_t::number_float: {
      const double x = j.get<double>();
      out += std::isfinite(x) ? format_double(x) : "null";
      return;
    }
    default:
      out += j.dump();
  }
}

const json& require(const json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) {
    throw ValidationError(where + ": missing field \"" + key + "\"");
  }
  return j.at(key);
}

RealMatrix read_real_matrix(const json& j, const char* key, Eigen::Index n, const std::string& where) {
  const json& a = require(j, key, where);
  const std::string field = where + "." + key;
  if (!a.is_array() || static_cast<Eigen::Index>(a.size()) != n) {
    throw ValidationError(field + ": expected " + std::to_string(n) + " rows");
  }
  RealMatrix M(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    const json& row = a[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n) {
      throw ValidationError(field + ": row " + std::to_string(r) + " must have " + std::to_string(n) + " entries");
    }
    for (Eigen::Index c = 0; c < n; ++c) {
      const json& v = row[static_cast<std::size_t>(c)];
      if (!v.is_number()) {
        throw ValidationError(field + ": entry (" + std::to_string(r) + ", " + std::to_string(c) + ") is not a number");
      }
      M(r, c) = v.get<double>();
    }
  }
  return M;
}

json matrix_to_json(const RealMatrix& M) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < M.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < M.cols(); ++c) row.push_back(M(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<double> read_real_array(const json& a, const std::string& field) {
  if (!a.is_array()) throw ValidationError(field + ": expected an array");
  std::vector<double> out;
  out.reserve(a.size());
  for (const auto& v : a) {
    if (!v.is_number()) throw ValidationError(field + ": entries must be numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

Eigen::Index read_dimension(const json& j, const std::string& where) {
  const json& n = require(j, "n", where);
  if (!n.is_number_integer() || n.get<long long>() < 1) throw ValidationError(where + ".n: expected a positive integer");
  return static_cast<Eigen::Index>(n.get<long long>());
}

const char* decay_name(DecayTag t) {
  switch (t) {
    case DecayTag::finite:
      return "finite";
    case DecayTag::geometric:
      return "geometric";
    case DecayTag::polynomial:
      return "polynomial";
  }
  return "finite";
}

}  // namespace

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", x);
  return buf;
}

std::string dump_json(const json& j, int indent) {
  std::string out;
  dump_value(j, indent, 0, out);
  return out;
}

json parse_json(const std::string& text, const std::string& source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    // Locate the failing byte as line:column.
    std::size_t line = 1;
    std::size_t col = 1;
    const std::size_t stop = std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0, text.size());
    std::size_t line_start = 0;
    for (std::size_t i = 0; i < stop; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
        line_start = i + 1;
      } else {
        ++col;
      }
    }
    const std::size_t line_end = text.find('\n', line_start);
    const std::string context = text.substr(line_start, line_end == std::string::npos ? std::string::npos
                                                                                      : line_end - line_start);
    std::ostringstream msg;
    msg << source << ":" << line << ":" << col << ": JSON parse error near: " << context;
    throw ValidationError(msg.str());
  }
}

json load_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_json(buf.str(), path.string());
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write " + path.string());
  out << text;
}

RealLinearOperator operator_from_json(const json& j) {
  const std::string where = "operator";
  const Eigen::Index n = read_dimension(j, where);
  Matrix C(n, n);
  Matrix B(n, n);
  C.real() = read_real_matrix(j, "C_re", n, where);
  C.imag() = read_real_matrix(j, "C_im", n, where);
  B.real() = read_real_matrix(j, "B_re", n, where);
  B.imag() = read_real_matrix(j, "B_im", n, where);
  return {std::move(C), std::move(B)};
}

json operator_to_json(const RealLinearOperator& R) {
  json j;
  j["n"] = R.n();
  j["C_re"] = matrix_to_json(R.C().real());
  j["C_im"] = matrix_to_json(R.C().imag());
  j["B_re"] = matrix_to_json(R.B().real());
  j["B_im"] = matrix_to_json(R.B().imag());
  return j;
}

json coeff_matrix_to_json(const CoeffMatrix& cm) {
  json j;
  j["n"] = cm.n;
  j["H_re"] = matrix_to_json(cm.H.real());
  j["H_im"] = matrix_to_json(cm.H.imag());
  j["asymmetry"] = cm.asymmetry;
  return j;
}

CoeffMatrix coeff_matrix_from_json(const json& j) {
  const std::string where = "coeff_matrix";
  CoeffMatrix cm;
  cm.n = read_dimension(j, where);
  cm.H.resize(cm.n + 1, cm.n + 1);
  cm.H.real() = read_real_matrix(j, "H_re", cm.n + 1, where);
  cm.H.imag() = read_real_matrix(j, "H_im", cm.n + 1, where);
  if (j.contains("asymmetry") && j["asymmetry"].is_number()) cm.asymmetry = j["asymmetry"].get<double>();
  return cm;
}

json sos_to_json(const SosDecomposition& sos) {
  json j;
  j["kind"] = sos.kind == SosKind::eigen ? "eigen" : "cholesky";
  j["d"] = std::vector<double>(sos.d.data(), sos.d.data() + sos.d.size());
  j["U_re"] = matrix_to_json(sos.U.real());
  j["U_im"] = matrix_to_json(sos.U.imag());
  return j;
}

SymbolSeries symbol_from_json(const json& j) {
  const std::string where = "symbol";
  const json& kind = require(j, "kind", where);
  if (!kind.is_string()) throw ValidationError(where + ".kind: expected a string");
  SymbolSeries s;
  if (j.contains("decay")) {
    const json& d = j["decay"];
    const json& tag = require(d, "tag", where + ".decay");
    if (tag == "finite") {
      s.decay.tag = DecayTag::finite;
    } else if (tag == "geometric") {
      s.decay.tag = DecayTag::geometric;
    } else if (tag == "polynomial") {
      s.decay.tag = DecayTag::polynomial;
    } else {
      throw ValidationError(where + ".decay.tag: expected finite, geometric or polynomial");
    }
    if (d.contains("param")) {
      if (!d["param"].is_number()) throw ValidationError(where + ".decay.param: expected a number");
      s.decay.param = d["param"].get<double>();
    }
  }
  if (kind == "circle-hankel") {
    s.kind = SymbolKind::circle_hankel;
    const auto re = read_real_array(require(j, "coeffs_re", where), where + ".coeffs_re");
    std::vector<double> im(re.size(), 0.0);
    if (j.contains("coeffs_im")) im = read_real_array(j["coeffs_im"], where + ".coeffs_im");
    if (im.size() != re.size()) throw ValidationError(where + ": coeffs_re and coeffs_im differ in length");
    for (std::size_t k = 0; k < re.size(); ++k) s.coeffs.emplace_back(re[k], im[k]);
  } else if (kind == "disk-monomial") {
    s.kind = SymbolKind::disk_monomial;
    const json& m = require(j, "m", where);
    if (!m.is_number_integer() || m.get<long long>() < 0) throw ValidationError(where + ".m: expected an integer >= 0");
    s.m = static_cast<int>(m.get<long long>());
  } else {
    throw ValidationError(where + ".kind: expected circle-hankel or disk-monomial");
  }
  return s;
}

json symbol_to_json(const SymbolSeries& s) {
  json j;
  j["kind"] = s.kind == SymbolKind::circle_hankel ? "circle-hankel" : "disk-monomial";
  std::vector<double> re;
  std::vector<double> im;
  for (const auto& c : s.coeffs) {
    re.push_back(c.real());
    im.push_back(c.imag());
  }
  j["coeffs_re"] = re;
  j["coeffs_im"] = im;
  j["m"] = s.m;
  j["decay"] = {{"tag", decay_name(s.decay.tag)}, {"param", s.decay.param}};
  return j;
}

void write_spectrum_csv(std::ostream& os, const SpectrumCloud& cloud) {
  os << "theta,r,re,im,residual\n";
  for (const auto& p : cloud.points) {
    os << format_double(p.theta) << ',' << format_double(p.r) << ',' << format_double(p.lambda.real()) << ','
       << format_double(p.lambda.imag()) << ',' << format_double(p.residual) << '\n';
  }
}

void write_phi_csv(std::ostream& os, const PhiTable& table) {
  os << "lambda_re,lambda_im";
  for (auto n : table.n_list) os << ",n" << n;
  os << '\n';
  for (std::size_t i = 0; i < table.lambdas.size(); ++i) {
    os << format_double(table.lambdas[i].real()) << ',' << format_double(table.lambdas[i].imag());
    for (Eigen::Index c = 0; c < table.values.cols(); ++c) {
      os << ',' << format_double(table.values(static_cast<Eigen::Index>(i), c));
    }
    os << '\n';
  }
}

json numfun_report_to_json(const NumFunReport& rep) {
  json j;
  j["f0"] = rep.f0;
  j["f_inf"] = rep.f_inf;
  j["range_est"] = {rep.range_min, rep.range_max};
  j["fov"] = {rep.fov_min, rep.fov_max};
  j["uncovered_low"] = rep.uncovered_low;
  j["uncovered_high"] = rep.uncovered_high;
  json grid;
  grid["n_rays"] = rep.n_rays;
  grid["r_max"] = rep.r_max;
  grid["unconverged_roots"] = rep.unconverged_roots;
  j["grid"] = grid;
  return j;
}

void write_ray_minima_csv(std::ostream& os, const NumFunReport& rep) {
  os << "theta,r_min_F,F_min\n";
  for (const auto& m : rep.ray_minima) {
    os << format_double(m.theta) << ',' << (std::isfinite(m.r) ? format_double(m.r) : std::string("inf")) << ','
       << format_double(m.F) << '\n';
  }
}

void write_spectrum_svg(std::ostream& os, const SpectrumCloud& cloud, double radius) {
  const double size = 400.0;
  const double half = size / 2.0;
  double extent = radius;
  for (const auto& p : cloud.points) extent = std::max(extent, p.r);
  if (!(extent > 0.0)) extent = 1.0;
  const double scale = 0.45 * size / extent;
  char buf[160];
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"400\" height=\"400\" viewBox=\"0 0 400 400\">\n";
  os << "<rect width=\"400\" height=\"400\" fill=\"white\"/>\n";
  os << "<line x1=\"0\" y1=\"200\" x2=\"400\" y2=\"200\" stroke=\"#bbb\"/>\n";
  os << "<line x1=\"200\" y1=\"0\" x2=\"200\" y2=\"400\" stroke=\"#bbb\"/>\n";
  std::snprintf(buf, sizeof buf, "<circle cx=\"200\" cy=\"200\" r=\"%.3f\" fill=\"none\" stroke=\"#888\"/>\n",
                radius * scale);
  os << buf;
  for (const auto& p : cloud.points) {
    std::snprintf(buf, sizeof buf, "<circle cx=\"%.3f\" cy=\"%.3f\" r=\"2\" fill=\"#c00\"/>\n",
                  half + scale * p.lambda.real(), half - scale * p.lambda.imag());
    os << buf;
  }
  os << "</svg>\n";
}

}  // namespace rlspec::io

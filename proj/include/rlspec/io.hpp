#pragma once

// File formats: operator, coefficient-matrix, SOS and symbol JSON; spectrum and phi-table CSV;
// numerical-function report JSON/CSV; spectrum SVG scatter.

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>

#include "json.hpp"
#include "rlspec/charpoly.hpp"
#include "rlspec/numfun.hpp"
#include "rlspec/spectrum.hpp"
#include "rlspec/traceclass.hpp"

namespace rlspec::io {

using nlohmann::json;

/// Malformed or inconsistent input.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// 17 significant digits, lowercase scientific ("1.0000000000000000e+00").
std::string format_double(double x);

/// Serializes with format_double for every floating-point number; non-finite numbers become null.
std::string dump_json(const json& j, int indent = 2);

json parse_json(const std::string& text, const std::string& source = "<input>");
json load_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

/// {"n", "C_re", "C_im", "B_re", "B_im"}, row-major n x n arrays.
RealLinearOperator operator_from_json(const json& j);
json operator_to_json(const RealLinearOperator& R);

/// {"n", "H_re", "H_im", "asymmetry"}
json coeff_matrix_to_json(const CoeffMatrix& cm);
CoeffMatrix coeff_matrix_from_json(const json& j);

/// {"kind", "d", "U_re", "U_im"}
json sos_to_json(const SosDecomposition& sos);

/// {"kind", "coeffs_re", "coeffs_im", "m", "decay": {"tag", "param"}}
SymbolSeries symbol_from_json(const json& j);
json symbol_to_json(const SymbolSeries& s);

/// Columns theta, r, re, im, residual.
void write_spectrum_csv(std::ostream& os, const SpectrumCloud& cloud);

/// Columns lambda_re, lambda_im, then one column n<N> per truncation size.
void write_phi_csv(std::ostream& os, const PhiTable& table);

json numfun_report_to_json(const NumFunReport& rep);

/// Columns theta, r_min_F, F_min.
void write_ray_minima_csv(std::ostream& os, const NumFunReport& rep);

/// Scatter of the spectral points with the circle |lambda| = radius.
void write_spectrum_svg(std::ostream& os, const SpectrumCloud& cloud, double radius);

}  // namespace rlspec::io

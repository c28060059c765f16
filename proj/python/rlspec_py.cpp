#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "rlspec/charpoly.hpp"
#include "rlspec/io.hpp"
#include "rlspec/numfun.hpp"
#include "rlspec/oplib.hpp"
#include "rlspec/parallel.hpp"
#include "rlspec/spectrum.hpp"
#include "rlspec/traceclass.hpp"

namespace py = pybind11;
using namespace rlspec;

PYBIND11_MODULE(_rlspec, m) {
  m.doc() = "Spectra of finite-rank real linear operators";

  auto numerical = py::register_exception<NumericalError>(m, "NumericalError", PyExc_RuntimeError);
  py::register_exception<NotPositiveDefinite>(m, "NotPositiveDefinite", numerical.ptr());
  py::register_exception<DimensionError>(m, "DimensionError", PyExc_ValueError);
  py::register_exception<InsufficientCoefficients>(m, "InsufficientCoefficients", PyExc_ValueError);
  py::register_exception<io::ValidationError>(m, "ValidationError", PyExc_ValueError);

  py::class_<RealLinearOperator>(m, "RealLinearOperator")
      .def(py::init<Matrix, Matrix>(), py::arg("C"), py::arg("B"))
      .def_static("zero", &RealLinearOperator::zero)
      .def_static("identity", &RealLinearOperator::identity)
      .def_static("conjugation", &RealLinearOperator::conjugation)
      .def_static("complex_linear", &RealLinearOperator::complex_linear)
      .def_static("antilinear", &RealLinearOperator::antilinear)
      .def_property_readonly("n", &RealLinearOperator::n)
      .def_property_readonly("C", &RealLinearOperator::C)
      .def_property_readonly("B", &RealLinearOperator::B)
      .def("is_complex_linear", &RealLinearOperator::is_complex_linear, py::arg("tol") = 0.0)
      .def("is_antilinear", &RealLinearOperator::is_antilinear, py::arg("tol") = 0.0)
      .def("__call__", [](const RealLinearOperator& R, const Vector& z) { return rlspec::apply(R, z); })
      .def(py::self + py::self)
      .def(py::self - py::self)
      .def("__rmul__", [](const RealLinearOperator& R, Complex s) { return s * R; })
      .def("__repr__", [](const RealLinearOperator& R) {
        return "<RealLinearOperator n=" + std::to_string(R.n()) + ">";
      });

  m.def("shift", &shift);
  m.def("compose", &compose);
  m.def("adjoint", &adjoint);
  m.def("complexify", &complexify);
  m.def("realify", &realify);
  m.def("operator_norm", &operator_norm);
  m.def("min_modulus", py::overload_cast<const RealLinearOperator&>(&min_modulus));
  m.def("schatten_norm", &schatten_norm);
  m.def("rotate", &rotate);

  // charpoly
  py::enum_<CoeffMode>(m, "CoeffMode")
      .value("interpolation", CoeffMode::interpolation)
      .value("exact", CoeffMode::exact);
  py::enum_<SosKind>(m, "SosKind").value("eigen", SosKind::eigen).value("cholesky", SosKind::cholesky);

  py::class_<CoeffMatrix>(m, "CoeffMatrix")
      .def_readonly("n", &CoeffMatrix::n)
      .def_readonly("H", &CoeffMatrix::H)
      .def_readonly("asymmetry", &CoeffMatrix::asymmetry)
      .def_readonly("radial_condition", &CoeffMatrix::radial_condition);

  py::class_<SosDecomposition>(m, "SosDecomposition")
      .def_readonly("d", &SosDecomposition::d)
      .def_readonly("U", &SosDecomposition::U)
      .def_readonly("kind", &SosDecomposition::kind)
      .def("eval", &SosDecomposition::eval);

  m.def("charpoly_eval", &charpoly_eval);
  m.def("det_complexification", &det_complexification);
  m.def("eval_coeff_matrix", &eval_coeff_matrix);
  m.def(
      "coeff_matrix",
      [](const RealLinearOperator& R, const std::string& mode) {
        CoeffOptions opt;
        if (mode == "exact")
          opt.mode = CoeffMode::exact;
        else if (mode != "interpolation")
          throw py::value_error("mode must be 'interpolation' or 'exact'");
        return coeff_matrix(R, opt);
      },
      py::arg("R"), py::arg("mode") = "interpolation");
  m.def("sos_decompose", &sos_decompose);
  m.def("cholesky_sos", &cholesky_sos, py::arg("H"), py::arg("pd_threshold") = 1e-10);
  m.def("adjoint_coeff_check", &adjoint_coeff_check, py::arg("R"), py::arg("tol") = 1e-9);

  // spectrum
  m.def(
      "ray_spectrum",
      [](const RealLinearOperator& R, double theta, double tol) {
        std::vector<std::pair<double, double>> out;
        for (const auto& h : ray_spectrum(R, theta, tol)) out.emplace_back(h.theta, h.r);
        return out;
      },
      py::arg("R"), py::arg("theta"), py::arg("tol_imag") = 1e-8);
  m.def(
      "spectrum_sweep",
      [](const RealLinearOperator& R, int n_rays, double tol_imag, double tol_residual) {
        std::vector<Complex> out;
        for (const auto& p : spectrum_sweep(R, n_rays, tol_imag, tol_residual).points) out.push_back(p.lambda);
        return out;
      },
      py::arg("R"), py::arg("n_rays") = 64, py::arg("tol_imag") = 1e-8, py::arg("tol_residual") = 1e-8);
  m.def("eigenvector", &eigenvector, py::arg("R"), py::arg("lambda_"), py::arg("tol") = 1e-8);
  m.def("no_eigenvalue_certificate", [](const RealLinearOperator& R) {
    const auto c = no_eigenvalue_certificate(R);
    return py::dict(py::arg("certified") = c.certified, py::arg("margin") = c.margin,
                    py::arg("skew_min_modulus") = c.skew_min_modulus, py::arg("remainder_norm") = c.remainder_norm);
  });
  m.def(
      "common_invariant_1d",
      [](const RealLinearOperator& R, double tol) {
        const auto lines = common_invariant_1d(R, tol);
        const char* cov = lines.coverage == LineCoverage::complete     ? "complete"
                          : lines.coverage == LineCoverage::degenerate ? "degenerate"
                                                                       : "partial";
        return py::make_tuple(lines.lines, cov);
      },
      py::arg("R"), py::arg("tol") = 1e-8);

  // numfun
  m.def("F_eval", &F_eval);
  m.def(
      "range_and_coverage",
      [](const RealLinearOperator& R, int n_rays) {
        const auto rep = range_and_coverage(R, n_rays);
        return py::dict(py::arg("f0") = rep.f0, py::arg("f_inf") = rep.f_inf,
                        py::arg("range") = py::make_tuple(rep.range_min, rep.range_max),
                        py::arg("fov") = py::make_tuple(rep.fov_min, rep.fov_max),
                        py::arg("uncovered_low") = rep.uncovered_low, py::arg("uncovered_high") = rep.uncovered_high);
      },
      py::arg("R"), py::arg("n_rays") = 128);

  // traceclass
  m.def("hankel_truncation", [](const std::vector<Complex>& coeffs, Eigen::Index n) {
    return hankel_truncation(SymbolSeries::hankel(coeffs), n);
  });
  m.def("disk_truncation",
        [](int mono, Eigen::Index n) { return disk_truncation(SymbolSeries::disk_monomial(mono), n); });
  m.def("phi_eval", &phi_eval);

  // json
  m.def("operator_from_json", [](const std::string& text) {
    return io::operator_from_json(io::parse_json(text));
  });
  m.def("operator_to_json", [](const RealLinearOperator& R) { return io::dump_json(io::operator_to_json(R)); });

  m.def("set_max_threads", &set_max_threads);
  m.def("max_threads", &max_threads);
}

#include <cmath>
#include <sstream>

#include "doctest.h"
#include "rlspec/io.hpp"
#include "support.hpp"

using namespace rlspec;
using namespace rlspec::testing;
namespace rio = rlspec::io;

TEST_CASE("format_double") {
  CHECK(rio::format_double(1.0) == "1.0000000000000000e+00");
  CHECK(rio::format_double(-0.25) == "-2.5000000000000000e-01");
  Rng rng(61);
  for (int k = 0; k < 200; ++k) {
    const double x = random_complex(rng, 1e3).real();
    CHECK(std::stod(rio::format_double(x)) == x);
  }
}

TEST_CASE("dump_json") {
  rio::json j;
  j["a"] = 0.5;
  j["b"] = {1.0, 2.0};
  j["c"] = std::numeric_limits<double>::infinity();
  j["d"] = 3;
  j["e"] = "text";
  const std::string out = rio::dump_json(j);
  CHECK(out == "{\n  \"a\": 5.0000000000000000e-01,\n  \"b\": [1.0000000000000000e+00, 2.0000000000000000e+00],\n"
               "  \"c\": null,\n  \"d\": 3,\n  \"e\": \"text\"\n}");
  CHECK(rio::parse_json(out)["b"][1].get<double>() == 2.0);
}

TEST_CASE("parse_json reports line and column") {
  const std::string text = "{\n  \"n\": 1,\n  \"C_re\": [[1.0,]]\n}";
  try {
    rio::parse_json(text, "op.json");
    FAIL("expected a validation error");
  } catch (const rio::ValidationError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("op.json:3:") == 0);
    CHECK(msg.find("\"C_re\": [[1.0,]]") != std::string::npos);
  }
}

TEST_CASE("operator JSON round trip") {
  Rng rng(62);
  for (int trial = 0; trial < 10; ++trial) {
    const auto R = random_operator(rng, random_dim(rng, 1, 5));
    const auto back = rio::operator_from_json(rio::parse_json(rio::dump_json(rio::operator_to_json(R))));
    CHECK(max_abs(back.C() - R.C()) == 0.0);
    CHECK(max_abs(back.B() - R.B()) == 0.0);
  }
}

TEST_CASE("operator JSON validation") {
  auto j = rio::operator_to_json(RealLinearOperator::identity(2));
  SUBCASE("missing field") {
    j.erase("B_im");
    CHECK_THROWS_WITH_AS(rio::operator_from_json(j), doctest::Contains("B_im"), rio::ValidationError);
  }
  SUBCASE("short row") {
    j["C_re"][1] = {1.0};
    CHECK_THROWS_AS(rio::operator_from_json(j), rio::ValidationError);
  }
  SUBCASE("bad dimension") {
    j["n"] = 0;
    CHECK_THROWS_AS(rio::operator_from_json(j), rio::ValidationError);
  }
  SUBCASE("non-numeric entry") {
    j["B_re"][0][0] = "x";
    CHECK_THROWS_AS(rio::operator_from_json(j), rio::ValidationError);
  }
}

TEST_CASE("coefficient matrix and SOS JSON") {
  const auto cm = coeff_matrix(eps_example(0.5));
  const auto back = rio::coeff_matrix_from_json(rio::parse_json(rio::dump_json(rio::coeff_matrix_to_json(cm))));
  CHECK(back.n == 2);
  CHECK(max_abs(back.H - cm.H) == 0.0);
  const auto sj = rio::sos_to_json(cholesky_sos(coeff_matrix(skew_example()).H));
  CHECK(sj["kind"] == "cholesky");
  CHECK(sj["d"].size() == 3);
  CHECK(sj["U_re"].size() == 3);
}

TEST_CASE("symbol JSON") {
  SUBCASE("round trip") {
    const auto s = SymbolSeries::geometric(Complex(1.0, -0.5), 0.5, 6);
    const auto back = rio::symbol_from_json(rio::symbol_to_json(s));
    CHECK(back.kind == SymbolKind::circle_hankel);
    CHECK(back.coeffs == s.coeffs);
    CHECK(back.decay.tag == DecayTag::geometric);
    CHECK(back.decay.param == 0.5);
  }
  SUBCASE("disk monomial without coefficients") {
    const auto s = rio::symbol_from_json(rio::parse_json(R"({"kind": "disk-monomial", "m": 3})"));
    CHECK(s.kind == SymbolKind::disk_monomial);
    CHECK(s.m == 3);
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(rio::symbol_from_json(rio::parse_json(R"({"kind": "annulus"})")), rio::ValidationError);
    CHECK_THROWS_AS(rio::symbol_from_json(rio::parse_json(R"({"kind": "disk-monomial", "m": -1})")),
                    rio::ValidationError);
    CHECK_THROWS_AS(
        rio::symbol_from_json(rio::parse_json(R"({"kind": "circle-hankel", "coeffs_re": [1, 2], "coeffs_im": [0]})")),
        rio::ValidationError);
    CHECK_THROWS_AS(rio::symbol_from_json(rio::parse_json(
                        R"({"kind": "circle-hankel", "coeffs_re": [1], "decay": {"tag": "fast", "param": 1}})")),
                    rio::ValidationError);
  }
}

TEST_CASE("spectrum CSV and SVG") {
  const auto cloud = spectrum_sweep(RealLinearOperator::conjugation(1), 4);
  std::ostringstream csv;
  rio::write_spectrum_csv(csv, cloud);
  std::istringstream in(csv.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "theta,r,re,im,residual");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 8);

  std::ostringstream again;
  rio::write_spectrum_csv(again, spectrum_sweep(RealLinearOperator::conjugation(1), 4));
  CHECK(again.str() == csv.str());

  std::ostringstream svg;
  rio::write_spectrum_svg(svg, cloud, 1.0);
  CHECK(svg.str().rfind("<svg", 0) == 0);
  CHECK(svg.str().find("</svg>") != std::string::npos);
}

TEST_CASE("phi CSV") {
  const std::vector<Complex> grid{Complex(1.0, 0.0), Complex(0.0, 2.0)};
  const std::vector<Eigen::Index> n_list{1, 2};
  const auto t = phi_converge(SymbolSeries::hankel({0.5}), grid, n_list);
  std::ostringstream os;
  rio::write_phi_csv(os, t);
  CHECK(os.str() ==
        "lambda_re,lambda_im,n1,n2\n"
        "1.0000000000000000e+00,0.0000000000000000e+00,7.5000000000000000e-01,7.5000000000000000e-01\n"
        "0.0000000000000000e+00,2.0000000000000000e+00,9.3750000000000000e-01,9.3750000000000000e-01\n");
}

TEST_CASE("numerical function report") {
  const auto rep = range_and_coverage(eps_example(0.5), 8);
  const auto j = rio::numfun_report_to_json(rep);
  for (const char* key : {"f0", "f_inf", "range_est", "fov", "uncovered_low", "uncovered_high", "grid"})
    CHECK(j.contains(key));
  CHECK(j["range_est"][0].get<double>() == doctest::Approx(1.0 / 3.0));
  CHECK(j["fov"][0].get<double>() == doctest::Approx(-1.0));
  std::ostringstream os;
  rio::write_ray_minima_csv(os, rep);
  CHECK(os.str().rfind("theta,r_min_F,F_min\n", 0) == 0);
}

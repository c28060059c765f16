#include <algorithm>
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "rlspec/charpoly.hpp"
#include "rlspec/spectrum.hpp"
#include "support.hpp"

using namespace rlspec;
using namespace rlspec::testing;

namespace {
constexpr double kPi = std::numbers::pi;

double angle_gap(double a, double b) {
  const double d = std::fmod(std::abs(a - b), 2.0 * kPi);
  return std::min(d, 2.0 * kPi - d);
}

// Largest distance from a point of `from` to the nearest point of `to`.
double directed_hausdorff(const std::vector<Complex>& from, const std::vector<Complex>& to) {
  double worst = 0.0;
  for (const auto& a : from) {
    double best = INFINITY;
    for (const auto& b : to) best = std::min(best, std::abs(a - b));
    worst = std::max(worst, best);
  }
  return worst;
}

// Complex-linear operator with prescribed eigenvalues and a mildly non-normal eigenbasis.
Matrix with_eigenvalues(Rng& rng, const std::vector<Complex>& eig) {
  const auto n = static_cast<Eigen::Index>(eig.size());
  Matrix T = Matrix::Identity(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) T(i, j) = random_complex(rng, 0.2);
  const Matrix V = random_unitary(rng, n) * T;
  Matrix D = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) D(i, i) = eig[static_cast<std::size_t>(i)];
  return V * D * V.inverse();
}
}  // namespace

TEST_CASE("ray_spectrum") {
  SUBCASE("tau on C^1 hits the unit circle on both rays") {
    for (double theta : {0.0, 0.3, 1.0, 2.0, 3.0}) {
      const auto hits = ray_spectrum(RealLinearOperator::conjugation(1), theta);
      REQUIRE(hits.size() == 2);
      for (const auto& h : hits) CHECK(std::abs(h.r - 1.0) <= 1e-12);
      CHECK(angle_gap(hits[0].theta, hits[1].theta) == doctest::Approx(kPi));
      CHECK((angle_gap(hits[0].theta, theta) < 1e-12 || angle_gap(hits[1].theta, theta) < 1e-12));
    }
  }
  SUBCASE("identity") {
    const auto on = ray_spectrum(RealLinearOperator::identity(2), 0.0);
    REQUIRE(on.size() == 1);
    CHECK(on[0].theta == 0.0);
    CHECK(on[0].r == doctest::Approx(1.0));
    CHECK(ray_spectrum(RealLinearOperator::identity(2), kPi / 2.0).empty());
  }
  SUBCASE("skew example has no hits") {
    for (int k = 0; k < 32; ++k) CHECK(ray_spectrum(skew_example(), kPi * k / 32.0).empty());
  }
  SUBCASE("negative eigenvalues land on the opposite ray") {
    const auto hits = ray_spectrum(Complex(-2.0) * RealLinearOperator::identity(1), 0.0);
    REQUIRE(hits.size() == 1);
    CHECK(hits[0].theta == doctest::Approx(kPi));
    CHECK(hits[0].r == doctest::Approx(2.0));
  }
}

TEST_CASE("spectrum_sweep on closed-form examples") {
  SUBCASE("tau: unit circle") {
    const auto cloud = spectrum_sweep(RealLinearOperator::conjugation(1), 64);
    CHECK(cloud.points.size() == 128);
    CHECK(cloud.rejected == 0);
    for (std::size_t k = 0; k < cloud.points.size(); ++k) {
      const auto& p = cloud.points[k];
      CHECK(std::abs(p.r - 1.0) <= 1e-10);
      CHECK(p.theta == doctest::Approx(kPi * static_cast<double>(k) / 64.0));
      CHECK(std::abs(p.lambda - std::polar(1.0, p.theta)) <= 1e-12);
    }
  }
  SUBCASE("diag(1, 2i)") {
    Matrix C = Matrix::Zero(2, 2);
    C(0, 0) = 1.0;
    C(1, 1) = Complex(0.0, 2.0);
    const auto cloud = spectrum_sweep(RealLinearOperator::complex_linear(C), 8);
    REQUIRE(cloud.points.size() == 2);
    CHECK(std::abs(cloud.points[0].lambda - Complex(1.0)) <= 1e-12);
    CHECK(std::abs(cloud.points[1].lambda - Complex(0.0, 2.0)) <= 1e-12);
  }
  SUBCASE("epsilon example: empty") {
    for (double eps : {0.25, 0.5, 0.9}) CHECK(spectrum_sweep(eps_example(eps), 64).points.empty());
  }
  SUBCASE("invalid ray count") { CHECK_THROWS_AS(spectrum_sweep(RealLinearOperator::identity(1), 0), std::invalid_argument); }
}

TEST_CASE("spectrum_sweep recovers eigenvalues of complex-linear operators on hit rays") {
  Rng rng(31);
  const int n_rays = 64;
  for (int trial = 0; trial < 30; ++trial) {
    const auto n = random_dim(rng, 1, 6);
    std::vector<Complex> eig;
    std::vector<Complex> on_grid;
    for (Eigen::Index i = 0; i < n; ++i) {
      const int k = static_cast<int>(random_dim(rng, 0, 2 * n_rays - 1));
      const double r = 0.1 + 1.9 * std::uniform_real_distribution<double>(0.0, 1.0)(rng);
      const bool hit = i % 2 == 0;
      const double theta = kPi * (k + (hit ? 0.0 : 0.5)) / n_rays;
      eig.push_back(std::polar(r, theta));
      if (hit) on_grid.push_back(eig.back());
    }
    const auto R = RealLinearOperator::complex_linear(with_eigenvalues(rng, eig));
    const auto cloud = spectrum_sweep(R, n_rays);
    std::vector<Complex> found;
    for (const auto& p : cloud.points) found.push_back(p.lambda);
    CHECK(directed_hausdorff(found, on_grid) <= 1e-8);
    CHECK(directed_hausdorff(on_grid, found) <= 1e-8);
  }
}

TEST_CASE("spectrum_sweep invariants on random operators") {
  Rng rng(32);
  for (int trial = 0; trial < 30; ++trial) {
    const auto n = random_dim(rng, 1, 6);
    const auto R = random_operator(rng, n);
    const auto cloud = spectrum_sweep(R, 48);
    const double norm = operator_norm(R);
    for (const auto& p : cloud.points) {
      CHECK(p.residual <= 1e-8 * std::pow(1.0 + p.r, 2.0 * static_cast<double>(n)));
      CHECK(p.r <= norm + 1e-8);
      CHECK(eigenvector(R, p.lambda, 1e-7).has_value());
    }
    CHECK(std::is_sorted(cloud.points.begin(), cloud.points.end(), [](const auto& a, const auto& b) {
      return a.theta != b.theta ? a.theta < b.theta : a.r < b.r;
    }));

    const auto certs = emptiness_certificates(R);
    if (certs.real_axis_zero) {
      const auto hits = ray_spectrum(R, 0.0);
      double best = INFINITY;
      for (const auto& h : hits)
        if (h.theta == 0.0) best = std::min(best, std::abs(h.r - certs.real_axis_zero->r));
      CHECK(best <= 1e-6);
    }
  }
}

TEST_CASE("antilinear operators have rotation-invariant spectra") {
  Rng rng(33);
  for (int trial = 0; trial < 20; ++trial) {
    const auto n = random_dim(rng, 1, 6);
    const auto R = RealLinearOperator::antilinear(random_matrix(rng, n, 0.5 / std::sqrt(double(n))));
    const auto reference = ray_spectrum(R, 0.0);
    std::vector<double> ref_r;
    for (const auto& h : reference)
      if (h.theta == 0.0) ref_r.push_back(h.r);
    for (int k = 1; k < 16; ++k) {
      const double theta = kPi * k / 16.0;
      std::vector<double> rs;
      for (const auto& h : ray_spectrum(R, theta))
        if (angle_gap(h.theta, theta) < 1e-12) rs.push_back(h.r);
      REQUIRE(rs.size() == ref_r.size());
      for (std::size_t i = 0; i < rs.size(); ++i) CHECK(std::abs(rs[i] - ref_r[i]) <= 1e-8);
    }
  }
}

TEST_CASE("eigenvector") {
  SUBCASE("identity") {
    const auto x = eigenvector(RealLinearOperator::identity(3), 1.0);
    REQUIRE(x.has_value());
    CHECK(x->norm() == doctest::Approx(1.0));
    CHECK((rlspec::apply(RealLinearOperator::identity(3), *x) - *x).norm() <= 1e-12);
  }
  SUBCASE("tau at lambda = 1 gives a real vector") {
    const auto x = eigenvector(RealLinearOperator::conjugation(2), 1.0);
    REQUIRE(x.has_value());
    CHECK(x->imag().norm() <= 1e-12);
  }
  SUBCASE("tau around the circle") {
    for (double phi : {0.4, 1.3, 2.9, 4.0}) {
      const Complex l = std::polar(1.0, phi);
      const auto x = eigenvector(RealLinearOperator::conjugation(1), l);
      REQUIRE(x.has_value());
      // x = e^{-i phi / 2} times a real number.
      const Complex u = (*x)(0) * std::polar(1.0, phi / 2.0);
      CHECK(std::abs(u.imag()) <= 1e-12);
      CHECK(std::abs(std::conj((*x)(0)) - l * (*x)(0)) <= 1e-12);
    }
  }
  SUBCASE("absent off the spectrum") {
    CHECK_FALSE(eigenvector(RealLinearOperator::identity(2), 2.0).has_value());
    CHECK_FALSE(eigenvector(skew_example(), 0.0).has_value());
  }
  SUBCASE("residual bound on random spectral points") {
    Rng rng(34);
    for (int trial = 0; trial < 20; ++trial) {
      const auto n = random_dim(rng, 1, 5);
      const auto R = random_operator(rng, n);
      for (const auto& h : ray_spectrum(R, 0.7)) {
        const Complex l = std::polar(h.r, h.theta);
        const double tol = 1e-8;
        const auto x = eigenvector(R, l, tol);
        REQUIRE(x.has_value());
        const double scale = 1.0 + operator_norm(R) + std::abs(l);
        CHECK((rlspec::apply(R, *x) - l * *x).norm() <= 10.0 * tol * scale);
      }
    }
  }
}

TEST_CASE("no_eigenvalue_certificate") {
  const auto skew = no_eigenvalue_certificate(skew_example());
  CHECK(skew.certified);
  CHECK(skew.margin == doctest::Approx(1.0));
  CHECK(skew.remainder_norm == doctest::Approx(0.0));

  const auto id = no_eigenvalue_certificate(RealLinearOperator::identity(2));
  CHECK_FALSE(id.certified);
  CHECK(id.skew_min_modulus == 0.0);

  Rng rng(35);
  int certified = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const Eigen::Index n = 2 * random_dim(rng, 1, 3);
    const Matrix G = random_matrix(rng, n);
    const Matrix skewB = G - G.transpose();
    const Matrix small = random_matrix(rng, n, 0.05);
    const RealLinearOperator R(random_matrix(rng, n, 0.05), skewB + small);
    const auto cert = no_eigenvalue_certificate(R);
    if (!cert.certified) continue;
    ++certified;
    CHECK(spectrum_sweep(R, 32).points.empty());
    CHECK(emptiness_certificates(R).det_complexification > 0.0);
  }
  CHECK(certified >= 10);
}

TEST_CASE("common_invariant_1d") {
  SUBCASE("displayed example has no invariant line") {
    const auto out = common_invariant_1d(jordan_example());
    CHECK(out.lines.empty());
    CHECK(out.coverage == LineCoverage::partial);
  }
  SUBCASE("identity: every line, basis reported") {
    const auto out = common_invariant_1d(RealLinearOperator::identity(2));
    CHECK(out.lines.size() == 2);
    CHECK(out.coverage == LineCoverage::degenerate);
  }
  SUBCASE("diag(1, 2)") {
    Matrix C = Matrix::Zero(2, 2);
    C(0, 0) = 1.0;
    C(1, 1) = 2.0;
    const auto out = common_invariant_1d(RealLinearOperator::complex_linear(C));
    REQUIRE(out.lines.size() == 2);
    CHECK(out.coverage == LineCoverage::complete);
    int e1 = 0;
    int e2 = 0;
    for (const auto& x : out.lines) {
      if (std::abs(std::abs(x(0)) - 1.0) < 1e-12) ++e1;
      if (std::abs(std::abs(x(1)) - 1.0) < 1e-12) ++e2;
    }
    CHECK(e1 == 1);
    CHECK(e2 == 1);
  }
  SUBCASE("planted common line is found") {
    Rng rng(36);
    for (int trial = 0; trial < 20; ++trial) {
      const auto n = random_dim(rng, 2, 5);
      const Matrix Q = random_unitary(rng, n);
      const Vector x = Q.col(0);
      // C and B tau both preserve span{x}: block upper triangular in the basis Q.
      Matrix Ct = random_matrix(rng, n);
      Matrix Bt = random_matrix(rng, n);
      for (Eigen::Index i = 1; i < n; ++i) {
        Ct(i, 0) = 0.0;
        Bt(i, 0) = 0.0;
      }
      const Matrix C = Q * Ct * Q.adjoint();
      const Matrix B = Q * Bt * Q.transpose();
      const auto out = common_invariant_1d(RealLinearOperator(C, B));
      bool seen = false;
      for (const auto& l : out.lines) seen = seen || std::abs(std::abs(l.dot(x)) - 1.0) < 1e-8;
      CHECK(seen);
    }
  }
  SUBCASE("two-dimensional eigenspace with a symmetric antilinear part") {
    Rng rng(37);
    for (int trial = 0; trial < 20; ++trial) {
      const Matrix G = random_matrix(rng, 2);
      const Matrix B = G + G.transpose();
      const RealLinearOperator R(Matrix::Identity(2, 2), B);
      const auto out = common_invariant_1d(R);
      CHECK(out.lines.size() >= 2);
      for (const auto& l : out.lines) {
        const Vector bx = B * l.conjugate();
        CHECK((bx - l.dot(bx) * l).norm() <= 1e-8 * (1.0 + operator_norm(R)));
      }
    }
  }
  SUBCASE("every reported line is invariant") {
    Rng rng(38);
    for (int trial = 0; trial < 40; ++trial) {
      const auto n = random_dim(rng, 1, 5);
      const auto R = random_operator(rng, n);
      for (const auto& l : common_invariant_1d(R).lines) {
        const Vector cx = R.C() * l;
        const Vector bx = R.B() * l.conjugate();
        CHECK((cx - l.dot(cx) * l).norm() <= 1e-6);
        CHECK((bx - l.dot(bx) * l).norm() <= 1e-6);
      }
    }
  }
}

TEST_CASE("krylov_cspan") {
  SUBCASE("tau, e1") {
    const auto k = krylov_cspan(RealLinearOperator::conjugation(3), Vector::Unit(3, 0), 3);
    CHECK(k.basis.cols() == 1);
    CHECK(k.residuals(0) == 0.0);
  }
  SUBCASE("antilinear operators: the complex span of powers is invariant") {
    Rng rng(39);
    for (int trial = 0; trial < 200; ++trial) {
      const auto n = random_dim(rng, 1, 6);
      const auto R = RealLinearOperator::antilinear(random_matrix(rng, n, 0.5 / std::sqrt(double(n))));
      const auto k = krylov_cspan(R, random_vector(rng, n), n);
      CHECK(max_abs(k.basis.adjoint() * k.basis - Matrix::Identity(k.basis.cols(), k.basis.cols())) <= 1e-12);
      CHECK(k.residuals.maxCoeff() <= 1e-10);
    }
  }
  SUBCASE("displayed example fills the space from e1") {
    const auto k = krylov_cspan(jordan_example(), Vector::Unit(2, 0), 2);
    CHECK(k.basis.cols() == 2);
    CHECK(k.residuals.maxCoeff() <= 1e-12);
  }
  SUBCASE("general real linear operators may leave the span") {
    Rng rng(40);
    double worst = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
      const auto R = random_operator(rng, 4);
      const auto k = krylov_cspan(R, random_vector(rng, 4), 2);
      worst = std::max(worst, k.residuals.maxCoeff());
    }
    CHECK(worst > 1e-3);
  }
  SUBCASE("zero vector is refused") {
    CHECK_THROWS_AS(krylov_cspan(RealLinearOperator::identity(2), Vector::Zero(2), 2), std::invalid_argument);
  }
}

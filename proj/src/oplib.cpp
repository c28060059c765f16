#include "rlspec/oplib.hpp"

#include <cmath>

namespace rlspec {

namespace {

void require_same_dim(const RealLinearOperator& a, const RealLinearOperator& b, const char* what) {
  if (a.n() != b.n()) {
    throw DimensionError(std::string(what) + ": dimension mismatch (" + std::to_string(a.n()) + " vs " +
                         std::to_string(b.n()) + ")");
  }
}

}  // namespace

RealLinearOperator::RealLinearOperator(Matrix C, Matrix B) : C_(std::move(C)), B_(std::move(B)) {
  if (C_.rows() < 1 || C_.rows() != C_.cols()) {
    throw DimensionError("RealLinearOperator: C must be square with n >= 1");
  }
  if (B_.rows() != C_.rows() || B_.cols() != C_.cols()) {
    throw DimensionError("RealLinearOperator: B must have the same shape as C");
  }
}

RealLinearOperator RealLinearOperator::zero(Eigen::Index n) {
  return {Matrix::Zero(n, n), Matrix::Zero(n, n)};
}

RealLinearOperator RealLinearOperator::identity(Eigen::Index n) {
  return {Matrix::Identity(n, n), Matrix::Zero(n, n)};
}

RealLinearOperator RealLinearOperator::conjugation(Eigen::Index n) {
  return {Matrix::Zero(n, n), Matrix::Identity(n, n)};
}

RealLinearOperator RealLinearOperator::complex_linear(Matrix C) {
  const auto n = C.rows();
  return {std::move(C), Matrix::Zero(n, n)};
}

RealLinearOperator RealLinearOperator::antilinear(Matrix B) {
  const auto n = B.rows();
  return {Matrix::Zero(n, n), std::move(B)};
}

bool RealLinearOperator::is_complex_linear(double tol) const {
  return B_.cwiseAbs().maxCoeff() <= tol;
}

bool RealLinearOperator::is_antilinear(double tol) const {
  return C_.cwiseAbs().maxCoeff() <= tol;
}

RealLinearOperator RealLinearOperator::operator+(const RealLinearOperator& other) const {
  require_same_dim(*this, other, "operator+");
  return {C_ + other.C_, B_ + other.B_};
}

RealLinearOperator RealLinearOperator::operator-(const RealLinearOperator& other) const {
  require_same_dim(*this, other, "operator-");
  return {C_ - other.C_, B_ - other.B_};
}

RealLinearOperator operator*(Complex s, const RealLinearOperator& R) {
  return {s * R.C(), s * R.B()};
}

RealLinearOperator shift(const RealLinearOperator& R, Complex s) {
  Matrix C = R.C();
  C.diagonal().array() -= s;
  return {std::move(C), R.B()};
}

Vector apply(const RealLinearOperator& R, const Vector& z) {
  if (z.size() != R.n()) {
    throw DimensionError("apply: vector length " + std::to_string(z.size()) + " does not match n = " +
                         std::to_string(R.n()));
  }
  return R.C() * z + R.B() * z.conjugate();
}

RealLinearOperator parts_from_action(const std::function<Vector(const Vector&)>& f, Eigen::Index n) {
  if (n < 1) throw DimensionError("parts_from_action: n must be positive");
  const Complex I(0.0, 1.0);
  Matrix C(n, n);
  Matrix B(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    Vector e = Vector::Zero(n);
    e(k) = 1.0;
    const Vector fe = f(e);
    const Vector fie = f(I * e);
    if (fe.size() != n || fie.size() != n) {
      throw DimensionError("parts_from_action: sampled map returned a vector of the wrong length");
    }
    C.col(k) = 0.5 * (fe - I * fie);
    B.col(k) = 0.5 * (fe + I * fie);
  }
  return {std::move(C), std::move(B)};
}

RealLinearOperator compose(const RealLinearOperator& R1, const RealLinearOperator& R2) {
  require_same_dim(R1, R2, "compose");
  Matrix C = R1.C() * R2.C() + R1.B() * R2.B().conjugate();
  Matrix B = R1.C() * R2.B() + R1.B() * R2.C().conjugate();
  return {std::move(C), std::move(B)};
}

RealLinearOperator adjoint(const RealLinearOperator& R) {
  return {R.C().adjoint(), R.B().transpose()};
}

Matrix complexify(const RealLinearOperator& R) {
  const auto n = R.n();
  Matrix M(2 * n, 2 * n);
  M.topLeftCorner(n, n) = R.C();
  M.topRightCorner(n, n) = R.B();
  M.bottomLeftCorner(n, n) = R.B().conjugate();
  M.bottomRightCorner(n, n) = R.C().conjugate();
  return M;
}

RealMatrix realify(const RealLinearOperator& R) {
  // C z + B conj(z) with z = x + i y:
  //   Re = (Cr + Br) x + (Bi - Ci) y,  Im = (Ci + Bi) x + (Cr - Br) y
  const auto n = R.n();
  const RealMatrix Cr = R.C().real();
  const RealMatrix Ci = R.C().imag();
  const RealMatrix Br = R.B().real();
  const RealMatrix Bi = R.B().imag();
  RealMatrix M(2 * n, 2 * n);
  M.topLeftCorner(n, n) = Cr + Br;
  M.topRightCorner(n, n) = Bi - Ci;
  M.bottomLeftCorner(n, n) = Ci + Bi;
  M.bottomRightCorner(n, n) = Cr - Br;
  return M;
}

Vector stack_to_complex(const RealVector& x) {
  const auto n = x.size() / 2;
  Vector z(n);
  for (Eigen::Index k = 0; k < n; ++k) z(k) = Complex(x(k), x(n + k));
  return z;
}

RealVector complex_to_stack(const Vector& z) {
  const auto n = z.size();
  RealVector x(2 * n);
  x.head(n) = z.real();
  x.tail(n) = z.imag();
  return x;
}

double operator_norm(const RealLinearOperator& R) {
  Eigen::JacobiSVD<RealMatrix> svd(realify(R));
  return svd.singularValues()(0);
}

double min_modulus(const RealLinearOperator& R) {
  Eigen::JacobiSVD<RealMatrix> svd(realify(R));
  const auto& s = svd.singularValues();
  return s(s.size() - 1);
}

double min_modulus(const Matrix& M) {
  if (M.rows() == 0 || M.cols() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(M);
  const auto& s = svd.singularValues();
  // A wide matrix always has a kernel.
  if (M.cols() > M.rows()) return 0.0;
  return s(s.size() - 1);
}

double matrix_schatten_norm(const Matrix& M, double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("schatten norm: p must be >= 1");
  Eigen::JacobiSVD<Matrix> svd(M);
  double acc = 0.0;
  for (double s : svd.singularValues()) acc += std::pow(s, p);
  return std::pow(acc, 1.0 / p);
}

double schatten_norm(const RealLinearOperator& R, double p) {
  return matrix_schatten_norm(R.C(), p) + matrix_schatten_norm(R.B(), p);
}

RealLinearOperator poly_apply(std::span<const Complex> coeffs, const RealLinearOperator& R) {
  const auto n = R.n();
  RealLinearOperator acc = RealLinearOperator::zero(n);
  if (coeffs.empty()) return acc;
  // Horner: a_0 + R(a_1 + R(a_2 + ...)) is wrong for real linear R since R(a x) != a R(x),
  // so accumulate explicit powers instead.
  RealLinearOperator power = RealLinearOperator::identity(n);
  for (std::size_t j = 0; j < coeffs.size(); ++j) {
    if (j > 0) power = compose(R, power);
    if (coeffs[j] != Complex(0.0)) acc = acc + coeffs[j] * power;
  }
  return acc;
}

}  // namespace rlspec

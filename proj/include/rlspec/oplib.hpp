#pragma once

// Finite-rank real linear operators on C^n, stored as z -> C z + B conj(z).

#include <complex>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace rlspec {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

/// Raised when operand shapes do not agree.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a numerical routine cannot produce a trustworthy result.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class RealLinearOperator {
 public:
  /// C is the complex linear part, B the matrix of the antilinear part B*tau.
  RealLinearOperator(Matrix C, Matrix B);

  static RealLinearOperator zero(Eigen::Index n);
  static RealLinearOperator identity(Eigen::Index n);
  /// Componentwise conjugation tau.
  static RealLinearOperator conjugation(Eigen::Index n);
  static RealLinearOperator complex_linear(Matrix C);
  static RealLinearOperator antilinear(Matrix B);

  Eigen::Index n() const { return C_.rows(); }
  const Matrix& C() const { return C_; }
  const Matrix& B() const { return B_; }

  bool is_complex_linear(double tol = 0.0) const;
  bool is_antilinear(double tol = 0.0) const;

  RealLinearOperator operator+(const RealLinearOperator& other) const;
  RealLinearOperator operator-(const RealLinearOperator& other) const;

 private:
  Matrix C_;
  Matrix B_;
};

/// Left scalar multiplication z -> s * R(z).
RealLinearOperator operator*(Complex s, const RealLinearOperator& R);

/// R - s I, with the shift acting on the complex linear part.
RealLinearOperator shift(const RealLinearOperator& R, Complex s);

Vector apply(const RealLinearOperator& R, const Vector& z);

/// Recovers (C, B) from a real linear map sampled on e_k and i e_k:
/// C e_k = (f(e_k) - i f(i e_k)) / 2, B e_k = (f(e_k) + i f(i e_k)) / 2.
RealLinearOperator parts_from_action(const std::function<Vector(const Vector&)>& f, Eigen::Index n);

/// (R1 R2)(z) = R1(R2(z)).
RealLinearOperator compose(const RealLinearOperator& R1, const RealLinearOperator& R2);

/// Adjoint with respect to Re<x, y>: (C^*, B^T).
RealLinearOperator adjoint(const RealLinearOperator& R);

/// [[C, B], [conj(B), conj(C)]].
Matrix complexify(const RealLinearOperator& R);

/// Real 2n x 2n matrix acting on stacked (Re z, Im z).
RealMatrix realify(const RealLinearOperator& R);

Vector stack_to_complex(const RealVector& x);
RealVector complex_to_stack(const Vector& z);

double operator_norm(const RealLinearOperator& R);

/// Smallest singular value of the realification, i.e. inf ||R x|| over unit x.
double min_modulus(const RealLinearOperator& R);
double min_modulus(const Matrix& M);

/// Schatten p-norm of a complex matrix from its singular values.
double matrix_schatten_norm(const Matrix& M, double p);

/// ||C||_p + ||A||_p, where the singular values of A = B tau are those of B.
double schatten_norm(const RealLinearOperator& R, double p);

/// sum_j a_j R^j with a_j acting by left multiplication.
RealLinearOperator poly_apply(std::span<const Complex> coeffs, const RealLinearOperator& R);

}  // namespace rlspec

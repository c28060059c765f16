#pragma once

// Characteristic polynomial p(lambda, conj(lambda)) = det (R - lambda)^C of a finite-rank
// real linear operator, its Hermitian coefficient matrix and sum-of-squares forms.

#include <optional>
#include <vector>

#include "rlspec/oplib.hpp"

namespace rlspec {

/// Entry (i, j) of H multiplies lambda^j conj(lambda)^i, so that p = v^* H v with
/// v = (1, lambda, ..., lambda^n).
struct CoeffMatrix {
  Eigen::Index n = 0;
  Matrix H;
  /// max |H - H^*| / 2 before the Hermitian projection.
  double asymmetry = 0.0;
  /// Largest condition number among the per-diagonal radial fits (1 for exact mode).
  double radial_condition = 1.0;
};

enum class CoeffMode { interpolation, exact };

enum class SosKind { eigen, cholesky };

/// p = sum_i d_i |p_i(lambda)|^2 with p_i(lambda) = sum_j U(i, j) lambda^j.
struct SosDecomposition {
  RealVector d;
  Matrix U;
  SosKind kind = SosKind::eigen;

  /// Coefficient row i evaluated at lambda.
  Complex eval_poly(Eigen::Index i, Complex lambda) const;
  double eval(Complex lambda) const;
};

class NotPositiveDefinite : public NumericalError {
 public:
  NotPositiveDefinite(double smallest_eigenvalue, double threshold);
  double smallest_eigenvalue() const { return smallest_eigenvalue_; }

 private:
  double smallest_eigenvalue_;
};

/// det of complexify(R) with lambda and conj(lambda) subtracted on the diagonal blocks.
/// The imaginary part of the determinant is roundoff and is discarded.
double charpoly_eval(const RealLinearOperator& R, Complex lambda);

/// Same determinant without discarding the imaginary part (diagnostics).
Complex charpoly_eval_complex(const RealLinearOperator& R, Complex lambda);

/// det complexify(R).
double det_complexification(const RealLinearOperator& R);

/// v_lambda^* H v_lambda.
double eval_coeff_matrix(const Matrix& H, Complex lambda);

struct CoeffOptions {
  CoeffMode mode = CoeffMode::interpolation;
  /// Post-projection asymmetry above asymmetry_tol * (1 + max|H|) is an error.
  double asymmetry_tol = 1e-6;
  /// Radial fits with a larger condition estimate are rejected.
  double max_radial_condition = 1e13;
};

/// Interpolation mode: samples p on 2n+1 equispaced angles times n+3 Chebyshev radii in
/// [s/2, 2s], s = 1 + ||R||, splits the angular frequencies by a DFT and fits each diagonal
/// of H in r^2 by least squares. Exact mode: principal-minor expansion of
/// det(K - diag(x I, y I)) with x, y independent indeterminates (n <= 6).
CoeffMatrix coeff_matrix(const RealLinearOperator& R, const CoeffOptions& options = {});

/// H = U^* diag(d) U with U unitary and d ascending.
SosDecomposition sos_decompose(const Matrix& H);

/// Cholesky of the order-reversed H; p_i has degree exactly i and all weights are one.
/// Throws NotPositiveDefinite when lambda_min(H) <= pd_threshold * ||H||.
SosDecomposition cholesky_sos(const Matrix& H, double pd_threshold = 1e-10);

struct RealAxisZero {
  double r = 0.0;
  double value = 0.0;
};

struct EmptinessCertificates {
  double det_complexification = 0.0;
  double smallest_eigenvalue = 0.0;
  /// Present when H is positive definite: sigma(R) is empty.
  std::optional<SosDecomposition> pd_certificate;
  /// Present when det R^C <= 0: a zero of p(r, r) on [0, 1 + ||R||].
  std::optional<RealAxisZero> real_axis_zero;

  bool inconclusive() const { return !pd_certificate && !real_axis_zero; }
};

EmptinessCertificates emptiness_certificates(const RealLinearOperator& R, double pd_threshold = 1e-10,
                                             double r_tol = 1e-10);

/// Checks that the coefficients of p_{R^*} are the complex conjugates of those of p_R.
bool adjoint_coeff_check(const RealLinearOperator& R, double tol = 1e-9);

/// exp(-i theta) C + B tau; p(e^{i theta} r, e^{-i theta} r) = p_rotated(r, r).
RealLinearOperator rotate(const RealLinearOperator& R, double theta);

}  // namespace rlspec

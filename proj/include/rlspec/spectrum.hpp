#pragma once

// The spectrum of a finite-rank real linear operator as a point cloud, sampled one line
// through the origin at a time, plus the invariant-subspace and eigenvalue-free criteria.

#include <optional>
#include <vector>

#include "rlspec/oplib.hpp"

namespace rlspec {

struct RayHit {
  double theta = 0.0;  // in [0, 2 pi)
  double r = 0.0;
  /// |Im| of the complexification eigenvalue that produced the hit.
  double imag_residual = 0.0;
};

/// Real eigenvalues of complexify(rotate(R, theta)). Nonnegative ones lie on the ray at theta,
/// negative ones on the ray at theta + pi. An eigenvalue is real when
/// |Im| <= tol_imag * (1 + |eig|). Hits closer than 1e-6 (1 + r) on the same ray are merged.
std::vector<RayHit> ray_spectrum(const RealLinearOperator& R, double theta, double tol_imag = 1e-8);

struct SpectralPoint {
  double theta = 0.0;
  double r = 0.0;
  Complex lambda;
  /// |p(lambda, conj(lambda))|
  double residual = 0.0;
};

struct SpectrumCloud {
  std::vector<SpectralPoint> points;
  double tol_imag = 1e-8;
  double tol_residual = 1e-8;
  int n_rays = 0;
  /// Ray hits dropped because |p| exceeded tol_residual (1 + |lambda|)^{2n}.
  int rejected = 0;
};

/// Sweeps theta_k = k pi / n_rays, k < n_rays; each solve covers the rays at theta_k and
/// theta_k + pi. Points are sorted by theta, then r.
SpectrumCloud spectrum_sweep(const RealLinearOperator& R, int n_rays, double tol_imag = 1e-8,
                             double tol_residual = 1e-8);

/// Unit x with R x = lambda x, from the smallest singular vector of realify(R - lambda).
/// Absent when that singular value exceeds tol * (1 + ||R|| + |lambda|).
std::optional<Vector> eigenvector(const RealLinearOperator& R, Complex lambda, double tol = 1e-8);

/// ||R_hat|| < j(T) with T = (A - A^*)/2 and R_hat = C + (A + A^*)/2 rules out eigenvalues.
struct NoEigenvalueCertificate {
  bool certified = false;
  /// j(T) - ||R_hat||
  double margin = 0.0;
  double skew_min_modulus = 0.0;
  double remainder_norm = 0.0;
};

NoEigenvalueCertificate no_eigenvalue_certificate(const RealLinearOperator& R);

enum class LineCoverage {
  /// Every invariant complex line is listed.
  complete,
  /// Some eigenspace of C carries infinitely many invariant lines; a basis of them is listed.
  degenerate,
  /// Defective C or an eigenspace of dimension > 2 was not fully resolved.
  partial,
};

struct InvariantLines {
  std::vector<Vector> lines;
  LineCoverage coverage = LineCoverage::complete;
};

/// Complex lines span{x} invariant under R, i.e. under both C and B tau.
InvariantLines common_invariant_1d(const RealLinearOperator& R, double tol = 1e-8);

struct KrylovSpan {
  /// Orthonormal columns spanning span_C {y, R y, R^2 y, ...}.
  Matrix basis;
  /// ||(I - P) R q_k|| for each basis column q_k.
  RealVector residuals;
};

KrylovSpan krylov_cspan(const RealLinearOperator& R, const Vector& y, Eigen::Index max_dim, double tol = 1e-10);

}  // namespace rlspec

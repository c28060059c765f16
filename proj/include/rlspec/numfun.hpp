#pragma once

// The numerical function F(lambda) = p(lambda, conj(lambda)) / sum_j |lambda|^{2j} and its
// range relative to the field of values of the coefficient matrix H.

#include <limits>
#include <vector>

#include "rlspec/charpoly.hpp"

namespace rlspec {

/// v^* H v / ||v||^2 with v = (1, lambda, ..., lambda^n); overflow-safe for large |lambda|.
double F_eval(const Matrix& H, Complex lambda);

struct ConvexCombination {
  /// |p_i(lambda)|^2 / sum_j |p_j(lambda)|^2
  RealVector weights;
  /// sum_i d_i weights_i
  double value = 0.0;
};

/// Requires an eigen-kind decomposition.
ConvexCombination convex_comb_check(const SosDecomposition& sos, Complex lambda);
ConvexCombination convex_comb_check(const Matrix& H, Complex lambda);

struct RayCriticalPoint {
  /// +infinity stands for the limit |lambda| -> infinity.
  double r = 0.0;
  double F = 0.0;
  /// False when Newton polishing of the root did not converge.
  bool converged = true;
};

/// Critical points of r -> F(r e^{i theta}) on [0, r_max], plus r = 0 and the limit at infinity.
std::vector<RayCriticalPoint> F_ray_extrema(const Matrix& H, double theta,
                                            double r_max = std::numeric_limits<double>::infinity());

struct RayMinimum {
  double theta = 0.0;
  double r = 0.0;
  double F = 0.0;
};

struct NumFunReport {
  double f0 = 0.0;
  double f_inf = 0.0;
  double range_min = 0.0;
  double range_max = 0.0;
  double fov_min = 0.0;
  double fov_max = 0.0;
  double uncovered_low = 0.0;
  double uncovered_high = 0.0;
  int n_rays = 0;
  double r_max = std::numeric_limits<double>::infinity();
  /// Roots whose Newton polish failed, over all rays.
  int unconverged_roots = 0;
  std::vector<RayMinimum> ray_minima;
};

/// Range of F from exact per-ray extrema over theta_k = 2 pi k / n_rays, against
/// W(H) = [lambda_min(H), lambda_max(H)].
NumFunReport range_and_coverage(const Matrix& H, int n_rays = 128,
                                double r_max = std::numeric_limits<double>::infinity());

/// Same, with r_max = 10 (1 + ||R||).
NumFunReport range_and_coverage(const RealLinearOperator& R, int n_rays = 128);

}  // namespace rlspec

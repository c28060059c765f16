#pragma once

// Shared random ensembles and independent oracles for the test suites.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "rlspec/oplib.hpp"

namespace rlspec::testing {

using Rng = std::mt19937_64;

inline Complex random_complex(Rng& rng, double scale = 1.0) {
  std::normal_distribution<double> N(0.0, 1.0);
  return Complex(N(rng), N(rng)) * (scale / std::sqrt(2.0));
}

/// Entries with E|z|^2 = scale^2.
inline Matrix random_matrix(Rng& rng, Eigen::Index n, double scale = 1.0) {
  Matrix M(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) M(i, j) = random_complex(rng, scale);
  return M;
}

inline Vector random_vector(Rng& rng, Eigen::Index n) {
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = random_complex(rng);
  return v;
}

inline Vector random_unit_vector(Rng& rng, Eigen::Index n) { return random_vector(rng, n).normalized(); }

/// Standard ensemble: E|entry|^2 = 1 / (4n) for both parts, so ||C|| and ||B|| are about 1.
inline RealLinearOperator random_operator(Rng& rng, Eigen::Index n) {
  const double s = 0.5 / std::sqrt(static_cast<double>(n));
  return {random_matrix(rng, n, s), random_matrix(rng, n, s)};
}

inline Eigen::Index random_dim(Rng& rng, Eigen::Index lo, Eigen::Index hi) {
  return std::uniform_int_distribution<Eigen::Index>(lo, hi)(rng);
}

inline Matrix random_unitary(Rng& rng, Eigen::Index n) {
  Eigen::HouseholderQR<Matrix> qr(random_matrix(rng, n));
  return qr.householderQ() * Matrix::Identity(n, n);
}

/// Bivariate polynomial in independent x, y: coeff(a, b) multiplies x^a y^b.
struct BiPoly {
  Matrix coeff;
  explicit BiPoly(Eigen::Index deg) : coeff(Matrix::Zero(deg + 1, deg + 1)) {}
};

/// Coefficient matrix of det(K - diag(x I, y I)) by the Leibniz permutation expansion, returned
/// in the H convention (row = power of conj(lambda)). Small n only.
inline Matrix leibniz_coeff_matrix(const RealLinearOperator& R) {
  const Eigen::Index n = R.n();
  const Eigen::Index dim = 2 * n;
  Matrix K(dim, dim);
  K << R.C(), R.B(), R.B().conjugate(), R.C().conjugate();
  std::vector<int> perm(static_cast<std::size_t>(dim));
  std::iota(perm.begin(), perm.end(), 0);
  Matrix H = Matrix::Zero(n + 1, n + 1);
  do {
    int inversions = 0;
    for (std::size_t i = 0; i < perm.size(); ++i)
      for (std::size_t j = i + 1; j < perm.size(); ++j)
        if (perm[i] > perm[j]) ++inversions;
    // Product of entries (const_i - [i == perm(i)] z_i), expanded over fixed points.
    BiPoly prod(n);
    prod.coeff(0, 0) = (inversions % 2 == 0) ? 1.0 : -1.0;
    for (Eigen::Index i = 0; i < dim; ++i) {
      const Complex c = K(i, perm[static_cast<std::size_t>(i)]);
      BiPoly next(n);
      for (Eigen::Index a = 0; a <= n; ++a)
        for (Eigen::Index b = 0; b <= n; ++b) {
          const Complex v = prod.coeff(a, b);
          if (v == Complex(0.0)) continue;
          next.coeff(a, b) += v * c;
          if (perm[static_cast<std::size_t>(i)] == i) {
            if (i < n && a < n) next.coeff(a + 1, b) -= v;
            if (i >= n && b < n) next.coeff(a, b + 1) -= v;
          }
        }
      prod = next;
    }
    for (Eigen::Index a = 0; a <= n; ++a)
      for (Eigen::Index b = 0; b <= n; ++b) H(b, a) += prod.coeff(a, b);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return H;
}

inline double max_abs(const Matrix& M) { return M.cwiseAbs().maxCoeff(); }

/// The operator with complex linear part 0 and B = [[a, b], [-b, a]], a = sqrt((1+eps)/2),
/// b = sqrt((1-eps)/2); p = |lambda|^4 - 2 eps |lambda|^2 + 1.
inline RealLinearOperator eps_example(double eps) {
  const double a = std::sqrt((1.0 + eps) / 2.0);
  const double b = std::sqrt((1.0 - eps) / 2.0);
  Matrix B(2, 2);
  B << a, b, -b, a;
  return RealLinearOperator::antilinear(B);
}

inline RealLinearOperator skew_example() {
  Matrix B(2, 2);
  B << 0.0, 1.0, -1.0, 0.0;
  return RealLinearOperator::antilinear(B);
}

inline RealLinearOperator scalar_operator(Complex alpha, Complex beta) {
  Matrix C(1, 1);
  Matrix B(1, 1);
  C << alpha;
  B << beta;
  return {C, B};
}

/// [[1, 1], [0, 1]] + [[0, 0], [1, 0]] tau: no invariant complex line.
inline RealLinearOperator jordan_example() {
  Matrix C(2, 2);
  Matrix B(2, 2);
  C << 1.0, 1.0, 0.0, 1.0;
  B << 0.0, 0.0, 1.0, 0.0;
  return {C, B};
}

}  // namespace rlspec::testing

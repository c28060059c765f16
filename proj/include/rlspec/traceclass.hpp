#pragma once

// Friedrichs/Hankel operators given by a symbol, their leading n x n truncations, and the
// characteristic function phi(r e^{i theta}) = det[I - r^{-1}(e^{-i theta} C + A)]^C as the
// limit of normalized truncation characteristic polynomials.

#include <span>
#include <string>
#include <vector>

#include "rlspec/oplib.hpp"

namespace rlspec {

enum class SymbolKind {
  /// Boundary Friedrichs operator on H^2 of the circle; Hankel matrix B[l][k] = a_{k+l}.
  circle_hankel,
  /// Friedrichs operator on the Bergman space of the unit disk with symbol z^m.
  disk_monomial,
};

enum class DecayTag { finite, geometric, polynomial };

/// Declared decay of the coefficients: finite support, |a_k| <= |a_0| q^k, or
/// |a_k| <= |a_0| (k + 1)^{-s}.
struct DecayClass {
  DecayTag tag = DecayTag::finite;
  double param = 0.0;
};

struct SymbolSeries {
  SymbolKind kind = SymbolKind::circle_hankel;
  std::vector<Complex> coeffs;
  int m = 0;
  DecayClass decay;

  static SymbolSeries hankel(std::vector<Complex> coeffs, DecayClass decay = {});
  /// a_k = a0 q^k for k < count.
  static SymbolSeries geometric(Complex a0, double q, std::size_t count);
  static SymbolSeries disk_monomial(int m);

  /// Coefficient a_k; zero past the listed ones for finite symbols.
  Complex coeff(std::size_t k) const;
  /// max |a_k| (1 for disk monomials), floored at 1e-300.
  double scale() const;
};

/// Raised when a truncation needs coefficients the symbol does not provide.
class InsufficientCoefficients : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

RealLinearOperator hankel_truncation(const SymbolSeries& s, Eigen::Index n);

/// B[l][k] = sqrt((k + 1)(l + 1)) / (m + 1) when k + l = m, in the basis sqrt(k + 1) z^k.
RealLinearOperator disk_truncation(const SymbolSeries& s, Eigen::Index n);

/// Dispatches on s.kind.
RealLinearOperator truncation(const SymbolSeries& s, Eigen::Index n);

/// Checks the declared decay class against the listed coefficients and reports the weighted
/// tail sum(k >= 2n - 1) (k + 1)|a_k| past an n x n truncation. Empty when nothing is suspicious.
std::vector<std::string> decay_warnings(const SymbolSeries& s, Eigen::Index n);

/// det[I - r^{-1}(e^{-i theta} C + A)]^C at lambda = r e^{i theta} != 0, which equals
/// p(lambda, conj(lambda)) / |lambda|^{2n}.
double phi_eval(const RealLinearOperator& R, Complex lambda);

struct PhiTable {
  std::vector<Complex> lambdas;
  std::vector<Eigen::Index> n_list;
  /// values(i, j) = phi_{n_list[j]}(lambdas[i])
  RealMatrix values;
  /// diffs[j] = sup_i |values(i, j + 1) - values(i, j)|
  std::vector<double> diffs;
  /// Largest |Im| of the truncated determinants.
  double max_imag = 0.0;
  /// Set when a successive difference grows instead of shrinking.
  bool stalled = false;
  std::vector<std::string> warnings;
};

/// Tabulates phi_n over the grid for each n in n_list. Every grid point needs
/// |lambda| >= lambda_min; a nonpositive lambda_min selects 0.1 * s.scale().
PhiTable phi_converge(const SymbolSeries& s, std::span<const Complex> grid, std::span<const Eigen::Index> n_list,
                      double lambda_min = 0.0);

struct DetContinuity {
  double lhs = 0.0;  // |det(I + C1) - det(I + C2)|
  double rhs = 0.0;  // ||C1 - C2||_1 exp(1 + ||C1||_1 + ||C2||_1)
  bool holds = false;
};

DetContinuity det_continuity_check(const Matrix& C1, const Matrix& C2);

}  // namespace rlspec

#include "rlspec/traceclass.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "rlspec/charpoly.hpp"
#include "rlspec/parallel.hpp"

namespace rlspec {

namespace {

Complex phi_complex(const RealLinearOperator& R, Complex lambda) {
  const double r = std::abs(lambda);
  if (r == 0.0) throw std::invalid_argument("phi_eval: lambda must be nonzero");
  const double theta = std::arg(lambda);
  const Eigen::Index dim = 2 * R.n();
  const Matrix M = Matrix::Identity(dim, dim) - complexify(rotate(R, theta)) / r;
  return M.partialPivLu().determinant();
}

}  // namespace

SymbolSeries SymbolSeries::hankel(std::vector<Complex> coeffs, DecayClass decay) {
  SymbolSeries s;
  s.kind = SymbolKind::circle_hankel;
  s.coeffs = std::move(coeffs);
  s.decay = decay;
  return s;
}

SymbolSeries SymbolSeries::geometric(Complex a0, double q, std::size_t count) {
  std::vector<Complex> c(count);
  Complex term = a0;
  for (auto& ck : c) {
    ck = term;
    term *= q;
  }
  return hankel(std::move(c), DecayClass{DecayTag::geometric, q});
}

SymbolSeries SymbolSeries::disk_monomial(int m) {
  if (m < 0) throw std::invalid_argument("disk_monomial: m must be nonnegative");
  SymbolSeries s;
  s.kind = SymbolKind::disk_monomial;
  s.m = m;
  return s;
}

Complex SymbolSeries::coeff(std::size_t k) const {
  return k < coeffs.size() ? coeffs[k] : Complex(0.0);
}

double SymbolSeries::scale() const {
  if (kind == SymbolKind::disk_monomial) return 1.0;
  double s = 0.0;
  for (const auto& c : coeffs) s = std::max(s, std::abs(c));
  return std::max(s, 1e-300);
}

RealLinearOperator hankel_truncation(const SymbolSeries& s, Eigen::Index n) {
  if (s.kind != SymbolKind::circle_hankel) throw std::invalid_argument("hankel_truncation: needs a circle-hankel symbol");
  if (n < 1) throw DimensionError("hankel_truncation: n must be positive");
  const auto needed = static_cast<std::size_t>(2 * n - 1);
  if (s.decay.tag != DecayTag::finite && s.coeffs.size() < needed) {
    std::ostringstream msg;
    msg << "hankel_truncation: n = " << n << " needs a_0..a_" << needed - 1 << " but only " << s.coeffs.size()
        << " coefficients are given";
    throw InsufficientCoefficients(msg.str());
  }
  Matrix B(n, n);
  for (Eigen::Index l = 0; l < n; ++l) {
    for (Eigen::Index k = 0; k < n; ++k) B(l, k) = s.coeff(static_cast<std::size_t>(k + l));
  }
  return RealLinearOperator::antilinear(std::move(B));
}

RealLinearOperator disk_truncation(const SymbolSeries& s, Eigen::Index n) {
  if (s.kind != SymbolKind::disk_monomial) throw std::invalid_argument("disk_truncation: needs a disk-monomial symbol");
  if (n < 1) throw DimensionError("disk_truncation: n must be positive");
  Matrix B = Matrix::Zero(n, n);
  for (Eigen::Index l = 0; l < n; ++l) {
    const Eigen::Index k = s.m - l;
    if (k < 0 || k >= n) continue;
    B(l, k) = std::sqrt(static_cast<double>((k + 1) * (l + 1))) / static_cast<double>(s.m + 1);
  }
  return RealLinearOperator::antilinear(std::move(B));
}

RealLinearOperator truncation(const SymbolSeries& s, Eigen::Index n) {
  return s.kind == SymbolKind::circle_hankel ? hankel_truncation(s, n) : disk_truncation(s, n);
}

std::vector<std::string> decay_warnings(const SymbolSeries& s, Eigen::Index n) {
  std::vector<std::string> out;
  if (s.kind != SymbolKind::circle_hankel) return out;
  const double a0 = std::abs(s.coeff(0));
  const double q = s.decay.param;
  switch (s.decay.tag) {
    case DecayTag::finite:
      break;
    case DecayTag::geometric:
      if (!(q > 0.0 && q < 1.0)) out.push_back("geometric decay needs 0 < q < 1");
      break;
    case DecayTag::polynomial:
      // sum (k + 1) k^{-s} converges only for s > 2.
      if (!(q > 2.0)) out.push_back("polynomial decay needs s > 2 for a finite trace-class proxy");
      break;
  }
  if (s.decay.tag != DecayTag::finite) {
    for (std::size_t k = 1; k < s.coeffs.size(); ++k) {
      const double bound = s.decay.tag == DecayTag::geometric
                               ? a0 * std::pow(q, static_cast<double>(k))
                               : a0 * std::pow(static_cast<double>(k + 1), -q);
      if (std::abs(s.coeffs[k]) > bound * (1.0 + 1e-9) + 1e-300) {
        std::ostringstream msg;
        msg << "coefficient a_" << k << " exceeds the declared decay envelope";
        out.push_back(msg.str());
        break;
      }
    }
  }
  double tail = 0.0;
  for (std::size_t k = static_cast<std::size_t>(std::max<Eigen::Index>(0, 2 * n - 1)); k < s.coeffs.size(); ++k) {
    tail += static_cast<double>(k + 1) * std::abs(s.coeffs[k]);
  }
  if (tail > 1e-6 * std::max(1.0, s.scale())) {
    std::ostringstream msg;
    msg << "weighted tail past n = " << n << " is " << tail;
    out.push_back(msg.str());
  }
  return out;
}

double phi_eval(const RealLinearOperator& R, Complex lambda) {
  return phi_complex(R, lambda).real();
}

PhiTable phi_converge(const SymbolSeries& s, std::span<const Complex> grid, std::span<const Eigen::Index> n_list,
                      double lambda_min) {
  if (n_list.empty()) throw std::invalid_argument("phi_converge: n_list is empty");
  const double floor = lambda_min > 0.0 ? lambda_min : 0.1 * s.scale();
  for (const auto& l : grid) {
    if (std::abs(l) < floor) {
      std::ostringstream msg;
      msg << "phi_converge: grid point " << l << " lies inside |lambda| < " << floor;
      throw std::invalid_argument(msg.str());
    }
  }
  PhiTable t;
  t.lambdas.assign(grid.begin(), grid.end());
  t.n_list.assign(n_list.begin(), n_list.end());
  const auto rows = static_cast<Eigen::Index>(grid.size());
  const auto cols = static_cast<Eigen::Index>(n_list.size());
  t.values.resize(rows, cols);

  std::vector<RealLinearOperator> truncs;
  truncs.reserve(n_list.size());
  for (auto n : n_list) truncs.push_back(truncation(s, n));

  RealMatrix imag(rows, cols);
  parallel_for(static_cast<std::size_t>(rows * cols), [&](std::size_t idx) {
    const auto i = static_cast<Eigen::Index>(idx) / cols;
    const auto j = static_cast<Eigen::Index>(idx) % cols;
    const Complex v = phi_complex(truncs[static_cast<std::size_t>(j)], grid[static_cast<std::size_t>(i)]);
    t.values(i, j) = v.real();
    imag(i, j) = std::abs(v.imag());
  });
  t.max_imag = imag.size() ? imag.maxCoeff() : 0.0;

  for (Eigen::Index j = 0; j + 1 < cols; ++j) {
    t.diffs.push_back(rows ? (t.values.col(j + 1) - t.values.col(j)).cwiseAbs().maxCoeff() : 0.0);
  }
  for (std::size_t j = 1; j < t.diffs.size(); ++j) {
    if (t.diffs[j] > t.diffs[j - 1] && t.diffs[j] > 1e-14) t.stalled = true;
  }
  t.warnings = decay_warnings(s, n_list.back());
  if (t.stalled) t.warnings.push_back("successive differences are not decreasing");
  return t;
}

DetContinuity det_continuity_check(const Matrix& C1, const Matrix& C2) {
  if (C1.rows() != C1.cols() || C1.rows() != C2.rows() || C1.cols() != C2.cols()) {
    throw DimensionError("det_continuity_check: matrices must be square and of equal size");
  }
  const Eigen::Index n = C1.rows();
  const Matrix I = Matrix::Identity(n, n);
  DetContinuity out;
  out.lhs = std::abs(Matrix(I + C1).partialPivLu().determinant() - Matrix(I + C2).partialPivLu().determinant());
  out.rhs = matrix_schatten_norm(C1 - C2, 1.0) *
            std::exp(1.0 + matrix_schatten_norm(C1, 1.0) + matrix_schatten_norm(C2, 1.0));
  out.holds = out.lhs <= out.rhs;
  return out;
}

}  // namespace rlspec

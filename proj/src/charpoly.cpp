#include "rlspec/charpoly.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace rlspec {

namespace {

using ComplexLD = std::complex<long double>;
using MatrixLD = Eigen::Matrix<ComplexLD, Eigen::Dynamic, Eigen::Dynamic>;

Complex det_extended(const Matrix& M) {
  if (M.rows() == 0) return 1.0;
  const MatrixLD Ml = M.cast<ComplexLD>();
  const ComplexLD d = Ml.partialPivLu().determinant();
  return {static_cast<double>(d.real()), static_cast<double>(d.imag())};
}

Matrix shifted_complexification(const RealLinearOperator& R, Complex lambda) {
  Matrix M = complexify(R);
  const auto n = R.n();
  M.diagonal().head(n).array() -= lambda;
  M.diagonal().tail(n).array() -= std::conj(lambda);
  return M;
}

double max_abs(const Matrix& M) {
  return M.size() == 0 ? 0.0 : M.cwiseAbs().maxCoeff();
}

// Symmetrizes in place and returns the pre-projection asymmetry.
double hermitian_project(Matrix& H) {
  const double asym = 0.5 * max_abs(H - H.adjoint());
  H = 0.5 * (H + H.adjoint()).eval();
  return asym;
}

CoeffMatrix coeff_by_interpolation(const RealLinearOperator& R, const CoeffOptions& opt) {
  using LD = long double;
  using RealMatrixLD = Eigen::Matrix<LD, Eigen::Dynamic, Eigen::Dynamic>;
  using RealVectorLD = Eigen::Matrix<LD, Eigen::Dynamic, 1>;

  const Eigen::Index n = R.n();
  const Eigen::Index n_angles = 2 * n + 1;
  const Eigen::Index n_radii = n + 3;
  const LD s = 1.0L + operator_norm(R);
  const LD pi = std::numbers::pi_v<LD>;

  RealVectorLD rho(n_radii);
  for (Eigen::Index m = 0; m < n_radii; ++m) {
    const LD x = std::cos(pi * (2.0L * m + 1.0L) / (2.0L * n_radii));
    rho(m) = 1.25L + 0.75L * x;
  }

  const MatrixLD K = complexify(R).cast<ComplexLD>();
  // samples(m, t) = p(r_m e^{i theta_t})
  MatrixLD samples(n_radii, n_angles);
  for (Eigen::Index m = 0; m < n_radii; ++m) {
    for (Eigen::Index t = 0; t < n_angles; ++t) {
      const LD theta = 2.0L * pi * static_cast<LD>(t) / static_cast<LD>(n_angles);
      const ComplexLD lambda = std::polar(rho(m) * s, theta);
      MatrixLD M = K;
      M.diagonal().head(n).array() -= lambda;
      M.diagonal().tail(n).array() -= std::conj(lambda);
      samples(m, t) = M.partialPivLu().determinant();
    }
  }

  CoeffMatrix out;
  out.n = n;
  out.H = Matrix::Zero(n + 1, n + 1);
  out.radial_condition = 1.0;

  for (Eigen::Index k = -n; k <= n; ++k) {
    const Eigen::Index d = std::abs(k);
    // g_k(r) = (1/N) sum_t p(r, theta_t) e^{-i k theta_t} = sum_q c_q r^{2q + d}
    RealVectorLD g_re(n_radii);
    RealVectorLD g_im(n_radii);
    for (Eigen::Index m = 0; m < n_radii; ++m) {
      ComplexLD acc = 0.0L;
      for (Eigen::Index t = 0; t < n_angles; ++t) {
        const LD angle = -2.0L * pi * static_cast<LD>(k * t) / static_cast<LD>(n_angles);
        acc += samples(m, t) * std::polar(1.0L, angle);
      }
      acc /= static_cast<LD>(n_angles);
      g_re(m) = acc.real();
      g_im(m) = acc.imag();
    }
    const Eigen::Index n_unknowns = n - d + 1;
    RealMatrixLD A(n_radii, n_unknowns);
    for (Eigen::Index m = 0; m < n_radii; ++m) {
      for (Eigen::Index q = 0; q < n_unknowns; ++q) A(m, q) = std::pow(rho(m), static_cast<LD>(2 * q + d));
    }
    Eigen::JacobiSVD<RealMatrixLD> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    const double cond = static_cast<double>(sv(0) / sv(sv.size() - 1));
    out.radial_condition = std::max(out.radial_condition, cond);
    if (!(cond <= opt.max_radial_condition)) {
      std::ostringstream msg;
      msg << "coeff_matrix: radial system for diagonal " << k << " is ill-conditioned (cond = " << cond << ")";
      throw NumericalError(msg.str());
    }
    const RealVectorLD x_re = svd.solve(g_re);
    const RealVectorLD x_im = svd.solve(g_im);
    for (Eigen::Index q = 0; q < n_unknowns; ++q) {
      const LD unscale = std::pow(s, -static_cast<LD>(2 * q + d));
      const Complex c(static_cast<double>(x_re(q) * unscale), static_cast<double>(x_im(q) * unscale));
      if (k >= 0) {
        out.H(q, q + d) = c;  // lambda^{q+d} conj(lambda)^q
      } else {
        out.H(q + d, q) = c;
      }
    }
  }
  return out;
}

CoeffMatrix coeff_by_minor_expansion(const RealLinearOperator& R) {
  const Eigen::Index n = R.n();
  if (n > 6) throw DimensionError("coeff_matrix: exact mode supports n <= 6");
  const Matrix K = complexify(R);
  const Eigen::Index dim = 2 * n;
  const unsigned n_subsets = 1u << dim;

  CoeffMatrix out;
  out.n = n;
  out.H = Matrix::Zero(n + 1, n + 1);

  // det(K - diag(x I, y I)) = sum_S (-1)^{|S|} x^{|S top|} y^{|S bottom|} det K[S^c, S^c]
  std::vector<Eigen::Index> keep;
  keep.reserve(static_cast<std::size_t>(dim));
  for (unsigned mask = 0; mask < n_subsets; ++mask) {
    keep.clear();
    int a = 0;
    int b = 0;
    for (Eigen::Index i = 0; i < dim; ++i) {
      if (mask & (1u << i)) {
        (i < n ? a : b) += 1;
      } else {
        keep.push_back(i);
      }
    }
    const auto m = static_cast<Eigen::Index>(keep.size());
    Matrix minor(m, m);
    for (Eigen::Index r = 0; r < m; ++r) {
      for (Eigen::Index c = 0; c < m; ++c) minor(r, c) = K(keep[r], keep[c]);
    }
    const double sign = ((a + b) % 2 == 0) ? 1.0 : -1.0;
    out.H(b, a) += sign * det_extended(minor);
  }
  return out;
}

}  // namespace

NotPositiveDefinite::NotPositiveDefinite(double smallest_eigenvalue, double threshold)
    : NumericalError([&] {
        std::ostringstream msg;
        msg << "coefficient matrix is not positive definite: smallest eigenvalue " << smallest_eigenvalue
            << " <= threshold " << threshold;
        return msg.str();
      }()),
      smallest_eigenvalue_(smallest_eigenvalue) {}

Complex SosDecomposition::eval_poly(Eigen::Index i, Complex lambda) const {
  Complex acc = 0.0;
  for (Eigen::Index j = U.cols() - 1; j >= 0; --j) acc = acc * lambda + U(i, j);
  return acc;
}

double SosDecomposition::eval(Complex lambda) const {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < d.size(); ++i) acc += d(i) * std::norm(eval_poly(i, lambda));
  return acc;
}

Complex charpoly_eval_complex(const RealLinearOperator& R, Complex lambda) {
  return shifted_complexification(R, lambda).partialPivLu().determinant();
}

double charpoly_eval(const RealLinearOperator& R, Complex lambda) {
  return charpoly_eval_complex(R, lambda).real();
}

double det_complexification(const RealLinearOperator& R) {
  return complexify(R).partialPivLu().determinant().real();
}

double eval_coeff_matrix(const Matrix& H, Complex lambda) {
  Vector v(H.rows());
  Complex power = 1.0;
  for (Eigen::Index j = 0; j < v.size(); ++j) {
    v(j) = power;
    power *= lambda;
  }
  return (v.adjoint() * H * v)(0, 0).real();
}

CoeffMatrix coeff_matrix(const RealLinearOperator& R, const CoeffOptions& options) {
  CoeffMatrix out =
      options.mode == CoeffMode::exact ? coeff_by_minor_expansion(R) : coeff_by_interpolation(R, options);
  out.asymmetry = hermitian_project(out.H);
  if (out.asymmetry > options.asymmetry_tol * (1.0 + max_abs(out.H))) {
    std::ostringstream msg;
    msg << "coeff_matrix: Hermitian symmetry violated by " << out.asymmetry;
    throw NumericalError(msg.str());
  }
  return out;
}

SosDecomposition sos_decompose(const Matrix& H) {
  if (H.rows() != H.cols() || H.rows() == 0) throw DimensionError("sos_decompose: H must be square");
  Eigen::SelfAdjointEigenSolver<Matrix> es(H);
  if (es.info() != Eigen::Success) throw NumericalError("sos_decompose: eigensolver failed");
  SosDecomposition out;
  out.d = es.eigenvalues();
  out.U = es.eigenvectors().adjoint();
  out.kind = SosKind::eigen;
  return out;
}

SosDecomposition cholesky_sos(const Matrix& H, double pd_threshold) {
  if (H.rows() != H.cols() || H.rows() == 0) throw DimensionError("cholesky_sos: H must be square");
  Eigen::SelfAdjointEigenSolver<Matrix> es(H, Eigen::EigenvaluesOnly);
  const RealVector& ev = es.eigenvalues();
  const double scale = ev.cwiseAbs().maxCoeff();
  const double threshold = pd_threshold * scale;
  if (!(ev(0) > threshold)) throw NotPositiveDefinite(ev(0), threshold);

  const Eigen::Index n = H.rows() - 1;
  const Matrix reversed = H.reverse();
  Eigen::LLT<Matrix> llt(reversed);
  if (llt.info() != Eigen::Success) throw NotPositiveDefinite(ev(0), threshold);
  const Matrix T = llt.matrixU();  // reversed = T^* T

  // Row n - i of T u_lambda, u_lambda = (lambda^n, ..., 1), is a polynomial of degree i.
  SosDecomposition out;
  out.d = RealVector::Ones(n + 1);
  out.U = Matrix::Zero(n + 1, n + 1);
  for (Eigen::Index i = 0; i <= n; ++i) {
    for (Eigen::Index j = 0; j <= i; ++j) out.U(i, j) = T(n - i, n - j);
  }
  out.kind = SosKind::cholesky;
  return out;
}

EmptinessCertificates emptiness_certificates(const RealLinearOperator& R, double pd_threshold, double r_tol) {
  EmptinessCertificates out;
  const CoeffMatrix cm = coeff_matrix(R);
  Eigen::SelfAdjointEigenSolver<Matrix> es(cm.H, Eigen::EigenvaluesOnly);
  out.smallest_eigenvalue = es.eigenvalues()(0);
  out.det_complexification = det_complexification(R);

  try {
    out.pd_certificate = cholesky_sos(cm.H, pd_threshold);
  } catch (const NotPositiveDefinite&) {
  }

  if (out.det_complexification <= 0.0) {
    // p(0, 0) <= 0 and p(r, r) > 0 beyond the operator norm.
    double lo = 0.0;
    double hi = 1.0 + operator_norm(R);
    const double f_hi = charpoly_eval(R, hi);
    if (!(f_hi > 0.0)) {
      throw NumericalError("emptiness_certificates: p(r, r) is not positive at the bracket end");
    }
    if (out.det_complexification == 0.0) {
      out.real_axis_zero = RealAxisZero{0.0, 0.0};
      return out;
    }
    while (hi - lo > r_tol) {
      const double mid = 0.5 * (lo + hi);
      if (charpoly_eval(R, mid) <= 0.0) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    const double r = 0.5 * (lo + hi);
    out.real_axis_zero = RealAxisZero{r, charpoly_eval(R, r)};
  }
  return out;
}

bool adjoint_coeff_check(const RealLinearOperator& R, double tol) {
  const Matrix H = coeff_matrix(R).H;
  const Matrix H_adj = coeff_matrix(adjoint(R)).H;
  return max_abs(H_adj - H.conjugate()) <= tol * std::max(1.0, max_abs(H));
}

RealLinearOperator rotate(const RealLinearOperator& R, double theta) {
  return {std::polar(1.0, -theta) * R.C(), R.B()};
}

}  // namespace rlspec

#include "rlspec/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "rlspec/charpoly.hpp"
#include "rlspec/parallel.hpp"

namespace rlspec {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_angle(double theta) {
  double t = std::fmod(theta, kTwoPi);
  if (t < 0.0) t += kTwoPi;
  if (t >= kTwoPi) t -= kTwoPi;
  return t;
}

bool ray_less(const RayHit& a, const RayHit& b) {
  return a.theta != b.theta ? a.theta < b.theta : a.r < b.r;
}

// Orthonormal basis of the numerical kernel of M (columns), at least one column.
Matrix numerical_kernel(const Matrix& M, double tol) {
  Eigen::JacobiSVD<Matrix> svd(M, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const Eigen::Index cols = M.cols();
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) > tol) ++rank;
  }
  const Eigen::Index nullity = std::max<Eigen::Index>(1, cols - rank);
  return svd.matrixV().rightCols(nullity);
}

// ||B conj(x) - (x^* B conj(x)) x|| for unit x.
double antilinear_line_residual(const Matrix& B, const Vector& x) {
  const Vector bx = B * x.conjugate();
  const Complex coeff = x.dot(bx);
  return (bx - coeff * x).norm();
}

// Con-eigenvector candidates of the g x g antilinear map c -> Bp conj(c), g <= 2.
// Bp conj(c) = nu c implies Bp conj(Bp) c = |nu|^2 c, so every candidate is built from an
// eigenvector of Bp conj(Bp) with a real nonnegative eigenvalue.
std::vector<Vector> con_eigen_candidates(const Matrix& Bp, double tol) {
  std::vector<Vector> out;
  const Eigen::Index g = Bp.rows();
  if (g == 1) {
    out.push_back(Vector::Ones(1));
    return out;
  }
  const Matrix M = Bp * Bp.conjugate();
  Eigen::ComplexEigenSolver<Matrix> es(M);
  if (es.info() != Eigen::Success) return out;
  const Complex I(0.0, 1.0);
  for (Eigen::Index k = 0; k < g; ++k) {
    const Complex mu = es.eigenvalues()(k);
    if (std::abs(mu.imag()) > tol || mu.real() < -tol) continue;
    const Vector c = es.eigenvectors().col(k).normalized();
    const Vector bc = Bp * c.conjugate();
    const double root = std::sqrt(std::max(0.0, mu.real()));
    Vector w;
    if (root <= tol) {
      w = bc.norm() <= tol ? c : bc;
    } else {
      w = bc + root * c;
      if (w.norm() <= tol) w = I * c;
    }
    out.push_back(w.normalized());
  }
  return out;
}

void push_unique_line(std::vector<Vector>& lines, const Vector& x) {
  for (const auto& l : lines) {
    if (std::abs(l.dot(x)) >= 1.0 - 1e-8) return;
  }
  lines.push_back(x);
}

}  // namespace

std::vector<RayHit> ray_spectrum(const RealLinearOperator& R, double theta, double tol_imag) {
  const Matrix K = complexify(rotate(R, theta));
  Eigen::ComplexEigenSolver<Matrix> es(K, /*computeEigenvectors=*/false);
  if (es.info() != Eigen::Success) {
    Eigen::JacobiSVD<Matrix> svd(K);
    const auto& s = svd.singularValues();
    std::ostringstream msg;
    msg << "ray_spectrum: eigensolver failed at theta = " << theta << " (condition estimate "
        << s(0) / s(s.size() - 1) << ")";
    throw NumericalError(msg.str());
  }
  std::vector<RayHit> hits;
  for (const Complex& e : es.eigenvalues()) {
    const double im = std::abs(e.imag());
    if (im > tol_imag * (1.0 + std::abs(e))) continue;
    if (e.real() >= 0.0) {
      hits.push_back({wrap_angle(theta), e.real(), im});
    } else {
      hits.push_back({wrap_angle(theta + std::numbers::pi), -e.real(), im});
    }
  }
  std::sort(hits.begin(), hits.end(), ray_less);

  // Real eigenvalues of a complexification come in conjugate pairs; collapse the copies.
  std::vector<RayHit> merged;
  std::size_t i = 0;
  while (i < hits.size()) {
    std::size_t j = i + 1;
    double r_sum = hits[i].r;
    double im_max = hits[i].imag_residual;
    while (j < hits.size() && hits[j].theta == hits[i].theta &&
           hits[j].r - hits[j - 1].r <= 1e-6 * (1.0 + hits[j].r)) {
      r_sum += hits[j].r;
      im_max = std::max(im_max, hits[j].imag_residual);
      ++j;
    }
    merged.push_back({hits[i].theta, r_sum / static_cast<double>(j - i), im_max});
    i = j;
  }
  return merged;
}

SpectrumCloud spectrum_sweep(const RealLinearOperator& R, int n_rays, double tol_imag, double tol_residual) {
  if (n_rays < 1) throw std::invalid_argument("spectrum_sweep: n_rays must be >= 1");
  SpectrumCloud cloud;
  cloud.n_rays = n_rays;
  cloud.tol_imag = tol_imag;
  cloud.tol_residual = tol_residual;

  const auto rays = static_cast<std::size_t>(n_rays);
  std::vector<std::vector<SpectralPoint>> per_ray(rays);
  std::vector<int> rejected(rays, 0);
  const double two_n = 2.0 * static_cast<double>(R.n());
  parallel_for(rays, [&](std::size_t k) {
    const double theta = std::numbers::pi * static_cast<double>(k) / static_cast<double>(n_rays);
    for (const auto& hit : ray_spectrum(R, theta, tol_imag)) {
      const Complex lambda = std::polar(hit.r, hit.theta);
      const double residual = std::abs(charpoly_eval_complex(R, lambda));
      if (residual <= tol_residual * std::pow(1.0 + hit.r, two_n)) {
        per_ray[k].push_back({hit.theta, hit.r, lambda, residual});
      } else {
        ++rejected[k];
      }
    }
  });
  for (std::size_t k = 0; k < rays; ++k) {
    cloud.points.insert(cloud.points.end(), per_ray[k].begin(), per_ray[k].end());
    cloud.rejected += rejected[k];
  }
  std::sort(cloud.points.begin(), cloud.points.end(), [](const SpectralPoint& a, const SpectralPoint& b) {
    return a.theta != b.theta ? a.theta < b.theta : a.r < b.r;
  });
  return cloud;
}

std::optional<Vector> eigenvector(const RealLinearOperator& R, Complex lambda, double tol) {
  const RealMatrix M = realify(shift(R, lambda));
  Eigen::JacobiSVD<RealMatrix> svd(M, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const double scale = 1.0 + operator_norm(R) + std::abs(lambda);
  if (s(s.size() - 1) > tol * scale) return std::nullopt;
  Vector x = stack_to_complex(svd.matrixV().col(M.cols() - 1));
  x.normalize();
  return x;
}

NoEigenvalueCertificate no_eigenvalue_certificate(const RealLinearOperator& R) {
  // The adjoint of B tau is B^T tau.
  const Matrix skew = 0.5 * (R.B() - R.B().transpose());
  const Matrix sym = 0.5 * (R.B() + R.B().transpose());
  NoEigenvalueCertificate out;
  out.skew_min_modulus = min_modulus(skew);
  out.remainder_norm = operator_norm(RealLinearOperator(R.C(), sym));
  out.margin = out.skew_min_modulus - out.remainder_norm;
  out.certified = out.margin > 0.0;
  return out;
}

InvariantLines common_invariant_1d(const RealLinearOperator& R, double tol) {
  const Eigen::Index n = R.n();
  const double scale = 1.0 + operator_norm(R);
  const double cluster_tol = 1e-6 * scale;
  const double kernel_tol = 1e-7 * scale;

  Eigen::ComplexEigenSolver<Matrix> es(R.C(), /*computeEigenvectors=*/false);
  if (es.info() != Eigen::Success) throw NumericalError("common_invariant_1d: eigensolver failed");

  // Single-linkage clusters of the eigenvalues of C.
  std::vector<Complex> eig(es.eigenvalues().data(), es.eigenvalues().data() + n);
  std::vector<int> label(static_cast<std::size_t>(n), -1);
  int n_clusters = 0;
  for (std::size_t i = 0; i < eig.size(); ++i) {
    if (label[i] >= 0) continue;
    label[i] = n_clusters;
    std::vector<std::size_t> stack{i};
    while (!stack.empty()) {
      const auto a = stack.back();
      stack.pop_back();
      for (std::size_t b = 0; b < eig.size(); ++b) {
        if (label[b] < 0 && std::abs(eig[a] - eig[b]) <= cluster_tol) {
          label[b] = n_clusters;
          stack.push_back(b);
        }
      }
    }
    ++n_clusters;
  }

  InvariantLines out;
  bool degenerate = false;
  bool partial = false;
  for (int c = 0; c < n_clusters; ++c) {
    Complex mean = 0.0;
    Eigen::Index multiplicity = 0;
    for (std::size_t i = 0; i < eig.size(); ++i) {
      if (label[i] == c) {
        mean += eig[i];
        ++multiplicity;
      }
    }
    mean /= static_cast<double>(multiplicity);
    const Matrix Q = numerical_kernel(shift(RealLinearOperator::complex_linear(R.C()), mean).C(), kernel_tol);
    const Eigen::Index g = Q.cols();
    if (g < multiplicity) partial = true;  // Jordan block of size > 1

    // B conj(Q c) = Bq conj(c); split into the part inside span(Q) and the part outside.
    const Matrix Bq = R.B() * Q.conjugate();
    if (Bq.norm() <= tol * scale) {
      if (g > 1) degenerate = true;
      for (Eigen::Index k = 0; k < g; ++k) push_unique_line(out.lines, Q.col(k));
      continue;
    }
    if (g > 2) {
      partial = true;
      continue;
    }
    const Matrix Bp = Q.adjoint() * Bq;
    const Matrix outer = Bq - Q * Bp;

    std::vector<Vector> candidates = con_eigen_candidates(Bp, 1e-10 * scale * scale);
    if (g == 2) {
      const Matrix M = Bp * Bp.conjugate();
      const Complex mean_mu = 0.5 * M.trace();
      if ((M - mean_mu * Matrix::Identity(2, 2)).norm() <= tol * scale * scale &&
          std::abs(mean_mu.imag()) <= tol * scale * scale && mean_mu.real() >= -tol * scale * scale &&
          outer.norm() <= tol * scale) {
        degenerate = true;
      }
      if (outer.norm() > tol * scale) {
        // conj(c) must lie in the kernel of the outer part.
        const Matrix ker = numerical_kernel(outer, kernel_tol);
        if (ker.cols() == 1) candidates.push_back(ker.col(0).conjugate());
      }
    }
    for (const Vector& cvec : candidates) {
      const Vector x = (Q * cvec).normalized();
      if (antilinear_line_residual(R.B(), x) <= tol * scale) push_unique_line(out.lines, x);
    }
  }
  if (partial) {
    out.coverage = LineCoverage::partial;
  } else if (degenerate) {
    out.coverage = LineCoverage::degenerate;
  }
  return out;
}

KrylovSpan krylov_cspan(const RealLinearOperator& R, const Vector& y, Eigen::Index max_dim, double tol) {
  if (y.size() != R.n()) throw DimensionError("krylov_cspan: vector length does not match n");
  const double ynorm = y.norm();
  if (ynorm == 0.0) throw std::invalid_argument("krylov_cspan: y must be nonzero");
  const Eigen::Index limit = std::clamp<Eigen::Index>(max_dim, 1, R.n());

  std::vector<Vector> basis{y / ynorm};
  // Powers are renormalized by positive reals, which commute with R.
  Vector power = y / ynorm;
  while (static_cast<Eigen::Index>(basis.size()) < limit) {
    power = rlspec::apply(R, power);
    const double pnorm = power.norm();
    if (pnorm == 0.0) break;
    power /= pnorm;
    Vector w = power;
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& q : basis) w -= q.dot(w) * q;
    }
    if (w.norm() <= tol) break;
    basis.push_back(w.normalized());
  }

  KrylovSpan out;
  out.basis.resize(R.n(), static_cast<Eigen::Index>(basis.size()));
  for (std::size_t k = 0; k < basis.size(); ++k) out.basis.col(static_cast<Eigen::Index>(k)) = basis[k];
  out.residuals.resize(out.basis.cols());
  for (Eigen::Index k = 0; k < out.basis.cols(); ++k) {
    const Vector rq = rlspec::apply(R, out.basis.col(k));
    const Vector outside = rq - out.basis * (out.basis.adjoint() * rq);
    out.residuals(k) = outside.norm();
  }
  return out;
}

}  // namespace rlspec

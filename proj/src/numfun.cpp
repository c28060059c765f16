#include "rlspec/numfun.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "rlspec/parallel.hpp"

namespace rlspec {

namespace {

using Poly = std::vector<double>;  // coefficient k multiplies r^k

Poly poly_mul(const Poly& a, const Poly& b) {
  Poly out(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  }
  return out;
}

Poly poly_derivative(const Poly& a) {
  if (a.size() <= 1) return {0.0};
  Poly out(a.size() - 1);
  for (std::size_t k = 1; k < a.size(); ++k) out[k - 1] = static_cast<double>(k) * a[k];
  return out;
}

Poly poly_sub(Poly a, const Poly& b) {
  if (b.size() > a.size()) a.resize(b.size(), 0.0);
  for (std::size_t k = 0; k < b.size(); ++k) a[k] -= b[k];
  return a;
}

double poly_eval(const Poly& a, double x) {
  double acc = 0.0;
  for (auto it = a.rbegin(); it != a.rend(); ++it) acc = acc * x + *it;
  return acc;
}

// Diagonal similarity scaling by powers of two so that off-diagonal row and column norms are
// comparable; Eigen's nonsymmetric solver does not balance on its own.
void balance(RealMatrix& A) {
  const Eigen::Index m = A.rows();
  bool done = false;
  while (!done) {
    done = true;
    for (Eigen::Index i = 0; i < m; ++i) {
      const double c = A.col(i).cwiseAbs().sum() - std::abs(A(i, i));
      const double r = A.row(i).cwiseAbs().sum() - std::abs(A(i, i));
      if (c == 0.0 || r == 0.0) continue;
      double f = 1.0;
      double cs = c;
      while (cs < r / 2.0) {
        cs *= 2.0;
        f *= 2.0;
      }
      while (cs >= r * 2.0) {
        cs /= 2.0;
        f /= 2.0;
      }
      if ((cs + r / f) < 0.95 * (c + r)) {
        done = false;
        A.col(i) *= f;
        A.row(i) /= f;
      }
    }
  }
}

// Real roots of a, via the eigenvalues of the companion matrix of the polynomial rescaled
// so that its roots lie in a disk of radius about 2, then Newton-polished.
struct PolishedRoot {
  double x;
  bool converged;
};

std::vector<PolishedRoot> real_roots(Poly a) {
  double biggest = 0.0;
  for (double c : a) biggest = std::max(biggest, std::abs(c));
  if (biggest == 0.0) return {};
  while (a.size() > 1 && std::abs(a.back()) <= 1e-12 * biggest) a.pop_back();
  const std::size_t deg = a.size() - 1;
  if (deg == 0) return {};

  // Fujiwara-style bound on the root moduli.
  double sigma = 0.0;
  for (std::size_t k = 0; k < deg; ++k) {
    if (a[k] == 0.0) continue;
    sigma = std::max(sigma, std::pow(std::abs(a[k] / a[deg]), 1.0 / static_cast<double>(deg - k)));
  }
  if (sigma == 0.0) return {{0.0, true}};

  RealMatrix companion = RealMatrix::Zero(static_cast<Eigen::Index>(deg), static_cast<Eigen::Index>(deg));
  for (std::size_t k = 0; k < deg; ++k) {
    // monic in x / sigma: coefficient a_k sigma^k / (a_deg sigma^deg)
    const double c = a[k] / a[deg] * std::pow(sigma, static_cast<double>(k) - static_cast<double>(deg));
    companion(0, static_cast<Eigen::Index>(deg - 1 - k)) = -c;
  }
  for (std::size_t k = 1; k < deg; ++k) {
    companion(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k - 1)) = 1.0;
  }
  balance(companion);
  Eigen::EigenSolver<RealMatrix> es(companion, /*computeEigenvectors=*/false);
  if (es.info() != Eigen::Success) return {};

  const Poly da = poly_derivative(a);
  std::vector<PolishedRoot> out;
  for (const auto& z : es.eigenvalues()) {
    if (std::abs(z.imag()) > 1e-6 * (1.0 + std::abs(z))) continue;
    double x = z.real() * sigma;
    bool converged = false;
    for (int it = 0; it < 60; ++it) {
      const double f = poly_eval(a, x);
      const double df = poly_eval(da, x);
      if (f == 0.0) {
        converged = true;
        break;
      }
      if (df == 0.0) break;
      const double step = f / df;
      x -= step;
      if (std::abs(step) <= 1e-14 * (1.0 + std::abs(x))) {
        converged = true;
        break;
      }
    }
    out.push_back({x, converged});
  }
  return out;
}

}  // namespace

double F_eval(const Matrix& H, Complex lambda) {
  const Eigen::Index n1 = H.rows();
  const double mod = std::abs(lambda);
  Vector v(n1);
  if (mod <= 1.0) {
    Complex power = 1.0;
    for (Eigen::Index j = 0; j < n1; ++j) {
      v(j) = power;
      power *= lambda;
    }
  } else {
    // v scaled by |lambda|^{-n}: entries (lambda / |lambda|)^j |lambda|^{j - n}
    const Complex phase = lambda / mod;
    const auto n = static_cast<double>(n1 - 1);
    for (Eigen::Index j = 0; j < n1; ++j) {
      v(j) = std::pow(phase, static_cast<int>(j)) * std::pow(mod, static_cast<double>(j) - n);
    }
  }
  return (v.adjoint() * H * v)(0, 0).real() / v.squaredNorm();
}

ConvexCombination convex_comb_check(const SosDecomposition& sos, Complex lambda) {
  if (sos.kind != SosKind::eigen) {
    throw std::invalid_argument("convex_comb_check: needs an eigen-kind decomposition");
  }
  ConvexCombination out;
  out.weights.resize(sos.d.size());
  double total = 0.0;
  for (Eigen::Index i = 0; i < sos.d.size(); ++i) {
    out.weights(i) = std::norm(sos.eval_poly(i, lambda));
    total += out.weights(i);
  }
  out.weights /= total;
  out.value = out.weights.dot(sos.d);
  return out;
}

ConvexCombination convex_comb_check(const Matrix& H, Complex lambda) {
  return convex_comb_check(sos_decompose(H), lambda);
}

std::vector<RayCriticalPoint> F_ray_extrema(const Matrix& H, double theta, double r_max) {
  const Eigen::Index n = H.rows() - 1;
  // On the ray, p = sum_m a_m r^m with a_m = sum_{i+j=m} h_ij e^{i (j - i) theta}.
  Poly num(static_cast<std::size_t>(2 * n + 1), 0.0);
  for (Eigen::Index i = 0; i <= n; ++i) {
    for (Eigen::Index j = 0; j <= n; ++j) {
      num[static_cast<std::size_t>(i + j)] +=
          (H(i, j) * std::polar(1.0, static_cast<double>(j - i) * theta)).real();
    }
  }
  Poly den(static_cast<std::size_t>(2 * n + 1), 0.0);
  for (Eigen::Index j = 0; j <= n; ++j) den[static_cast<std::size_t>(2 * j)] = 1.0;

  const Poly critical = poly_sub(poly_mul(poly_derivative(num), den), poly_mul(num, poly_derivative(den)));

  std::vector<RayCriticalPoint> out;
  out.push_back({0.0, H(0, 0).real(), true});
  for (const auto& root : real_roots(critical)) {
    // r = 0 is already listed, and is a critical point whenever F depends on |lambda| there.
    if (root.x <= 1e-10 || root.x > r_max) continue;
    out.push_back({root.x, F_eval(H, std::polar(root.x, theta)), root.converged});
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.r < b.r; });
  out.erase(std::unique(out.begin(), out.end(),
                        [](const auto& a, const auto& b) { return b.r - a.r <= 1e-10 * (1.0 + b.r); }),
            out.end());
  out.push_back({std::numeric_limits<double>::infinity(), H(n, n).real(), true});
  return out;
}

NumFunReport range_and_coverage(const Matrix& H, int n_rays, double r_max) {
  if (n_rays < 1) throw std::invalid_argument("range_and_coverage: n_rays must be >= 1");
  const Eigen::Index n = H.rows() - 1;
  NumFunReport rep;
  rep.n_rays = n_rays;
  rep.r_max = r_max;
  rep.f0 = H(0, 0).real();
  rep.f_inf = H(n, n).real();

  Eigen::SelfAdjointEigenSolver<Matrix> es(H, Eigen::EigenvaluesOnly);
  rep.fov_min = es.eigenvalues()(0);
  rep.fov_max = es.eigenvalues()(n);

  const auto rays = static_cast<std::size_t>(n_rays);
  std::vector<std::vector<RayCriticalPoint>> per_ray(rays);
  parallel_for(rays, [&](std::size_t k) {
    const double theta = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n_rays);
    per_ray[k] = F_ray_extrema(H, theta, r_max);
  });

  rep.range_min = std::min(rep.f0, rep.f_inf);
  rep.range_max = std::max(rep.f0, rep.f_inf);
  rep.ray_minima.reserve(rays);
  for (std::size_t k = 0; k < rays; ++k) {
    const double theta = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n_rays);
    RayMinimum best{theta, 0.0, rep.f0};
    for (const auto& cp : per_ray[k]) {
      rep.range_min = std::min(rep.range_min, cp.F);
      rep.range_max = std::max(rep.range_max, cp.F);
      if (!cp.converged) ++rep.unconverged_roots;
      if (cp.F < best.F) best = {theta, cp.r, cp.F};
    }
    rep.ray_minima.push_back(best);
  }
  rep.uncovered_low = std::max(0.0, rep.range_min - rep.fov_min);
  rep.uncovered_high = std::max(0.0, rep.fov_max - rep.range_max);
  return rep;
}

NumFunReport range_and_coverage(const RealLinearOperator& R, int n_rays) {
  return range_and_coverage(coeff_matrix(R).H, n_rays, 10.0 * (1.0 + operator_norm(R)));
}

}  // namespace rlspec

#include <cmath>
#include <functional>
#include <random>

#include <Eigen/Eigenvalues>

#include "phasebell/operators.hpp"

namespace phasebell::operators {

namespace {

using Apply = std::function<Vector(const Vector&)>;

struct Ritz {
  double value;
  Vector vector;
  double residual;
};

/// Explicitly restarted Lanczos with full reorthogonalization for one end of the spectrum.
Ritz lanczos_extreme(const Apply& apply, Eigen::Index dim, bool smallest, double tol, int max_restarts) {
  const Eigen::Index m = std::min<Eigen::Index>(dim, 120);
  std::mt19937_64 rng(20240611);
  std::normal_distribution<double> normal;
  Vector start(dim);
  for (Eigen::Index i = 0; i < dim; ++i) start[i] = cplx(normal(rng), normal(rng));
  start.normalize();

  Ritz best{0.0, start, INFINITY};
  for (int restart = 0; restart <= max_restarts; ++restart) {
    Matrix V(dim, m);
    std::vector<double> alpha, beta;
    V.col(0) = start;
    Eigen::Index k = 0;
    for (; k < m; ++k) {
      Vector w = apply(V.col(k));
      alpha.push_back(w.dot(V.col(k)).real());
      for (int pass = 0; pass < 2; ++pass) {
        w -= V.leftCols(k + 1) * (V.leftCols(k + 1).adjoint() * w);
      }
      const double b = w.norm();
      if (k + 1 == m || b < 1e-13) {
        ++k;
        break;
      }
      beta.push_back(b);
      V.col(k + 1) = w / b;
    }
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(k, k);
    for (Eigen::Index i = 0; i < k; ++i) {
      T(i, i) = alpha[static_cast<std::size_t>(i)];
      if (i + 1 < k) T(i, i + 1) = T(i + 1, i) = beta[static_cast<std::size_t>(i)];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
    const Eigen::Index pick = smallest ? 0 : k - 1;
    const Eigen::VectorXcd y = es.eigenvectors().col(pick).cast<cplx>();
    Vector x = V.leftCols(k) * y;
    x.normalize();
    const double theta = es.eigenvalues()[pick];
    const double residual = (apply(x) - theta * x).norm();
    best = Ritz{theta, x, residual};
    if (residual <= tol) break;
    start = x;
  }
  return best;
}

}  // namespace

SpectrumBounds spectrum_bounds_matrix_free(const ProjectorQuad& specs, const Axis& axis1, const Axis& axis2,
                                           double tol, int max_restarts) {
  grid::ComplexField2D field({axis1, axis2});
  const auto dim = static_cast<Eigen::Index>(field.size());
  Apply apply = [&](const Vector& v) {
    for (Eigen::Index i = 0; i < dim; ++i) field[static_cast<std::size_t>(i)] = v[i];
    const auto out = apply_P(specs, field);
    Vector r(dim);
    for (Eigen::Index i = 0; i < dim; ++i) r[i] = out[static_cast<std::size_t>(i)];
    return r;
  };
  const Ritz lo = lanczos_extreme(apply, dim, true, tol, max_restarts);
  const Ritz hi = lanczos_extreme(apply, dim, false, tol, max_restarts);
  const double residual = std::max(lo.residual, hi.residual);
  return SpectrumBounds{lo.value, hi.value, residual, "restarted-lanczos", residual <= tol};
}

}  // namespace phasebell::operators

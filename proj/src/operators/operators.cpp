#include <cmath>
#include <numbers>
#include <optional>

#include <Eigen/Eigenvalues>

#include "phasebell/operators.hpp"

namespace phasebell::operators {

namespace {

using quantum::WaveFunction1D;

Vector l2_coefficients(const WaveFunction1D& phi) {
  const double s = std::sqrt(phi.axis.step());
  Vector u(static_cast<Eigen::Index>(phi.values.size()));
  for (std::size_t j = 0; j < phi.values.size(); ++j) u[static_cast<Eigen::Index>(j)] = phi.values[j] * s;
  return u;
}

grid::ComplexField2D apply_projector(const ProjectorSpec& spec, const grid::ComplexField2D& f) {
  const std::size_t dim = static_cast<std::size_t>(spec.axis - 1);
  const Axis& pos = f.axis(dim);
  const auto mask = projector_mask(spec, pos);
  auto masked = [&](grid::ComplexField2D g) {
    for (std::size_t i = 0; i < g.extent(0); ++i) {
      for (std::size_t k = 0; k < g.extent(1); ++k) {
        if (!mask[dim == 0 ? i : k]) g(i, k) = 0.0;
      }
    }
    return g;
  };
  if (spec.representation == Representation::position) return masked(f);
  return grid::to_position(masked(grid::to_momentum(f, dim, pos)), dim, pos);
}

}  // namespace

std::string ProjectorSpec::describe() const {
  return std::string(representation == Representation::position ? "q" : "p") + std::to_string(axis) + " in " +
         set.describe();
}

Matrix fourier_matrix(const Axis& position) {
  const std::size_t n = position.size();
  const double h = position.step();
  const double dp = Axis::momentum_of(position).step();
  Matrix U(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  std::vector<cplx> e(n);
  for (std::size_t j = 0; j < n; ++j) {
    std::fill(e.begin(), e.end(), cplx{});
    e[j] = 1.0 / std::sqrt(h);
    const auto col = grid::to_momentum(e, position);
    for (std::size_t k = 0; k < n; ++k) {
      U(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j)) = col[k] * std::sqrt(dp);
    }
  }
  return U;
}

std::vector<std::uint8_t> projector_mask(const ProjectorSpec& spec, const Axis& position) {
  if (spec.axis != 1 && spec.axis != 2) throw Error("projector axis must be 1 or 2");
  if (position.kind() != Representation::position) throw Error("projector needs a position axis");
  const Axis axis = spec.representation == Representation::position ? position : Axis::momentum_of(position);
  if (!spec.allow_trivial && !spec.set.is_proper_on(axis)) {
    throw Error("projector set " + spec.set.describe() + " is empty or full on " + axis.describe());
  }
  return spec.set.mask_on(axis);
}

DiscreteOperator build_chi(const ProjectorSpec& spec, const Axis& position) {
  const auto mask = projector_mask(spec, position);
  const auto n = static_cast<Eigen::Index>(position.size());
  Eigen::VectorXcd d(n);
  for (Eigen::Index j = 0; j < n; ++j) d[j] = mask[static_cast<std::size_t>(j)] ? 1.0 : 0.0;
  if (spec.representation == Representation::position) {
    return DiscreteOperator{d.asDiagonal().toDenseMatrix(), {position}};
  }
  const Matrix U = fourier_matrix(position);
  Matrix chi = U.adjoint() * d.asDiagonal() * U;
  return DiscreteOperator{std::move(chi), {position}};
}

BellOperator build_P(const ProjectorQuad& specs, const Axis& axis1, const Axis& axis2) {
  if (specs.chi1.axis != 1 || specs.chi1p.axis != 1 || specs.chi2.axis != 2 || specs.chi2p.axis != 2) {
    throw Error("build_P needs chi1, chi1' on axis 1 and chi2, chi2' on axis 2");
  }
  BellOperator op{{}, build_chi(specs.chi1, axis1), build_chi(specs.chi2, axis2), build_chi(specs.chi1p, axis1),
                   build_chi(specs.chi2p, axis2)};
  const Matrix& a = op.chi1.matrix;
  const Matrix& ap = op.chi1p.matrix;
  const Matrix& b = op.chi2.matrix;
  const Matrix& bp = op.chi2p.matrix;
  const Eigen::Index n1 = a.rows(), n2 = b.rows();
  Matrix P(n1 * n2, n1 * n2);
  for (Eigen::Index i = 0; i < n1; ++i) {
    for (Eigen::Index j = 0; j < n1; ++j) {
      const cplx aij = a(i, j), apij = ap(i, j);
      const cplx id1 = i == j ? 1.0 : 0.0;
      for (Eigen::Index l = 0; l < n2; ++l) {
        for (Eigen::Index k = 0; k < n2; ++k) {
          const cplx id2 = k == l ? 1.0 : 0.0;
          P(i * n2 + k, j * n2 + l) = aij * id2 + id1 * b(k, l) + apij * bp(k, l) - aij * b(k, l) -
                                      aij * bp(k, l) - apij * b(k, l);
        }
      }
    }
  }
  op.P = DiscreteOperator{std::move(P), {axis1, axis2}};
  return op;
}

double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

double hermiticity_residual(const Matrix& m) { return max_abs(m - m.adjoint()); }

double idempotency_residual(const Matrix& m) { return max_abs(m * m - m); }

double check_P2_identity(const BellOperator& op) {
  const Matrix& P = op.P.matrix;
  Matrix D(P.rows(), P.cols());
  D.noalias() = P * P;
  D -= P;
  const Matrix C1 = op.chi1.matrix * op.chi1p.matrix - op.chi1p.matrix * op.chi1.matrix;
  const Matrix C2 = op.chi2.matrix * op.chi2p.matrix - op.chi2p.matrix * op.chi2.matrix;
  const Eigen::Index n1 = C1.rows(), n2 = C2.rows();
  double worst = 0.0;
  for (Eigen::Index i = 0; i < n1; ++i) {
    for (Eigen::Index j = 0; j < n1; ++j) {
      for (Eigen::Index k = 0; k < n2; ++k) {
        for (Eigen::Index l = 0; l < n2; ++l) {
          worst = std::max(worst, std::abs(D(i * n2 + k, j * n2 + l) + C1(i, j) * C2(k, l)));
        }
      }
    }
  }
  return worst;
}

RValue R_functional(const WaveFunction1D& phi, const Matrix& chi, const Matrix& chip) {
  const Vector u = l2_coefficients(phi);
  const Vector w = cplx(0.0, 1.0) * (chi * (chip * u) - chip * (chi * u));
  const cplx value = u.dot(w);
  return RValue{value.real(), std::abs(value.imag())};
}

WaveFunction1D flip(const WaveFunction1D& phi, const Matrix& chi) {
  const Vector u = l2_coefficients(phi);
  const Vector v = 2.0 * (chi * u) - u;
  const double s = 1.0 / std::sqrt(phi.axis.step());
  std::vector<cplx> values(phi.values.size());
  for (std::size_t j = 0; j < values.size(); ++j) values[j] = v[static_cast<Eigen::Index>(j)] * s;
  return WaveFunction1D{phi.axis, std::move(values)};
}

double product_expectation_P1mP(const BellOperator& op, const WaveFunction1D& phi1, const WaveFunction1D& phi2) {
  const Vector u1 = l2_coefficients(phi1);
  const Vector u2 = l2_coefficients(phi2);
  Vector v(u1.size() * u2.size());
  for (Eigen::Index i = 0; i < u1.size(); ++i) v.segment(i * u2.size(), u2.size()) = u1[i] * u2;
  const Vector Pv = op.P.matrix * v;
  return (v.dot(Pv) - Pv.squaredNorm()).real();
}

Witness negativity_witness(const BellOperator& op) {
  struct Candidate {
    WaveFunction1D phi;
    std::string label;
    double R;
  };
  auto best_on = [](const Axis& axis, const Matrix& chi, const Matrix& chip) {
    std::optional<Candidate> best;
    for (int flipped = 0; flipped < 2; ++flipped) {
      for (double center : {-2.0, -1.0, 0.0, 1.0, 2.0}) {
        for (double width : {0.5, 1.0, 2.0}) {
          auto phi = quantum::gaussian_1d(axis, center, width);
          std::string label = "gaussian(center=" + std::to_string(center) + ",width=" + std::to_string(width) + ")";
          if (flipped) {
            phi = flip(phi, chi);
            label = "flip(" + label + ")";
          }
          const double R = R_functional(phi, chi, chip).value;
          if (!best || std::abs(R) > std::abs(best->R)) best = Candidate{std::move(phi), std::move(label), R};
        }
      }
    }
    return *best;
  };
  Candidate c1 = best_on(op.chi1.axes[0], op.chi1.matrix, op.chi1p.matrix);
  Candidate c2 = best_on(op.chi2.axes[0], op.chi2.matrix, op.chi2p.matrix);
  if (std::abs(c1.R) < 1e-12 || std::abs(c2.R) < 1e-12) {
    throw Error("witness catalog exhausted: largest |R1| = " + std::to_string(std::abs(c1.R)) +
                ", |R2| = " + std::to_string(std::abs(c2.R)));
  }
  if (c1.R * c2.R < 0.0) {
    c2.phi = flip(c2.phi, op.chi2.matrix);
    c2.label = "flip(" + c2.label + ")";
    c2.R = R_functional(c2.phi, op.chi2.matrix, op.chi2p.matrix).value;
  }
  const double value = product_expectation_P1mP(op, c1.phi, c2.phi);
  if (!(value < 0.0)) {
    throw Error("witness search ended without negativity (best value " + std::to_string(value) + ")");
  }
  return Witness{c1.phi, c2.phi, c1.label, c2.label, c1.R, c2.R, value, std::abs(value + c1.R * c2.R)};
}

SpectrumBounds spectrum_bounds(const BellOperator& op) {
  const Matrix& P = op.P.matrix;
  Eigen::SelfAdjointEigenSolver<Matrix> es(P);
  if (es.info() != Eigen::Success) throw Error("Hermitian eigensolver did not converge");
  const auto& ev = es.eigenvalues();
  const Eigen::Index last = ev.size() - 1;
  auto residual = [&](Eigen::Index k) {
    const Vector v = es.eigenvectors().col(k);
    return (P * v - ev[k] * v).norm();
  };
  return SpectrumBounds{ev[0], ev[last], std::max(residual(0), residual(last)), "dense-eigendecomposition",
                        true};
}

grid::ComplexField2D apply_P(const ProjectorQuad& specs, const grid::ComplexField2D& psi) {
  if (specs.chi1.axis != 1 || specs.chi1p.axis != 1 || specs.chi2.axis != 2 || specs.chi2p.axis != 2) {
    throw Error("apply_P needs chi1, chi1' on axis 1 and chi2, chi2' on axis 2");
  }
  const auto a = apply_projector(specs.chi1, psi);
  const auto b = apply_projector(specs.chi2, psi);
  const auto bp = apply_projector(specs.chi2p, psi);
  const auto c = apply_projector(specs.chi1p, bp);
  const auto d = apply_projector(specs.chi1, b);
  const auto e = apply_projector(specs.chi1, bp);
  const auto f = apply_projector(specs.chi1p, b);
  grid::ComplexField2D out(psi.axes());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] + b[i] + c[i] - d[i] - e[i] - f[i];
  return out;
}

double expectation_P(const ProjectorQuad& specs, const quantum::WaveFunction2D& psi) {
  const auto& f = psi.amplitudes();
  const auto Pf = apply_P(specs, f);
  cplx sum{};
  for (std::size_t i = 0; i < f.size(); ++i) sum += std::conj(f[i]) * Pf[i];
  return sum.real() * f.cell();
}

}  // namespace phasebell::operators

#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "phasebell/grid.hpp"
#include "phasebell/indicator_set.hpp"
#include "phasebell/quantum.hpp"

namespace phasebell::operators {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using grid::Axis;
using grid::Representation;

/// Matrices act on l2 coefficients u_j = psi(x_j) sqrt(step); 2D index is i * n2 + k.
struct DiscreteOperator {
  Matrix matrix;
  std::vector<Axis> axes;
};

struct ProjectorSpec {
  int axis = 1;  // particle 1 or 2
  Representation representation = Representation::position;
  grid::IndicatorSet set = grid::IndicatorSet::above(0.0);
  /// Empty or full sets are rejected unless this is set.
  bool allow_trivial = false;

  std::string describe() const;
};

/// chi1, chi2 (position side) and chi1', chi2' (momentum side) in the usual arrangement,
/// though any representation is accepted per slot.
struct ProjectorQuad {
  ProjectorSpec chi1;
  ProjectorSpec chi2;
  ProjectorSpec chi1p;
  ProjectorSpec chi2p;
};

/// Matrix of the unitary position -> momentum transform in l2 coefficients.
Matrix fourier_matrix(const Axis& position);
/// 0/1 mask of a spec on the given position axis (or its momentum dual).
std::vector<std::uint8_t> projector_mask(const ProjectorSpec& spec, const Axis& position);

DiscreteOperator build_chi(const ProjectorSpec& spec, const Axis& position);

struct BellOperator {
  DiscreteOperator P;
  DiscreteOperator chi1, chi2, chi1p, chi2p;  // 1D factors
};

/// P = chi1 + chi2 + chi1' chi2' - chi1 chi2 - chi1 chi2' - chi1' chi2 on axis1 x axis2.
BellOperator build_P(const ProjectorQuad& specs, const Axis& axis1, const Axis& axis2);

double max_abs(const Matrix& m);
double hermiticity_residual(const Matrix& m);
double idempotency_residual(const Matrix& m);

/// max|P^2 - P + [chi1, chi1'] (x) [chi2, chi2']|.
double check_P2_identity(const BellOperator& op);

struct RValue {
  double value;
  double imag_residual;
};

/// <Phi| i [chi, chi'] |Phi> for a normalized 1D state.
RValue R_functional(const quantum::WaveFunction1D& phi, const Matrix& chi, const Matrix& chip);
/// (2 chi - 1) Phi.
quantum::WaveFunction1D flip(const quantum::WaveFunction1D& phi, const Matrix& chi);

struct Witness {
  quantum::WaveFunction1D phi1;
  quantum::WaveFunction1D phi2;
  std::string label1;
  std::string label2;
  double R1;
  double R2;
  double value;           // <Psi| P (1 - P) |Psi> from the matrix
  double product_identity_residual;   // |value + R1 R2|
};

/// Searches Gaussians (centers -2..2, widths 0.5, 1, 2, and their flips) for a
/// factorized state with <P(1-P)> < 0. Throws if none is found.
Witness negativity_witness(const BellOperator& op);
/// <Psi| P (1 - P) |Psi> for Psi = phi1 (x) phi2.
double product_expectation_P1mP(const BellOperator& op, const quantum::WaveFunction1D& phi1,
                                 const quantum::WaveFunction1D& phi2);

struct SpectrumBounds {
  double lambda_min;
  double lambda_max;
  double residual;  // max of ||P v - lambda v|| at both ends
  std::string method;
  bool converged;
};

/// Full Hermitian eigendecomposition.
SpectrumBounds spectrum_bounds(const BellOperator& op);
/// Matrix-free Lanczos on apply_P; for grids too large for dense matrices.
SpectrumBounds spectrum_bounds_matrix_free(const ProjectorQuad& specs, const Axis& axis1, const Axis& axis2,
                                           double tol = 1e-8, int max_restarts = 50);

/// P applied to a 2D field in the position representation, without matrices.
grid::ComplexField2D apply_P(const ProjectorQuad& specs, const grid::ComplexField2D& psi);
/// <psi|P|psi> by quadrature.
double expectation_P(const ProjectorQuad& specs, const quantum::WaveFunction2D& psi);

}  // namespace phasebell::operators

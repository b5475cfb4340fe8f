#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "phasebell/atomic.hpp"
#include "phasebell/grid.hpp"

namespace phasebell::quantum {

using grid::Axis;
using grid::ComplexField2D;
using grid::RealField2D;
using grid::RealField4D;

/// Normalized single-particle amplitude on a position axis.
struct WaveFunction1D {
  Axis axis;
  std::vector<cplx> values;

  /// Renormalizes the samples to unit quadrature norm.
  static WaveFunction1D normalized(const Axis& axis, std::vector<cplx> values);
  std::vector<cplx> momentum() const { return grid::to_momentum(values, axis); }
};

/// Two-particle amplitude psi(q1, q2) on a tensor grid of position axes; unit norm within 1e-9.
class WaveFunction2D {
 public:
  explicit WaveFunction2D(ComplexField2D amplitudes);
  /// Rescales to unit norm; the pre-normalization norm is written to raw_norm if given.
  static WaveFunction2D normalized(ComplexField2D amplitudes, double* raw_norm = nullptr);

  const ComplexField2D& amplitudes() const { return amplitudes_; }
  const Axis& axis(std::size_t d) const { return amplitudes_.axis(d); }
  double norm() const;

 private:
  ComplexField2D amplitudes_;
};

// ---- catalog ----------------------------------------------------------------

WaveFunction1D gaussian_1d(const Axis& axis, double center = 0.0, double width = 1.0);
/// Harmonic-oscillator eigenfunction (m = omega = hbar = 1).
WaveFunction1D harmonic_oscillator_1d(const Axis& axis, unsigned level);
WaveFunction2D product_state(const WaveFunction1D& first, const WaveFunction1D& second);
/// iid complex Gaussian amplitudes, normalized. Deterministic for a given seed.
WaveFunction2D random_state(const Axis& axis, std::uint64_t seed);

// ---- mixed representations and marginals ------------------------------------

struct MixedAmplitudes {
  ComplexField2D qq;  // <q1,q2|psi>
  ComplexField2D qp;  // <q1,p2|psi>
  ComplexField2D pq;  // <p1,q2|psi>
  ComplexField2D pp;  // <p1,p2|psi>
};

MixedAmplitudes mixed_representations(const WaveFunction2D& psi);

using Marginal = std::variant<RealField2D, grid::AtomicDistribution2D>;

enum class Provenance { quantum, classical };
std::string to_string(Provenance p);

/// The four two-variable densities sigma_qq(q1,q2), sigma_qp(q1,p2),
/// sigma_pq(p1,q2), sigma_pp(p1,p2). Grid members keep particle 1 on the first axis.
struct MarginalQuartet {
  Marginal qq;
  Marginal qp;
  Marginal pq;
  Marginal pp;
  Provenance provenance;

  const Marginal& get(grid::MarginalPair pair) const;
};

MarginalQuartet quantum_marginals(const WaveFunction2D& psi);
/// |amplitude|^2 of a complex field.
RealField2D density_of(const ComplexField2D& amplitude);

// ---- regularized 1/sqrt(q) states --------------------------------------------

/// h_L(q) = theta(L - q) / sqrt(ln(L + 1)) / sqrt(q + 1), normalized on [0, inf).
/// a(q) = h_L(|q|)/sqrt(2) is even, b(q) = sgn(q) h_L(|q|)/sqrt(2) is odd.
struct RegularizedSqrtState {
  double cutoff;  // L
  int sign;       // +1 or -1

  RegularizedSqrtState(double L, int sign);
  double h(double q) const;
  double even(double q) const;
  double odd(double q) const;
  /// Psi(q1, q2) = [1 + sign e^{i pi/4} sgn(q1) sgn(q2)] h(|q1|) h(|q2|) / (2 sqrt 2).
  cplx amplitude(double q1, double q2) const;
};

struct PsiLResult {
  WaveFunction2D psi;
  double raw_norm;  // quadrature norm of the samples before renormalization
};

/// Samples Psi_(+/-) on axis x axis. The axis must cover [-L, L] unless
/// allow_truncation is set.
PsiLResult psi_L(double L, int sign, const Axis& axis, bool allow_truncation = false);

// ---- factorized-state density and Wigner function -----------------------------

/// rho = |phi1(q1)|^2 |phi2(q2)|^2 |phi1~(p1)|^2 |phi2~(p2)|^2 on (q1, q2, p1, p2).
RealField4D product_density(const WaveFunction1D& first, const WaveFunction1D& second);

/// Wigner function on (q1, q2, p1, p2) with the position axes of psi and their
/// momentum duals. Uses pairs psi*(q+s) psi(q-s) with s on the half-step lattice;
/// half-step samples come from spectral shifts.
RealField4D wigner(const WaveFunction2D& psi);

/// Wigner value at one phase-space point. q1, q2 must lie on the half-step
/// lattice lower + h/2 + l h/2 of their axes; p1, p2 are arbitrary.
double wigner_value(const WaveFunction2D& psi, double q1, double q2, double p1, double p2);

// ---- state specifications -----------------------------------------------------

/// Parses a catalog spec: "gaussian", "ho:<n1>,<n2>", "psi+:<L>", "psi-:<L>",
/// "random:<seed>" or "file:<path>" (serialized ComplexField2D).
WaveFunction2D state_from_spec(const std::string& spec, const Axis& axis);

}  // namespace phasebell::quantum

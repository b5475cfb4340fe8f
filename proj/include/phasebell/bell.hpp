#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>

#include <json.hpp>

#include "phasebell/atomic.hpp"
#include "phasebell/indicator_set.hpp"
#include "phasebell/operators.hpp"
#include "phasebell/quantum.hpp"

namespace phasebell::bell {

using grid::IndicatorSet;

/// Sets S1 (q1), S2 (q2), S1' (p1), S2' (p2). Each must be nonempty with nonempty complement.
class SignPattern {
 public:
  SignPattern(IndicatorSet s1, IndicatorSet s2, IndicatorSet s1p, IndicatorSet s2p);
  /// chi_i = theta(q_i), chi_i' = theta(p_i).
  static SignPattern theta() { return half_lines(0.0, 0.0, 0.0, 0.0); }
  static SignPattern half_lines(double c1, double c2, double c1p, double c2p);

  const IndicatorSet& s1() const { return sets_[0]; }
  const IndicatorSet& s2() const { return sets_[1]; }
  const IndicatorSet& s1p() const { return sets_[2]; }
  const IndicatorSet& s2p() const { return sets_[3]; }
  const std::array<IndicatorSet, 4>& sets() const { return sets_; }

  SignPattern complemented() const;
  /// Complements S_i and S_i' of one particle (1 or 2).
  SignPattern complemented_particle(int particle) const;
  std::string describe() const;

 private:
  std::array<IndicatorSet, 4> sets_;
};

struct BellFunctions {
  std::function<int(double, double)> r;  // (q1, q2)
  std::function<int(double, double)> s;  // (q1, p2)
  std::function<int(double, double)> t;  // (p1, q2)
  std::function<int(double, double)> u;  // (p1, p2), carries the minus sign
};

BellFunctions bell_functions(const SignPattern& pattern);

/// chi1 + chi2 + chi1' chi2' - chi1 chi2 - chi1 chi2' - chi1' chi2 for 0/1 inputs.
int classical_P(bool chi1, bool chi2, bool chi1p, bool chi2p);
/// r + s + t + u for 0/1 inputs.
int sign_sum(bool chi1, bool chi2, bool chi1p, bool chi2p);
int classical_P(const SignPattern& pattern, const std::array<double, 4>& point);

/// Projectors chi1, chi2 in position and chi1', chi2' in momentum for this pattern.
operators::ProjectorQuad projector_specs(const SignPattern& pattern);

struct BellReport {
  double S = 0.0;
  std::array<double, 4> terms{};  // r, s, t, u contributions
  std::optional<grid::Rational> exact_S;
  std::optional<std::array<grid::Rational, 4>> exact_terms;
  std::string pattern;
  std::string provenance;
  std::optional<double> operator_S;  // 2 - 4 <P>, when computed
};

nlohmann::json to_json(const BellReport& report);

/// Four-term functional; grid members by quadrature, atomic members exactly.
BellReport bell_S(const quantum::MarginalQuartet& quartet, const SignPattern& pattern);

struct Counterexample {
  double a1, a2, a1p, a2p, b1, b2, b1p, b2p;
};

/// Half-weight atoms as in the classical counterexample.
quantum::MarginalQuartet counterexample_quartet(const Counterexample& c);
/// Half-line pattern with unprimed atoms inside and primed atoms outside every set.
SignPattern aligned_pattern(const Counterexample& c);

/// bell_S on the quantum marginals, with the 2 - 4<P> cross-check filled in.
BellReport quantum_bell_S(const quantum::WaveFunction2D& psi, const SignPattern& pattern);

// ---- 1D reduction for Psi_(+/-) -----------------------------------------------

/// Overlaps of the even/odd components a, b: position side <.|theta(q)|.>,
/// momentum side <.~|theta(p)|.~>.
struct Overlaps {
  double qa = 0.5, qb = 0.5, qab = 0.5;
  double ka = 0.5, kb = 0.5;
  cplx kab;
};

/// S = 2 - 4 <P> for (a (x) a + sign e^{i pi/4} b (x) b)/sqrt 2 and the theta pattern.
double S_from_overlaps(const Overlaps& o, int sign);

struct BetaEstimate {
  double beta;  // kab = i beta
  double error;
  bool converged;
};

/// beta from momentum-side oscillatory quadrature.
BetaEstimate beta_momentum(double L);
/// beta from the position-side Hilbert-kernel double integral (independent route).
BetaEstimate beta_position(double L);

struct LargeLResult {
  double L;
  int sign;
  double S;
  double beta;
  double error_estimate;   // propagated quadrature error on S
  double route_discrepancy;  // |S(momentum) - S(position)|
  bool converged;
};

LargeLResult large_L_S(double L, int sign);
nlohmann::json to_json(const LargeLResult& r);

}  // namespace phasebell::bell

#include <cmath>
#include <numbers>

#include "phasebell/quantum.hpp"

namespace phasebell::quantum {

RegularizedSqrtState::RegularizedSqrtState(double L, int s) : cutoff(L), sign(s) {
  if (!(L > 0.0) || !std::isfinite(L)) throw Error("cutoff L must be positive and finite");
  if (s != 1 && s != -1) throw Error("sign must be +1 or -1");
}

double RegularizedSqrtState::h(double q) const {
  if (q < 0.0 || q >= cutoff) return 0.0;
  return 1.0 / std::sqrt(std::log1p(cutoff) * (q + 1.0));
}

double RegularizedSqrtState::even(double q) const { return h(std::abs(q)) / std::numbers::sqrt2; }

double RegularizedSqrtState::odd(double q) const {
  const double s = q > 0.0 ? 1.0 : (q < 0.0 ? -1.0 : 0.0);
  return s * h(std::abs(q)) / std::numbers::sqrt2;
}

cplx RegularizedSqrtState::amplitude(double q1, double q2) const {
  const double s1 = q1 >= 0.0 ? 1.0 : -1.0;
  const double s2 = q2 >= 0.0 ? 1.0 : -1.0;
  const cplx phase = std::polar(1.0, std::numbers::pi / 4.0);
  return (1.0 + static_cast<double>(sign) * phase * s1 * s2) * h(std::abs(q1)) * h(std::abs(q2)) /
         (2.0 * std::numbers::sqrt2);
}

PsiLResult psi_L(double L, int sign, const Axis& axis, bool allow_truncation) {
  const RegularizedSqrtState state(L, sign);
  if (!allow_truncation && (axis.lower() > -L || axis.upper() < L)) {
    throw Error("axis " + axis.describe() + " does not cover [-L, L] for L = " + std::to_string(L));
  }
  ComplexField2D f({axis, axis});
  const auto x = axis.points();
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = 0; j < x.size(); ++j) f(i, j) = state.amplitude(x[i], x[j]);
  }
  double raw = 0.0;
  auto psi = WaveFunction2D::normalized(std::move(f), &raw);
  return PsiLResult{std::move(psi), raw};
}

}  // namespace phasebell::quantum

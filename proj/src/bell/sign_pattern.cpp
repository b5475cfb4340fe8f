#include "phasebell/bell.hpp"

namespace phasebell::bell {

namespace {

int pm(bool chi) { return chi ? 1 : -1; }

void require_proper(const IndicatorSet& set, const char* name) {
  if (set.is_empty() || set.is_full()) {
    throw Error(std::string("sign-pattern set ") + name + " must be nonempty with nonempty complement");
  }
}

}  // namespace

SignPattern::SignPattern(IndicatorSet s1, IndicatorSet s2, IndicatorSet s1p, IndicatorSet s2p)
    : sets_{std::move(s1), std::move(s2), std::move(s1p), std::move(s2p)} {
  require_proper(sets_[0], "S1");
  require_proper(sets_[1], "S2");
  require_proper(sets_[2], "S1'");
  require_proper(sets_[3], "S2'");
}

SignPattern SignPattern::half_lines(double c1, double c2, double c1p, double c2p) {
  return SignPattern(IndicatorSet::above(c1), IndicatorSet::above(c2), IndicatorSet::above(c1p),
                     IndicatorSet::above(c2p));
}

SignPattern SignPattern::complemented() const {
  return SignPattern(sets_[0].complement(), sets_[1].complement(), sets_[2].complement(),
                     sets_[3].complement());
}

SignPattern SignPattern::complemented_particle(int particle) const {
  if (particle != 1 && particle != 2) throw Error("particle must be 1 or 2");
  auto s = sets_;
  const std::size_t i = particle == 1 ? 0 : 1;
  s[i] = s[i].complement();
  s[i + 2] = s[i + 2].complement();
  return SignPattern(s[0], s[1], s[2], s[3]);
}

std::string SignPattern::describe() const {
  return "S1=" + sets_[0].describe() + " S2=" + sets_[1].describe() + " S1'=" + sets_[2].describe() +
         " S2'=" + sets_[3].describe();
}

BellFunctions bell_functions(const SignPattern& pattern) {
  const auto [s1, s2, s1p, s2p] = pattern.sets();
  BellFunctions f;
  f.r = [s1, s2](double q1, double q2) { return pm(s1.contains(q1)) * pm(s2.contains(q2)); };
  f.s = [s1, s2p](double q1, double p2) { return pm(s1.contains(q1)) * pm(s2p.contains(p2)); };
  f.t = [s1p, s2](double p1, double q2) { return pm(s1p.contains(p1)) * pm(s2.contains(q2)); };
  f.u = [s1p, s2p](double p1, double p2) { return -pm(s1p.contains(p1)) * pm(s2p.contains(p2)); };
  return f;
}

int classical_P(bool chi1, bool chi2, bool chi1p, bool chi2p) {
  const int c1 = chi1, c2 = chi2, d1 = chi1p, d2 = chi2p;
  return c1 + c2 + d1 * d2 - c1 * c2 - c1 * d2 - d1 * c2;
}

int sign_sum(bool chi1, bool chi2, bool chi1p, bool chi2p) {
  return pm(chi1) * pm(chi2) + pm(chi1) * pm(chi2p) + pm(chi1p) * pm(chi2) - pm(chi1p) * pm(chi2p);
}

int classical_P(const SignPattern& pattern, const std::array<double, 4>& point) {
  return classical_P(pattern.s1().contains(point[0]), pattern.s2().contains(point[1]),
                     pattern.s1p().contains(point[2]), pattern.s2p().contains(point[3]));
}

operators::ProjectorQuad projector_specs(const SignPattern& pattern) {
  using grid::Representation;
  return operators::ProjectorQuad{
      {1, Representation::position, pattern.s1(), false},
      {2, Representation::position, pattern.s2(), false},
      {1, Representation::momentum, pattern.s1p(), false},
      {2, Representation::momentum, pattern.s2p(), false},
  };
}

}  // namespace phasebell::bell

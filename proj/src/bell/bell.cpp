#include <cmath>
#include <numbers>

#include "phasebell/bell.hpp"

namespace phasebell::bell {

namespace {

using grid::AtomicDistribution2D;
using grid::MarginalPair;
using grid::Rational;
using grid::RealField2D;

constexpr std::array<MarginalPair, 4> kPairs{MarginalPair::qq, MarginalPair::qp, MarginalPair::pq,
                                              MarginalPair::pp};

struct TermSets {
  const IndicatorSet* first;
  const IndicatorSet* second;
  int overall;  // -1 for u
};

TermSets sets_for(const SignPattern& p, MarginalPair pair) {
  switch (pair) {
    case MarginalPair::qq: return {&p.s1(), &p.s2(), 1};
    case MarginalPair::qp: return {&p.s1(), &p.s2p(), 1};
    case MarginalPair::pq: return {&p.s1p(), &p.s2(), 1};
    case MarginalPair::pp: return {&p.s1p(), &p.s2p(), -1};
  }
  throw Error("invalid marginal selector");
}

/// Tracks the q1, q2, p1, p2 axes seen across grid members.
class AxisRegistry {
 public:
  void check(const RealField2D& f, MarginalPair pair) {
    const auto kept = grid::kept_axes(pair);
    for (std::size_t d = 0; d < 2; ++d) {
      const std::size_t slot = kept[d];
      const auto expected = slot < 2 ? grid::Representation::position : grid::Representation::momentum;
      if (f.axis(d).kind() != expected) {
        throw Error("marginal " + grid::to_string(pair) + " has a " +
                    (expected == grid::Representation::position ? "momentum" : "position") +
                    " axis where a " +
                    (expected == grid::Representation::position ? "position" : "momentum") + " axis is required");
      }
      if (!seen_[slot]) {
        seen_[slot] = f.axis(d);
      } else if (!(*seen_[slot] == f.axis(d))) {
        throw Error("marginal " + grid::to_string(pair) + " axis " + f.axis(d).describe() +
                    " does not match " + seen_[slot]->describe());
      }
    }
  }

 private:
  std::array<std::optional<grid::Axis>, 4> seen_;
};

double grid_term(const RealField2D& f, const TermSets& ts) {
  for (std::size_t d = 0; d < 2; ++d) {
    const auto* set = d == 0 ? ts.first : ts.second;
    if (!set->is_proper_on(f.axis(d))) {
      throw Error("sign-pattern set " + set->describe() + " is trivial on axis " + f.axis(d).describe());
    }
  }
  const auto m0 = ts.first->mask_on(f.axis(0));
  const auto m1 = ts.second->mask_on(f.axis(1));
  double sum = 0.0;
  for (std::size_t i = 0; i < f.extent(0); ++i) {
    const int s0 = m0[i] ? 1 : -1;
    double row = 0.0;
    for (std::size_t j = 0; j < f.extent(1); ++j) row += (m1[j] ? 1.0 : -1.0) * f(i, j);
    sum += s0 * row;
  }
  return ts.overall * sum * f.cell();
}

Rational atomic_term(const AtomicDistribution2D& dist, const TermSets& ts) {
  Rational sum;
  for (const auto& atom : dist.atoms()) {
    for (int d = 0; d < 2; ++d) {
      const double x = d == 0 ? atom.x : atom.y;
      const auto* set = d == 0 ? ts.first : ts.second;
      if (set->near_boundary(x, 1e-12 * std::max(1.0, std::abs(x)))) {
        throw Error("atom coordinate " + std::to_string(x) + " lies on a boundary of " + set->describe());
      }
    }
    const int sign = ts.overall * (ts.first->contains(atom.x) ? 1 : -1) * (ts.second->contains(atom.y) ? 1 : -1);
    sum += Rational(sign) * atom.weight;
  }
  return sum;
}

}  // namespace

BellReport bell_S(const quantum::MarginalQuartet& quartet, const SignPattern& pattern) {
  BellReport report;
  report.pattern = pattern.describe();
  report.provenance = quantum::to_string(quartet.provenance);
  AxisRegistry axes;
  std::array<Rational, 4> exact{};
  bool all_atomic = true;
  for (std::size_t k = 0; k < 4; ++k) {
    const auto pair = kPairs[k];
    const auto ts = sets_for(pattern, pair);
    const auto& member = quartet.get(pair);
    if (const auto* f = std::get_if<RealField2D>(&member)) {
      axes.check(*f, pair);
      report.terms[k] = grid_term(*f, ts);
      all_atomic = false;
    } else {
      exact[k] = atomic_term(std::get<AtomicDistribution2D>(member), ts);
      report.terms[k] = exact[k].to_double();
    }
  }
  report.S = report.terms[0] + report.terms[1] + report.terms[2] + report.terms[3];
  if (all_atomic) {
    report.exact_terms = exact;
    report.exact_S = exact[0] + exact[1] + exact[2] + exact[3];
    report.S = report.exact_S->to_double();
  }
  return report;
}

quantum::MarginalQuartet counterexample_quartet(const Counterexample& c) {
  auto distinct = [](double u, double v, const char* name) {
    if (!std::isfinite(u) || !std::isfinite(v) || u == v) {
      throw Error(std::string("counterexample values for ") + name + " must be finite and distinct");
    }
  };
  distinct(c.a1, c.a1p, "q1");
  distinct(c.a2, c.a2p, "q2");
  distinct(c.b1, c.b1p, "p1");
  distinct(c.b2, c.b2p, "p2");
  const Rational half(1, 2);
  auto pair_of = [&](double x, double y, double xp, double yp) {
    return AtomicDistribution2D({{x, y, half}, {xp, yp, half}});
  };
  return quantum::MarginalQuartet{
      pair_of(c.a1, c.a2, c.a1p, c.a2p),
      pair_of(c.a1, c.b2, c.a1p, c.b2p),
      pair_of(c.b1, c.a2, c.b1p, c.a2p),
      pair_of(c.b1, c.b2p, c.b1p, c.b2),
      quantum::Provenance::classical,
  };
}

SignPattern aligned_pattern(const Counterexample& c) {
  auto containing = [](double inside, double outside) {
    const double mid = 0.5 * (inside + outside);
    return inside > outside ? IndicatorSet::above(mid) : IndicatorSet::below(mid);
  };
  return SignPattern(containing(c.a1, c.a1p), containing(c.a2, c.a2p), containing(c.b1, c.b1p),
                     containing(c.b2, c.b2p));
}

BellReport quantum_bell_S(const quantum::WaveFunction2D& psi, const SignPattern& pattern) {
  BellReport report = bell_S(quantum::quantum_marginals(psi), pattern);
  report.operator_S = 2.0 - 4.0 * operators::expectation_P(projector_specs(pattern), psi);
  return report;
}

double S_from_overlaps(const Overlaps& o, int sign) {
  if (sign != 1 && sign != -1) throw Error("sign must be +1 or -1");
  const cplx c = static_cast<double>(sign) * std::polar(1.0, std::numbers::pi / 4.0);
  const double chi = 0.5 * (o.qa + o.qb);
  const double QQ = 0.5 * (o.qa * o.qa + o.qb * o.qb + 2.0 * (c * o.qab * o.qab).real());
  const double KK = 0.5 * (o.ka * o.ka + o.kb * o.kb + 2.0 * (c * o.kab * o.kab).real());
  const double QK = 0.5 * (o.qa * o.ka + o.qb * o.kb + 2.0 * (c * o.qab * o.kab).real());
  const double P = 2.0 * chi + KK - QQ - 2.0 * QK;
  return 2.0 - 4.0 * P;
}

nlohmann::json to_json(const BellReport& r) {
  nlohmann::json j;
  j["S"] = r.S;
  j["terms"] = {{"r", r.terms[0]}, {"s", r.terms[1]}, {"t", r.terms[2]}, {"u", r.terms[3]}};
  j["pattern"] = r.pattern;
  j["provenance"] = r.provenance;
  if (r.exact_S) {
    j["exact_S"] = r.exact_S->str();
    const auto& e = *r.exact_terms;
    j["exact_terms"] = {{"r", e[0].str()}, {"s", e[1].str()}, {"t", e[2].str()}, {"u", e[3].str()}};
  }
  if (r.operator_S) {
    j["operator_S"] = *r.operator_S;
    j["bridge_residual"] = std::abs(*r.operator_S - r.S);
  }
  return j;
}

nlohmann::json to_json(const LargeLResult& r) {
  return {{"L", r.L},
          {"sign", r.sign},
          {"S", r.S},
          {"beta", r.beta},
          {"error_estimate", r.error_estimate},
          {"route_discrepancy", r.route_discrepancy},
          {"converged", r.converged}};
}

}  // namespace phasebell::bell

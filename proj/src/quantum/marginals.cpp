#include "phasebell/quantum.hpp"

namespace phasebell::quantum {

std::string to_string(Provenance p) {
  return p == Provenance::quantum ? "quantum-from-psi" : "classical-constructed";
}

const Marginal& MarginalQuartet::get(grid::MarginalPair pair) const {
  switch (pair) {
    case grid::MarginalPair::qq: return qq;
    case grid::MarginalPair::qp: return qp;
    case grid::MarginalPair::pq: return pq;
    case grid::MarginalPair::pp: return pp;
  }
  throw Error("invalid marginal selector");
}

MixedAmplitudes mixed_representations(const WaveFunction2D& psi) {
  const ComplexField2D& qq = psi.amplitudes();
  ComplexField2D qp = grid::to_momentum(qq, 1, psi.axis(1));
  ComplexField2D pq = grid::to_momentum(qq, 0, psi.axis(0));
  ComplexField2D pp = grid::to_momentum(qp, 0, psi.axis(0));
  return MixedAmplitudes{qq, std::move(qp), std::move(pq), std::move(pp)};
}

RealField2D density_of(const ComplexField2D& amplitude) {
  RealField2D out({amplitude.axis(0), amplitude.axis(1)});
  for (std::size_t i = 0; i < amplitude.size(); ++i) out[i] = std::norm(amplitude[i]);
  return out;
}

MarginalQuartet quantum_marginals(const WaveFunction2D& psi) {
  auto reps = mixed_representations(psi);
  return MarginalQuartet{density_of(reps.qq), density_of(reps.qp), density_of(reps.pq),
                         density_of(reps.pp), Provenance::quantum};
}

RealField4D product_density(const WaveFunction1D& first, const WaveFunction1D& second) {
  const auto m1 = first.momentum();
  const auto m2 = second.momentum();
  const Axis p1 = Axis::momentum_of(first.axis);
  const Axis p2 = Axis::momentum_of(second.axis);
  RealField4D rho({first.axis, second.axis, p1, p2});
  const std::size_t n0 = first.values.size(), n1 = second.values.size();
  std::size_t flat = 0;
  for (std::size_t a = 0; a < n0; ++a) {
    const double fa = std::norm(first.values[a]);
    for (std::size_t b = 0; b < n1; ++b) {
      const double fab = fa * std::norm(second.values[b]);
      for (std::size_t c = 0; c < m1.size(); ++c) {
        const double fabc = fab * std::norm(m1[c]);
        for (std::size_t d = 0; d < m2.size(); ++d) rho[flat++] = fabc * std::norm(m2[d]);
      }
    }
  }
  return rho;
}

}  // namespace phasebell::quantum

#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "phasebell/bell.hpp"
#include "phasebell/marginal.hpp"
#include "phasebell/quantum.hpp"

using namespace phasebell;
using namespace phasebell::marginal;
using grid::Axis;
using quantum::MarginalQuartet;

namespace {

const MarginalPair kPairs[] = {MarginalPair::qq, MarginalPair::qp, MarginalPair::pq, MarginalPair::pp};

double max_diff(const grid::RealField4D& a, const grid::RealField4D& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

double min_value(const grid::RealField4D& f) {
  return *std::min_element(f.values().begin(), f.values().end());
}

}  // namespace

TEST_CASE("quantum quartets are consistent") {
  const Axis q = Axis::position(16, -6.0, 6.0);
  for (const char* spec : {"gaussian", "ho:1,2", "random:4", "psi+:5"}) {
    CAPTURE(spec);
    const auto quartet = quantum::quantum_marginals(quantum::state_from_spec(spec, q));
    const auto rep = check_consistency(quartet);
    CHECK(rep.pass());
    CHECK_FALSE(rep.exact);
    for (auto drop : kPairs) CHECK(check_consistency(MarginalTriple::from_quartet(quartet, drop)).pass());
  }
}

TEST_CASE("tampered triple fails consistency") {
  const Axis q = Axis::position(16, -6.0, 6.0);
  auto quartet = quantum::quantum_marginals(quantum::state_from_spec("gaussian", q));
  quartet.pp = quantum::quantum_marginals(quantum::state_from_spec("ho:1,0", q)).pp;
  const auto triple = MarginalTriple::from_quartet(quartet, MarginalPair::qp);
  CHECK_FALSE(check_consistency(triple).pass());
  CHECK_THROWS_AS(one_var_marginals(triple), Error);
}

TEST_CASE("atomic quartet consistency is exact") {
  const auto rep = check_consistency(bell::counterexample_quartet({0, 0, 1, 1, 0, 0, 1, 1}), 0.0);
  CHECK(rep.pass());
  CHECK(rep.exact);
}

TEST_CASE("chain orientation per dropped marginal") {
  const Axis q = Axis::position(8, -4.0, 4.0);
  const auto quartet = quantum::quantum_marginals(quantum::random_state(q, 1));
  const std::array<std::size_t, 4> slots[] = {{0, 3, 2, 1}, {0, 1, 2, 3}, {1, 0, 3, 2}, {3, 0, 1, 2}};
  for (int k = 0; k < 4; ++k) {
    const auto t = MarginalTriple::from_quartet(quartet, kPairs[k]);
    CHECK(t.slots() == slots[k]);
    CHECK(t.dropped() == kPairs[k]);
    for (auto m : t.members()) CHECK(m != kPairs[k]);
  }
}

TEST_CASE("rho0 matches the brute-force chain product") {
  const Axis q = Axis::position(8, -5.0, 5.0);
  const auto quartet = quantum::quantum_marginals(quantum::random_state(q, 9));
  const auto t = MarginalTriple::from_quartet(quartet, MarginalPair::qp);
  const auto base = rho0(t);
  const auto& qq = std::get<RealField2D>(quartet.qq);
  const auto& pq = std::get<RealField2D>(quartet.pq);
  const auto& pp = std::get<RealField2D>(quartet.pp);
  const double h = q.step();
  double err = 0.0;
  for (std::size_t i = 0; i < 8; ++i)
    for (std::size_t k = 0; k < 8; ++k)
      for (std::size_t a = 0; a < 8; ++a)
        for (std::size_t b = 0; b < 8; ++b) {
          double sq2 = 0.0, sp1 = 0.0;
          for (std::size_t m = 0; m < 8; ++m) {
            sq2 += qq(m, k) * h;
            sp1 += pq(a, m) * h;
          }
          const double ref = qq(i, k) * pq(a, k) * pp(a, b) / (sq2 * sp1);
          err = std::max(err, std::abs(base.rho0(i, k, a, b) - ref) / std::max(ref, 1e-300));
        }
  CHECK(err < 1e-10);
}

TEST_CASE("rho0 reproduces every triple") {
  const Axis q = Axis::position(16, -6.0, 6.0);
  for (const char* spec : {"random:2", "psi-:5", "ho:0,2"}) {
    const auto quartet = quantum::quantum_marginals(quantum::state_from_spec(spec, q));
    for (auto drop : kPairs) {
      CAPTURE(spec);
      CAPTURE(grid::to_string(drop));
      const auto t = MarginalTriple::from_quartet(quartet, drop);
      const auto base = rho0(t);
      CHECK(min_value(base.rho0) >= 0.0);
      CHECK(grid::integrate_4d(base.rho0) == doctest::Approx(1.0).epsilon(1e-8));
      for (double r : base.residuals) CHECK(r <= 1e-6);
      for (auto m : t.members()) {
        const auto& ref = std::get<RealField2D>(quartet.get(m));
        CHECK(l1_distance(grid::marginalize_4d(base.rho0, m), ref) <= 1e-6);
      }
    }
  }
}

TEST_CASE("rho0 of a product state is the product density") {
  const Axis q = Axis::position(16, -8.0, 8.0);
  const auto f = quantum::harmonic_oscillator_1d(q, 1), g = quantum::gaussian_1d(q, 0.3, 1.1);
  const auto quartet = quantum::quantum_marginals(quantum::product_state(f, g));
  const auto prod = quantum::product_density(f, g);
  for (auto drop : kPairs) CHECK(max_diff(rho0(MarginalTriple::from_quartet(quartet, drop)).rho0, prod) <= 1e-8);
}

TEST_CASE("support set thresholds") {
  const Axis q = Axis::position(16, -8.0, 8.0);
  const auto t = MarginalTriple::from_quartet(quantum::quantum_marginals(quantum::state_from_spec("gaussian", q)),
                                              MarginalPair::qp);
  const auto loose = support_set(t, 1e-12), tight = support_set(t, 1e-3);
  CHECK(tight.count < loose.count);
  CHECK(loose.count <= loose.mask.size());
  CHECK_THROWS_AS(support_set(t, -1.0), Error);
  CHECK(support_set(t, 0.0).count >= loose.count);
  CHECK_THROWS_AS(rho0(t, 0.2), Error);
}

TEST_CASE("delta is linear in F and annihilated by the chain projections") {
  const Axis q = Axis::position(16, -6.0, 6.0);
  const auto t = MarginalTriple::from_quartet(quantum::quantum_marginals(quantum::random_state(q, 5)),
                                              MarginalPair::pq);
  const auto base = rho0(t);
  const auto axes = t.phase_space_axes();
  const auto F1 = random_F(1, base.support, axes, 1.5), F2 = random_F(2, base.support, axes, 0.0, &base.rho0);
  grid::RealField4D mix(axes);
  for (std::size_t i = 0; i < mix.size(); ++i) mix[i] = 2.0 * F1[i] - 0.5 * F2[i];
  const auto d1 = delta_from_F(F1, t, base), d2 = delta_from_F(F2, t, base), dm = delta_from_F(mix, t, base);
  double err = 0.0;
  for (std::size_t i = 0; i < mix.size(); ++i) err = std::max(err, std::abs(dm[i] - 2.0 * d1[i] + 0.5 * d2[i]));
  CHECK(err < 1e-10);
  for (const auto* d : {&d1, &d2}) {
    for (double r : chain_projection_norms(*d, t)) CHECK(r <= 1e-9);
    CHECK(std::abs(grid::integrate_4d(*d)) <= 1e-9);
  }
  auto outside = F1;
  for (std::size_t i = 0; i < outside.size(); ++i) {
    if (!base.support.mask[i]) {
      outside[i] = 1.0;
      break;
    }
  }
  if (base.support.count < outside.size()) CHECK_THROWS_AS(delta_from_F(outside, t, base), Error);
}

TEST_CASE("random F is deterministic and supported on E") {
  const Axis q = Axis::position(8, -4.0, 4.0);
  const auto t = MarginalTriple::from_quartet(quantum::quantum_marginals(quantum::state_from_spec("gaussian", q)),
                                              MarginalPair::qp);
  const auto base = rho0(t);
  const auto axes = t.phase_space_axes();
  const auto a = random_F(3, base.support, axes, 1.0), b = random_F(3, base.support, axes, 1.0);
  const auto c = random_F(4, base.support, axes, 1.0);
  CHECK(max_diff(a, b) == 0.0);
  CHECK(max_diff(a, c) > 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!base.support.mask[i]) CHECK(a[i] == 0.0);
  }
}

TEST_CASE("lambda interval is exact") {
  const Axis q = Axis::position(16, -6.0, 6.0);
  const auto t = MarginalTriple::from_quartet(quantum::quantum_marginals(quantum::state_from_spec("psi+:5", q)),
                                              MarginalPair::qp);
  const auto base = rho0(t);
  const auto delta = delta_from_F(random_F(11, base.support, t.phase_space_axes(), 1.5, &base.rho0), t, base);
  const auto range = lambda_range(delta, base.rho0, base.support);
  REQUIRE_FALSE(range.degenerate);
  CHECK(range.lower == doctest::Approx(-1.0 / range.m_plus));
  CHECK(range.upper == doctest::Approx(1.0 / range.m_minus));
  CHECK(min_value(general_density(base.rho0, delta, 0.999 * range.upper, range)) >= 0.0);
  CHECK(min_value(general_density(base.rho0, delta, 0.999 * range.lower, range)) >= 0.0);
  CHECK(std::abs(min_value(general_density(base.rho0, delta, range.upper, range))) <= 1e-9);
  CHECK_THROWS_AS(general_density(base.rho0, delta, 1.1 * range.upper, range), Error);
  CHECK_THROWS_AS(general_density(base.rho0, delta, 1.1 * range.lower, range), Error);
  CHECK(min_value(general_density_unchecked(base.rho0, delta, 1.1 * range.upper)) < 0.0);
  CHECK(min_value(general_density_unchecked(base.rho0, delta, 1.1 * range.lower)) < 0.0);
}

TEST_CASE("F = rho0 gives a degenerate direction") {
  const Axis q = Axis::position(8, -4.0, 4.0);
  const auto t = MarginalTriple::from_quartet(quantum::quantum_marginals(quantum::random_state(q, 3)),
                                              MarginalPair::qq);
  const auto base = rho0(t);
  const auto delta = delta_from_F(base.rho0, t, base);
  const auto range = lambda_range(delta, base.rho0, base.support);
  CHECK(range.degenerate);
  CHECK_NOTHROW(general_density(base.rho0, delta, 1e6, range));
}

TEST_CASE("represent recovers densities with the same marginals") {
  const Axis q = Axis::position(16, -6.0, 6.0);
  const auto t = MarginalTriple::from_quartet(quantum::quantum_marginals(quantum::random_state(q, 8)),
                                              MarginalPair::pp);
  const auto base = rho0(t);
  const auto delta = delta_from_F(random_F(21, base.support, t.phase_space_axes(), 2.0, &base.rho0), t, base);
  const auto range = lambda_range(delta, base.rho0, base.support);
  const auto rho1 = general_density(base.rho0, delta, 0.7 * range.upper, range);
  const auto rep = represent(rho1, t, base);
  CHECK(rep.roundtrip_residual <= 1e-8);
  CHECK(rep.family.range.m_minus <= 1.0 + 1e-9);
  CHECK(rep.delta_residual <= 1e-12);
  for (double r : rep.marginal_residuals) CHECK(r <= 1e-8);
  CHECK(rep.family.F_provenance == "rho1");

  auto negative = rho1;
  negative[0] = -1.0;
  CHECK_THROWS_AS(represent(negative, t, base), Error);
  auto shifted = rho1;
  for (std::size_t i = 0; i < shifted.size(); ++i) shifted[i] *= 1.5;
  CHECK_THROWS_AS(represent(shifted, t, base), Error);

  const auto dir = std::filesystem::temp_directory_path() / "phasebell_family";
  std::filesystem::create_directories(dir);
  rep.family.save((dir / "fam").string());
  CHECK(std::filesystem::exists(dir / "fam.manifest.json"));
  CHECK(rep.family.manifest()["support_points"] == base.support.count);
  std::filesystem::remove_all(dir);
}

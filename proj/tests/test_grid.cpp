#include <doctest.h>
#include <fftw3.h>

#include <cmath>
#include <filesystem>
#include <numbers>
#include <random>

#include "phasebell/atomic.hpp"
#include "phasebell/field_io.hpp"
#include "phasebell/grid.hpp"
#include "phasebell/indicator_set.hpp"

using namespace phasebell;
using namespace phasebell::grid;

namespace {

std::vector<cplx> random_vector(std::size_t n, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> g;
  std::vector<cplx> v(n);
  for (auto& x : v) x = {g(rng), g(rng)};
  return v;
}

// Direct O(n^2) sum of (2 pi)^(-1/2) sum_j h exp(-i p_k x_j) f_j.
std::vector<cplx> naive_momentum(const std::vector<cplx>& f, const Axis& pos) {
  const Axis mom = Axis::momentum_of(pos);
  std::vector<cplx> out(mom.size());
  for (std::size_t k = 0; k < mom.size(); ++k) {
    cplx acc = 0.0;
    for (std::size_t j = 0; j < pos.size(); ++j) {
      acc += std::polar(1.0, -mom.point(k) * pos.point(j)) * f[j];
    }
    out[k] = acc * pos.step() / std::sqrt(2.0 * std::numbers::pi);
  }
  return out;
}

double max_diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

TEST_CASE("axis points are midpoints") {
  const Axis a = Axis::position(8, -4.0, 4.0);
  CHECK(a.step() == doctest::Approx(1.0));
  CHECK(a.point(0) == doctest::Approx(-3.5));
  CHECK(a.point(7) == doctest::Approx(3.5));
  CHECK(a.points().size() == 8);
}

TEST_CASE("momentum axis spans [-pi/h, pi/h] with step 2 pi/(n h)") {
  const Axis q = Axis::position(16, -8.0, 8.0);
  const Axis p = Axis::momentum_of(q);
  CHECK(p.kind() == Representation::momentum);
  CHECK(p.lower() == doctest::Approx(-std::numbers::pi));
  CHECK(p.upper() == doctest::Approx(std::numbers::pi));
  CHECK(p.step() == doctest::Approx(2.0 * std::numbers::pi / 16.0));
  for (std::size_t k = 0; k < p.size(); ++k) CHECK(p.point(k) != 0.0);
}

TEST_CASE("axis rejects bad sizes and bounds") {
  CHECK_THROWS_AS(Axis::position(12, -1.0, 1.0), Error);
  CHECK_THROWS_AS(Axis::position(2, -1.0, 1.0), Error);
  CHECK_THROWS_AS(Axis::position(8, 1.0, -1.0), Error);
  CHECK_THROWS_AS(Axis::momentum_of(Axis::momentum_of(Axis::position(8, -1.0, 1.0))), Error);
}

TEST_CASE("transform matches the direct sum") {
  for (std::size_t n : {4u, 16u, 64u}) {
    const Axis q = Axis::position(n, -5.0, 7.0);
    const auto f = random_vector(n, 11 + static_cast<unsigned>(n));
    CHECK(max_diff(to_momentum(f, q), naive_momentum(f, q)) < 1e-12);
  }
}

TEST_CASE("transform is unitary and inverts") {
  const Axis q = Axis::position(128, -10.0, 10.0);
  const Axis p = Axis::momentum_of(q);
  for (unsigned seed = 0; seed < 5; ++seed) {
    const auto f = random_vector(q.size(), seed);
    const auto g = to_momentum(f, q);
    CHECK(squared_norm(g, p.step()) == doctest::Approx(squared_norm(f, q.step())).epsilon(1e-13));
    CHECK(max_diff(to_position(g, q), f) < 1e-12);
  }
}

TEST_CASE("Gaussian maps to Gaussian") {
  const Axis q = Axis::position(128, -12.0, 12.0);
  const Axis p = Axis::momentum_of(q);
  std::vector<cplx> f(q.size());
  const double pref = std::pow(std::numbers::pi, -0.25);
  for (std::size_t j = 0; j < q.size(); ++j) f[j] = pref * std::exp(-0.5 * q.point(j) * q.point(j));
  const auto g = to_momentum(f, q);
  double err = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    err = std::max(err, std::abs(g[k] - pref * std::exp(-0.5 * p.point(k) * p.point(k))));
  }
  CHECK(err < 1e-12);
}

TEST_CASE("2D partial transform agrees with 1D rows") {
  const Axis q = Axis::position(16, -4.0, 4.0);
  const Axis p = Axis::momentum_of(q);
  const auto v = random_vector(q.size() * q.size(), 3);
  const ComplexField2D f({q, q}, v);
  const auto g = to_momentum(f, 1, q);
  CHECK(g.axis(1) == p);
  for (std::size_t i = 0; i < q.size(); ++i) {
    std::vector<cplx> row(v.begin() + i * 16, v.begin() + (i + 1) * 16);
    const auto r = to_momentum(row, q);
    for (std::size_t k = 0; k < 16; ++k) CHECK(std::abs(g(i, k) - r[k]) < 1e-13);
  }
  CHECK_THROWS_AS(to_momentum(g, 1, q), Error);
}

TEST_CASE("spectral shift of a Gaussian") {
  const Axis q = Axis::position(64, -10.0, 10.0);
  std::vector<cplx> f(q.size());
  auto g = [](double x) { return std::exp(-0.5 * (x - 0.3) * (x - 0.3)); };
  for (std::size_t j = 0; j < q.size(); ++j) f[j] = g(q.point(j));
  for (double frac : {0.5, -0.5, 0.25, 1.0}) {
    const double s = frac * q.step();
    const auto shifted = spectral_shift(f, q, s);
    double err = 0.0;
    for (std::size_t j = 0; j < q.size(); ++j) err = std::max(err, std::abs(shifted[j] - g(q.point(j) + s)));
    CHECK(err < 1e-10);
  }
}

TEST_CASE("FFTW oracle for the unshifted DFT core") {
  // Cross-check against a plain FFTW forward transform with explicit phase factors.
  const std::size_t n = 32;
  const Axis q = Axis::position(n, -3.0, 5.0);
  const Axis p = Axis::momentum_of(q);
  const auto f = random_vector(n, 9);
  std::vector<cplx> in(n), out(n);
  for (std::size_t j = 0; j < n; ++j) in[j] = f[j] * std::polar(1.0, -p.point(0) * q.point(j));
  fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(n), reinterpret_cast<fftw_complex*>(in.data()),
                                    reinterpret_cast<fftw_complex*>(out.data()), FFTW_FORWARD, FFTW_ESTIMATE);
  fftw_execute(plan);
  fftw_destroy_plan(plan);
  const auto g = to_momentum(f, q);
  double err = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    // p_k x_j = p_0 x_j + k dp (x_0 + j h); the j part is the DFT kernel.
    const cplx expect = out[k] * std::polar(1.0, -static_cast<double>(k) * p.step() * q.point(0)) * q.step() /
                        std::sqrt(2.0 * std::numbers::pi);
    err = std::max(err, std::abs(g[k] - expect));
  }
  CHECK(err < 1e-12);
}

TEST_CASE("4D marginals preserve the integral") {
  const Axis q = Axis::position(8, -2.0, 2.0);
  const Axis p = Axis::momentum_of(q);
  RealField4D rho({q, q, p, p});
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u;
  for (std::size_t i = 0; i < rho.size(); ++i) rho[i] = u(rng);
  const double total = integrate_4d(rho);
  for (auto pair : {MarginalPair::qq, MarginalPair::qp, MarginalPair::pq, MarginalPair::pp}) {
    const auto m = marginalize_4d(rho, pair);
    CHECK(integrate_2d(m) == doctest::Approx(total).epsilon(1e-13));
    const auto kept = kept_axes(pair);
    CHECK(m.axis(0) == rho.axis(kept[0]));
    CHECK(m.axis(1) == rho.axis(kept[1]));
    CHECK(marginal_pair_from_string(to_string(pair)) == pair);
  }
  // direct loop for sigma_qp: sum over p1 and q2
  const auto qp = marginalize_4d(rho, MarginalPair::qp);
  for (std::size_t a = 0; a < 8; ++a) {
    for (std::size_t d = 0; d < 8; ++d) {
      double s = 0.0;
      for (std::size_t b = 0; b < 8; ++b)
        for (std::size_t c = 0; c < 8; ++c) s += rho(a, b, c, d);
      CHECK(qp(a, d) == doctest::Approx(s * q.step() * p.step()).epsilon(1e-13));
    }
  }
  CHECK_THROWS_AS(marginal_pair_from_string("xy"), Error);
}

TEST_CASE("indicator sets") {
  const auto up = IndicatorSet::above(0.0);
  CHECK(up.contains(1.0));
  CHECK_FALSE(up.contains(-1.0));
  CHECK(up.complement() == IndicatorSet::below(0.0));
  CHECK(up.complement().complement() == up);
  CHECK(IndicatorSet::empty().complement().is_full());
  const auto band = IndicatorSet::intervals({{-1.0, 1.0}, {0.5, 2.0}, {4.0, 5.0}});
  CHECK(band.parts().size() == 2);
  CHECK(band.contains(1.5));
  CHECK_FALSE(band.contains(3.0));
  const Axis a = Axis::position(8, -4.0, 4.0);
  const auto mask = up.mask_on(a);
  CHECK(std::count(mask.begin(), mask.end(), 1) == 4);
  CHECK(up.is_proper_on(a));
  CHECK_FALSE(IndicatorSet::above(10.0).is_proper_on(a));
  std::vector<bool> m(8, false);
  m[2] = m[3] = true;
  const auto from = IndicatorSet::from_mask(a, m);
  CHECK(from.mask_on(a) == std::vector<std::uint8_t>{0, 0, 1, 1, 0, 0, 0, 0});
  CHECK(up.near_boundary(1e-14, 1e-12));
}

TEST_CASE("rational arithmetic is exact") {
  const Rational half(1, 2), third(1, 3);
  CHECK(half + third == Rational(5, 6));
  CHECK(half * third == Rational(1, 6));
  CHECK(half - half == Rational(0));
  CHECK(Rational(2, -4) == Rational(-1, 2));
  CHECK(third < half);
  CHECK(Rational(4).str() == "4");
  CHECK_THROWS_AS(Rational(1, 0), Error);
}

TEST_CASE("atomic distribution marginals") {
  const AtomicDistribution2D d({{0.0, 1.0, Rational(1, 2)}, {0.0, 2.0, Rational(1, 4)}, {3.0, 1.0, Rational(1, 4)}});
  const auto m0 = d.marginal(0);
  REQUIRE(m0.size() == 2);
  CHECK(m0[0].second == Rational(3, 4));
  CHECK_THROWS_AS(AtomicDistribution2D({{0.0, 0.0, Rational(1, 2)}}), Error);
}

TEST_CASE("field files round-trip exactly") {
  const auto dir = std::filesystem::temp_directory_path() / "phasebell_field_io";
  std::filesystem::create_directories(dir);
  const Axis q = Axis::position(4, -1.0, 3.0);
  const Axis p = Axis::momentum_of(q);
  RealField4D r({q, q, p, p});
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = std::sin(static_cast<double>(i));
  write_field(dir / "r.bin", r);
  const auto r2 = read_real_field_4d(dir / "r.bin");
  CHECK(r2.axes() == r.axes());
  CHECK(std::equal(r.values().begin(), r.values().end(), r2.values().begin()));
  CHECK(std::filesystem::exists(dir / "r.bin.json"));

  const ComplexField2D c({q, p}, random_vector(16, 1));
  write_field(dir / "c.bin", c);
  const auto c2 = read_complex_field_2d(dir / "c.bin");
  CHECK(c2.axes() == c.axes());
  CHECK(std::equal(c.values().begin(), c.values().end(), c2.values().begin()));
  CHECK_THROWS_AS(read_real_field_2d(dir / "c.bin"), Error);
  std::filesystem::remove_all(dir);
}

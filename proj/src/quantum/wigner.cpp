#include <fftw3.h>

#include <cmath>
#include <numbers>

#include "phasebell/quantum.hpp"

namespace phasebell::quantum {

namespace {

/// psi on the half-step lattice: D(l1, l2) = psi(a1 + h1/2 + l1 h1/2, a2 + h2/2 + l2 h2/2).
class HalfStepLattice {
 public:
  explicit HalfStepLattice(const WaveFunction2D& psi) : n0_(psi.axis(0).size()), n1_(psi.axis(1).size()) {
    const ComplexField2D& base = psi.amplitudes();
    const ComplexField2D s1 = shift_along(base, 1);
    const ComplexField2D s0 = shift_along(base, 0);
    const ComplexField2D s01 = shift_along(s1, 0);
    data_.assign(4 * n0_ * n1_, cplx{});
    for (std::size_t i = 0; i < n0_; ++i) {
      for (std::size_t j = 0; j < n1_; ++j) {
        at(2 * i, 2 * j) = base(i, j);
        at(2 * i, 2 * j + 1) = s1(i, j);
        at(2 * i + 1, 2 * j) = s0(i, j);
        at(2 * i + 1, 2 * j + 1) = s01(i, j);
      }
    }
  }

  std::size_t rows() const { return 2 * n0_; }
  std::size_t cols() const { return 2 * n1_; }
  cplx operator()(long l1, long l2) const {
    return data_[static_cast<std::size_t>(l1) * 2 * n1_ + static_cast<std::size_t>(l2)];
  }

 private:
  cplx& at(std::size_t l1, std::size_t l2) { return data_[l1 * 2 * n1_ + l2]; }

  static ComplexField2D shift_along(const ComplexField2D& f, std::size_t dim) {
    const Axis& ax = f.axis(dim);
    const std::size_t n = ax.size();
    const std::size_t other = f.extent(1 - dim);
    ComplexField2D out(f.axes());
    std::vector<cplx> line(n);
    for (std::size_t r = 0; r < other; ++r) {
      for (std::size_t k = 0; k < n; ++k) line[k] = dim == 0 ? f(k, r) : f(r, k);
      const auto shifted = grid::spectral_shift(line, ax, 0.5 * ax.step());
      for (std::size_t k = 0; k < n; ++k) (dim == 0 ? out(k, r) : out(r, k)) = shifted[k];
    }
    return out;
  }

  std::size_t n0_, n1_;
  std::vector<cplx> data_;
};

/// e^{i p_k m h} = c_m e^{2 pi i k m / n} on the dual momentum axis.
cplx lattice_phase(long m, std::size_t n) {
  const double sign = (m % 2 == 0) ? 1.0 : -1.0;
  return sign * std::polar(1.0, std::numbers::pi * static_cast<double>(m) / static_cast<double>(n));
}

long half_step_index(const Axis& axis, double q) {
  const double half = 0.5 * axis.step();
  const double t = (q - axis.lower() - half) / half;
  const double r = std::round(t);
  if (std::abs(t - r) > 1e-6 || r < 0 || r > 2.0 * static_cast<double>(axis.size()) - 1.0) {
    throw Error("Wigner evaluation point is not on the half-step lattice of " + axis.describe());
  }
  return static_cast<long>(r);
}

}  // namespace

RealField4D wigner(const WaveFunction2D& psi) {
  const Axis& a0 = psi.axis(0);
  const Axis& a1 = psi.axis(1);
  const std::size_t n0 = a0.size(), n1 = a1.size();
  const HalfStepLattice D(psi);
  const double pref = a0.step() * a1.step() / (4.0 * std::numbers::pi * std::numbers::pi);

  std::vector<cplx> c0(4 * n0), c1(4 * n1);
  for (long m = -2 * static_cast<long>(n0); m < 2 * static_cast<long>(n0); ++m) c0[m + 2 * n0] = lattice_phase(m, n0);
  for (long m = -2 * static_cast<long>(n1); m < 2 * static_cast<long>(n1); ++m) c1[m + 2 * n1] = lattice_phase(m, n1);

  fftw_complex* bins = fftw_alloc_complex(n0 * n1);
  if (!bins) throw Error("FFTW allocation failed");
  fftw_plan plan = fftw_plan_dft_2d(static_cast<int>(n0), static_cast<int>(n1), bins, bins, FFTW_BACKWARD,
                                    FFTW_ESTIMATE);
  auto* b = reinterpret_cast<cplx*>(bins);

  RealField4D W({a0, a1, Axis::momentum_of(a0), Axis::momentum_of(a1)});
  const long rows = static_cast<long>(D.rows()), cols = static_cast<long>(D.cols());
  for (std::size_t j0 = 0; j0 < n0; ++j0) {
    const long L0 = 2 * static_cast<long>(j0);
    const long r0 = std::min(L0, rows - 1 - L0);
    for (std::size_t j1 = 0; j1 < n1; ++j1) {
      const long L1 = 2 * static_cast<long>(j1);
      const long r1 = std::min(L1, cols - 1 - L1);
      std::fill(b, b + n0 * n1, cplx{});
      for (long m0 = -r0; m0 <= r0; ++m0) {
        const std::size_t bin0 = static_cast<std::size_t>((m0 % static_cast<long>(n0) + n0) % n0);
        const cplx ph0 = c0[m0 + 2 * n0];
        for (long m1 = -r1; m1 <= r1; ++m1) {
          const std::size_t bin1 = static_cast<std::size_t>((m1 % static_cast<long>(n1) + n1) % n1);
          b[bin0 * n1 + bin1] += std::conj(D(L0 + m0, L1 + m1)) * D(L0 - m0, L1 - m1) * ph0 * c1[m1 + 2 * n1];
        }
      }
      fftw_execute(plan);
      const std::size_t base = W.index(j0, j1, 0, 0);
      for (std::size_t k = 0; k < n0 * n1; ++k) W[base + k] = pref * b[k].real();
    }
  }
  fftw_destroy_plan(plan);
  fftw_free(bins);
  return W;
}

double wigner_value(const WaveFunction2D& psi, double q1, double q2, double p1, double p2) {
  const Axis& a0 = psi.axis(0);
  const Axis& a1 = psi.axis(1);
  const HalfStepLattice D(psi);
  const long L0 = half_step_index(a0, q1), L1 = half_step_index(a1, q2);
  const long r0 = std::min(L0, static_cast<long>(D.rows()) - 1 - L0);
  const long r1 = std::min(L1, static_cast<long>(D.cols()) - 1 - L1);
  const double h0 = a0.step(), h1 = a1.step();
  cplx sum{};
  for (long m0 = -r0; m0 <= r0; ++m0) {
    const cplx ph0 = std::polar(1.0, p1 * static_cast<double>(m0) * h0);
    for (long m1 = -r1; m1 <= r1; ++m1) {
      sum += std::conj(D(L0 + m0, L1 + m1)) * D(L0 - m0, L1 - m1) * ph0 *
             std::polar(1.0, p2 * static_cast<double>(m1) * h1);
    }
  }
  return h0 * h1 / (4.0 * std::numbers::pi * std::numbers::pi) * sum.real();
}

}  // namespace phasebell::quantum

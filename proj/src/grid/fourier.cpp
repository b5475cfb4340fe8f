#include <fftw3.h>

#include <cmath>
#include <memory>
#include <numbers>

#include "phasebell/grid.hpp"

namespace phasebell::grid {

namespace {

struct FftwFree {
  void operator()(fftw_complex* p) const { fftw_free(p); }
};
struct PlanDestroy {
  void operator()(fftw_plan_s* p) const { fftw_destroy_plan(p); }
};

/// One-dimensional unitary transform between a position axis and its dual.
///
/// With x_j = a + (j + 1/2) h and p_k = (k - n/2 + 1/2) dp, dp h = 2 pi / n:
///   exp(-i p_k x_j) = exp(-i p_k (a + h/2)) * (-1)^j exp(-i pi j / n) * exp(-2 pi i j k / n)
/// so the kernel is a plain DFT between two diagonal phase factors.
class UnitaryFourier {
 public:
  explicit UnitaryFourier(const Axis& position)
      : n_(position.size()),
        buffer_(fftw_alloc_complex(n_)),
        pre_(n_),
        post_(n_) {
    const Axis momentum = Axis::momentum_of(position);
    const double h = position.step();
    const double dp = momentum.step();
    const double origin = position.lower() + 0.5 * h;
    const double n = static_cast<double>(n_);
    for (std::size_t j = 0; j < n_; ++j) {
      const double sign = (j % 2 == 0) ? 1.0 : -1.0;
      pre_[j] = sign * std::polar(1.0, -std::numbers::pi * static_cast<double>(j) / n);
      post_[j] = std::polar(1.0, -momentum.point(j) * origin);
    }
    forward_scale_ = h / std::sqrt(2.0 * std::numbers::pi);
    inverse_scale_ = dp / std::sqrt(2.0 * std::numbers::pi);
    const int len = static_cast<int>(n_);
    forward_.reset(fftw_plan_dft_1d(len, buffer_.get(), buffer_.get(), FFTW_FORWARD, FFTW_ESTIMATE));
    backward_.reset(
        fftw_plan_dft_1d(len, buffer_.get(), buffer_.get(), FFTW_BACKWARD, FFTW_ESTIMATE));
  }

  void forward(const cplx* in, std::size_t in_stride, cplx* out, std::size_t out_stride) {
    auto* buf = reinterpret_cast<cplx*>(buffer_.get());
    for (std::size_t j = 0; j < n_; ++j) buf[j] = in[j * in_stride] * pre_[j];
    fftw_execute(forward_.get());
    for (std::size_t k = 0; k < n_; ++k) out[k * out_stride] = forward_scale_ * post_[k] * buf[k];
  }

  void backward(const cplx* in, std::size_t in_stride, cplx* out, std::size_t out_stride) {
    auto* buf = reinterpret_cast<cplx*>(buffer_.get());
    for (std::size_t k = 0; k < n_; ++k) buf[k] = in[k * in_stride] * std::conj(post_[k]);
    fftw_execute(backward_.get());
    for (std::size_t j = 0; j < n_; ++j) {
      out[j * out_stride] = inverse_scale_ * std::conj(pre_[j]) * buf[j];
    }
  }

 private:
  std::size_t n_;
  std::unique_ptr<fftw_complex, FftwFree> buffer_;
  std::unique_ptr<fftw_plan_s, PlanDestroy> forward_;
  std::unique_ptr<fftw_plan_s, PlanDestroy> backward_;
  std::vector<cplx> pre_;
  std::vector<cplx> post_;
  double forward_scale_ = 1.0;
  double inverse_scale_ = 1.0;
};

ComplexField2D transform_along(const ComplexField2D& f, std::size_t dim, const Axis& position,
                               bool forward) {
  if (dim > 1) throw Error("transform dimension must be 0 or 1");
  const Axis momentum = Axis::momentum_of(position);
  const Axis& expected = forward ? position : momentum;
  if (!(f.axis(dim) == expected)) {
    throw Error("field axis " + f.axis(dim).describe() + " does not match " + expected.describe());
  }
  auto axes = f.axes();
  axes[dim] = forward ? momentum : position;
  ComplexField2D out(axes);

  UnitaryFourier fourier(position);
  const std::size_t n0 = f.extent(0);
  const std::size_t n1 = f.extent(1);
  const cplx* src = f.values().data();
  cplx* dst = out.values().data();
  if (dim == 1) {
    for (std::size_t i = 0; i < n0; ++i) {
      if (forward) fourier.forward(src + i * n1, 1, dst + i * n1, 1);
      else fourier.backward(src + i * n1, 1, dst + i * n1, 1);
    }
  } else {
    for (std::size_t j = 0; j < n1; ++j) {
      if (forward) fourier.forward(src + j, n1, dst + j, n1);
      else fourier.backward(src + j, n1, dst + j, n1);
    }
  }
  return out;
}

}  // namespace

std::vector<cplx> to_momentum(std::span<const cplx> f, const Axis& position) {
  if (f.size() != position.size()) throw Error("to_momentum: size mismatch");
  std::vector<cplx> out(f.size());
  UnitaryFourier(position).forward(f.data(), 1, out.data(), 1);
  return out;
}

std::vector<cplx> to_position(std::span<const cplx> f, const Axis& position) {
  if (f.size() != position.size()) throw Error("to_position: size mismatch");
  std::vector<cplx> out(f.size());
  UnitaryFourier(position).backward(f.data(), 1, out.data(), 1);
  return out;
}

ComplexField2D to_momentum(const ComplexField2D& f, std::size_t dim, const Axis& position) {
  return transform_along(f, dim, position, true);
}

ComplexField2D to_position(const ComplexField2D& f, std::size_t dim, const Axis& position) {
  return transform_along(f, dim, position, false);
}

std::vector<cplx> spectral_shift(std::span<const cplx> f, const Axis& position, double shift) {
  auto spectrum = to_momentum(f, position);
  const Axis momentum = Axis::momentum_of(position);
  for (std::size_t k = 0; k < spectrum.size(); ++k) {
    spectrum[k] *= std::polar(1.0, momentum.point(k) * shift);
  }
  return to_position(spectrum, position);
}

double squared_norm(std::span<const cplx> f, double step) {
  double s = 0.0;
  for (const auto& v : f) s += std::norm(v);
  return s * step;
}

}  // namespace phasebell::grid

#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace phasebell {

using cplx = std::complex<double>;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace phasebell

namespace phasebell::grid {

enum class Representation { position, momentum };

/// Uniform midpoint grid: point j sits at lower + (j + 1/2) * step.
///
/// A momentum axis is the dual of a position axis with n points and step h:
/// it spans [-pi/h, pi/h] with step 2*pi/(n*h), so its points are the
/// half-shifted frequencies (k - n/2 + 1/2) * dp. Neither kind of axis has a
/// point at exactly zero.
class Axis {
 public:
  static Axis position(std::size_t n, double lower, double upper);
  static Axis momentum_of(const Axis& position);
  /// Rebuilds an axis from stored bounds (deserialization); momentum bounds must be symmetric.
  static Axis restore(Representation kind, std::size_t n, double lower, double upper);

  std::size_t size() const { return n_; }
  double lower() const { return lower_; }
  double upper() const { return upper_; }
  double step() const { return (upper_ - lower_) / static_cast<double>(n_); }
  double point(std::size_t j) const { return lower_ + (static_cast<double>(j) + 0.5) * step(); }
  std::vector<double> points() const;
  Representation kind() const { return kind_; }
  std::string describe() const;

  bool operator==(const Axis&) const = default;

 private:
  Axis(std::size_t n, double lower, double upper, Representation kind)
      : n_(n), lower_(lower), upper_(upper), kind_(kind) {}

  std::size_t n_;
  double lower_;
  double upper_;
  Representation kind_;
};

/// A position axis together with its conjugate momentum axis.
struct DualAxis {
  Axis position;
  Axis momentum;

  explicit DualAxis(const Axis& pos) : position(pos), momentum(Axis::momentum_of(pos)) {}
};

/// Dense row-major field over Rank axes (last index fastest).
template <class T, std::size_t Rank>
class Field {
 public:
  using value_type = T;
  static constexpr std::size_t rank = Rank;

  Field(std::array<Axis, Rank> axes, T fill = T{}) : axes_(std::move(axes)) {
    values_.assign(count(), fill);
  }
  Field(std::array<Axis, Rank> axes, std::vector<T> values)
      : axes_(std::move(axes)), values_(std::move(values)) {
    if (values_.size() != count()) throw Error("field value count does not match axes");
  }

  const Axis& axis(std::size_t d) const { return axes_[d]; }
  const std::array<Axis, Rank>& axes() const { return axes_; }
  std::size_t extent(std::size_t d) const { return axes_[d].size(); }
  std::size_t size() const { return values_.size(); }

  /// Product of the axis steps; the quadrature weight of a single cell.
  double cell() const {
    double c = 1.0;
    for (const auto& a : axes_) c *= a.step();
    return c;
  }

  template <class... I>
  std::size_t index(I... idx) const {
    static_assert(sizeof...(I) == Rank);
    const std::array<std::size_t, Rank> ii{static_cast<std::size_t>(idx)...};
    std::size_t flat = 0;
    for (std::size_t d = 0; d < Rank; ++d) flat = flat * axes_[d].size() + ii[d];
    return flat;
  }
  std::array<std::size_t, Rank> unravel(std::size_t flat) const {
    std::array<std::size_t, Rank> ii{};
    for (std::size_t d = Rank; d-- > 0;) {
      ii[d] = flat % axes_[d].size();
      flat /= axes_[d].size();
    }
    return ii;
  }

  template <class... I>
  T& operator()(I... idx) { return values_[index(idx...)]; }
  template <class... I>
  const T& operator()(I... idx) const { return values_[index(idx...)]; }

  T& operator[](std::size_t flat) { return values_[flat]; }
  const T& operator[](std::size_t flat) const { return values_[flat]; }

  std::span<T> values() { return values_; }
  std::span<const T> values() const { return values_; }

 private:
  std::size_t count() const {
    std::size_t c = 1;
    for (const auto& a : axes_) c *= a.size();
    return c;
  }

  std::array<Axis, Rank> axes_;
  std::vector<T> values_;
};

using RealField2D = Field<double, 2>;
using ComplexField2D = Field<cplx, 2>;
using RealField4D = Field<double, 4>;

// ---- quadrature -----------------------------------------------------------

double integrate_2d(const RealField2D& f);
double integrate_4d(const RealField4D& f);

/// Axis order of every 4D phase-space field: (q1, q2, p1, p2).
enum class MarginalPair { qq, qp, pq, pp };

std::string to_string(MarginalPair pair);
MarginalPair marginal_pair_from_string(const std::string& name);
/// The two 4D axis indices kept by a marginal, in the order (particle 1, particle 2).
std::array<std::size_t, 2> kept_axes(MarginalPair pair);

RealField2D marginalize_4d(const RealField4D& rho, MarginalPair keep);

// ---- position <-> momentum ------------------------------------------------

/// Discrete realization of phi(p) = (2 pi)^(-1/2) * sum_j step * exp(-i p x_j) phi(x_j)
/// evaluated on the dual momentum axis. Unitary: sum |phi|^2 dq == sum |phi~|^2 dp.
std::vector<cplx> to_momentum(std::span<const cplx> f, const Axis& position);
/// Inverse of to_momentum; f is sampled on Axis::momentum_of(position).
std::vector<cplx> to_position(std::span<const cplx> f, const Axis& position);

/// Partial transform of a 2D field along one dimension. The field's axis at
/// `dim` must equal `position` (resp. its dual for to_position).
ComplexField2D to_momentum(const ComplexField2D& f, std::size_t dim, const Axis& position);
ComplexField2D to_position(const ComplexField2D& f, std::size_t dim, const Axis& position);

/// Values of the band-limited interpolant at x_j + shift (|shift| <= step),
/// computed through the momentum representation.
std::vector<cplx> spectral_shift(std::span<const cplx> f, const Axis& position, double shift);

double squared_norm(std::span<const cplx> f, double step);

}  // namespace phasebell::grid

#include <cmath>
#include <numbers>
#include <random>

#include "phasebell/field_io.hpp"
#include "phasebell/quantum.hpp"

namespace phasebell::quantum {

namespace {

constexpr double kNormTolerance = 1e-9;

double field_norm(const ComplexField2D& f) { return grid::squared_norm(f.values(), f.cell()); }

}  // namespace

WaveFunction1D WaveFunction1D::normalized(const Axis& axis, std::vector<cplx> values) {
  if (values.size() != axis.size()) throw Error("wavefunction length does not match axis");
  const double norm = grid::squared_norm(values, axis.step());
  if (!(norm > 0.0)) throw Error("cannot normalize a zero wavefunction");
  const double scale = 1.0 / std::sqrt(norm);
  for (auto& v : values) v *= scale;
  return WaveFunction1D{axis, std::move(values)};
}

WaveFunction2D::WaveFunction2D(ComplexField2D amplitudes) : amplitudes_(std::move(amplitudes)) {
  for (std::size_t d = 0; d < 2; ++d) {
    if (amplitudes_.axis(d).kind() != grid::Representation::position) {
      throw Error("wavefunction axes must be position axes");
    }
  }
  const double n = norm();
  if (std::abs(n - 1.0) > kNormTolerance) {
    throw Error("wavefunction is not normalized (norm " + std::to_string(n) + ")");
  }
}

WaveFunction2D WaveFunction2D::normalized(ComplexField2D amplitudes, double* raw_norm) {
  const double n = field_norm(amplitudes);
  if (raw_norm) *raw_norm = n;
  if (!(n > 0.0)) throw Error("cannot normalize a zero wavefunction");
  const double scale = 1.0 / std::sqrt(n);
  for (auto& v : amplitudes.values()) v *= scale;
  return WaveFunction2D(std::move(amplitudes));
}

double WaveFunction2D::norm() const { return field_norm(amplitudes_); }

WaveFunction1D gaussian_1d(const Axis& axis, double center, double width) {
  if (!(width > 0.0)) throw Error("gaussian width must be positive");
  std::vector<cplx> v(axis.size());
  const double pref = 1.0 / std::sqrt(std::sqrt(std::numbers::pi) * width);
  for (std::size_t j = 0; j < v.size(); ++j) {
    const double z = (axis.point(j) - center) / width;
    v[j] = pref * std::exp(-0.5 * z * z);
  }
  return WaveFunction1D::normalized(axis, std::move(v));
}

WaveFunction1D harmonic_oscillator_1d(const Axis& axis, unsigned level) {
  std::vector<cplx> v(axis.size());
  for (std::size_t j = 0; j < v.size(); ++j) {
    const double q = axis.point(j);
    // normalized three-term recurrence, stable for moderate levels
    double prev = 0.0;
    double cur = std::exp(-0.5 * q * q) / std::sqrt(std::sqrt(std::numbers::pi));
    for (unsigned k = 0; k < level; ++k) {
      const double next = std::sqrt(2.0 / (k + 1.0)) * q * cur - std::sqrt(k / (k + 1.0)) * prev;
      prev = cur;
      cur = next;
    }
    v[j] = cur;
  }
  return WaveFunction1D::normalized(axis, std::move(v));
}

WaveFunction2D product_state(const WaveFunction1D& first, const WaveFunction1D& second) {
  ComplexField2D f({first.axis, second.axis});
  for (std::size_t i = 0; i < first.values.size(); ++i) {
    for (std::size_t j = 0; j < second.values.size(); ++j) f(i, j) = first.values[i] * second.values[j];
  }
  return WaveFunction2D::normalized(std::move(f));
}

WaveFunction2D random_state(const Axis& axis, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  ComplexField2D f({axis, axis});
  for (auto& v : f.values()) v = cplx(normal(rng), normal(rng));
  return WaveFunction2D::normalized(std::move(f));
}

WaveFunction2D state_from_spec(const std::string& spec, const Axis& axis) {
  const auto colon = spec.find(':');
  const std::string kind = spec.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : spec.substr(colon + 1);
  if (kind == "gaussian") return product_state(gaussian_1d(axis), gaussian_1d(axis));
  if (kind == "ho") {
    const auto comma = arg.find(',');
    if (comma == std::string::npos) throw Error("ho state needs two levels, e.g. ho:0,1");
    const auto n1 = static_cast<unsigned>(std::stoul(arg.substr(0, comma)));
    const auto n2 = static_cast<unsigned>(std::stoul(arg.substr(comma + 1)));
    return product_state(harmonic_oscillator_1d(axis, n1), harmonic_oscillator_1d(axis, n2));
  }
  if (kind == "psi+" || kind == "psi-") {
    if (arg.empty()) throw Error("psi state needs a cutoff, e.g. psi+:10");
    return psi_L(std::stod(arg), kind == "psi+" ? +1 : -1, axis).psi;
  }
  if (kind == "random") return random_state(axis, arg.empty() ? 1 : std::stoull(arg));
  if (kind == "file") return WaveFunction2D::normalized(grid::read_complex_field_2d(arg));
  throw Error("unknown state spec '" + spec + "'");
}

}  // namespace phasebell::quantum

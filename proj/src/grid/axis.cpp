#include "phasebell/grid.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace phasebell::grid {

namespace {

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

}  // namespace

Axis Axis::position(std::size_t n, double lower, double upper) {
  if (n < 4 || !is_power_of_two(n)) {
    throw Error("axis point count must be a power of two >= 4, got " + std::to_string(n));
  }
  if (!std::isfinite(lower) || !std::isfinite(upper) || !(upper > lower)) {
    throw Error("axis needs finite endpoints with lower < upper");
  }
  return Axis(n, lower, upper, Representation::position);
}

Axis Axis::momentum_of(const Axis& position) {
  if (position.kind() != Representation::position) {
    throw Error("momentum_of expects a position axis");
  }
  const double half_range = std::numbers::pi / position.step();
  return Axis(position.size(), -half_range, half_range, Representation::momentum);
}

Axis Axis::restore(Representation kind, std::size_t n, double lower, double upper) {
  Axis checked = position(n, lower, upper);
  if (kind == Representation::position) return checked;
  if (lower != -upper) throw Error("momentum axis bounds must be symmetric about zero");
  return Axis(n, lower, upper, Representation::momentum);
}

std::vector<double> Axis::points() const {
  std::vector<double> x(n_);
  for (std::size_t j = 0; j < n_; ++j) x[j] = point(j);
  return x;
}

std::string Axis::describe() const {
  std::ostringstream os;
  os << (kind_ == Representation::position ? "position" : "momentum") << "[" << lower_ << ", "
     << upper_ << "] n=" << n_;
  return os.str();
}

}  // namespace phasebell::grid

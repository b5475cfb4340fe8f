#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "phasebell/grid.hpp"

namespace phasebell::grid {

/// A finite union of open intervals on the real line (endpoints may be infinite).
///
/// Membership at an interval endpoint is ambiguous by construction; callers
/// that evaluate a set on samples must keep samples away from endpoints, and
/// mask_on() refuses grids that put a point on one.
class IndicatorSet {
 public:
  static IndicatorSet empty() { return IndicatorSet({}); }
  static IndicatorSet full();
  static IndicatorSet above(double threshold);
  static IndicatorSet below(double threshold);
  static IndicatorSet intervals(std::vector<std::pair<double, double>> parts);
  /// Union of the grid cells [x_j - h/2, x_j + h/2] of every selected point.
  static IndicatorSet from_mask(const Axis& axis, const std::vector<bool>& mask);

  bool contains(double x) const;
  /// True when x lies within tol of a finite endpoint.
  bool near_boundary(double x, double tol) const;
  IndicatorSet complement() const;

  bool is_empty() const { return parts_.empty(); }
  bool is_full() const;
  const std::vector<std::pair<double, double>>& parts() const { return parts_; }

  /// 0/1 indicator at the axis points; throws if a point sits on an endpoint.
  std::vector<std::uint8_t> mask_on(const Axis& axis) const;
  /// Nonempty with nonempty complement when sampled on this axis.
  bool is_proper_on(const Axis& axis) const;

  std::string describe() const;

  bool operator==(const IndicatorSet&) const = default;

 private:
  explicit IndicatorSet(std::vector<std::pair<double, double>> parts) : parts_(std::move(parts)) {}
  std::vector<std::pair<double, double>> parts_;
};

}  // namespace phasebell::grid

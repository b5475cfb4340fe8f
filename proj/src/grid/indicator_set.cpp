#include "phasebell/indicator_set.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace phasebell::grid {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<std::pair<double, double>> normalize(std::vector<std::pair<double, double>> parts) {
  for (const auto& [lo, hi] : parts) {
    if (std::isnan(lo) || std::isnan(hi)) throw Error("interval endpoint is NaN");
    if (!(lo < hi)) throw Error("interval must have lower < upper");
  }
  std::sort(parts.begin(), parts.end());
  std::vector<std::pair<double, double>> merged;
  for (const auto& p : parts) {
    // touching open intervals (a,b),(b,c) stay separate: b itself is excluded
    if (!merged.empty() && p.first < merged.back().second) {
      merged.back().second = std::max(merged.back().second, p.second);
    } else {
      merged.push_back(p);
    }
  }
  return merged;
}

}  // namespace

IndicatorSet IndicatorSet::full() { return IndicatorSet({{-kInf, kInf}}); }
IndicatorSet IndicatorSet::above(double threshold) { return intervals({{threshold, kInf}}); }
IndicatorSet IndicatorSet::below(double threshold) { return intervals({{-kInf, threshold}}); }

IndicatorSet IndicatorSet::intervals(std::vector<std::pair<double, double>> parts) {
  return IndicatorSet(normalize(std::move(parts)));
}

IndicatorSet IndicatorSet::from_mask(const Axis& axis, const std::vector<bool>& mask) {
  if (mask.size() != axis.size()) throw Error("mask length does not match axis");
  const double h = axis.step();
  std::vector<std::pair<double, double>> parts;
  for (std::size_t j = 0; j < mask.size(); ++j) {
    if (!mask[j]) continue;
    const double lo = axis.point(j) - 0.5 * h;
    const double hi = axis.point(j) + 0.5 * h;
    if (!parts.empty() && std::abs(parts.back().second - lo) < 1e-9 * h) {
      parts.back().second = hi;
    } else {
      parts.emplace_back(lo, hi);
    }
  }
  return IndicatorSet(normalize(std::move(parts)));
}

bool IndicatorSet::contains(double x) const {
  return std::any_of(parts_.begin(), parts_.end(),
                     [x](const auto& p) { return p.first < x && x < p.second; });
}

bool IndicatorSet::near_boundary(double x, double tol) const {
  for (const auto& [lo, hi] : parts_) {
    if (std::isfinite(lo) && std::abs(x - lo) <= tol) return true;
    if (std::isfinite(hi) && std::abs(x - hi) <= tol) return true;
  }
  return false;
}

IndicatorSet IndicatorSet::complement() const {
  std::vector<std::pair<double, double>> out;
  double cursor = -kInf;
  for (const auto& [lo, hi] : parts_) {
    if (lo > cursor) out.emplace_back(cursor, lo);
    cursor = hi;
  }
  if (cursor < kInf) out.emplace_back(cursor, kInf);
  return IndicatorSet(std::move(out));
}

bool IndicatorSet::is_full() const {
  return parts_.size() == 1 && std::isinf(parts_[0].first) && std::isinf(parts_[0].second);
}

std::vector<std::uint8_t> IndicatorSet::mask_on(const Axis& axis) const {
  const double tol = 1e-9 * axis.step();
  std::vector<std::uint8_t> mask(axis.size());
  for (std::size_t j = 0; j < axis.size(); ++j) {
    const double x = axis.point(j);
    if (near_boundary(x, tol)) {
      throw Error("set endpoint coincides with grid point " + std::to_string(x) + " of " +
                  axis.describe());
    }
    mask[j] = contains(x) ? 1 : 0;
  }
  return mask;
}

bool IndicatorSet::is_proper_on(const Axis& axis) const {
  const auto m = mask_on(axis);
  const auto ones = std::count(m.begin(), m.end(), std::uint8_t{1});
  return ones > 0 && static_cast<std::size_t>(ones) < m.size();
}

std::string IndicatorSet::describe() const {
  if (parts_.empty()) return "{}";
  std::ostringstream os;
  for (std::size_t i = 0; i < parts_.size(); ++i) {
    if (i) os << " U ";
    os << "(" << parts_[i].first << ", " << parts_[i].second << ")";
  }
  return os.str();
}

}  // namespace phasebell::grid

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "phasebell/grid.hpp"

namespace phasebell::grid {

/// Exact rational with int64 numerator/denominator; overflow throws.
class Rational {
 public:
  Rational() = default;
  Rational(std::int64_t num, std::int64_t den = 1);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }
  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }
  std::string str() const;

  Rational operator-() const { return Rational(-num_, den_); }
  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }
  friend Rational operator*(const Rational& a, const Rational& b);
  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  bool operator==(const Rational&) const = default;
  friend bool operator<(const Rational& a, const Rational& b);
  friend bool operator>(const Rational& a, const Rational& b) { return b < a; }

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

struct Atom {
  double x;
  double y;
  Rational weight;
};

/// Finite point-mass distribution on the plane. Weights positive and summing to 1 exactly.
class AtomicDistribution2D {
 public:
  explicit AtomicDistribution2D(std::vector<Atom> atoms);

  const std::vector<Atom>& atoms() const { return atoms_; }

  /// One-variable marginal along the first (dim=0) or second (dim=1) coordinate,
  /// as (location, weight) pairs sorted by location with equal locations merged.
  std::vector<std::pair<double, Rational>> marginal(std::size_t dim) const;

 private:
  std::vector<Atom> atoms_;
};

}  // namespace phasebell::grid

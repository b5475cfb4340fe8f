#include "phasebell/atomic.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace phasebell::grid {

namespace {

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r = 0;
  if (__builtin_mul_overflow(a, b, &r)) throw Error("rational overflow");
  return r;
}

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r = 0;
  if (__builtin_add_overflow(a, b, &r)) throw Error("rational overflow");
  return r;
}

}  // namespace

Rational::Rational(std::int64_t num, std::int64_t den) {
  if (den == 0) throw Error("rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const std::int64_t g = std::gcd(num, den);
  num_ = g ? num / g : 0;
  den_ = g ? den / g : 1;
}

std::string Rational::str() const {
  return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_);
}

Rational operator+(const Rational& a, const Rational& b) {
  const std::int64_t g = std::gcd(a.den_, b.den_);
  const std::int64_t num =
      checked_add(checked_mul(a.num_, b.den_ / g), checked_mul(b.num_, a.den_ / g));
  return Rational(num, checked_mul(a.den_ / g, b.den_));
}

Rational operator*(const Rational& a, const Rational& b) {
  const std::int64_t g1 = std::gcd(a.num_, b.den_);
  const std::int64_t g2 = std::gcd(b.num_, a.den_);
  const auto safe = [](std::int64_t v, std::int64_t g) { return g ? v / g : v; };
  return Rational(checked_mul(safe(a.num_, g1), safe(b.num_, g2)),
                  checked_mul(safe(a.den_, g2), safe(b.den_, g1)));
}

bool operator<(const Rational& a, const Rational& b) {
  return static_cast<__int128>(a.num_) * b.den_ < static_cast<__int128>(b.num_) * a.den_;
}

AtomicDistribution2D::AtomicDistribution2D(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {
  if (atoms_.empty()) throw Error("atomic distribution needs at least one atom");
  Rational total;
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    if (!(atoms_[i].weight > Rational(0))) throw Error("atom weights must be positive");
    total += atoms_[i].weight;
    for (std::size_t j = 0; j < i; ++j) {
      if (atoms_[i].x == atoms_[j].x && atoms_[i].y == atoms_[j].y) {
        throw Error("atom locations must be pairwise distinct");
      }
    }
  }
  if (!(total == Rational(1))) throw Error("atom weights sum to " + total.str() + ", not 1");
}

std::vector<std::pair<double, Rational>> AtomicDistribution2D::marginal(std::size_t dim) const {
  if (dim > 1) throw Error("atomic marginal dimension must be 0 or 1");
  std::map<double, Rational> acc;
  for (const auto& a : atoms_) acc[dim == 0 ? a.x : a.y] += a.weight;
  return {acc.begin(), acc.end()};
}

}  // namespace phasebell::grid

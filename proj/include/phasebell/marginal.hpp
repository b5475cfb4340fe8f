#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include <json.hpp>

#include "phasebell/quantum.hpp"

namespace phasebell::marginal {

using grid::MarginalPair;
using grid::RealField2D;
using grid::RealField4D;

/// Three marginals arranged as a chain sigma(X,Y) - sigma(Z,Y) - sigma(Z,W), where
/// X, Y, Z, W are slots of the 4D axis order (q1, q2, p1, p2). Dropping sigma_qp gives
/// sigma_qq(q1,q2), sigma_pq(p1,q2), sigma_pp(p1,p2); the other drops are relabelings.
class MarginalTriple {
 public:
  MarginalTriple(RealField2D qq, RealField2D pq, RealField2D pp);
  static MarginalTriple from_quartet(const quantum::MarginalQuartet& quartet, MarginalPair drop);

  /// Oriented as (X, Y), (Z, Y), (Z, W).
  const RealField2D& first() const { return first_; }
  const RealField2D& middle() const { return middle_; }
  const RealField2D& last() const { return last_; }
  /// 4D slots of X, Y, Z, W.
  const std::array<std::size_t, 4>& slots() const { return slots_; }
  MarginalPair dropped() const { return dropped_; }
  /// The chain members as quartet selectors, in order first, middle, last.
  std::array<MarginalPair, 3> members() const;
  /// Axes of the 4D phase-space grid in (q1, q2, p1, p2) order.
  std::array<grid::Axis, 4> phase_space_axes() const;

 private:
  MarginalTriple(RealField2D first, RealField2D middle, RealField2D last, std::array<std::size_t, 4> slots,
                 MarginalPair dropped);
  RealField2D first_, middle_, last_;
  std::array<std::size_t, 4> slots_;
  MarginalPair dropped_;
};

struct ConsistencyEntry {
  std::string name;
  double residual;
  bool pass;
};

struct ConsistencyReport {
  std::vector<ConsistencyEntry> entries;
  bool exact = false;  // atomic inputs compared in exact arithmetic
  double tolerance = 0.0;
  bool pass() const;
  nlohmann::json to_json() const;
};

/// Normalization, nonnegativity and the one-variable equalities; residuals in L1.
ConsistencyReport check_consistency(const quantum::MarginalQuartet& quartet, double tol = 1e-8);
ConsistencyReport check_consistency(const MarginalTriple& triple, double tol = 1e-8);

struct OneVarMarginals {
  std::vector<double> sigma_y;  // shared variable of first and middle (q2 when sigma_qp is dropped)
  std::vector<double> sigma_z;  // shared variable of middle and last (p1 when sigma_qp is dropped)
  double discrepancy_y;         // L1 distance between the two routes
  double discrepancy_z;
};

/// Averages of both routes; throws when the routes differ by more than tol.
OneVarMarginals one_var_marginals(const MarginalTriple& triple, double tol = 1e-8);

/// Sum of a 4D field over the two slots not listed; result axes are (a, b).
RealField2D project(const RealField4D& rho, std::size_t a, std::size_t b);
double l1_distance(const RealField2D& a, const RealField2D& b);
double l1_norm(const RealField2D& a);

struct SupportSet {
  std::vector<std::uint8_t> mask;  // over the 4D grid
  double epsilon;                  // relative threshold
  std::array<double, 3> thresholds;  // absolute thresholds on first, middle, last
  std::size_t count = 0;
};

SupportSet support_set(const MarginalTriple& triple, double epsilon = 1e-12);

struct Rho0Result {
  RealField4D rho0;
  SupportSet support;
  std::vector<double> sigma_y;  // thresholded one-variable marginals used as denominators
  std::vector<double> sigma_z;
  double mass_deficit;
  std::array<double, 3> residuals;  // L1 marginal residuals for first, middle, last
};

/// Chain product first * middle * last / (sigma_y sigma_z) on E. Throws on mass loss above 1e-8.
Rho0Result rho0(const MarginalTriple& triple, double epsilon = 1e-12);

/// Perturbation direction for an F supported in E (throws otherwise).
RealField4D delta_from_F(const RealField4D& F, const MarginalTriple& triple, const Rho0Result& base);

/// L1 norms of the three chain projections of a 4D field.
std::array<double, 3> chain_projection_norms(const RealField4D& f, const MarginalTriple& triple);

struct LambdaRange {
  double m_plus;
  double m_minus;
  double lower;  // -1/m_plus
  double upper;  // 1/m_minus
  bool degenerate;
};

LambdaRange lambda_range(const RealField4D& delta, const RealField4D& rho0, const SupportSet& support);

/// rho0 + lambda delta; lambda outside the interval is rejected.
RealField4D general_density(const RealField4D& rho0, const RealField4D& delta, double lambda,
                            const LambdaRange& range);
RealField4D general_density_unchecked(const RealField4D& rho0, const RealField4D& delta, double lambda);

struct SolutionFamily {
  RealField4D rho0;
  RealField4D delta;
  SupportSet support;
  LambdaRange range;
  std::string F_provenance;

  nlohmann::json manifest() const;
  /// Writes rho0 and delta in the field format plus <prefix>.manifest.json.
  void save(const std::string& prefix) const;
};

struct RepresentResult {
  SolutionFamily family;
  double delta_residual;    // max |delta - (rho1 - rho0)|
  double roundtrip_residual;  // max |general_density(rho0, delta, 1) - rho1|
  std::array<double, 3> marginal_residuals;
};

/// F = rho1 gives delta = rho1 - rho0 and m_minus <= 1. Throws if rho1 is negative,
/// misses the triple's marginals by more than 1e-6, or carries mass outside E.
RepresentResult represent(const RealField4D& rho1, const MarginalTriple& triple, const Rho0Result& base);

/// Counter-based uniform noise per grid index, smoothed by a separable Gaussian of the
/// given correlation length (in grid cells), masked to E and multiplied by weight if given.
RealField4D random_F(std::uint64_t seed, const SupportSet& support, const std::array<grid::Axis, 4>& axes,
                     double correlation_length, const RealField4D* weight = nullptr);

}  // namespace phasebell::marginal

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include "phasebell/field_io.hpp"
#include "phasebell/marginal.hpp"

namespace phasebell::marginal {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Visits every 4D index with the chain coordinates (x, y, z, w).
template <class Fn>
void for_each_chain_point(const std::array<grid::Axis, 4>& axes, const std::array<std::size_t, 4>& slots, Fn fn) {
  std::array<std::size_t, 4> ii{};
  std::size_t flat = 0;
  for (ii[0] = 0; ii[0] < axes[0].size(); ++ii[0]) {
    for (ii[1] = 0; ii[1] < axes[1].size(); ++ii[1]) {
      for (ii[2] = 0; ii[2] < axes[2].size(); ++ii[2]) {
        for (ii[3] = 0; ii[3] < axes[3].size(); ++ii[3]) {
          fn(flat++, ii[slots[0]], ii[slots[1]], ii[slots[2]], ii[slots[3]]);
        }
      }
    }
  }
}

double max_of(const RealField2D& f) { return *std::max_element(f.values().begin(), f.values().end()); }

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double uniform_at(std::uint64_t seed, std::uint64_t index) {
  return static_cast<double>(splitmix64(splitmix64(seed) ^ index) >> 11) * 0x1.0p-53;
}

void smooth_along(RealField4D& f, std::size_t dim, double sigma) {
  if (sigma <= 0.0) return;
  const auto radius = static_cast<long>(std::ceil(3.0 * sigma));
  std::vector<double> kernel(static_cast<std::size_t>(2 * radius + 1));
  double total = 0.0;
  for (long k = -radius; k <= radius; ++k) {
    const double v = std::exp(-0.5 * (k / sigma) * (k / sigma));
    kernel[static_cast<std::size_t>(k + radius)] = v;
    total += v;
  }
  for (auto& v : kernel) v /= total;

  const std::size_t n = f.extent(dim);
  std::size_t stride = 1;
  for (std::size_t d = dim + 1; d < 4; ++d) stride *= f.extent(d);
  const std::size_t outer = f.size() / (n * stride);
  std::vector<double> line(n), out(n);
  for (std::size_t o = 0; o < outer; ++o) {
    for (std::size_t s = 0; s < stride; ++s) {
      const std::size_t base = o * n * stride + s;
      for (std::size_t j = 0; j < n; ++j) line[j] = f[base + j * stride];
      for (std::size_t j = 0; j < n; ++j) {
        double acc = 0.0;
        for (long k = -radius; k <= radius; ++k) {
          const long src = static_cast<long>(j) + k;
          if (src >= 0 && src < static_cast<long>(n)) acc += kernel[static_cast<std::size_t>(k + radius)] * line[static_cast<std::size_t>(src)];
        }
        out[j] = acc;
      }
      for (std::size_t j = 0; j < n; ++j) f[base + j * stride] = out[j];
    }
  }
}

nlohmann::json finite_or_tag(double v) {
  if (std::isfinite(v)) return v;
  return v > 0 ? "+inf" : "-inf";
}

}  // namespace

SupportSet support_set(const MarginalTriple& t, double epsilon) {
  if (!(epsilon >= 0.0)) throw Error("support threshold must be nonnegative");
  const auto axes = t.phase_space_axes();
  SupportSet E;
  E.epsilon = epsilon;
  E.thresholds = {epsilon * max_of(t.first()), epsilon * max_of(t.middle()), epsilon * max_of(t.last())};
  std::size_t total = 1;
  for (const auto& a : axes) total *= a.size();
  E.mask.assign(total, 0);
  const auto& A = t.first();
  const auto& B = t.middle();
  const auto& C = t.last();
  for_each_chain_point(axes, t.slots(), [&](std::size_t flat, std::size_t x, std::size_t y, std::size_t z,
                                             std::size_t w) {
    const bool in = A(x, y) > E.thresholds[0] && B(z, y) > E.thresholds[1] && C(z, w) > E.thresholds[2];
    E.mask[flat] = in;
    E.count += in;
  });
  return E;
}

Rho0Result rho0(const MarginalTriple& t, double epsilon) {
  const auto axes = t.phase_space_axes();
  SupportSet E = support_set(t, epsilon);
  const auto& A = t.first();
  const auto& B = t.middle();
  const auto& C = t.last();

  std::vector<double> sy(B.extent(1), 0.0), sz(B.extent(0), 0.0);
  for (std::size_t z = 0; z < B.extent(0); ++z) {
    for (std::size_t y = 0; y < B.extent(1); ++y) {
      if (B(z, y) > E.thresholds[1]) sy[y] += B(z, y) * B.axis(0).step();
    }
  }
  for (std::size_t z = 0; z < C.extent(0); ++z) {
    for (std::size_t w = 0; w < C.extent(1); ++w) {
      if (C(z, w) > E.thresholds[2]) sz[z] += C(z, w) * C.axis(1).step();
    }
  }

  RealField4D rho(axes);
  for_each_chain_point(axes, t.slots(), [&](std::size_t flat, std::size_t x, std::size_t y, std::size_t z,
                                             std::size_t w) {
    if (E.mask[flat]) rho[flat] = A(x, y) * B(z, y) * C(z, w) / (sy[y] * sz[z]);
  });

  const double deficit = grid::integrate_2d(A) - grid::integrate_4d(rho);
  if (std::abs(deficit) > 1e-8) {
    throw Error("support threshold discarded mass " + std::to_string(deficit) + " (limit 1e-8)");
  }
  const auto& s = t.slots();
  Rho0Result r{std::move(rho), std::move(E), std::move(sy), std::move(sz), deficit, {}};
  r.residuals = {l1_distance(project(r.rho0, s[0], s[1]), A), l1_distance(project(r.rho0, s[2], s[1]), B),
                 l1_distance(project(r.rho0, s[2], s[3]), C)};
  return r;
}

RealField4D delta_from_F(const RealField4D& F, const MarginalTriple& t, const Rho0Result& base) {
  const auto axes = t.phase_space_axes();
  if (!(F.axes() == axes)) throw Error("F is not on the triple's phase-space grid");
  const auto& mask = base.support.mask;
  for (std::size_t i = 0; i < F.size(); ++i) {
    if (!mask[i] && F[i] != 0.0) throw Error("F is nonzero outside the support set E");
  }
  const auto& s = t.slots();
  const RealField2D A1 = project(F, s[0], s[1]);
  const RealField2D A2 = project(F, s[2], s[1]);
  const RealField2D A3 = project(F, s[2], s[3]);
  std::vector<double> By(A1.extent(1), 0.0), Bz(A3.extent(0), 0.0);
  for (std::size_t x = 0; x < A1.extent(0); ++x) {
    for (std::size_t y = 0; y < A1.extent(1); ++y) By[y] += A1(x, y) * A1.axis(0).step();
  }
  for (std::size_t z = 0; z < A3.extent(0); ++z) {
    for (std::size_t w = 0; w < A3.extent(1); ++w) Bz[z] += A3(z, w) * A3.axis(1).step();
  }
  const auto& A = t.first();
  const auto& B = t.middle();
  const auto& C = t.last();
  RealField4D delta(axes);
  for_each_chain_point(axes, s, [&](std::size_t flat, std::size_t x, std::size_t y, std::size_t z, std::size_t w) {
    if (!mask[flat]) return;
    const double bracket = A1(x, y) / A(x, y) + A2(z, y) / B(z, y) + A3(z, w) / C(z, w) - By[y] / base.sigma_y[y] -
                           Bz[z] / base.sigma_z[z];
    delta[flat] = F[flat] - base.rho0[flat] * bracket;
  });
  return delta;
}

std::array<double, 3> chain_projection_norms(const RealField4D& f, const MarginalTriple& t) {
  const auto& s = t.slots();
  return {l1_norm(project(f, s[0], s[1])), l1_norm(project(f, s[2], s[1])), l1_norm(project(f, s[2], s[3]))};
}

LambdaRange lambda_range(const RealField4D& delta, const RealField4D& rho0, const SupportSet& support) {
  double hi = -kInf, lo = kInf, biggest = 0.0;
  for (std::size_t i = 0; i < delta.size(); ++i) {
    if (!support.mask[i] || !(rho0[i] > 0.0)) continue;
    const double r = delta[i] / rho0[i];
    hi = std::max(hi, r);
    lo = std::min(lo, r);
    biggest = std::max(biggest, std::abs(r));
  }
  LambdaRange range;
  range.degenerate = biggest <= 1e-12;
  if (range.degenerate) {
    range.m_plus = range.m_minus = 0.0;
    range.lower = -kInf;
    range.upper = kInf;
    return range;
  }
  range.m_plus = hi;
  range.m_minus = -lo;
  range.lower = range.m_plus > 0.0 ? -1.0 / range.m_plus : -kInf;
  range.upper = range.m_minus > 0.0 ? 1.0 / range.m_minus : kInf;
  return range;
}

RealField4D general_density_unchecked(const RealField4D& rho0, const RealField4D& delta, double lambda) {
  if (!(rho0.axes() == delta.axes())) throw Error("rho0 and delta live on different grids");
  RealField4D rho(rho0.axes());
  for (std::size_t i = 0; i < rho.size(); ++i) rho[i] = rho0[i] + lambda * delta[i];
  return rho;
}

RealField4D general_density(const RealField4D& rho0, const RealField4D& delta, double lambda,
                            const LambdaRange& range) {
  const double slack = 1e-12;
  if (lambda < range.lower - slack * std::abs(range.lower) || lambda > range.upper + slack * std::abs(range.upper)) {
    throw Error("lambda = " + std::to_string(lambda) + " lies outside the admissible interval [" +
                std::to_string(range.lower) + ", " + std::to_string(range.upper) + "]");
  }
  return general_density_unchecked(rho0, delta, lambda);
}

nlohmann::json SolutionFamily::manifest() const {
  return {{"epsilon", support.epsilon},
          {"support_points", support.count},
          {"m_plus", finite_or_tag(range.m_plus)},
          {"m_minus", finite_or_tag(range.m_minus)},
          {"lambda_interval", {finite_or_tag(range.lower), finite_or_tag(range.upper)}},
          {"degenerate", range.degenerate},
          {"F", F_provenance}};
}

void SolutionFamily::save(const std::string& prefix) const {
  grid::write_field(prefix + ".rho0.pbf", rho0);
  grid::write_field(prefix + ".delta.pbf", delta);
  std::ofstream out(prefix + ".manifest.json");
  if (!out) throw Error("cannot write " + prefix + ".manifest.json");
  out << manifest().dump(2) << "\n";
}

RepresentResult represent(const RealField4D& rho1, const MarginalTriple& t, const Rho0Result& base) {
  if (!(rho1.axes() == t.phase_space_axes())) throw Error("rho1 is not on the triple's phase-space grid");
  const auto& mask = base.support.mask;
  double outside = 0.0;
  RealField4D F(rho1.axes());
  for (std::size_t i = 0; i < rho1.size(); ++i) {
    if (rho1[i] < -1e-12) throw Error("rho1 is negative (" + std::to_string(rho1[i]) + ")");
    if (mask[i]) {
      F[i] = std::max(rho1[i], 0.0);
    } else {
      outside += std::abs(rho1[i]);
    }
  }
  outside *= rho1.cell();
  if (outside > 1e-10) throw Error("rho1 carries mass " + std::to_string(outside) + " outside the support set E");
  const auto& s = t.slots();
  const std::array<double, 3> marg{l1_distance(project(rho1, s[0], s[1]), t.first()),
                                   l1_distance(project(rho1, s[2], s[1]), t.middle()),
                                   l1_distance(project(rho1, s[2], s[3]), t.last())};
  for (double m : marg) {
    if (m > 1e-6) throw Error("rho1 misses the prescribed marginals (L1 residual " + std::to_string(m) + ")");
  }

  RealField4D delta = delta_from_F(F, t, base);
  LambdaRange range = lambda_range(delta, base.rho0, base.support);
  double dres = 0.0, rres = 0.0;
  const RealField4D back = general_density_unchecked(base.rho0, delta, 1.0);
  for (std::size_t i = 0; i < rho1.size(); ++i) {
    dres = std::max(dres, std::abs(delta[i] - (rho1[i] - base.rho0[i])));
    rres = std::max(rres, std::abs(back[i] - rho1[i]));
  }
  SolutionFamily family{base.rho0, std::move(delta), base.support, range, "rho1"};
  return RepresentResult{std::move(family), dres, rres, marg};
}

RealField4D random_F(std::uint64_t seed, const SupportSet& support, const std::array<grid::Axis, 4>& axes,
                     double correlation_length, const RealField4D* weight) {
  RealField4D g(axes);
  if (support.mask.size() != g.size()) throw Error("support set does not match the grid");
  if (weight && !(weight->axes() == axes)) throw Error("weight is not on the requested grid");
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = uniform_at(seed, i);
  for (std::size_t d = 0; d < 4; ++d) smooth_along(g, d, correlation_length);
  for (std::size_t i = 0; i < g.size(); ++i) {
    g[i] = support.mask[i] ? g[i] * (weight ? (*weight)[i] : 1.0) : 0.0;
  }
  return g;
}

}  // namespace phasebell::marginal

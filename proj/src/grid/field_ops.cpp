#include <numeric>

#include "phasebell/grid.hpp"

namespace phasebell::grid {

namespace {

template <class F>
double sum_times_cell(const F& f) {
  const auto v = f.values();
  return std::accumulate(v.begin(), v.end(), 0.0) * f.cell();
}

}  // namespace

double integrate_2d(const RealField2D& f) { return sum_times_cell(f); }

double integrate_4d(const RealField4D& f) { return sum_times_cell(f); }

std::string to_string(MarginalPair pair) {
  switch (pair) {
    case MarginalPair::qq: return "qq";
    case MarginalPair::qp: return "qp";
    case MarginalPair::pq: return "pq";
    case MarginalPair::pp: return "pp";
  }
  return "?";
}

MarginalPair marginal_pair_from_string(const std::string& name) {
  if (name == "qq") return MarginalPair::qq;
  if (name == "qp") return MarginalPair::qp;
  if (name == "pq") return MarginalPair::pq;
  if (name == "pp") return MarginalPair::pp;
  throw Error("unknown marginal selector '" + name + "' (expected qq, qp, pq or pp)");
}

std::array<std::size_t, 2> kept_axes(MarginalPair pair) {
  switch (pair) {
    case MarginalPair::qq: return {0, 1};
    case MarginalPair::qp: return {0, 3};
    case MarginalPair::pq: return {2, 1};
    case MarginalPair::pp: return {2, 3};
  }
  throw Error("invalid marginal selector");
}

RealField2D marginalize_4d(const RealField4D& rho, MarginalPair keep) {
  const auto [k0, k1] = kept_axes(keep);
  double dropped_cell = 1.0;
  for (std::size_t d = 0; d < 4; ++d) {
    if (d != k0 && d != k1) dropped_cell *= rho.axis(d).step();
  }
  RealField2D out({rho.axis(k0), rho.axis(k1)});
  const std::size_t n1 = out.extent(1);
  for (std::size_t flat = 0; flat < rho.size(); ++flat) {
    const auto idx = rho.unravel(flat);
    out[idx[k0] * n1 + idx[k1]] += rho[flat];
  }
  for (auto& v : out.values()) v *= dropped_cell;
  return out;
}

}  // namespace phasebell::grid

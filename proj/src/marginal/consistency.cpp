#include <cmath>
#include <limits>

#include "phasebell/marginal.hpp"

namespace phasebell::marginal {

namespace {

using grid::AtomicDistribution2D;

RealField2D transpose(const RealField2D& f) {
  RealField2D t({f.axis(1), f.axis(0)});
  for (std::size_t i = 0; i < f.extent(0); ++i) {
    for (std::size_t j = 0; j < f.extent(1); ++j) t(j, i) = f(i, j);
  }
  return t;
}

/// Sum over the other dimension, times its step.
std::vector<double> line_marginal(const RealField2D& f, std::size_t keep) {
  std::vector<double> m(f.extent(keep), 0.0);
  const double step = f.axis(1 - keep).step();
  for (std::size_t i = 0; i < f.extent(0); ++i) {
    for (std::size_t j = 0; j < f.extent(1); ++j) m[keep == 0 ? i : j] += f(i, j) * step;
  }
  return m;
}

double l1_lines(const std::vector<double>& a, const std::vector<double>& b, double step) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
  return s * step;
}

const RealField2D& grid_member(const quantum::MarginalQuartet& q, MarginalPair pair) {
  const auto* f = std::get_if<RealField2D>(&q.get(pair));
  if (!f) throw Error("marginal " + grid::to_string(pair) + " is atomic; the solver needs grid marginals");
  return *f;
}

void add_field_checks(ConsistencyReport& r, const std::string& name, const RealField2D& f) {
  const double norm = grid::integrate_2d(f);
  r.entries.push_back({"normalization " + name, std::abs(norm - 1.0), std::abs(norm - 1.0) <= r.tolerance});
  double neg = 0.0;
  for (double v : f.values()) neg = std::max(neg, -v);
  r.entries.push_back({"nonnegativity " + name, neg, neg == 0.0});
}

ConsistencyEntry compare_lines(const std::string& name, const RealField2D& a, std::size_t da, const RealField2D& b,
                               std::size_t db, double tol) {
  if (!(a.axis(da) == b.axis(db))) {
    return {name + " (axes differ)", std::numeric_limits<double>::infinity(), false};
  }
  const double res = l1_lines(line_marginal(a, da), line_marginal(b, db), a.axis(da).step());
  return {name, res, res <= tol};
}

ConsistencyEntry compare_atomic(const std::string& name, const AtomicDistribution2D& a, std::size_t da,
                                const AtomicDistribution2D& b, std::size_t db) {
  const auto ma = a.marginal(da);
  const auto mb = b.marginal(db);
  bool equal = ma.size() == mb.size();
  for (std::size_t i = 0; equal && i < ma.size(); ++i) {
    equal = ma[i].first == mb[i].first && ma[i].second == mb[i].second;
  }
  if (equal) return {name, 0.0, true};
  // L1 distance between the two point-mass lists
  double res = 0.0;
  for (const auto& [x, w] : ma) {
    double other = 0.0;
    for (const auto& [y, v] : mb) {
      if (x == y) other = v.to_double();
    }
    res += std::abs(w.to_double() - other);
  }
  for (const auto& [y, v] : mb) {
    bool found = false;
    for (const auto& [x, w] : ma) found = found || x == y;
    if (!found) res += v.to_double();
  }
  return {name, res, false};
}

}  // namespace

MarginalTriple::MarginalTriple(RealField2D qq, RealField2D pq, RealField2D pp)
    : MarginalTriple(std::move(qq), std::move(pq), std::move(pp), {0, 1, 2, 3}, MarginalPair::qp) {}

MarginalTriple::MarginalTriple(RealField2D first, RealField2D middle, RealField2D last,
                               std::array<std::size_t, 4> slots, MarginalPair dropped)
    : first_(std::move(first)), middle_(std::move(middle)), last_(std::move(last)), slots_(slots), dropped_(dropped) {
  if (!(first_.axis(1) == middle_.axis(1))) {
    throw Error("chain members share no common axis: " + first_.axis(1).describe() + " vs " +
                middle_.axis(1).describe());
  }
  if (!(middle_.axis(0) == last_.axis(0))) {
    throw Error("chain members share no common axis: " + middle_.axis(0).describe() + " vs " +
                last_.axis(0).describe());
  }
}

MarginalTriple MarginalTriple::from_quartet(const quantum::MarginalQuartet& q, MarginalPair drop) {
  switch (drop) {
    case MarginalPair::qp:
      return MarginalTriple(grid_member(q, MarginalPair::qq), grid_member(q, MarginalPair::pq),
                            grid_member(q, MarginalPair::pp), {0, 1, 2, 3}, drop);
    case MarginalPair::qq:
      return MarginalTriple(grid_member(q, MarginalPair::qp), grid_member(q, MarginalPair::pp),
                            grid_member(q, MarginalPair::pq), {0, 3, 2, 1}, drop);
    case MarginalPair::pp:
      return MarginalTriple(transpose(grid_member(q, MarginalPair::qp)), transpose(grid_member(q, MarginalPair::qq)),
                            transpose(grid_member(q, MarginalPair::pq)), {3, 0, 1, 2}, drop);
    case MarginalPair::pq:
      return MarginalTriple(transpose(grid_member(q, MarginalPair::qq)), transpose(grid_member(q, MarginalPair::qp)),
                            transpose(grid_member(q, MarginalPair::pp)), {1, 0, 3, 2}, drop);
  }
  throw Error("invalid marginal selector");
}

std::array<MarginalPair, 3> MarginalTriple::members() const {
  switch (dropped_) {
    case MarginalPair::qp: return {MarginalPair::qq, MarginalPair::pq, MarginalPair::pp};
    case MarginalPair::qq: return {MarginalPair::qp, MarginalPair::pp, MarginalPair::pq};
    case MarginalPair::pp: return {MarginalPair::qp, MarginalPair::qq, MarginalPair::pq};
    case MarginalPair::pq: return {MarginalPair::qq, MarginalPair::qp, MarginalPair::pp};
  }
  throw Error("invalid marginal selector");
}

std::array<grid::Axis, 4> MarginalTriple::phase_space_axes() const {
  auto axis_for = [this](std::size_t slot) -> const grid::Axis& {
    if (slot == slots_[0]) return first_.axis(0);
    if (slot == slots_[1]) return first_.axis(1);
    if (slot == slots_[2]) return middle_.axis(0);
    return last_.axis(1);
  };
  return {axis_for(0), axis_for(1), axis_for(2), axis_for(3)};
}

bool ConsistencyReport::pass() const {
  for (const auto& e : entries) {
    if (!e.pass) return false;
  }
  return true;
}

nlohmann::json ConsistencyReport::to_json() const {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& e : entries) {
    rows.push_back({{"check", e.name},
                    {"residual", std::isfinite(e.residual) ? nlohmann::json(e.residual) : nlohmann::json(nullptr)},
                    {"pass", e.pass}});
  }
  return {{"entries", rows}, {"exact", exact}, {"tolerance", tolerance}, {"pass", pass()}};
}

ConsistencyReport check_consistency(const quantum::MarginalQuartet& q, double tol) {
  ConsistencyReport r;
  r.tolerance = tol;
  bool all_atomic = true;
  for (auto pair : {MarginalPair::qq, MarginalPair::qp, MarginalPair::pq, MarginalPair::pp}) {
    if (const auto* f = std::get_if<RealField2D>(&q.get(pair))) {
      add_field_checks(r, "sigma_" + grid::to_string(pair), *f);
      all_atomic = false;
    } else {
      r.entries.push_back({"normalization sigma_" + grid::to_string(pair), 0.0, true});
      r.entries.push_back({"nonnegativity sigma_" + grid::to_string(pair), 0.0, true});
    }
  }
  struct Link {
    const char* name;
    MarginalPair a;
    std::size_t da;
    MarginalPair b;
    std::size_t db;
  };
  const Link links[] = {
      {"q1: sigma_qq vs sigma_qp", MarginalPair::qq, 0, MarginalPair::qp, 0},
      {"q2: sigma_qq vs sigma_pq", MarginalPair::qq, 1, MarginalPair::pq, 1},
      {"p1: sigma_pq vs sigma_pp", MarginalPair::pq, 0, MarginalPair::pp, 0},
      {"p2: sigma_qp vs sigma_pp", MarginalPair::qp, 1, MarginalPair::pp, 1},
  };
  for (const auto& l : links) {
    const auto& ma = q.get(l.a);
    const auto& mb = q.get(l.b);
    const auto* fa = std::get_if<RealField2D>(&ma);
    const auto* fb = std::get_if<RealField2D>(&mb);
    if (fa && fb) {
      r.entries.push_back(compare_lines(l.name, *fa, l.da, *fb, l.db, tol));
    } else if (!fa && !fb) {
      r.entries.push_back(compare_atomic(l.name, std::get<AtomicDistribution2D>(ma), l.da,
                                         std::get<AtomicDistribution2D>(mb), l.db));
    } else {
      r.entries.push_back({std::string(l.name) + " (mixed atomic/grid)", std::numeric_limits<double>::infinity(),
                           false});
    }
  }
  r.exact = all_atomic;
  return r;
}

ConsistencyReport check_consistency(const MarginalTriple& t, double tol) {
  ConsistencyReport r;
  r.tolerance = tol;
  const auto names = t.members();
  add_field_checks(r, "sigma_" + grid::to_string(names[0]), t.first());
  add_field_checks(r, "sigma_" + grid::to_string(names[1]), t.middle());
  add_field_checks(r, "sigma_" + grid::to_string(names[2]), t.last());
  r.entries.push_back(compare_lines("chain link " + grid::to_string(names[0]) + "-" + grid::to_string(names[1]),
                                    t.first(), 1, t.middle(), 1, tol));
  r.entries.push_back(compare_lines("chain link " + grid::to_string(names[1]) + "-" + grid::to_string(names[2]),
                                    t.middle(), 0, t.last(), 0, tol));
  return r;
}

OneVarMarginals one_var_marginals(const MarginalTriple& t, double tol) {
  const auto y1 = line_marginal(t.first(), 1);
  const auto y2 = line_marginal(t.middle(), 1);
  const auto z1 = line_marginal(t.middle(), 0);
  const auto z2 = line_marginal(t.last(), 0);
  OneVarMarginals m;
  m.discrepancy_y = l1_lines(y1, y2, t.first().axis(1).step());
  m.discrepancy_z = l1_lines(z1, z2, t.middle().axis(0).step());
  if (m.discrepancy_y > tol || m.discrepancy_z > tol) {
    throw Error("one-variable marginals disagree (L1 " + std::to_string(m.discrepancy_y) + ", " +
                std::to_string(m.discrepancy_z) + ")");
  }
  m.sigma_y.resize(y1.size());
  m.sigma_z.resize(z1.size());
  for (std::size_t i = 0; i < y1.size(); ++i) m.sigma_y[i] = 0.5 * (y1[i] + y2[i]);
  for (std::size_t i = 0; i < z1.size(); ++i) m.sigma_z[i] = 0.5 * (z1[i] + z2[i]);
  return m;
}

RealField2D project(const RealField4D& rho, std::size_t a, std::size_t b) {
  if (a > 3 || b > 3 || a == b) throw Error("projection needs two distinct 4D slots");
  RealField2D out({rho.axis(a), rho.axis(b)});
  double dropped_cell = 1.0;
  for (std::size_t d = 0; d < 4; ++d) {
    if (d != a && d != b) dropped_cell *= rho.axis(d).step();
  }
  for (std::size_t flat = 0; flat < rho.size(); ++flat) {
    const auto ii = rho.unravel(flat);
    out(ii[a], ii[b]) += rho[flat];
  }
  for (auto& v : out.values()) v *= dropped_cell;
  return out;
}

double l1_distance(const RealField2D& a, const RealField2D& b) {
  if (a.size() != b.size()) throw Error("L1 distance of fields with different shapes");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
  return s * a.cell();
}

double l1_norm(const RealField2D& a) {
  double s = 0.0;
  for (double v : a.values()) s += std::abs(v);
  return s * a.cell();
}

}  // namespace phasebell::marginal

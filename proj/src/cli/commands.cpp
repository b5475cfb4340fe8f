#include <Eigen/Eigenvalues>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "phasebell/bell.hpp"
#include "phasebell/cli.hpp"
#include "phasebell/marginal.hpp"
#include "phasebell/operators.hpp"
#include "phasebell/quantum.hpp"

namespace phasebell::cli {

namespace {

using bell::SignPattern;
using grid::Axis;
using grid::MarginalPair;
using grid::RealField2D;
using grid::RealField4D;
using nlohmann::json;

const double kTwoSqrt2 = 2.0 * std::numbers::sqrt2;

Axis axis_for(const ExperimentConfig& cfg, std::size_t default_n, double default_box) {
  const double box = cfg.box.value_or(default_box);
  return Axis::position(cfg.n.value_or(default_n), -box, box);
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
  return out;
}

std::string format_number(double v) {
  std::ostringstream out;
  out << v;
  return out.str();
}

SignPattern pattern_from(const std::string& spec) {
  if (spec == "theta") return SignPattern::theta();
  if (spec.rfind("half:", 0) == 0) {
    const auto c = parse_list(spec.substr(5));
    if (c.size() != 4) throw Error("half-line pattern needs four thresholds");
    return SignPattern::half_lines(c[0], c[1], c[2], c[3]);
  }
  throw Error("unknown pattern spec '" + spec + "' (use theta or half:c1,c2,c1p,c2p)");
}

std::optional<std::pair<quantum::WaveFunction1D, quantum::WaveFunction1D>> factors_of(const std::string& state,
                                                                                    const Axis& axis) {
  if (state == "gaussian") return std::make_pair(quantum::gaussian_1d(axis), quantum::gaussian_1d(axis));
  if (state.rfind("ho:", 0) == 0) {
    const auto levels = parse_list(state.substr(3));
    if (levels.size() != 2) throw Error("ho state needs two levels");
    return std::make_pair(quantum::harmonic_oscillator_1d(axis, static_cast<unsigned>(levels[0])),
                          quantum::harmonic_oscillator_1d(axis, static_cast<unsigned>(levels[1])));
  }
  return std::nullopt;
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

double min_over(const RealField4D& f, const std::vector<std::uint8_t>* mask = nullptr) {
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (!mask || (*mask)[i]) m = std::min(m, f[i]);
  }
  return m;
}

Table consistency_table(const marginal::ConsistencyReport& r) {
  Table t{"consistency", {"check", "residual", "pass"}, {}};
  for (const auto& e : r.entries) t.rows.push_back({e.name, number(e.residual), e.pass});
  return t;
}

// ---- classical counterexample ---------------------------------------------------

/// Exact sum over the eight atoms using the pointwise sign functions.
grid::Rational enumerate_atoms(const quantum::MarginalQuartet& q, const SignPattern& p) {
  const auto f = bell::bell_functions(p);
  const std::function<int(double, double)>* fs[] = {&f.r, &f.s, &f.t, &f.u};
  const MarginalPair pairs[] = {MarginalPair::qq, MarginalPair::qp, MarginalPair::pq, MarginalPair::pp};
  grid::Rational total;
  for (int k = 0; k < 4; ++k) {
    for (const auto& a : std::get<grid::AtomicDistribution2D>(q.get(pairs[k])).atoms()) {
      total += grid::Rational((*fs[k])(a.x, a.y)) * a.weight;
    }
  }
  return total;
}

}  // namespace

ExperimentReport cmd_classical_counterexample(const ExperimentConfig& cfg) {
  ExperimentReport report;
  report.config = cfg;
  const auto& a = cfg.atoms;
  const bell::Counterexample c{a[0], a[1], a[2], a[3], a[4], a[5], a[6], a[7]};
  const auto quartet = bell::counterexample_quartet(c);
  const auto aligned = bell::aligned_pattern(c);

  const auto cons = marginal::check_consistency(quartet, 0.0);
  report.tables.push_back(consistency_table(cons));
  report.results["consistency"] = cons.to_json();
  report.check("marginals consistent in exact arithmetic", cons.pass() && cons.exact);

  Table patterns{"patterns", {"pattern", "S_exact", "S", "S_enumeration"}, {}};
  const std::pair<std::string, SignPattern> cases[] = {
      {"aligned", aligned},
      {"misaligned q1", SignPattern(aligned.s1().complement(), aligned.s2(), aligned.s1p(), aligned.s2p())},
      {"misaligned particle 1", aligned.complemented_particle(1)},
      {"all complemented", aligned.complemented()},
  };
  for (const auto& [label, pattern] : cases) {
    const auto rep = bell::bell_S(quartet, pattern);
    const auto enumerated = enumerate_atoms(quartet, pattern);
    patterns.rows.push_back({label, rep.exact_S->str(), rep.S, enumerated.str()});
    report.results[label] = bell::to_json(rep);
    report.check("S(" + label + ") matches 8-atom enumeration", *rep.exact_S == enumerated, rep.exact_S->str());
    if (label == "aligned") {
      report.check("S = 4 exactly for the aligned pattern", *rep.exact_S == grid::Rational(4), rep.exact_S->str());
    }
  }
  report.tables.push_back(std::move(patterns));
  return report;
}

ExperimentReport cmd_quantum_violation(const ExperimentConfig& cfg) {
  ExperimentReport report;
  report.config = cfg;
  const std::vector<double> Ls = cfg.L.empty() ? std::vector<double>{1e2, 1e4, 1e6, 1e8} : cfg.L;

  Table sweep{"sweep",
              {"L", "S", "S_mirror", "beta", "error_estimate", "route_discrepancy", "gap_to_2sqrt2", "converged",
               "status"},
              {}};
  std::vector<bell::LargeLResult> ok;
  double mirror_worst = 0.0, discrepancy_worst = 0.0;
  bool all_converged = true;
  for (double L : Ls) {
    try {
      const auto r = bell::large_L_S(L, cfg.sign);
      const auto m = bell::large_L_S(L, -cfg.sign);
      mirror_worst = std::max(mirror_worst, std::abs(r.S + m.S));
      discrepancy_worst = std::max(discrepancy_worst, r.route_discrepancy);
      all_converged = all_converged && r.converged;
      sweep.rows.push_back({L, r.S, m.S, r.beta, r.error_estimate, r.route_discrepancy,
                            std::abs(r.S - cfg.sign * kTwoSqrt2), r.converged, "ok"});
      ok.push_back(r);
    } catch (const std::exception& e) {
      all_converged = false;
      sweep.rows.push_back({L, nullptr, nullptr, nullptr, nullptr, nullptr, nullptr, false, e.what()});
    }
  }
  report.tables.push_back(std::move(sweep));

  bool increasing = ok.size() == Ls.size(), approaching = increasing;
  for (std::size_t i = 1; i < ok.size(); ++i) {
    increasing = increasing && cfg.sign * ok[i].S > cfg.sign * ok[i - 1].S;
    approaching = approaching &&
                  std::abs(ok[i].S - cfg.sign * kTwoSqrt2) < std::abs(ok[i - 1].S - cfg.sign * kTwoSqrt2);
  }
  report.check("|S| strictly increasing in L", increasing);
  report.check("|S - sign 2 sqrt 2| strictly decreasing in L", approaching);
  const bell::LargeLResult* largest = nullptr;
  for (const auto& r : ok) {
    if (r.error_estimate <= 1e-3 && (!largest || r.L > largest->L)) largest = &r;
  }
  report.check("|S| > 2 at the largest L with error estimate <= 1e-3",
               largest && std::abs(largest->S) > 2.0, largest ? json(largest->S) : json(nullptr),
               largest ? "L = " + format_number(largest->L) : "no converged row");
  report.check("sign flip negates S", mirror_worst <= 1e-12, mirror_worst);
  report.check("momentum and position quadrature routes agree within 1e-6", discrepancy_worst <= 1e-6,
               discrepancy_worst);
  report.check("all quadratures converged", all_converged);

  // grid route at a moderate cutoff
  const double Lg = cfg.grid_L;
  const Axis axis = axis_for(cfg, 2048, 20.0 * Lg);
  const auto psi = quantum::psi_L(Lg, cfg.sign, axis);
  const auto grid_rep = bell::quantum_bell_S(psi.psi, SignPattern::theta());
  const auto oneD = bell::large_L_S(Lg, cfg.sign);
  const double diff = std::abs(grid_rep.S - oneD.S);
  const double bridge = std::abs(grid_rep.S - *grid_rep.operator_S);
  report.tables.push_back(Table{"grid_route",
                                {"L", "n", "box", "S_grid", "S_operator", "S_1d", "difference", "raw_norm"},
                                {{Lg, axis.size(), axis.upper(), grid_rep.S, *grid_rep.operator_S, oneD.S, diff,
                                  psi.raw_norm}}});
  report.results["grid_route"] = bell::to_json(grid_rep);
  report.check("grid route matches 1D reduction within 1e-3", diff <= 1e-3, diff,
               "L = " + format_number(Lg) + ", n = " + std::to_string(axis.size()));
  report.check("2 - 4<P> matches the marginal route within 1e-6", bridge <= 1e-6, bridge);
  return report;
}

ExperimentReport cmd_operator_checks(const ExperimentConfig& cfg) {
  ExperimentReport report;
  report.config = cfg;
  const std::size_t n = cfg.n.value_or(32);
  if (n > 32) throw Error("operator-checks builds dense matrices; --n must be <= 32");
  const double box = cfg.box.value_or(10.0);
  const auto pattern = pattern_from(cfg.pattern);
  const auto specs = bell::projector_specs(pattern);

  std::vector<std::size_t> sizes;
  for (std::size_t s : {8u, 16u, 32u}) {
    if (s <= n) sizes.push_back(s);
  }
  if (sizes.empty()) sizes.push_back(n);

  Table t{"refinement",
          {"n", "P2_residual", "hermiticity", "witness_value", "R1", "R2", "product_identity_residual", "lambda_min",
           "lambda_max", "spectrum_residual"},
          {}};
  bool p2_ok = true, herm_ok = true;
  for (std::size_t s : sizes) {
    const Axis axis = Axis::position(s, -box, box);
    const auto op = operators::build_P(specs, axis, axis);
    const double p2 = operators::check_P2_identity(op);
    const double herm = operators::hermiticity_residual(op.P.matrix);
    p2_ok = p2_ok && p2 <= 1e-10;
    herm_ok = herm_ok && herm <= 1e-10;
    const auto sb = operators::spectrum_bounds(op);
    std::vector<json> row{s, p2, herm};
    try {
      const auto w = operators::negativity_witness(op);
      row.insert(row.end(), {w.value, w.R1, w.R2, w.product_identity_residual});
      if (s == sizes.back()) {
        report.results["witness"] = {{"phi1", w.label1}, {"phi2", w.label2}, {"R1", w.R1}, {"R2", w.R2},
                                     {"value", w.value}, {"product_identity_residual", w.product_identity_residual}};
        report.check("witness <P(1-P)> < 0", w.value < 0.0, w.value);
        report.check("witness equals -R1 R2 within 1e-10", w.product_identity_residual <= 1e-10, w.product_identity_residual);
      }
    } catch (const Error& e) {
      row.insert(row.end(), {nullptr, nullptr, nullptr, nullptr});
      if (s == sizes.back()) report.check("witness <P(1-P)> < 0", false, nullptr, e.what());
    }
    row.insert(row.end(), {sb.lambda_min, sb.lambda_max, sb.residual});
    t.rows.push_back(std::move(row));
    if (s == sizes.back()) {
      report.results["spectrum"] = {{"n", s},
                                    {"lambda_min", sb.lambda_min},
                                    {"lambda_max", sb.lambda_max},
                                    {"residual", sb.residual},
                                    {"method", sb.method}};
      report.check("lambda_min < 0", sb.lambda_min < 0.0, sb.lambda_min);
      report.check("eigenpair residual <= 1e-8", sb.residual <= 1e-8, sb.residual);
    }
  }
  report.tables.push_back(std::move(t));
  report.check("P^2 = P - [chi1,chi1'][chi2,chi2'] within 1e-10 at every n", p2_ok);
  report.check("P Hermitian within 1e-10 at every n", herm_ok);

  // commuting case: every projector diagonal in position
  const Axis axis = Axis::position(n, -box, box);
  const double shift = static_cast<double>(n / 8) * axis.step();
  operators::ProjectorQuad diag = specs;
  diag.chi1p = {1, grid::Representation::position, grid::IndicatorSet::above(shift), false};
  diag.chi2p = {2, grid::Representation::position, grid::IndicatorSet::above(shift), false};
  const auto op = operators::build_P(diag, axis, axis);
  Eigen::SelfAdjointEigenSolver<operators::Matrix> es(op.P.matrix, Eigen::EigenvaluesOnly);
  double off = 0.0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    const double v = es.eigenvalues()[i];
    off = std::max(off, std::min(std::abs(v), std::abs(v - 1.0)));
  }
  report.results["all_position"] = {{"n", n}, {"max_distance_to_0_1", off},
                                    {"P2_residual", operators::check_P2_identity(op)}};
  report.check("all-position spectrum within 1e-10 of {0, 1}", off <= 1e-10, off);
  return report;
}

ExperimentReport cmd_three_marginal(const ExperimentConfig& cfg) {
  ExperimentReport report;
  report.config = cfg;
  const Axis axis = axis_for(cfg, 32, 12.0);
  const std::string state = cfg.state.empty() ? "gaussian" : cfg.state;
  const auto psi = quantum::state_from_spec(state, axis);
  auto quartet = quantum::quantum_marginals(psi);
  const auto drop = grid::marginal_pair_from_string(cfg.drop_marginal);

  marginal::MarginalTriple probe = marginal::MarginalTriple::from_quartet(quartet, drop);
  if (!cfg.tamper.empty()) {
    const auto other = quantum::quantum_marginals(quantum::state_from_spec(cfg.tamper, axis));
    const auto last = probe.members()[2];
    auto& slot = last == MarginalPair::qq ? quartet.qq
                 : last == MarginalPair::qp ? quartet.qp
                 : last == MarginalPair::pq ? quartet.pq
                                            : quartet.pp;
    slot = other.get(last);
    report.results["tampered_member"] = grid::to_string(last);
  }
  const auto triple = marginal::MarginalTriple::from_quartet(quartet, drop);
  const auto cons = marginal::check_consistency(triple, 1e-8);
  report.tables.push_back(consistency_table(cons));
  report.results["consistency"] = cons.to_json();
  report.check("triple consistency", cons.pass());
  if (!cons.pass()) {
    report.results["aborted"] = "consistency failure";
    return report;
  }
  const auto ovm = marginal::one_var_marginals(triple, 1e-8);
  report.results["one_var_discrepancy"] = {ovm.discrepancy_y, ovm.discrepancy_z};

  const auto base = marginal::rho0(triple, cfg.epsilon);
  const double worst_res = *std::max_element(base.residuals.begin(), base.residuals.end());
  const double norm = grid::integrate_4d(base.rho0);
  report.results["rho0"] = {{"residuals", base.residuals},
                            {"normalization", norm},
                            {"mass_deficit", base.mass_deficit},
                            {"support_points", base.support.count}};
  report.check("rho0 marginal residuals <= 1e-6", worst_res <= 1e-6, worst_res);
  report.check("rho0 normalized within 1e-6", std::abs(norm - 1.0) <= 1e-6, norm);
  report.check("rho0 nonnegative", min_over(base.rho0) >= 0.0, min_over(base.rho0));

  if (const auto f = factors_of(state, axis)) {
    const auto prod = quantum::product_density(f->first, f->second);
    const double d = max_abs_diff(base.rho0.values(), prod.values());
    report.check("rho0 equals the product density within 1e-8", d <= 1e-8, d);
    try {
      const auto rep = marginal::represent(prod, triple, base);
      report.check("product density round-trips through represent within 1e-8", rep.roundtrip_residual <= 1e-8,
                   rep.roundtrip_residual);
    } catch (const Error& e) {
      report.check("product density round-trips through represent within 1e-8", false, nullptr, e.what());
    }
  }

  const auto axes = triple.phase_space_axes();
  const auto& mask = base.support.mask;
  Table fam{"families",
            {"seed", "m_plus", "m_minus", "lambda_lower", "lambda_upper", "projection_l1", "delta_integral",
             "scan_mismatch", "interior_min", "boundary_min", "rejected", "forced_min", "forced_min_ratio", "represent_roundtrip",
             "represent_m_minus"},
            {}};
  bool a_ok = true, b_ok = true, c_ok = true, bd_ok = true, d_ok = true, e_ok = true;
  for (std::size_t k = 0; k < cfg.families; ++k) {
    const std::uint64_t seed = cfg.seed * 1000003ULL + k;
    const auto F = marginal::random_F(seed, base.support, axes, 1.5, &base.rho0);
    const auto delta = marginal::delta_from_F(F, triple, base);
    const auto proj = marginal::chain_projection_norms(delta, triple);
    const double proj_max = *std::max_element(proj.begin(), proj.end());
    const double integral = grid::integrate_4d(delta);
    a_ok = a_ok && proj_max <= 1e-9 && std::abs(integral) <= 1e-9;

    const auto range = marginal::lambda_range(delta, base.rho0, base.support);
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (std::size_t i = 0; i < delta.size(); ++i) {
      if (mask[i]) {
        lo = std::min(lo, delta[i] / base.rho0[i]);
        hi = std::max(hi, delta[i] / base.rho0[i]);
      }
    }
    const double mismatch = std::max(std::abs(range.m_plus - hi), std::abs(range.m_minus + lo));
    b_ok = b_ok && !range.degenerate && mismatch <= 1e-12 * std::max(1.0, std::max(std::abs(hi), std::abs(lo)));

    const double interior = std::min(min_over(marginal::general_density(base.rho0, delta, 0.5 * range.upper, range)),
                                     min_over(marginal::general_density(base.rho0, delta, 0.5 * range.lower, range)));
    c_ok = c_ok && interior >= -1e-12;
    const double boundary =
        min_over(marginal::general_density(base.rho0, delta, range.upper, range), &mask);
    bd_ok = bd_ok && std::abs(boundary) <= 1e-9;

    bool rejected = false;
    try {
      marginal::general_density(base.rho0, delta, 1.1 * range.upper, range);
    } catch (const Error&) {
      rejected = true;
    }
    const auto forced_rho = marginal::general_density_unchecked(base.rho0, delta, 1.1 * range.upper);
    const double forced = min_over(forced_rho);
    double forced_ratio = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < forced_rho.size(); ++i) {
      if (mask[i]) forced_ratio = std::min(forced_ratio, forced_rho[i] / base.rho0[i]);
    }
    d_ok = d_ok && rejected && forced < 0.0 && std::abs(forced_ratio + 0.1) <= 1e-9;

    const double u = static_cast<double>((seed * 2654435761ULL) % 1000) / 1000.0;
    const double lambda = u * range.upper + (1.0 - u) * range.lower;
    const auto rho1 = marginal::general_density(base.rho0, delta, lambda, range);
    double roundtrip = std::numeric_limits<double>::quiet_NaN(), mm = roundtrip;
    try {
      const auto rep = marginal::represent(rho1, triple, base);
      roundtrip = rep.roundtrip_residual;
      mm = rep.family.range.m_minus;
      e_ok = e_ok && roundtrip <= 1e-8 && mm <= 1.0 + 1e-9;
    } catch (const Error&) {
      e_ok = false;
    }
    fam.rows.push_back({seed, number(range.m_plus), number(range.m_minus), number(range.lower), number(range.upper),
                        proj_max, integral, mismatch, interior, boundary, rejected, forced, forced_ratio, number(roundtrip),
                        number(mm)});
  }
  report.tables.push_back(std::move(fam));
  report.check("delta projections and integral vanish within 1e-9", a_ok);
  report.check("lambda interval matches exhaustive scan", b_ok);
  report.check("interior lambda keeps rho >= -1e-12", c_ok);
  report.check("boundary lambda = 1/m_minus reaches zero within 1e-9", bd_ok);
  report.check("lambda = 1.1/m_minus rejected; forcing it gives min rho/rho0 = -0.1 < 0", d_ok);
  report.check("represent recovers rho1 within 1e-8 with m_minus <= 1", e_ok);
  return report;
}

ExperimentReport cmd_wigner(const ExperimentConfig& cfg) {
  ExperimentReport report;
  report.config = cfg;
  const Axis axis = axis_for(cfg, 64, 10.0);
  const std::string state = cfg.state.empty() ? "ho:0,1" : cfg.state;
  const auto psi = quantum::state_from_spec(state, axis);
  const auto W = quantum::wigner(psi);
  const auto reps = quantum::mixed_representations(psi);
  const double marg_q = max_abs_diff(grid::marginalize_4d(W, MarginalPair::qq).values(),
                                    quantum::density_of(reps.qq).values());
  const double marg_p = max_abs_diff(grid::marginalize_4d(W, MarginalPair::pp).values(),
                                    quantum::density_of(reps.pp).values());
  const double norm = grid::integrate_4d(W);
  const double wmin = min_over(W);
  const double origin = quantum::wigner_value(psi, 0.0, 0.0, 0.0, 0.0);
  report.results = {{"position_marginal_residual", marg_q}, {"momentum_marginal_residual", marg_p}, {"normalization", norm},
                    {"min", wmin}, {"origin", origin}};
  report.tables.push_back(Table{"wigner", {"state", "n", "box", "position_marginal", "momentum_marginal", "normalization",
                                           "min", "origin"},
                                {{state, axis.size(), axis.upper(), marg_q, marg_p, norm, wmin, origin}}});
  report.check("position marginal of W matches |psi|^2 within 1e-6", marg_q <= 1e-6, marg_q);
  report.check("momentum marginal of W matches |psi~|^2 within 1e-6", marg_p <= 1e-6, marg_p);
  report.check("W integrates to 1 within 1e-8", std::abs(norm - 1.0) <= 1e-8, norm);
  if (state == "ho:0,1") {
    const double target = -1.0 / (std::numbers::pi * std::numbers::pi);
    report.check("origin value within 2% of -1/pi^2", std::abs(origin - target) <= 0.02 * std::abs(target), origin);
    report.check("W takes negative values", wmin < 0.0, wmin);
  }
  if (state == "gaussian") report.check("Gaussian W >= -1e-10", wmin >= -1e-10, wmin);
  return report;
}

ExperimentReport cmd_selftest(const ExperimentConfig& cfg) {
  ExperimentReport report;
  report.config = cfg;
  Table t{"commands", {"command", "pass", "wall_time_seconds", "failed_checks"}, {}};
  for (const char* name :
       {"classical-counterexample", "quantum-violation", "operator-checks", "three-marginal", "wigner"}) {
    ExperimentConfig sub;
    sub.command = name;
    std::string failed;
    bool pass = false;
    double seconds = 0.0;
    try {
      const auto r = run(sub);
      pass = r.pass();
      seconds = r.wall_time_seconds;
      for (const auto& c : r.checks) {
        if (!c.pass) failed += (failed.empty() ? "" : "; ") + c.name;
      }
    } catch (const std::exception& e) {
      failed = e.what();
    }
    t.rows.push_back({name, pass, seconds, failed});
    report.check(std::string(name) + " passes with defaults", pass, nullptr, failed);
  }
  report.tables.push_back(std::move(t));
  return report;
}

ExperimentReport run(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto start = std::chrono::steady_clock::now();
  ExperimentReport report;
  report.config = cfg;
  if (cfg.command == "classical-counterexample") {
    report = cmd_classical_counterexample(cfg);
  } else if (cfg.command == "quantum-violation") {
    report = cmd_quantum_violation(cfg);
  } else if (cfg.command == "operator-checks") {
    report = cmd_operator_checks(cfg);
  } else if (cfg.command == "three-marginal") {
    report = cmd_three_marginal(cfg);
  } else if (cfg.command == "wigner") {
    report = cmd_wigner(cfg);
  } else {
    report = cmd_selftest(cfg);
  }
  report.wall_time_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace phasebell::cli

#include <cmath>
#include <numbers>
#include <unordered_map>

#include "gsl_quad.hpp"
#include "phasebell/bell.hpp"

namespace phasebell::bell {

namespace {

constexpr double kPi = std::numbers::pi;

/// K(y) = int_0^inf e^{is} (y+s)^{-1/2} ds.
struct KernelK {
  double max_error = 0.0;
  int status = 0;

  /// QAWF with the target relaxed tenfold after each failed attempt.
  template <class F>
  static quad::Result tail(F f, bool sine) {
    quad::Result r;
    for (double eps = 1e-13; eps <= 1e-10; eps *= 10.0) {
      r = quad::qawf(f, 1.0, 1.0, sine, eps);
      if (r.status == 0) break;
    }
    return r;
  }

  cplx operator()(double y) {
    const double sy = std::sqrt(y);
    const double w = 1.0 / (std::sqrt(1.0 + y) + sy);
    // [0, 1] after u = sqrt(y + s) = sqrt(y) + v
    auto head = quad::qag([sy](double v) { return 2.0 * std::cos(v * (2.0 * sy + v)); }, 0.0, w, 1e-14, 1e-12);
    auto head_im = quad::qag([sy](double v) { return 2.0 * std::sin(v * (2.0 * sy + v)); }, 0.0, w, 1e-14, 1e-12);
    // [1, inf) after one integration by parts
    auto decay = [y](double s) { return std::pow(y + s, -1.5); };
    auto tail_c = tail(decay, false);
    auto tail_s = tail(decay, true);
    const cplx boundary = cplx(0.0, 1.0) * std::polar(1.0, 1.0) / std::sqrt(1.0 + y);
    const cplx tail = boundary - cplx(0.0, 0.5) * cplx(tail_c.value, tail_s.value);
    for (const auto* r : {&head, &head_im, &tail_c, &tail_s}) {
      max_error = std::max(max_error, r->error);
      if (r->status != 0) status = r->status;
    }
    return cplx(head.value, head_im.value) + tail;
  }
};

/// 2 int_1^{sqrt U} du / (u^2 + q - 1) = int_0^L dq' / (sqrt(q'+1) (q + q')).
double hilbert_inner(double q, double sqrtU) {
  const double d = q - 1.0;
  if (std::abs(d) < 1e-6) {
    return 2.0 * ((1.0 - 1.0 / sqrtU) - d * (1.0 - 1.0 / (sqrtU * sqrtU * sqrtU)) / 3.0);
  }
  if (d > 0.0) {
    const double s = std::sqrt(d);
    return 2.0 / s * (std::atan(sqrtU / s) - std::atan(1.0 / s));
  }
  const double k = std::sqrt(1.0 - q);
  const double one_minus_k = q / (1.0 + k);
  return (std::log(std::abs((sqrtU - k) / (sqrtU + k))) - std::log(one_minus_k / (1.0 + k))) / k;
}

}  // namespace

BetaEstimate beta_momentum(double L) {
  if (!(L > 1.0) || !std::isfinite(L)) throw Error("large-L evaluation needs finite L > 1");
  quad::ErrorHandlerGuard guard;
  const double U = L + 1.0;
  const double sqrtU = std::sqrt(U);
  const double N2 = 1.0 / std::log(U);
  const double p0 = 20.0 / L;

  // small p: E(p) = int_0^L e^{ipq} (q+1)^{-1/2} dq = 2 int_1^{sqrt U} e^{ip(u^2-1)} du
  int inner_status = 0;
  double inner_error = 0.0;
  auto E_direct = [&](double p) {
    auto c = quad::qag([p](double u) { return 2.0 * std::cos(p * (u * u - 1.0)); }, 1.0, sqrtU, 1e-12, 1e-12);
    auto s = quad::qag([p](double u) { return 2.0 * std::sin(p * (u * u - 1.0)); }, 1.0, sqrtU, 1e-12, 1e-12);
    inner_status |= c.status | s.status;
    inner_error = std::max(inner_error, c.error + s.error);
    return cplx(c.value, s.value);
  };
  auto small = quad::qag([&](double p) { const cplx e = E_direct(p); return 0.5 * (e * e).imag(); }, 0.0, p0,
                         1e-12, 1e-10, 200);

  // large p: E = A - e^{ipL} B with A = K(p)/sqrt(p), B = K(pU)/sqrt(p)
  KernelK K;
  std::unordered_map<double, std::pair<cplx, cplx>> cache;
  auto AB = [&](double p) -> const std::pair<cplx, cplx>& {
    auto it = cache.find(p);
    if (it == cache.end()) {
      const double rp = 1.0 / std::sqrt(p);
      it = cache.emplace(p, std::make_pair(K(p) * rp, K(p * U) * rp)).first;
    }
    return it->second;
  };
  auto t1 = quad::qagiu([&](double p) { const cplx a = AB(p).first; return (a * a).imag(); }, p0, 1e-12, 1e-10);

  // int_{p0}^inf Im(F(p) e^{i omega p}) dp
  auto oscillatory = [&](auto F, double omega) {
    const double P1 = p0 + 2.0 * kPi * 200.0 / omega;
    auto im = [&](double p) { return F(p).imag(); };
    auto re = [&](double p) { return F(p).real(); };
    quad::Result r = quad::qawo(im, p0, P1, omega, false, 1e-13, 1e-10);
    r += quad::qawo(re, p0, P1, omega, true, 1e-13, 1e-10);
    r += quad::qawf(im, P1, omega, false, 1e-13);
    r += quad::qawf(re, P1, omega, true, 1e-13);
    return r;
  };
  auto t2 = oscillatory([&](double p) { const auto& ab = AB(p); return ab.first * ab.second; }, L);
  auto t3 = oscillatory([&](double p) { const cplx b = AB(p).second; return b * b; }, 2.0 * L);

  const double integral = small.value + 0.5 * (t1.value - 2.0 * t2.value + t3.value);
  const double error = small.error + 0.5 * (t1.error + 2.0 * t2.error + t3.error);
  const bool ok = small.status == 0 && inner_status == 0 && t1.status == 0 && t2.status == 0 && t3.status == 0 &&
                  K.status == 0;
  return BetaEstimate{-(N2 / kPi) * integral, (N2 / kPi) * error + K.max_error + inner_error, ok};
}

BetaEstimate beta_position(double L) {
  if (!(L > 1.0) || !std::isfinite(L)) throw Error("large-L evaluation needs finite L > 1");
  quad::ErrorHandlerGuard guard;
  const double lnU = std::log1p(L);
  const double sqrtU = std::sqrt(L + 1.0);
  // q = e^s - 1
  auto f = [sqrtU](double s) { return std::exp(0.5 * s) * hilbert_inner(std::expm1(s), sqrtU); };
  auto r = quad::qagp(f, {0.0, std::log(2.0), lnU}, 1e-12, 1e-12, 1000);
  const double scale = 1.0 / (2.0 * kPi * lnU);
  return BetaEstimate{-scale * r.value, scale * r.error, r.status == 0};
}

LargeLResult large_L_S(double L, int sign) {
  if (sign != 1 && sign != -1) throw Error("sign must be +1 or -1");
  const BetaEstimate mom = beta_momentum(L);
  const BetaEstimate pos = beta_position(L);
  Overlaps o;
  o.kab = cplx(0.0, mom.beta);
  const double S = S_from_overlaps(o, sign);
  o.kab = cplx(0.0, pos.beta);
  const double S_pos = S_from_overlaps(o, sign);
  const double dS = 2.0 * std::numbers::sqrt2 * std::abs(2.0 * mom.beta - 1.0) * mom.error;
  return LargeLResult{L, sign, S, mom.beta, dS, std::abs(S - S_pos), mom.converged && pos.converged};
}

}  // namespace phasebell::bell

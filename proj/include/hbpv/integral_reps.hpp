#pragma once

// Integral representations of H_{B,p,nu} through Exton's X_4.
//
// Every variant is a substitution t = t(xi) in
//
//   H = sqrt(2p/pi) / B(b1,b2) int_0^1 t^{b1-3/2} (1-t)^{b2-3/2} K_{nu+1/2}(p/(t(1-t)))
//         X_4(b1+b2, b3; c1,c2,c3; x t(1-t), y(1-t), z t) dt,
//
// and each is evaluated here from its own integrand in xi, with sigma1 = 1-t
// and sigma2 = t expressed through xi.  The trigonometric variants use
// xi = (pi/2) tau, the Mobius variant xi = alpha + (beta-alpha) tau, so the
// tanh-sinh rule on tau in (0,1) handles all of them.

#include <cmath>
#include <numbers>
#include <string>

#include "hbpv/extended_beta.hpp"
#include "hbpv/quadrature.hpp"
#include "hbpv/scalar_kernels.hpp"
#include "hbpv/triple_series.hpp"
#include "hbpv/types.hpp"

namespace hbpv {

enum class RepKind { UnitInterval, Mobius, Trig, TrigLambdaShift, TrigLambdaScale };

struct RepVariant {
  RepKind kind = RepKind::UnitInterval;
  double gamma = -1.0, alpha = 0.0, beta = 1.0;  // Mobius, gamma < alpha < beta
  double lambda = 0.0;  // > -1 for TrigLambdaShift, > 0 for TrigLambdaScale

  static RepVariant unit_interval() { return {}; }
  static RepVariant mobius(double g, double a, double b) { return {RepKind::Mobius, g, a, b, 0.0}; }
  static RepVariant trig() { return {RepKind::Trig}; }
  static RepVariant trig_lambda_shift(double l) { return {RepKind::TrigLambdaShift, -1.0, 0.0, 1.0, l}; }
  static RepVariant trig_lambda_scale(double l) { return {RepKind::TrigLambdaScale, -1.0, 0.0, 1.0, l}; }

  void validate() const {
    if (kind == RepKind::Mobius && !(gamma < alpha && alpha < beta))
      throw DomainError("Mobius representation needs gamma < alpha < beta");
    if (kind == RepKind::TrigLambdaShift && !(lambda > -1.0))
      throw DomainError("shifted trigonometric representation needs lambda > -1");
    if (kind == RepKind::TrigLambdaScale && !(lambda > 0.0))
      throw DomainError("scaled trigonometric representation needs lambda > 0");
  }
};

inline std::string to_string(RepKind k) {
  switch (k) {
    case RepKind::UnitInterval: return "unit_interval";
    case RepKind::Mobius: return "mobius";
    case RepKind::Trig: return "trig";
    case RepKind::TrigLambdaShift: return "trig_lambda_shift";
    case RepKind::TrigLambdaScale: return "trig_lambda_scale";
  }
  return "unknown";
}

/// Conservative check that every X_4 argument (s1 s2 x, s1 y, s2 z) with
/// s1, s2 in [0,1], s1 + s2 = 1 lies in the X_4 region (uses s1 s2 <= 1/4).
inline bool x4_precheck(const Point3& pt) {
  return in_region_x4({std::abs(pt.x) / 4.0, std::abs(pt.y), std::abs(pt.z)});
}

namespace detail {

// The variant-specific part of the integrand at tau: log of algebraic factors,
// constant prefactor and Jacobian, plus sigma1 and sigma2.
struct RepNode {
  Complex log_weight;
  double sigma1;
  double sigma2;
};

class RepIntegrand {
 public:
  RepIntegrand(const RepVariant& v, const HbParams& q) : v_(v), b1_(q.b1), b2_(q.b2) {
    const Complex bs = b1_ + b2_;
    switch (v_.kind) {
      case RepKind::UnitInterval:
        log_const_ = 0.0;
        break;
      case RepKind::Mobius: {
        const double bg = v_.beta - v_.gamma, ag = v_.alpha - v_.gamma, ba = v_.beta - v_.alpha;
        log_const_ = (b1_ - 0.5) * std::log(bg) + (b2_ - 0.5) * std::log(ag) - (bs - 2.0) * std::log(ba) + std::log(ba);
        break;
      }
      case RepKind::Trig:
        log_const_ = std::log(2.0) + std::log(0.5 * std::numbers::pi);
        break;
      case RepKind::TrigLambdaShift:
        log_const_ = std::log(2.0) + (b1_ - 0.5) * std::log1p(v_.lambda) + std::log(0.5 * std::numbers::pi);
        break;
      case RepKind::TrigLambdaScale:
        log_const_ = std::log(2.0) + (b1_ - 0.5) * std::log(v_.lambda) + std::log(0.5 * std::numbers::pi);
        break;
    }
  }

  RepNode operator()(double t, double tc) const {
    const Complex bs = b1_ + b2_;
    if (v_.kind == RepKind::UnitInterval) {
      return {log_const_ + (b1_ - 1.5) * std::log(t) + (b2_ - 1.5) * std::log(tc), tc, t};
    }
    if (v_.kind == RepKind::Mobius) {
      const double ba = v_.beta - v_.alpha;
      const double xi_a = ba * t, b_xi = ba * tc;
      const double xi_g = (v_.alpha - v_.gamma) + xi_a;
      const Complex lw = log_const_ + (b1_ - 1.5) * std::log(xi_a) + (b2_ - 1.5) * std::log(b_xi) -
                         (bs - 1.0) * std::log(xi_g);
      return {lw, (v_.alpha - v_.gamma) * tc / xi_g, (v_.beta - v_.gamma) * t / xi_g};
    }
    // xi = (pi/2) t; sin and cos from whichever of t, 1-t is small
    constexpr double half_pi = 0.5 * std::numbers::pi;
    const double s = t <= 0.5 ? std::sin(half_pi * t) : std::cos(half_pi * tc);
    const double c = tc <= 0.5 ? std::sin(half_pi * tc) : std::cos(half_pi * t);
    const double s2 = s * s, c2 = c * c;
    const Complex lw = log_const_ + (b1_ - 1.0) * (2.0 * std::log(s)) + (b2_ - 1.0) * (2.0 * std::log(c));
    if (v_.kind == RepKind::Trig) return {lw, c2, s2};
    if (v_.kind == RepKind::TrigLambdaShift) {
      const double d = 1.0 + v_.lambda * s2;
      return {lw - (bs - 1.0) * std::log(d), c2 / d, (1.0 + v_.lambda) * s2 / d};
    }
    const double d = c2 + v_.lambda * s2;
    return {lw - (bs - 1.0) * std::log(d), c2 / d, v_.lambda * s2 / d};
  }

 private:
  RepVariant v_;
  Complex b1_, b2_;
  Complex log_const_;
};

}  // namespace detail

/// H_{B,p,nu} from one of its integral representations.  `tol` is the outer
/// quadrature tolerance; the inner X_4 series run 100x tighter.  The result's
/// tail_estimate carries the quadrature error estimate and shells_used the
/// largest inner shell count.
inline EvalResult h_b_pv_integral(const RepVariant& variant, const HbParams& q, const Extension& ext,
                                  const Point3& pt, const EngineConfig& cfg = {}, double tol = 1e-10) {
  variant.validate();
  ext.validate();
  q.validate_denominators();
  if (!(q.b1.real() > 0.0) || !(q.b2.real() > 0.0)) throw DomainError("need Re(b1) > 0 and Re(b2) > 0");
  if (!x4_precheck(pt)) throw RegionError("point fails the conservative X_4 region precheck");

  EngineConfig inner = cfg;
  inner.series_tol = tol / 100.0;
  const Complex log_front = 0.5 * std::log(2.0 * ext.p / std::numbers::pi) - log_beta(q.b1, q.b2);
  const double order = ext.nu + 0.5;
  const detail::RepIntegrand shape(variant, q);
  int max_shells = 0;
  bool inner_ok = true;

  auto f = [&](double t, double tc) -> Complex {
    const auto node = shape(t, tc);
    const double sp = node.sigma1 * node.sigma2;
    if (!(sp > 0.0)) return 0.0;
    const Complex w = ext.p / sp;
    if (w.real() > 1e6) return 0.0;  // K underflows long before the algebraic factors matter
    const Complex log_mag = log_front + node.log_weight + log_bessel_k(order, w);
    if (log_mag.real() < -745.0) return 0.0;
    const auto x = x4(q.b1 + q.b2, q.b3, q.c1, q.c2, q.c3, {sp * pt.x, node.sigma1 * pt.y, node.sigma2 * pt.z},
                      inner);
    max_shells = std::max(max_shells, x.shells_used);
    inner_ok = inner_ok && x.converged;
    return std::exp(log_mag) * x.value;
  };

  QuadOptions opt;
  opt.max_level = 12;
  const auto r = integrate_unit_interval(f, tol, opt);
  return {r.value, max_shells, r.abs_error_estimate, r.converged && inner_ok};
}

}  // namespace hbpv

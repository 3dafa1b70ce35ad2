#pragma once

// Residual checks for the identities satisfied by H_{B,p,nu}: Mellin
// transform, mixed partial derivatives, contiguous recursions in b3 and c_j,
// and the modulus bound.  Each check evaluates both sides independently and
// reports the relative residual (or, for inequalities, the ratio LHS/RHS).

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "hbpv/extended_beta.hpp"
#include "hbpv/quadrature.hpp"
#include "hbpv/scalar_kernels.hpp"
#include "hbpv/triple_series.hpp"
#include "hbpv/types.hpp"

namespace hbpv {

struct SampleRecord {
  std::vector<std::pair<std::string, Complex>> inputs;
  Complex lhs{}, rhs{};
  double residual = 0.0;  // relative residual, or LHS/RHS for inequalities
  std::vector<std::pair<std::string, double>> notes;
  bool ok = true;  // extra per-sample condition beyond the residual test
};

enum class CheckKind {
  Residual,      // passes when every residual <= tolerance
  StrictBound,   // passes when every ratio < 1
};

struct CheckReport {
  std::string name;
  CheckKind kind = CheckKind::Residual;
  double tolerance = 0.0;
  int samples = 0;
  double max_rel_residual = 0.0;
  bool passed = true;
  std::vector<SampleRecord> details;

  CheckReport() = default;
  CheckReport(std::string n, CheckKind k, double tol) : name(std::move(n)), kind(k), tolerance(tol) {}

  void add(SampleRecord r) {
    ++samples;
    const bool within = kind == CheckKind::Residual ? r.residual <= tolerance : r.residual < 1.0;
    if (!within || !r.ok) passed = false;
    if (std::isnan(r.residual))
      max_rel_residual = std::numeric_limits<double>::quiet_NaN();
    else if (!std::isnan(max_rel_residual))
      max_rel_residual = std::max(max_rel_residual, r.residual);
    details.push_back(std::move(r));
  }

  void merge(const CheckReport& other) {
    for (const auto& r : other.details) add(r);
  }
};

inline double relative_residual(Complex lhs, Complex rhs) {
  const double d = std::abs(lhs - rhs);
  const double s = std::abs(rhs);
  return s > 0.0 ? d / s : d;
}

namespace detail {

inline void describe(SampleRecord& r, const HbParams& q) {
  r.inputs.insert(r.inputs.end(), {{"b1", q.b1}, {"b2", q.b2}, {"b3", q.b3}, {"c1", q.c1}, {"c2", q.c2}, {"c3", q.c3}});
}

inline void describe(SampleRecord& r, const Point3& pt) {
  r.inputs.insert(r.inputs.end(), {{"x", pt.x}, {"y", pt.y}, {"z", pt.z}});
}

inline void describe(SampleRecord& r, const Extension& e) {
  r.inputs.insert(r.inputs.end(), {{"p", e.p}, {"nu", Complex(e.nu)}});
}

inline void require_positive_b12(const HbParams& q) {
  if (!(q.b1.real() > 0.0) || !(q.b2.real() > 0.0)) throw DomainError("need Re(b1) > 0 and Re(b2) > 0");
}

inline void note_convergence(SampleRecord& r, bool converged) {
  r.notes.emplace_back("converged", converged ? 1.0 : 0.0);
  if (!converged) r.ok = false;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Mellin transform in p

struct MellinOptions {
  double floor = kMinRealP;  // p-integral starts here; [0, floor) is added analytically
  double tol = 1e-8;         // outer exp-sinh tolerance
  double inner_tol = 1e-11;  // series and Beta quadrature at each p
};

/// int_0^inf p^{s-1} H_{B,p,nu}(pt) dp  versus
/// 2^{s-1}/sqrt(pi) Gamma((s-nu)/2) Gamma((s+nu+1)/2) H_B^{(s)}(pt).
///
/// Below `floor` the kernel is replaced by its small-p limit
/// sqrt(2w/pi) K_{nu+1/2}(w) ~ 2^nu Gamma(nu+1/2)/sqrt(pi) w^{-nu}, which
/// integrates in closed form; its relative error is folded into the estimate.
inline CheckReport mellin_check(const HbParams& q, double nu, const Point3& pt, double s,
                                const EngineConfig& cfg = {}, const MellinOptions& mo = {}) {
  if (!(nu > 0.0)) throw DomainError("mellin_check: need nu > 0");
  if (!(s > nu)) throw DomainError("mellin_check: need s > nu");
  detail::require_positive_b12(q);
  if (!in_scaled_region_hb(pt, 0.5)) throw RegionError("mellin_check: point must lie inside half the region");

  EngineConfig inner = cfg;
  inner.series_tol = mo.inner_tol;
  inner.quad_tol = mo.inner_tol;
  bool inner_ok = true;
  auto integrand = [&](double u) -> Complex {
    const double p = mo.floor + u;
    const auto h = h_b_pv(q, Extension{p, nu}, pt, inner);
    inner_ok = inner_ok && h.converged;
    return std::pow(p, s - 1.0) * h.value;
  };
  const auto body = integrate_semi_infinite(integrand, mo.tol);

  const double small_p_const = std::exp(nu * std::log(2.0) + log_gamma(Complex(nu + 0.5)).real()) /
                               std::sqrt(std::numbers::pi);
  const Complex head =
      small_p_const * h_b_a(q, nu, pt, inner).value * std::pow(mo.floor, s - nu) / (s - nu);
  const double head_order = std::min({std::min(q.b1.real(), q.b2.real()) + nu, 2.0, 2.0 * nu + 1.0});
  const double head_err = std::abs(head) * std::pow(mo.floor, head_order);

  const double log_gamma_front = (s - 1.0) * std::log(2.0) - 0.5 * std::log(std::numbers::pi) +
                                 log_gamma(Complex(0.5 * (s - nu))).real() +
                                 log_gamma(Complex(0.5 * (s + nu + 1.0))).real();
  const auto ha = h_b_a(q, s, pt, inner);

  CheckReport rep("mellin", CheckKind::Residual, 1e-5);
  SampleRecord r;
  detail::describe(r, q);
  detail::describe(r, pt);
  r.inputs.insert(r.inputs.end(), {{"nu", Complex(nu)}, {"s", Complex(s)}});
  r.lhs = body.value + head;
  r.rhs = std::exp(log_gamma_front) * ha.value;
  r.residual = relative_residual(r.lhs, r.rhs);
  r.notes.emplace_back("lhs_error_estimate", body.abs_error_estimate + head_err);
  r.notes.emplace_back("floor_contribution", std::abs(head));
  detail::note_convergence(r, body.converged && inner_ok && ha.converged);
  rep.add(std::move(r));
  return rep;
}

/// int_0^inf u^{s-1/2} K_{alpha+1/2}(u) du  versus  2^{s-3/2} Gamma((s-alpha)/2) Gamma((s+alpha+1)/2).
inline CheckReport mellin_gamma_check(double s, double alpha, double tol = 1e-12) {
  if (!(alpha >= 0.0) || !(s > alpha)) throw DomainError("mellin_gamma_check: need s > alpha >= 0");
  const auto r0 = integrate_semi_infinite(
      [&](double u) { return std::pow(u, s - 0.5) * bessel_k(alpha + 0.5, u).value; }, tol);
  CheckReport rep("mellin_gamma", CheckKind::Residual, 1e-8);
  SampleRecord r;
  r.inputs = {{"s", Complex(s)}, {"alpha", Complex(alpha)}};
  r.lhs = r0.value;
  r.rhs = std::exp((s - 1.5) * std::log(2.0) + log_gamma(Complex(0.5 * (s - alpha))).real() +
                   log_gamma(Complex(0.5 * (s + alpha + 1.0))).real());
  r.residual = relative_residual(r.lhs, r.rhs);
  r.notes.emplace_back("lhs_error_estimate", r0.abs_error_estimate);
  detail::note_convergence(r, r0.converged);
  rep.add(std::move(r));
  return rep;
}

// ---------------------------------------------------------------------------
// Mixed partial derivatives in (x, y, z)

struct DerivativeOptions {
  double step = 1e-2;
  double series_tol = 1e-15;
  double quad_tol = 1e-14;
};

namespace detail {

// Central-difference weights for derivative orders 0..3 on offsets
// {-2h, -h, 0, h, 2h}; every order carries an h^2 leading error.
inline std::array<double, 5> central_weights(int order, double h) {
  switch (order) {
    case 0: return {0.0, 0.0, 1.0, 0.0, 0.0};
    case 1: return {0.0, -0.5 / h, 0.0, 0.5 / h, 0.0};
    case 2: return {0.0, 1.0 / (h * h), -2.0 / (h * h), 1.0 / (h * h), 0.0};
    case 3: {
      const double h3 = h * h * h;
      return {-0.5 / h3, 1.0 / h3, 0.0, -1.0 / h3, 0.5 / h3};
    }
  }
  throw DomainError("derivative order must be in [0, 3] per variable");
}

inline int stencil_reach(int order) { return order == 0 ? 0 : order == 3 ? 2 : 1; }

}  // namespace detail

/// d^{M+N+K} H / dx^M dy^N dz^K by tensor central differences with one
/// Richardson step, versus
/// (b1)_{M+K} (b2)_{M+N} (b3)_{N+K} / ((c1)_M (c2)_N (c3)_K) * H(b + shifts; c + shifts).
inline CheckReport derivative_check(const HbParams& q, const Extension& ext, const Point3& pt, int M, int N, int K,
                                    const EngineConfig& cfg = {}, const DerivativeOptions& dopt = {}) {
  if (M < 0 || N < 0 || K < 0 || M > 3 || N > 3 || K > 3) throw DomainError("derivative orders must be in [0, 3]");
  detail::require_positive_b12(q);
  const double h = dopt.step;
  const int rx = detail::stencil_reach(M), ry = detail::stencil_reach(N), rz = detail::stencil_reach(K);
  for (int ix = -rx; ix <= rx; ++ix)
    for (int iy = -ry; iy <= ry; ++iy)
      for (int iz = -rz; iz <= rz; ++iz)
        if (!in_region_hb({pt.x + ix * h, pt.y + iy * h, pt.z + iz * h}))
          throw RegionError("derivative stencil leaves the convergence region");

  EngineConfig inner = cfg;
  inner.series_tol = dopt.series_tol;
  inner.quad_tol = dopt.quad_tol;
  BetaCache cache(q.b1, q.b2, ext, BetaKernel::Bessel, inner.quad_tol);
  bool inner_ok = true;

  auto stencil = [&](double step) {
    const auto wx = detail::central_weights(M, step), wy = detail::central_weights(N, step),
               wz = detail::central_weights(K, step);
    Complex acc{};
    for (int ix = 0; ix < 5; ++ix)
      for (int iy = 0; iy < 5; ++iy)
        for (int iz = 0; iz < 5; ++iz) {
          const double w = wx[ix] * wy[iy] * wz[iz];
          if (w == 0.0) continue;
          const Point3 at{pt.x + (ix - 2) * step, pt.y + (iy - 2) * step, pt.z + (iz - 2) * step};
          const auto v = h_b_pv(q, cache, at, inner);
          inner_ok = inner_ok && v.converged;
          acc += w * v.value;
        }
    return acc;
  };
  const Complex d_full = stencil(h);
  const Complex d_half = stencil(0.5 * h);
  const Complex extrapolated = (4.0 * d_half - d_full) / 3.0;

  HbParams shifted = q;
  shifted.b1 += static_cast<double>(M + K);
  shifted.b2 += static_cast<double>(M + N);
  shifted.b3 += static_cast<double>(N + K);
  shifted.c1 += static_cast<double>(M);
  shifted.c2 += static_cast<double>(N);
  shifted.c3 += static_cast<double>(K);
  const Complex front = pochhammer(q.b1, M + K) * pochhammer(q.b2, M + N) * pochhammer(q.b3, N + K) /
                        (pochhammer(q.c1, M) * pochhammer(q.c2, N) * pochhammer(q.c3, K));
  const auto hs = h_b_pv(shifted, ext, pt, inner);

  CheckReport rep("derivative", CheckKind::Residual, 1e-5);
  SampleRecord r;
  detail::describe(r, q);
  detail::describe(r, ext);
  detail::describe(r, pt);
  r.inputs.insert(r.inputs.end(), {{"M", Complex(M)}, {"N", Complex(N)}, {"K", Complex(K)}});
  r.lhs = extrapolated;
  r.rhs = front * hs.value;
  r.residual = relative_residual(r.lhs, r.rhs);
  r.notes.emplace_back("plain_residual", relative_residual(d_half, r.rhs));
  detail::note_convergence(r, inner_ok && hs.converged);
  rep.add(std::move(r));
  return rep;
}

// ---------------------------------------------------------------------------
// Contiguous recursions

namespace detail {

// H_{B,p,nu} evaluations that share Beta caches keyed by the (b1, b2) shift.
class ShiftedEvaluator {
 public:
  ShiftedEvaluator(const Extension& ext, const Point3& pt, const EngineConfig& cfg)
      : ext_(ext), pt_(pt), cfg_(cfg) {}

  Complex operator()(const HbParams& q) {
    BetaCache* cache = nullptr;
    for (auto& c : caches_)
      if (c.b1() == q.b1 && c.b2() == q.b2) cache = &c;
    if (!cache) cache = &caches_.emplace_back(q.b1, q.b2, ext_, BetaKernel::Bessel, cfg_.quad_tol);
    const auto r = h_b_pv(q, *cache, pt_, cfg_);
    converged_ = converged_ && r.converged;
    return r.value;
  }

  bool converged() const { return converged_; }

 private:
  Extension ext_;
  Point3 pt_;
  EngineConfig cfg_;
  std::vector<BetaCache> caches_;
  bool converged_ = true;
};

inline HbParams shift(HbParams q, int b1, int b2, int b3, int c1, int c2, int c3) {
  q.b1 += b1;
  q.b2 += b2;
  q.b3 += b3;
  q.c1 += c1;
  q.c2 += c2;
  q.c3 += c3;
  return q;
}

inline CheckReport recursion_report(std::string name, const HbParams& q, const Extension& ext, const Point3& pt,
                                    Complex lhs, Complex rhs, bool converged) {
  CheckReport rep(std::move(name), CheckKind::Residual, 1e-9);
  SampleRecord r;
  describe(r, q);
  describe(r, ext);
  describe(r, pt);
  r.lhs = lhs;
  r.rhs = rhs;
  r.residual = relative_residual(lhs, rhs);
  note_convergence(r, converged);
  rep.add(std::move(r));
  return rep;
}

}  // namespace detail

/// H(b3+N) = H(b3) + (y b2/c2) sum_{l=1}^N H(b2+1, b3+l; c2+1) + (z b1/c3) sum_{l=1}^N H(b1+1, b3+l; c3+1).
inline CheckReport recursion_b3_multi_check(const HbParams& q, const Extension& ext, const Point3& pt, int N,
                                            const EngineConfig& cfg = {}) {
  if (N < 1) throw DomainError("recursion_b3_multi_check: need N >= 1");
  detail::require_positive_b12(q);
  detail::ShiftedEvaluator H(ext, pt, cfg);
  const Complex lhs = H(detail::shift(q, 0, 0, N, 0, 0, 0));
  Complex ysum{}, zsum{};
  for (int l = 1; l <= N; ++l) {
    ysum += H(detail::shift(q, 0, 1, l, 0, 1, 0));
    zsum += H(detail::shift(q, 1, 0, l, 0, 0, 1));
  }
  const Complex rhs = H(q) + pt.y * q.b2 / q.c2 * ysum + pt.z * q.b1 / q.c3 * zsum;
  return detail::recursion_report(N == 1 ? "recursion_b3" : "recursion_b3_multi", q, ext, pt, lhs, rhs,
                                  H.converged());
}

/// H(b3+1) = H(b3) + (y b2/c2) H(b2+1, b3+1; c2+1) + (z b1/c3) H(b1+1, b3+1; c3+1).
inline CheckReport recursion_b3_check(const HbParams& q, const Extension& ext, const Point3& pt,
                                      const EngineConfig& cfg = {}) {
  return recursion_b3_multi_check(q, ext, pt, 1, cfg);
}

/// Three-term recursions in the denominator parameters, j = 1, 2, 3:
///   c1: H(c1) = H(c1+1) + x b1 b2 / (c1 (c1+1)) H(b1+1, b2+1; c1+2)
///   c2: H(c2) = H(c2+1) + y b2 b3 / (c2 (c2+1)) H(b2+1, b3+1; c2+2)
///   c3: H(c3) = H(c3+1) + z b1 b3 / (c3 (c3+1)) H(b1+1, b3+1; c3+2)
inline CheckReport recursion_c_check(const HbParams& q, const Extension& ext, const Point3& pt, int j,
                                     const EngineConfig& cfg = {}) {
  if (j < 1 || j > 3) throw DomainError("recursion_c_check: j must be 1, 2 or 3");
  detail::require_positive_b12(q);
  detail::ShiftedEvaluator H(ext, pt, cfg);
  Complex lhs, rhs;
  if (j == 1) {
    lhs = H(q);
    rhs = H(detail::shift(q, 0, 0, 0, 1, 0, 0)) +
          pt.x * q.b1 * q.b2 / (q.c1 * (q.c1 + 1.0)) * H(detail::shift(q, 1, 1, 0, 2, 0, 0));
  } else if (j == 2) {
    lhs = H(q);
    rhs = H(detail::shift(q, 0, 0, 0, 0, 1, 0)) +
          pt.y * q.b2 * q.b3 / (q.c2 * (q.c2 + 1.0)) * H(detail::shift(q, 0, 1, 1, 0, 2, 0));
  } else {
    lhs = H(q);
    rhs = H(detail::shift(q, 0, 0, 0, 0, 0, 1)) +
          pt.z * q.b1 * q.b3 / (q.c3 * (q.c3 + 1.0)) * H(detail::shift(q, 1, 0, 1, 0, 0, 2));
  }
  return detail::recursion_report("recursion_c" + std::to_string(j), q, ext, pt, lhs, rhs, H.converged());
}

inline CheckReport recursion_c1_check(const HbParams& q, const Extension& ext, const Point3& pt,
                                      const EngineConfig& cfg = {}) {
  return recursion_c_check(q, ext, pt, 1, cfg);
}

// ---------------------------------------------------------------------------
// Bounds

/// |H_{B,p,nu}(x,y,z)| < 2^nu |p|^{nu+1} / (sqrt(pi) (Re p)^{2nu+1}) Gamma(nu+1/2) H_B^{(nu)}(|x|,|y|,|z|)
/// for positive parameters and nu > 0.  The residual is the ratio LHS/RHS.
inline CheckReport bound_check(const HbParams& q, const Extension& ext, const Point3& pt,
                               const EngineConfig& cfg = {}) {
  for (Complex v : {q.b1, q.b2, q.b3, q.c1, q.c2, q.c3})
    if (v.imag() != 0.0 || !(v.real() > 0.0)) throw DomainError("bound_check: parameters must be real and positive");
  if (!(ext.nu > 0.0)) throw DomainError("bound_check: need nu > 0");
  ext.validate();
  const auto lhs = h_b_pv(q, ext, pt, cfg);
  const Point3 moduli{std::abs(pt.x), std::abs(pt.y), std::abs(pt.z)};
  const auto ha = h_b_a(q, ext.nu, moduli, cfg);
  const double nu = ext.nu;
  const double log_front = nu * std::log(2.0) + (nu + 1.0) * std::log(std::abs(ext.p)) -
                           0.5 * std::log(std::numbers::pi) - (2.0 * nu + 1.0) * std::log(ext.p.real()) +
                           log_gamma(Complex(nu + 0.5)).real();

  CheckReport rep("bound", CheckKind::StrictBound, 1.0);
  SampleRecord r;
  detail::describe(r, q);
  detail::describe(r, ext);
  detail::describe(r, pt);
  r.lhs = std::abs(lhs.value);
  r.rhs = std::exp(log_front) * ha.value;
  r.residual = std::abs(r.lhs) / std::abs(r.rhs);
  detail::note_convergence(r, lhs.converged && ha.converged);
  rep.add(std::move(r));
  return rep;
}

/// |K_{nu+1/2}(z)| against the incomplete-gamma bound and the simpler bound;
/// the residual is the larger of the two ratios, and the sample also requires
/// the incomplete-gamma bound to be the sharper one.
inline CheckReport bessel_bound_check(double nu, Complex z) {
  if (!(nu > 0.0)) throw DomainError("bessel_bound_check: need nu > 0");
  const double k = std::abs(bessel_k(nu + 0.5, z).value);
  const double sharp = bessel_k_bound_incomplete(nu, z);
  const double simple = bessel_k_bound_simple(nu, z);
  CheckReport rep("bessel_bound", CheckKind::StrictBound, 1.0);
  SampleRecord r;
  r.inputs = {{"nu", Complex(nu)}, {"z", z}};
  r.lhs = k;
  r.rhs = sharp;
  r.residual = std::max(k / sharp, k / simple);
  r.notes = {{"ratio_incomplete", k / sharp}, {"ratio_simple", k / simple}, {"sharp_over_simple", sharp / simple}};
  r.ok = sharp <= simple;
  rep.add(std::move(r));
  return rep;
}

}  // namespace hbpv

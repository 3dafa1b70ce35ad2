#pragma once

// Double-exponential quadrature with nested level doubling.
//
// Every rule here is a trapezoidal sum in a variable u in which the integrand
// decays double exponentially.  Level L uses step h0 * 2^-L and only the
// odd-indexed nodes are new, so refinement reuses all previous evaluations.
// The reported error is the difference of the last two levels, which is very
// conservative once the rule is in its quadratic-convergence regime.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <span>
#include <type_traits>
#include <vector>

#include "hbpv/types.hpp"

namespace hbpv {

struct QuadResult {
  Complex value{};
  double abs_error_estimate = 0.0;
  int levels_used = 0;
  bool converged = false;
};

struct QuadOptions {
  double tol = 1e-12;
  int min_level = 3;
  int max_level = 12;
  // Stop on |T_L - T_{L-1}| <= tol * |T_L| instead of tol * (1 + |T_L|).
  bool relative = false;
};

namespace detail {

inline bool level_converged(Complex cur, Complex prev, const QuadOptions& opt, int level) {
  if (level < opt.min_level) return false;
  const double diff = std::abs(cur - prev);
  const double scale = opt.relative ? std::abs(cur) : 1.0 + std::abs(cur);
  return diff <= opt.tol * scale;
}

template <class F>
Complex call_unit(F& f, double t, double tc) {
  if constexpr (std::is_invocable_v<F&, double, double>) {
    return Complex(f(t, tc));
  } else {
    return Complex(f(t));
  }
}

}  // namespace detail

/// Node tables for the tanh-sinh rule on (0,1):
///   t(u) = 1 / (1 + exp(-pi sinh u)),  dt/du = pi cosh u * t * (1 - t).
/// Both t and 1 - t are stored from complementary formulas so that integrands
/// can be evaluated without cancellation next to either endpoint.
class TanhSinhRule {
 public:
  struct Node {
    double u;
    double t;
    double tc;      // 1 - t
    double log_t;
    double log_tc;
    double weight;  // dt/du
    double log_jacobian_base;  // log(pi cosh u); log(weight) = this + log_t + log_tc
  };

  static constexpr double kStep0 = 1.0;
  static constexpr double kUMax = 5.5;  // min(t, 1-t) ~ 1e-167
  static constexpr int kMaxLevel = 14;

  static const TanhSinhRule& instance() {
    static const TanhSinhRule rule;
    return rule;
  }

  std::span<const Node> level(int L) const { return levels_.at(static_cast<std::size_t>(L)); }
  static double step(int L) { return std::ldexp(kStep0, -L); }

 private:
  TanhSinhRule() {
    levels_.resize(kMaxLevel + 1);
    for (int L = 0; L <= kMaxLevel; ++L) {
      const double h = step(L);
      const long kmax = static_cast<long>(std::floor(kUMax / h));
      for (long k = -kmax; k <= kmax; ++k) {
        if (L > 0 && (k % 2 == 0)) continue;
        levels_[L].push_back(make_node(static_cast<double>(k) * h));
      }
    }
  }

  static Node make_node(double u) {
    const double s = std::numbers::pi * std::sinh(u);
    Node n{};
    n.u = u;
    // t = 1/(1+e^{-s}), 1-t = 1/(1+e^{s}), evaluated so that neither loses digits
    if (s >= 0) {
      const double e = std::exp(-s);
      n.t = 1.0 / (1.0 + e);
      n.tc = e / (1.0 + e);
      n.log_t = -std::log1p(e);
      n.log_tc = -s - std::log1p(e);
    } else {
      const double e = std::exp(s);
      n.t = e / (1.0 + e);
      n.tc = 1.0 / (1.0 + e);
      n.log_t = s - std::log1p(e);
      n.log_tc = -std::log1p(e);
    }
    n.log_jacobian_base = std::log(std::numbers::pi * std::cosh(u));
    n.weight = std::numbers::pi * std::cosh(u) * n.t * n.tc;
    return n;
  }

  std::vector<std::vector<Node>> levels_;
};

/// Node tables for the exp-sinh rule on (0,inf): x(u) = exp(pi/2 sinh u).
class ExpSinhRule {
 public:
  struct Node {
    double u;
    double x;
    double weight;  // dx/du
  };

  static constexpr double kStep0 = 1.0;
  static constexpr double kUMax = 4.75;  // x in [~1e-40, ~1e40]
  static constexpr int kMaxLevel = 14;

  static const ExpSinhRule& instance() {
    static const ExpSinhRule rule;
    return rule;
  }

  std::span<const Node> level(int L) const { return levels_.at(static_cast<std::size_t>(L)); }
  static double step(int L) { return std::ldexp(kStep0, -L); }

 private:
  ExpSinhRule() {
    levels_.resize(kMaxLevel + 1);
    for (int L = 0; L <= kMaxLevel; ++L) {
      const double h = step(L);
      const long kmax = static_cast<long>(std::floor(kUMax / h));
      for (long k = -kmax; k <= kmax; ++k) {
        if (L > 0 && (k % 2 == 0)) continue;
        const double u = static_cast<double>(k) * h;
        const double x = std::exp(0.5 * std::numbers::pi * std::sinh(u));
        levels_[L].push_back({u, x, x * 0.5 * std::numbers::pi * std::cosh(u)});
      }
    }
  }

  std::vector<std::vector<Node>> levels_;
};

namespace detail {

// Shared refinement loop.  `eval(node)` returns the integrand value at a node;
// nodes whose u falls outside the live window found at level 0 are skipped.
template <class Rule, class Eval>
QuadResult refine_levels(const Rule& rule, Eval&& eval, const QuadOptions& opt) {
  const int max_level = std::min(opt.max_level, Rule::kMaxLevel);
  QuadResult res;

  // Level 0 fixes the window [u_lo, u_hi] that carries all non-negligible mass.
  auto nodes0 = rule.level(0);
  std::vector<double> mag(nodes0.size());
  Complex sum0{};
  double abs_sum = 0.0;
  for (std::size_t i = 0; i < nodes0.size(); ++i) {
    const Complex c = eval(nodes0[i]) * nodes0[i].weight;
    if (!is_finite(c)) throw NumericalError("non-finite integrand value in quadrature");
    mag[i] = std::abs(c);
    abs_sum += mag[i];
    sum0 += c;
  }
  double u_lo = nodes0.front().u, u_hi = nodes0.back().u;
  if (abs_sum > 0.0) {
    const double cut = 1e-20 * abs_sum;
    std::size_t lo = 0, hi = nodes0.size() - 1;
    while (lo < hi && mag[lo] <= cut) ++lo;
    while (hi > lo && mag[hi] <= cut) --hi;
    u_lo = nodes0[lo].u - 2.0 * Rule::kStep0;
    u_hi = nodes0[hi].u + 2.0 * Rule::kStep0;
  }

  // The estimate never drops below the rounding error of the weighted sum,
  // taken as a few ulps of the trapezoidal sum of |w f|.
  constexpr double kRoundoffUlps = 8.0 * std::numeric_limits<double>::epsilon();
  Complex total = sum0 * Rule::step(0);
  Complex prev = total;
  double mass = abs_sum * Rule::step(0);
  res.value = total;
  res.abs_error_estimate = std::abs(total);
  for (int L = 1; L <= max_level; ++L) {
    Complex fresh{};
    double fresh_mass = 0.0;
    for (const auto& n : rule.level(L)) {
      if (n.u < u_lo || n.u > u_hi) continue;
      const Complex c = eval(n) * n.weight;
      if (!is_finite(c)) throw NumericalError("non-finite integrand value in quadrature");
      fresh += c;
      fresh_mass += std::abs(c);
    }
    total = 0.5 * prev + fresh * Rule::step(L);
    mass = 0.5 * mass + fresh_mass * Rule::step(L);
    res.value = total;
    res.abs_error_estimate = std::max(std::abs(total - prev), kRoundoffUlps * mass);
    res.levels_used = L;
    if (level_converged(total, prev, opt, L)) {
      res.converged = true;
      return res;
    }
    prev = total;
  }
  return res;
}

}  // namespace detail

/// Integrates f over (0,1).  f may be called as f(t) or f(t, 1 - t); the
/// two-argument form receives an accurately computed complement.  Endpoint
/// blow-up is allowed only if integrable and dominated by the rule's decay.
template <class F>
QuadResult integrate_unit_interval(F&& f, double tol = 1e-12, QuadOptions opt = {}) {
  opt.tol = tol;
  const auto& rule = TanhSinhRule::instance();
  return detail::refine_levels(
      rule, [&](const TanhSinhRule::Node& n) { return detail::call_unit(f, n.t, n.tc); }, opt);
}

/// Integrates f over (0,inf) with the exp-sinh rule.  f must be integrable at
/// 0 and decay at least exponentially at infinity.
template <class F>
QuadResult integrate_semi_infinite(F&& f, double tol = 1e-12, QuadOptions opt = {}) {
  opt.tol = tol;
  const auto& rule = ExpSinhRule::instance();
  return detail::refine_levels(
      rule, [&](const ExpSinhRule::Node& n) { return Complex(f(n.x)); }, opt);
}

/// Trapezoidal rule for integrals over (0,inf) whose integrand is already an
/// even analytic function of t with double-exponential decay, e.g. the
/// cosh-integral of K_nu.  Step halving from h = 1/2; the range is fixed at
/// level 0 by scanning until the terms are negligible and decreasing.
template <class F>
QuadResult integrate_even_decaying(F&& f, QuadOptions opt = {}) {
  constexpr double h0 = 0.5;
  constexpr double t_cap = 60.0;
  QuadResult res;
  Complex sum = 0.5 * Complex(f(0.0));
  double prev_mag = std::abs(sum);
  double t_end = t_cap;
  for (int k = 1;; ++k) {
    const double t = k * h0;
    const Complex v = f(t);
    if (!is_finite(v)) throw NumericalError("non-finite integrand value in quadrature");
    sum += v;
    const double m = std::abs(v);
    if ((m <= 1e-20 * std::abs(sum) && m <= prev_mag) || t >= t_cap) {
      t_end = t;
      break;
    }
    prev_mag = m;
  }
  Complex prev = sum * h0;
  res.value = prev;
  res.abs_error_estimate = std::abs(prev);
  const int max_level = std::min(opt.max_level, 12);
  for (int L = 1; L <= max_level; ++L) {
    const double h = std::ldexp(h0, -L);
    Complex fresh{};
    for (long j = 1; static_cast<double>(j) * h <= t_end; j += 2) fresh += f(static_cast<double>(j) * h);
    const Complex total = 0.5 * prev + fresh * h;
    res.value = total;
    res.abs_error_estimate = std::abs(total - prev);
    res.levels_used = L;
    if (detail::level_converged(total, prev, opt, L)) {
      res.converged = true;
      return res;
    }
    prev = total;
  }
  return res;
}

}  // namespace hbpv

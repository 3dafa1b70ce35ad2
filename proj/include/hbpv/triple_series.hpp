#pragma once

// Triple hypergeometric series summed by total-degree shells m + n + k = N.
//
// All series here share one shape:
//
//   leading * prod_f (a_f)_{dm m + dn n + dk k}   x^m y^n z^k
//             ------------------------------- * ---------------
//             prod_g (g)_{...} (c1)_m (c2)_n (c3)_k   m! n! k!
//
// so every term is obtained from a neighbour in the previous shell by a
// rational step.  H_{B,p,nu} is H_B times B_{p,nu}(b1+i, b2+j) / B(b1+i, b2+j)
// with i = m + k, j = m + n, because
//   (b1+b2)_{i+j} B(b1+i, b2+j) / B(b1, b2) = (b1)_i (b2)_j,
// which keeps the huge Pochhammer factor of the printed definition out of the
// arithmetic.

#include <algorithm>
#include <cmath>
#include <functional>
#include <span>
#include <vector>

#include "hbpv/extended_beta.hpp"
#include "hbpv/scalar_kernels.hpp"
#include "hbpv/types.hpp"

namespace hbpv {

struct HbParams {
  Complex b1{1.0}, b2{1.0}, b3{1.0};
  Complex c1{1.0}, c2{1.0}, c3{1.0};

  void validate_denominators() const {
    if (near_nonpositive_integer(c1) || near_nonpositive_integer(c2) || near_nonpositive_integer(c3))
      throw PoleError("c1, c2, c3 must not be nonpositive integers");
  }
};

struct Point3 {
  Complex x{}, y{}, z{};
};

inline Point3 scaled(const Point3& p, double f) { return {p.x * f, p.y * f, p.z * f}; }

struct EvalResult {
  Complex value{};
  int shells_used = 0;
  double tail_estimate = 0.0;
  bool converged = false;
};

struct EngineConfig {
  double series_tol = 1e-12;
  double quad_tol = 1e-12;
  int max_shell = 400;
  int stall_shells = 3;

  void validate() const {
    if (!(series_tol > 0.0) || !(quad_tol > 0.0) || max_shell < 1 || stall_shells < 1)
      throw DomainError("EngineConfig: tolerances and shell counts must be positive");
  }
};

// |x| + |y| + |z| + 2 sqrt(|x||y||z|); the H_B family converges where this is < 1.
inline double hb_region_measure(const Point3& p) {
  const double a = std::abs(p.x), b = std::abs(p.y), c = std::abs(p.z);
  return a + b + c + 2.0 * std::sqrt(a * b * c);
}

inline bool in_region_hb(const Point3& p) { return hb_region_measure(p) < 1.0; }

// 2 sqrt|x| + (sqrt|y| + sqrt|z|)^2; X_4 converges where this is < 1.
inline double x4_region_measure(const Point3& p) {
  const double s = std::sqrt(std::abs(p.y)) + std::sqrt(std::abs(p.z));
  return 2.0 * std::sqrt(std::abs(p.x)) + s * s;
}

inline bool in_region_x4(const Point3& p) { return x4_region_measure(p) < 1.0; }

/// True when p lies inside the H_B region shrunk by `factor` towards the origin.
inline bool in_scaled_region_hb(const Point3& p, double factor) { return in_region_hb(scaled(p, 1.0 / factor)); }

namespace detail {

struct NoShellObserver {
  void operator()(int, Complex) const {}
};

// Drives shell summation given S_N for N = 0, 1, ...
template <class ShellSum, class Observer>
EvalResult sum_shell_sums(ShellSum&& shell_sum, const EngineConfig& cfg, Observer&& observe) {
  cfg.validate();
  EvalResult res;
  Complex acc{};
  int stall = 0;
  int last_nz_shell = -1;
  double last_nz = 0.0, prev_nz = 0.0;
  for (int N = 0; N < cfg.max_shell; ++N) {
    const Complex s = shell_sum(N);
    if (!is_finite(s)) throw NumericalError("series: non-finite shell sum");
    acc += s;
    observe(N, s);
    res.shells_used = N + 1;
    const double mag = std::abs(s);
    if (mag > 0.0) {
      prev_nz = last_nz;
      last_nz = mag;
      last_nz_shell = N;
    }
    // geometric extrapolation from the last two nonzero shells; with fewer
    // than two there is no ratio and the stall count alone decides
    double tail = 0.0;
    if (prev_nz > 0.0) {
      const double r = std::min(last_nz / prev_nz, 0.99);
      tail = last_nz * std::pow(r, N - last_nz_shell + 1) / (1.0 - r);
    }
    res.tail_estimate = tail;
    const double scale = cfg.series_tol * (1.0 + std::abs(acc));
    stall = mag <= scale ? stall + 1 : 0;
    if (stall >= cfg.stall_shells && tail <= scale) {
      res.converged = true;
      break;
    }
  }
  res.value = acc;
  return res;
}

}  // namespace detail

/// Sums term(m, n, k) over all nonnegative triples, shell by shell.
/// `observe(N, S_N)` is called after each shell.
template <class Term, class Observer = detail::NoShellObserver>
EvalResult sum_shells(Term&& term, const EngineConfig& cfg, Observer&& observe = {}) {
  return detail::sum_shell_sums(
      [&](int N) {
        Complex s{};
        for (int m = 0; m <= N; ++m)
          for (int n = 0; n <= N - m; ++n) {
            const Complex t = term(m, n, N - m - n);
            if (!is_finite(t)) throw NumericalError("series: non-finite term");
            s += t;
          }
        return s;
      },
      cfg, observe);
}

/// (base)_{dm*m + dn*n + dk*k}
struct CoupledFactor {
  Complex base;
  int dm, dn, dk;
};

/// Generates the terms of a coupled-Pochhammer triple series shell by shell.
/// Shell N is stored with m outer and n inner; k = N - m - n.
class ShellWalker {
 public:
  ShellWalker(std::vector<CoupledFactor> numer, std::vector<CoupledFactor> denom, const HbParams& lower,
              const Point3& pt, Complex leading)
      : numer_(std::move(numer)), denom_(std::move(denom)), c_{lower.c1, lower.c2, lower.c3},
        arg_{pt.x, pt.y, pt.z}, leading_(leading) {
    lower.validate_denominators();
    for (const auto& f : denom_)
      if (near_nonpositive_integer(f.base)) throw PoleError("series: denominator Pochhammer hits a pole");
  }

  static std::size_t index(int N, int m, int n) {
    return static_cast<std::size_t>(m) * static_cast<std::size_t>(N + 1) -
           static_cast<std::size_t>(m) * static_cast<std::size_t>(m - 1) / 2 + static_cast<std::size_t>(n);
  }

  /// Terms of the next shell; the first call yields shell 0.
  std::span<const Complex> next_shell() {
    const int N = ++shell_;
    cur_.assign(static_cast<std::size_t>(N + 1) * static_cast<std::size_t>(N + 2) / 2, Complex{});
    if (N == 0) {
      cur_[0] = leading_;
    } else {
      for (int m = 0; m <= N; ++m) {
        for (int n = 0; n <= N - m; ++n) {
          const int k = N - m - n;
          Complex t;
          if (k >= 1)
            t = prev_[index(N - 1, m, n)] * step(2, m, n, k - 1);
          else if (n >= 1)
            t = prev_[index(N - 1, m, n - 1)] * step(1, m, n - 1, 0);
          else
            t = prev_[index(N - 1, m - 1, 0)] * step(0, m - 1, 0, 0);
          if (!is_finite(t)) throw NumericalError("series: non-finite term");
          cur_[index(N, m, n)] = t;
        }
      }
    }
    std::swap(cur_, prev_);
    return prev_;
  }

  int shell() const { return shell_; }

 private:
  static Complex rise(const CoupledFactor& f, int m, int n, int k, int d) {
    const Complex a = f.base + static_cast<double>(f.dm * m + f.dn * n + f.dk * k);
    Complex r = 1.0;
    for (int i = 0; i < d; ++i) r *= a + static_cast<double>(i);
    return r;
  }

  // term(idx + e_axis) / term(idx), axis 0 = m, 1 = n, 2 = k
  Complex step(int axis, int m, int n, int k) const {
    const int own = axis == 0 ? m : axis == 1 ? n : k;
    Complex r = arg_[axis] / ((c_[axis] + static_cast<double>(own)) * static_cast<double>(own + 1));
    for (const auto& f : numer_) {
      const int d = axis == 0 ? f.dm : axis == 1 ? f.dn : f.dk;
      if (d) r *= rise(f, m, n, k, d);
    }
    for (const auto& f : denom_) {
      const int d = axis == 0 ? f.dm : axis == 1 ? f.dn : f.dk;
      if (d) r /= rise(f, m, n, k, d);
    }
    return r;
  }

  std::vector<CoupledFactor> numer_, denom_;
  Complex c_[3];
  Complex arg_[3];
  Complex leading_;
  int shell_ = -1;
  std::vector<Complex> prev_, cur_;
};

namespace detail {

inline void require_region_hb(const Point3& pt) {
  if (!in_region_hb(pt)) throw RegionError("point outside the H_B convergence region");
}

inline ShellWalker hb_walker(const HbParams& q, const Point3& pt) {
  return ShellWalker({{q.b1, 1, 0, 1}, {q.b2, 1, 1, 0}, {q.b3, 0, 1, 1}}, {}, q, pt, 1.0);
}

template <class Weight>
EvalResult sum_walker(ShellWalker& w, Weight&& weight, const EngineConfig& cfg) {
  return sum_shell_sums(
      [&](int N) {
        const auto terms = w.next_shell();
        Complex s{};
        std::size_t idx = 0;
        for (int m = 0; m <= N; ++m)
          for (int n = 0; n <= N - m; ++n) s += terms[idx++] * weight(m + (N - m - n), m + n);
        return s;
      },
      cfg, NoShellObserver{});
}

inline EvalResult sum_walker(ShellWalker& w, const EngineConfig& cfg) {
  return sum_walker(w, [](int, int) { return 1.0; }, cfg);
}

inline Complex monomial(const Point3& pt, int m, int n, int k) {
  Complex r = 1.0;
  for (int i = 1; i <= m; ++i) r *= pt.x / static_cast<double>(i);
  for (int i = 1; i <= n; ++i) r *= pt.y / static_cast<double>(i);
  for (int i = 1; i <= k; ++i) r *= pt.z / static_cast<double>(i);
  return r;
}

}  // namespace detail

/// One term of H_B in the Pochhammer form (b1)_{m+k} (b2)_{m+n} (b3)_{n+k} / ...
inline Complex h_b_term(const HbParams& q, const Point3& pt, int m, int n, int k) {
  return pochhammer(q.b1, m + k) * pochhammer(q.b2, m + n) * pochhammer(q.b3, n + k) /
         (pochhammer(q.c1, m) * pochhammer(q.c2, n) * pochhammer(q.c3, k)) * detail::monomial(pt, m, n, k);
}

/// One term of H_B in the Beta-ratio form
/// (b1+b2)_{2m+n+k} (b3)_{n+k} B(b1+m+k, b2+m+n) / (B(b1,b2) (c1)_m (c2)_n (c3)_k) ...
inline Complex h_b_term_beta_form(const HbParams& q, const Point3& pt, int m, int n, int k) {
  const Complex ratio = std::exp(log_beta(q.b1 + static_cast<double>(m + k), q.b2 + static_cast<double>(m + n)) -
                                 log_beta(q.b1, q.b2));
  return pochhammer(q.b1 + q.b2, 2 * m + n + k) * pochhammer(q.b3, n + k) * ratio /
         (pochhammer(q.c1, m) * pochhammer(q.c2, n) * pochhammer(q.c3, k)) * detail::monomial(pt, m, n, k);
}

/// Srivastava's H_B(b1,b2,b3; c1,c2,c3; x,y,z).
inline EvalResult h_b(const HbParams& q, const Point3& pt, const EngineConfig& cfg = {}) {
  detail::require_region_hb(pt);
  auto w = detail::hb_walker(q, pt);
  return detail::sum_walker(w, cfg);
}

/// H_B summed from the Beta-ratio form, one independent term evaluation at a time.
inline EvalResult h_b_beta_form(const HbParams& q, const Point3& pt, const EngineConfig& cfg = {}) {
  detail::require_region_hb(pt);
  q.validate_denominators();
  return sum_shells([&](int m, int n, int k) { return h_b_term_beta_form(q, pt, m, n, k); }, cfg);
}

/// H_B^{(a)}: H_B with B(b1+a+m+k, b2+a+m+n) in place of B(b1+m+k, b2+m+n).
inline EvalResult h_b_a(const HbParams& q, Complex a, const Point3& pt, const EngineConfig& cfg = {}) {
  detail::require_region_hb(pt);
  const Complex u = q.b1 + a, v = q.b2 + a;
  if (!(u.real() > 0.0) || !(v.real() > 0.0)) throw DomainError("h_b_a: need Re(b1+a) > 0 and Re(b2+a) > 0");
  const Complex leading = std::exp(log_beta(u, v) - log_beta(q.b1, q.b2));
  // B(u+i, v+j) = B(u, v) (u)_i (v)_j / (u+v)_{i+j}
  ShellWalker w({{u, 1, 0, 1}, {v, 1, 1, 0}, {q.b3, 0, 1, 1}, {q.b1 + q.b2, 2, 1, 1}}, {{u + v, 2, 1, 1}}, q, pt,
                leading);
  return detail::sum_walker(w, cfg);
}

/// Exton's X_4(b1, b2; c1, c2, c3; x, y, z).
inline EvalResult x4(Complex b1, Complex b2, Complex c1, Complex c2, Complex c3, const Point3& pt,
                     const EngineConfig& cfg = {}) {
  if (!in_region_x4(pt)) throw RegionError("point outside the X_4 convergence region");
  HbParams lower;
  lower.c1 = c1;
  lower.c2 = c2;
  lower.c3 = c3;
  ShellWalker w({{b1, 2, 1, 1}, {b2, 0, 1, 1}}, {}, lower, pt, 1.0);
  return detail::sum_walker(w, cfg);
}

namespace detail {

inline EvalResult h_b_extended(const HbParams& q, BetaCache& cache, const Point3& pt, const EngineConfig& cfg) {
  require_region_hb(pt);
  if (!(q.b1.real() > 0.0) || !(q.b2.real() > 0.0)) throw DomainError("need Re(b1) > 0 and Re(b2) > 0");
  if (cache.b1() != q.b1 || cache.b2() != q.b2) throw DomainError("BetaCache base does not match (b1, b2)");
  auto w = hb_walker(q, pt);
  auto res = sum_walker(w, [&](int i, int j) { return cache.ratio(i, j); }, cfg);
  res.converged = res.converged && cache.all_converged();
  return res;
}

}  // namespace detail

/// H_{B,p,nu} using (and filling) an existing cache for (b1, b2, ext).
inline EvalResult h_b_pv(const HbParams& q, BetaCache& cache, const Point3& pt, const EngineConfig& cfg = {}) {
  if (cache.kernel() != BetaKernel::Bessel) throw DomainError("h_b_pv: cache must use the Bessel kernel");
  return detail::h_b_extended(q, cache, pt, cfg);
}

/// The (p, nu)-extended H_B.
inline EvalResult h_b_pv(const HbParams& q, const Extension& ext, const Point3& pt, const EngineConfig& cfg = {}) {
  BetaCache cache(q.b1, q.b2, ext, BetaKernel::Bessel, cfg.quad_tol);
  return h_b_pv(q, cache, pt, cfg);
}

/// The same series built on Chaudhry's B(x, y; p).
inline EvalResult h_b_chaudhry(const HbParams& q, Complex p, const Point3& pt, const EngineConfig& cfg = {}) {
  BetaCache cache(q.b1, q.b2, Extension{p, 0.0}, BetaKernel::Exponential, cfg.quad_tol);
  return detail::h_b_extended(q, cache, pt, cfg);
}

}  // namespace hbpv

#pragma once

// Extended Beta functions
//
//   Chaudhry:        B(x,y;p)      = int_0^1 t^{x-1} (1-t)^{y-1} exp(-p / (t(1-t))) dt
//   Bessel kernel:   B_{p,nu}(x,y) = sqrt(2p/pi) int_0^1 t^{x-3/2} (1-t)^{y-3/2}
//                                        K_{nu+1/2}(p / (t(1-t))) dt
//
// Both are written as int_0^1 t^{x-1} (1-t)^{y-1} G(t) dt with a kernel G that
// depends only on (p, nu).  BetaCache tabulates log G once per tanh-sinh level
// and reuses it for every shifted pair (x+i, y+j), which is what the triple
// series needs.  The integrand is assembled in log space, so huge kernel
// arguments near the endpoints underflow cleanly to zero instead of meeting an
// overflowing algebraic factor.

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <vector>

#include "hbpv/quadrature.hpp"
#include "hbpv/scalar_kernels.hpp"
#include "hbpv/types.hpp"

namespace hbpv {

inline constexpr double kMinRealP = 1e-6;

/// The (p, nu) pair of the Bessel-kernel extension.
struct Extension {
  Complex p{1.0};
  double nu = 0.0;

  void validate() const {
    if (!(p.real() > 0.0)) throw DomainError("extension: need Re(p) > 0");
    if (p.real() < kMinRealP) throw DomainError("extension: Re(p) below 1e-6 is not supported");
    if (!(nu >= 0.0)) throw DomainError("extension: need nu >= 0");
  }
};

enum class BetaKernel {
  Bessel,       // sqrt(2w/pi) e^{-w} e^{w}K_{nu+1/2}(w),  w = p/(t(1-t))
  Exponential,  // e^{-w} (Chaudhry)
};

class BetaCache {
 public:
  struct Entry {
    Complex value{};  // B_{p,nu}(b1+i, b2+j)
    Complex ratio{};  // value / B(b1+i, b2+j)
    double abs_error_estimate = 0.0;  // of `ratio` when normalized, else of `value`
    int levels_used = 0;
    bool converged = false;
    bool ready = false;
  };

  BetaCache(Complex b1, Complex b2, Extension ext, BetaKernel kernel = BetaKernel::Bessel,
            double tol = 1e-12, int max_level = 12)
      : b1_(b1), b2_(b2), ext_(ext), kernel_(kernel), tol_(tol), max_level_(max_level) {
    ext_.validate();
    if (!(tol_ > 0.0)) throw DomainError("BetaCache: tolerance must be positive");
  }

  Complex b1() const { return b1_; }
  Complex b2() const { return b2_; }
  const Extension& extension() const { return ext_; }
  BetaKernel kernel() const { return kernel_; }

  const Entry& entry(int i, int j) {
    if (i < 0 || j < 0) throw DomainError("BetaCache: negative offset");
    if (static_cast<std::size_t>(i) >= rows_.size()) rows_.resize(static_cast<std::size_t>(i) + 1);
    auto& row = rows_[static_cast<std::size_t>(i)];
    if (static_cast<std::size_t>(j) >= row.size()) row.resize(static_cast<std::size_t>(j) + 1);
    Entry& e = row[static_cast<std::size_t>(j)];
    if (!e.ready) {
      e = compute(b1_ + static_cast<double>(i), b2_ + static_cast<double>(j));
      if (!e.converged) all_converged_ = false;
    }
    return e;
  }

  Complex value(int i, int j) { return entry(i, j).value; }
  Complex ratio(int i, int j) { return entry(i, j).ratio; }

  /// False once any computed entry failed to converge.
  bool all_converged() const { return all_converged_; }

 private:
  struct KernelNode {
    double log_t;
    double log_tc;
    Complex log_g;      // log(pi cosh u) + log G(t)
    Complex phase;      // exp(i Im log_g)
    bool dead;          // G underflows beyond any algebraic factor
  };

  const std::vector<KernelNode>& level_table(int L) {
    while (static_cast<int>(tables_.size()) <= L) {
      const int lvl = static_cast<int>(tables_.size());
      const auto nodes = TanhSinhRule::instance().level(lvl);
      std::vector<KernelNode> tab;
      tab.reserve(nodes.size());
      for (const auto& n : nodes) tab.push_back(make_kernel_node(n));
      tables_.push_back(std::move(tab));
    }
    return tables_[static_cast<std::size_t>(L)];
  }

  KernelNode make_kernel_node(const TanhSinhRule::Node& n) const {
    KernelNode k{};
    k.log_t = n.log_t;
    k.log_tc = n.log_tc;
    // w = p / (t(1-t)) with t(1-t) formed from the stored logs to keep the tails exact
    const Complex w = ext_.p * std::exp(-(n.log_t + n.log_tc));
    k.dead = w.real() > 1e6;
    if (k.dead) return k;
    Complex log_g;
    if (kernel_ == BetaKernel::Exponential) {
      log_g = -w;
    } else {
      log_g = -w + 0.5 * std::log(2.0 * w / std::numbers::pi) + std::log(bessel_k_scaled(ext_.nu + 0.5, w));
    }
    k.log_g = n.log_jacobian_base + log_g;
    k.phase = std::polar(1.0, k.log_g.imag());
    if (!is_finite(k.log_g)) throw NumericalError("extended beta: non-finite kernel value");
    return k;
  }

  Entry compute(Complex x, Complex y) {
    Entry e;
    Complex log_norm = 0.0;
    const bool normalized = x.real() > 0.0 && y.real() > 0.0;
    if (normalized) log_norm = log_beta(x, y);
    const bool real_args = x.imag() == 0.0 && y.imag() == 0.0 && log_norm.imag() == 0.0;
    const double xr = x.real(), yr = y.real(), nr = log_norm.real();

    auto level_sum = [&](int L) {
      Complex s{};
      for (const auto& k : level_table(L)) {
        if (k.dead) continue;
        Complex c;
        if (real_args) {
          const double ex = xr * k.log_t + yr * k.log_tc + k.log_g.real() - nr;
          if (ex < -745.0) continue;
          c = std::exp(ex) * k.phase;
        } else {
          const Complex ex = x * k.log_t + y * k.log_tc + k.log_g - log_norm;
          if (ex.real() < -745.0) continue;
          c = std::exp(ex);
        }
        if (!is_finite(c)) throw NumericalError("extended beta: non-finite integrand at a quadrature node");
        s += c;
      }
      return s;
    };

    QuadOptions opt;
    opt.tol = tol_;
    opt.max_level = std::min(max_level_, TanhSinhRule::kMaxLevel);
    Complex prev = level_sum(0) * TanhSinhRule::step(0);
    Complex cur = prev;
    e.abs_error_estimate = std::abs(cur);
    for (int L = 1; L <= opt.max_level; ++L) {
      cur = 0.5 * prev + level_sum(L) * TanhSinhRule::step(L);
      e.abs_error_estimate = std::abs(cur - prev);
      e.levels_used = L;
      if (detail::level_converged(cur, prev, opt, L)) {
        e.converged = true;
        break;
      }
      prev = cur;
    }
    if (normalized) {
      e.ratio = cur;
      e.value = std::exp(log_norm) * cur;
    } else {
      e.value = cur;
      // the series never asks for this; B(x, y) may sit on a pole here
      e.ratio = std::numeric_limits<double>::quiet_NaN();
    }
    e.ready = true;
    return e;
  }

  Complex b1_, b2_;
  Extension ext_;
  BetaKernel kernel_;
  double tol_;
  int max_level_;
  bool all_converged_ = true;
  std::vector<std::vector<KernelNode>> tables_;
  std::vector<std::vector<Entry>> rows_;
};

/// B_{p,nu}(b1+i, b2+j), memoized in `cache`.
inline Complex cached_extended_beta(BetaCache& cache, int i, int j) { return cache.value(i, j); }

inline QuadResult extended_beta_result(Complex x, Complex y, const Extension& ext, double tol = 1e-12) {
  BetaCache cache(x, y, ext, BetaKernel::Bessel, tol);
  const auto& e = cache.entry(0, 0);
  return {e.value, e.abs_error_estimate, e.levels_used, e.converged};
}

inline QuadResult chaudhry_beta_result(Complex x, Complex y, Complex p, double tol = 1e-12) {
  BetaCache cache(x, y, Extension{p, 0.0}, BetaKernel::Exponential, tol);
  const auto& e = cache.entry(0, 0);
  return {e.value, e.abs_error_estimate, e.levels_used, e.converged};
}

/// B_{p,nu}(x, y).  Throws NumericalError if the quadrature did not converge.
inline Complex extended_beta(Complex x, Complex y, const Extension& ext, double tol = 1e-12) {
  const auto r = extended_beta_result(x, y, ext, tol);
  if (!r.converged) throw NumericalError("extended_beta: quadrature did not converge");
  return r.value;
}

/// Chaudhry's B(x, y; p).  Throws NumericalError if the quadrature did not converge.
inline Complex chaudhry_beta(Complex x, Complex y, Complex p, double tol = 1e-12) {
  const auto r = chaudhry_beta_result(x, y, p, tol);
  if (!r.converged) throw NumericalError("chaudhry_beta: quadrature did not converge");
  return r.value;
}

}  // namespace hbpv

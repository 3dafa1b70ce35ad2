#pragma once

// Scalar special functions: log-gamma, Pochhammer, Beta, upper incomplete
// gamma and the modified Bessel function K_nu for real order and complex
// argument in the right half plane.

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "hbpv/quadrature.hpp"
#include "hbpv/types.hpp"

namespace hbpv {

namespace detail {

// Lanczos approximation, g = 7, nine terms; relative error in Gamma ~1e-15
// for Re(z) >= 1/2.
inline constexpr double kLanczosG = 7.0;
inline constexpr std::array<double, 9> kLanczosCoef = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

inline Complex log_gamma_right(Complex z) {
  z -= 1.0;
  Complex x = kLanczosCoef[0];
  for (std::size_t i = 1; i < kLanczosCoef.size(); ++i) x += kLanczosCoef[i] / (z + static_cast<double>(i));
  const Complex t = z + kLanczosG + 0.5;
  return 0.5 * std::log(2.0 * std::numbers::pi) + (z + 0.5) * std::log(t) - t + std::log(x);
}

}  // namespace detail

/// log Gamma(z).  For Re(z) >= 1/2 the imaginary part is continuous in z (the
/// usual loggamma branch); left of that the reflection formula is used, so only
/// exp(log_gamma(z)) is guaranteed, not the branch of the imaginary part.
inline Complex log_gamma(Complex z) {
  if (near_nonpositive_integer(z)) throw PoleError("log_gamma: pole at nonpositive integer");
  if (z.real() >= 0.5) return detail::log_gamma_right(z);
  const Complex s = std::sin(std::numbers::pi * z);
  return std::log(std::numbers::pi) - std::log(s) - detail::log_gamma_right(1.0 - z);
}

inline Complex gamma(Complex z) { return std::exp(log_gamma(z)); }

/// Rising factorial (lambda)_n.  Direct product for n <= 64, gamma ratio above.
inline Complex pochhammer(Complex lambda, long n) {
  if (n < 0) throw DomainError("pochhammer: negative index");
  constexpr long kProductLimit = 64;
  if (n <= kProductLimit) {
    Complex r = 1.0;
    for (long i = 0; i < n; ++i) r *= lambda + static_cast<double>(i);
    return r;
  }
  // Walk the product until the running argument has positive real part, so the
  // remaining ratio never straddles a pole.
  Complex r = 1.0;
  long done = 0;
  while (lambda.real() < 0.5 && done < n) {
    r *= lambda;
    if (r == 0.0) return 0.0;
    lambda += 1.0;
    ++done;
  }
  if (done == n) return r;
  return r * std::exp(log_gamma(lambda + static_cast<double>(n - done)) - log_gamma(lambda));
}

inline Complex log_beta(Complex a, Complex b) {
  if (near_nonpositive_integer(a) || near_nonpositive_integer(b) || near_nonpositive_integer(a + b))
    throw PoleError("beta: argument at a pole");
  return log_gamma(a) + log_gamma(b) - log_gamma(a + b);
}

/// Gamma(a)Gamma(b)/Gamma(a+b).
inline Complex beta(Complex a, Complex b) { return std::exp(log_beta(a, b)); }

/// Gamma(a, x) = int_x^inf t^{a-1} e^{-t} dt for real a > 0, x >= 0.
inline double upper_incomplete_gamma(double a, double x) {
  if (!(a > 0.0) || !(x >= 0.0)) throw DomainError("upper_incomplete_gamma: need a > 0, x >= 0");
  const double lg = log_gamma(Complex(a)).real();
  if (x == 0.0) return std::exp(lg);
  const double log_prefactor = -x + a * std::log(x);
  if (x < a + 1.0) {
    // lower series, then complement
    double ap = a, del = 1.0 / a, sum = del;
    for (int n = 0; n < 100000; ++n) {
      ap += 1.0;
      del *= x / ap;
      sum += del;
      if (std::abs(del) < std::abs(sum) * 1e-17) break;
    }
    return std::exp(lg) - sum * std::exp(log_prefactor);
  }
  // Lentz continued fraction for Gamma(a,x) e^x x^{-a}
  constexpr double tiny = 1e-300;
  double b = x + 1.0 - a, c = 1.0 / tiny, d = 1.0 / b, h = d;
  for (int i = 1; i < 100000; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-17) break;
  }
  return std::exp(log_prefactor) * h;
}

namespace detail {

// e^z K_nu(z) from the large-argument expansion; false if the terms start
// growing before reaching double precision.
inline bool bessel_k_scaled_asymptotic(double nu, Complex z, Complex& out) {
  const double mu4 = 4.0 * nu * nu;
  Complex sum = 1.0, term = 1.0;
  double last = 1.0;
  for (int k = 1; k < 200; ++k) {
    const double odd = 2.0 * k - 1.0;
    term *= (mu4 - odd * odd) / (8.0 * k * z);
    const double m = std::abs(term);
    if (m > last) return false;
    sum += term;
    if (m <= 1e-17 * std::abs(sum)) {
      out = std::sqrt(std::numbers::pi / (2.0 * z)) * sum;
      return true;
    }
    last = m;
  }
  return false;
}

// e^z K_nu(z) = int_0^inf exp(-z (cosh t - 1)) cosh(nu t) dt.
inline Complex bessel_k_scaled_integral(double nu, Complex z) {
  auto f = [nu, z](double t) -> Complex {
    const double sh = std::sinh(0.5 * t);
    const Complex e = -z * (2.0 * sh * sh) + nu * t;
    return std::exp(e) * (0.5 * (1.0 + std::exp(-2.0 * nu * t)));
  };
  QuadOptions opt;
  opt.tol = 1e-15;
  opt.min_level = 2;
  opt.max_level = 12;
  opt.relative = true;
  return integrate_even_decaying(f, opt).value;
}

}  // namespace detail

inline constexpr double kBesselAsymptoticRadius = 30.0;

/// e^z K_nu(z) for nu >= 0, Re(z) > 0.
inline Complex bessel_k_scaled(double nu, Complex z) {
  if (!(nu >= 0.0)) throw DomainError("bessel_k: order must be >= 0");
  if (!(z.real() > 0.0)) throw DomainError("bessel_k: need Re(z) > 0");
  if (std::abs(z) > kBesselAsymptoticRadius) {
    Complex v;
    if (detail::bessel_k_scaled_asymptotic(nu, z, v)) return v;
  }
  return detail::bessel_k_scaled_integral(nu, z);
}

/// log K_nu(z); finite even where K itself underflows.
inline Complex log_bessel_k(double nu, Complex z) { return -z + std::log(bessel_k_scaled(nu, z)); }

struct BesselKValue {
  Complex value;
  bool underflow = false;
};

/// K_nu(z).  Returns 0 with `underflow` set when |K| is below the smallest
/// normal double.
inline BesselKValue bessel_k(double nu, Complex z) {
  const Complex s = bessel_k_scaled(nu, z);
  const double log_mag = -z.real() + std::log(std::abs(s));
  if (log_mag < std::log(std::numeric_limits<double>::min())) return {Complex(0.0), true};
  return {std::exp(-z) * s, false};
}

/// Upper bound on |K_{nu+1/2}(z)| through the incomplete gamma function:
///   sqrt(pi) (|z|/2)^{nu+1/2} / Gamma(nu+1) * Gamma(2nu+1, x) / x^{2nu+1},  x = Re z.
/// Strict for nu > 0.
inline double bessel_k_bound_incomplete(double nu, Complex z) {
  if (!(nu >= 0.0) || !(z.real() > 0.0)) throw DomainError("bessel bound: need nu >= 0, Re(z) > 0");
  const double x = z.real();
  const double log_val = 0.5 * std::log(std::numbers::pi) + (nu + 0.5) * std::log(0.5 * std::abs(z)) -
                         log_gamma(Complex(nu + 1.0)).real() - (2.0 * nu + 1.0) * std::log(x);
  return std::exp(log_val) * upper_incomplete_gamma(2.0 * nu + 1.0, x);
}

/// Weaker closed-form bound: (1/2) (2|z|/x^2)^{nu+1/2} Gamma(nu+1/2).
inline double bessel_k_bound_simple(double nu, Complex z) {
  if (!(nu >= 0.0) || !(z.real() > 0.0)) throw DomainError("bessel bound: need nu >= 0, Re(z) > 0");
  const double x = z.real();
  return 0.5 * std::exp((nu + 0.5) * std::log(2.0 * std::abs(z) / (x * x)) + log_gamma(Complex(nu + 0.5)).real());
}

}  // namespace hbpv

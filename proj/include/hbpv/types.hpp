#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace hbpv {

using Complex = std::complex<double>;

// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

// Argument at (or within 1e-12 of) a pole of the gamma function.
class PoleError : public DomainError {
 public:
  explicit PoleError(const std::string& what) : DomainError(what) {}
};

// Evaluation point outside the convergence region of a series.
class RegionError : public DomainError {
 public:
  explicit RegionError(const std::string& what) : DomainError(what) {}
};

// A non-finite value escaped an integrand or series term.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

inline bool is_finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

// Nonpositive integer within `tol` (absolute).
inline bool near_nonpositive_integer(Complex z, double tol = 1e-12) {
  if (std::abs(z.imag()) > tol || z.real() > tol) return false;
  return std::abs(z.real() - std::round(z.real())) <= tol;
}

}  // namespace hbpv

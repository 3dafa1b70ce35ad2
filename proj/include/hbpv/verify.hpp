#pragma once

// Seeded verification suites over random admissible inputs.  Each suite
// returns one CheckReport per identity; with zero samples every report is
// empty and passes.

#include <algorithm>
#include <array>
#include <cstdint>
#include <initializer_list>
#include <numbers>
#include <string>
#include <vector>

#include "hbpv/analysis.hpp"
#include "hbpv/integral_reps.hpp"
#include "hbpv/sampling.hpp"
#include "hbpv/triple_series.hpp"

namespace hbpv {

inline const std::vector<std::string>& verify_suite_names() {
  static const std::vector<std::string> names = {"all", "reps", "mellin", "derivative", "recursion", "bound", "kernels"};
  return names;
}

namespace sample {

/// Real parameters with b_j in [0.5, 2] and c_j in [1, 3].
inline HbParams params(SplitMix64& g) {
  HbParams q;
  q.b1 = g.uniform(0.5, 2.0);
  q.b2 = g.uniform(0.5, 2.0);
  q.b3 = g.uniform(0.5, 2.0);
  q.c1 = g.uniform(1.0, 3.0);
  q.c2 = g.uniform(1.0, 3.0);
  q.c3 = g.uniform(1.0, 3.0);
  return q;
}

/// Real point with coordinates in [-r, r]; r <= 0.06 keeps it inside half the
/// H_B region and inside the X_4 precheck.
inline Point3 point(SplitMix64& g, double r = 0.06) {
  return {g.uniform(-r, r), g.uniform(-r, r), g.uniform(-r, r)};
}

/// Complex point with moduli in [0, r] and uniform phases.
inline Point3 complex_point(SplitMix64& g, double r = 0.06) {
  auto one = [&] { return std::polar(g.uniform(0.0, r), g.uniform(-std::numbers::pi, std::numbers::pi)); };
  const Complex x = one(), y = one(), z = one();
  return {x, y, z};
}

inline Extension extension(SplitMix64& g) { return {g.uniform(0.5, 2.0), g.uniform(0.0, 1.5)}; }

}  // namespace sample

namespace detail {

inline double k_half_integer_closed_form(int k, double z) {
  const double base = std::sqrt(std::numbers::pi / (2.0 * z)) * std::exp(-z);
  switch (k) {
    case 0: return base;
    case 1: return base * (1.0 + 1.0 / z);
    case 2: return base * (1.0 + 3.0 / z + 3.0 / (z * z));
  }
  throw DomainError("closed form available for k = 0, 1, 2");
}

inline SampleRecord residual_record(std::vector<std::pair<std::string, Complex>> inputs, Complex lhs, Complex rhs) {
  SampleRecord r;
  r.inputs = std::move(inputs);
  r.lhs = lhs;
  r.rhs = rhs;
  r.residual = relative_residual(lhs, rhs);
  return r;
}

inline std::vector<CheckReport> suite_kernels(int samples, SplitMix64& g) {
  CheckReport closed("bessel_half_integer", CheckKind::Residual, 1e-12);
  CheckReport recur("bessel_recurrence", CheckKind::Residual, 1e-10);
  CheckReport bounds("bessel_bound", CheckKind::StrictBound, 1.0);
  CheckReport sym("extended_beta_symmetry", CheckKind::Residual, 1e-10);
  CheckReport red("extended_beta_nu0", CheckKind::Residual, 1e-10);
  for (int i = 0; i < samples; ++i) {
    const double z = g.uniform(0.5, 20.0);
    for (int k = 0; k <= 2; ++k)
      closed.add(residual_record({{"nu", Complex(k + 0.5)}, {"z", Complex(z)}}, bessel_k(k + 0.5, z).value,
                                 k_half_integer_closed_form(k, z)));
    const double nu = g.uniform(1.0, 5.0), zr = g.uniform(0.5, 20.0);
    const Complex kp = bessel_k(nu + 1.0, zr).value;
    SampleRecord r;
    r.inputs = {{"nu", Complex(nu)}, {"z", Complex(zr)}};
    r.lhs = kp;
    r.rhs = bessel_k(nu - 1.0, zr).value + (2.0 * nu / zr) * bessel_k(nu, zr).value;
    r.residual = std::abs(r.lhs - r.rhs) / std::abs(kp);
    recur.add(std::move(r));
    const Complex zc(g.uniform(0.05, 5.0), g.uniform(-5.0, 5.0));
    bounds.merge(bessel_bound_check(3.0 * (1.0 - g.uniform()), zc));

    const double x = g.uniform(0.5, 4.0), y = g.uniform(0.5, 4.0);
    const Extension e{g.uniform(0.1, 2.0), g.uniform(0.0, 2.0)};
    sym.add(residual_record({{"x", Complex(x)}, {"y", Complex(y)}, {"p", e.p}, {"nu", Complex(e.nu)}},
                            extended_beta(x, y, e), extended_beta(y, x, e)));
    red.add(residual_record({{"x", Complex(x)}, {"y", Complex(y)}, {"p", e.p}},
                            extended_beta(x, y, Extension{e.p, 0.0}), chaudhry_beta(x, y, e.p)));
  }
  return {closed, recur, bounds, sym, red};
}

inline std::vector<CheckReport> suite_reps(int samples, SplitMix64& g, const EngineConfig& cfg) {
  CheckReport series("rep_unit_interval_vs_series", CheckKind::Residual, 1e-6);
  CheckReport mob("rep_mobius", CheckKind::Residual, 1e-6);
  CheckReport trig("rep_trig", CheckKind::Residual, 1e-6);
  CheckReport shift("rep_trig_lambda_shift", CheckKind::Residual, 1e-6);
  CheckReport scale("rep_trig_lambda_scale", CheckKind::Residual, 1e-6);
  CheckReport shift0("rep_trig_lambda_shift_at_0", CheckKind::Residual, 1e-10);
  CheckReport scale1("rep_trig_lambda_scale_at_1", CheckKind::Residual, 1e-10);
  constexpr std::array<std::array<double, 3>, 2> mobius_params = {{{-1.0, 0.0, 1.0}, {-2.0, 1.0, 3.0}}};
  constexpr std::array<double, 2> lambdas = {0.5, 2.0};
  for (int i = 0; i < samples; ++i) {
    const auto q = sample::params(g);
    const auto e = sample::extension(g);
    const auto pt = sample::point(g);
    std::vector<std::pair<std::string, Complex>> in = {{"b1", q.b1}, {"b2", q.b2}, {"b3", q.b3}, {"c1", q.c1},
                                                       {"c2", q.c2}, {"c3", q.c3}, {"p", e.p},   {"nu", e.nu},
                                                       {"x", pt.x},  {"y", pt.y},  {"z", pt.z}};
    const Complex unit = h_b_pv_integral(RepVariant::unit_interval(), q, e, pt, cfg).value;
    series.add(residual_record(in, unit, h_b_pv(q, e, pt, cfg).value));
    const auto& m = mobius_params[static_cast<std::size_t>(i) % mobius_params.size()];
    const double lam = lambdas[static_cast<std::size_t>(i) % lambdas.size()];
    auto with = [&](std::initializer_list<std::pair<std::string, Complex>> extra) {
      auto v = in;
      v.insert(v.end(), extra);
      return v;
    };
    mob.add(residual_record(with({{"gamma", m[0]}, {"alpha", m[1]}, {"beta", m[2]}}),
                            h_b_pv_integral(RepVariant::mobius(m[0], m[1], m[2]), q, e, pt, cfg).value, unit));
    const Complex tr = h_b_pv_integral(RepVariant::trig(), q, e, pt, cfg).value;
    trig.add(residual_record(in, tr, unit));
    shift.add(residual_record(with({{"lambda", lam}}),
                              h_b_pv_integral(RepVariant::trig_lambda_shift(lam), q, e, pt, cfg).value, unit));
    scale.add(residual_record(with({{"lambda", lam}}),
                              h_b_pv_integral(RepVariant::trig_lambda_scale(lam), q, e, pt, cfg).value, unit));
    shift0.add(residual_record(in, h_b_pv_integral(RepVariant::trig_lambda_shift(0.0), q, e, pt, cfg).value, tr));
    scale1.add(residual_record(in, h_b_pv_integral(RepVariant::trig_lambda_scale(1.0), q, e, pt, cfg).value, tr));
  }
  return {series, mob, trig, shift, scale, shift0, scale1};
}

inline std::vector<CheckReport> suite_mellin(int samples, SplitMix64& g, const EngineConfig& cfg) {
  constexpr std::array<double, 3> orders = {0.25, 0.5, 1.0};
  CheckReport mel("mellin", CheckKind::Residual, 1e-5);
  CheckReport gam("mellin_gamma", CheckKind::Residual, 1e-8);
  for (int i = 0; i < samples; ++i) {
    const double nu = orders[static_cast<std::size_t>(i) % orders.size()];
    const double s = nu + ((i / 3) % 2 == 0 ? 0.5 : 1.5);
    mel.merge(mellin_check(sample::params(g), nu, sample::point(g, 0.03), s, cfg));
  }
  if (samples > 0) gam.merge(mellin_gamma_check(2.0, 0.5));
  return {mel, gam};
}

inline std::vector<CheckReport> suite_derivative(int samples, SplitMix64& g, const EngineConfig& cfg) {
  std::vector<std::array<int, 3>> orders;
  for (int M = 0; M <= 3; ++M)
    for (int N = 0; N <= 3; ++N)
      for (int K = 0; K <= 3; ++K)
        if (M + N + K >= 1 && M + N + K <= 3) orders.push_back({M, N, K});
  CheckReport der("derivative", CheckKind::Residual, 1e-5);
  CheckReport rich("derivative_richardson_gain", CheckKind::Residual, 0.5);
  for (int i = 0; i < samples; ++i) {
    const auto& o = orders[g.below(orders.size())];
    const auto rep = derivative_check(sample::params(g), sample::extension(g), sample::point(g, 0.03), o[0], o[1], o[2],
                                      cfg);
    der.merge(rep);
    // extrapolated error must be at most half the plain central-difference error
    const auto& d = rep.details.front();
    SampleRecord r = d;
    const double plain = d.notes.front().second;
    r.residual = plain > 0.0 ? d.residual / plain : 0.0;
    rich.add(std::move(r));
  }
  return {der, rich};
}

inline std::vector<CheckReport> suite_recursion(int samples, SplitMix64& g, const EngineConfig& cfg) {
  CheckReport b3("recursion_b3", CheckKind::Residual, 1e-9);
  CheckReport b3m("recursion_b3_multi", CheckKind::Residual, 1e-9);
  CheckReport c1("recursion_c1", CheckKind::Residual, 1e-9);
  CheckReport c2("recursion_c2", CheckKind::Residual, 1e-9);
  CheckReport c3("recursion_c3", CheckKind::Residual, 1e-9);
  for (int i = 0; i < samples; ++i) {
    const auto q = sample::params(g);
    const auto e = sample::extension(g);
    const auto pt = sample::point(g);
    b3.merge(recursion_b3_check(q, e, pt, cfg));
    b3m.merge(recursion_b3_multi_check(q, e, pt, 3, cfg));
    c1.merge(recursion_c_check(q, e, pt, 1, cfg));
    c2.merge(recursion_c_check(q, e, pt, 2, cfg));
    c3.merge(recursion_c_check(q, e, pt, 3, cfg));
  }
  return {b3, b3m, c1, c2, c3};
}

inline std::vector<CheckReport> suite_bound(int samples, SplitMix64& g, const EngineConfig& cfg) {
  CheckReport b("bound", CheckKind::StrictBound, 1.0);
  CheckReport kb("bessel_bound", CheckKind::StrictBound, 1.0);
  for (int i = 0; i < samples; ++i) {
    const auto q = sample::params(g);
    const Extension e{Complex(g.uniform(0.1, 2.0), g.uniform(-2.0, 2.0)), 2.0 * (1.0 - g.uniform())};
    b.merge(bound_check(q, e, sample::complex_point(g), cfg));
    kb.merge(bessel_bound_check(3.0 * (1.0 - g.uniform()), Complex(g.uniform(0.05, 5.0), g.uniform(-5.0, 5.0))));
  }
  return {b, kb};
}

}  // namespace detail

/// Runs one named suite (or "all") with `samples` draws from a SplitMix64
/// stream seeded by `seed`.
inline std::vector<CheckReport> run_verify(const std::string& suite, int samples, std::uint64_t seed,
                                           const EngineConfig& cfg = {}) {
  if (samples < 0) throw DomainError("samples must be nonnegative");
  SplitMix64 g(seed);
  std::vector<CheckReport> out;
  auto append = [&](std::vector<CheckReport> v) { out.insert(out.end(), v.begin(), v.end()); };
  const auto& names = verify_suite_names();
  if (std::find(names.begin(), names.end(), suite) == names.end())
    throw DomainError("unknown verify suite: " + suite);
  const bool all = suite == "all";
  if (all || suite == "kernels") append(detail::suite_kernels(samples, g));
  if (all || suite == "reps") append(detail::suite_reps(samples, g, cfg));
  if (all || suite == "mellin") append(detail::suite_mellin(samples, g, cfg));
  if (all || suite == "derivative") append(detail::suite_derivative(samples, g, cfg));
  if (all || suite == "recursion") append(detail::suite_recursion(samples, g, cfg));
  if (all || suite == "bound") append(detail::suite_bound(samples, g, cfg));
  return out;
}

}  // namespace hbpv

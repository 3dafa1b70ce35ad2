#include <cmath>
#include <vector>

#include "test_util.hpp"

namespace hbpv {
namespace {

using Wide = std::complex<long double>;

Wide wide(Complex v) { return {v.real(), v.imag()}; }

std::vector<Wide> rising(Complex a, int len) {
  std::vector<Wide> r(static_cast<std::size_t>(len) + 1, 1.0L);
  for (int j = 1; j <= len; ++j) r[j] = r[j - 1] * (wide(a) + static_cast<long double>(j - 1));
  return r;
}

// v^j / (j! (c)_j)
std::vector<Wide> scaled_powers(Complex v, Complex c, int cap) {
  std::vector<Wide> r(static_cast<std::size_t>(cap) + 1, 1.0L);
  for (int j = 1; j <= cap; ++j)
    r[j] = r[j - 1] * wide(v) / (static_cast<long double>(j) * (wide(c) + static_cast<long double>(j - 1)));
  return r;
}

Complex narrow(Wide v) { return {static_cast<double>(v.real()), static_cast<double>(v.imag())}; }

// Full-cube sums over 0 <= m, n, k <= cap in extended precision.
Complex h_b_cube(const HbParams& q, const Point3& pt, int cap) {
  const auto b1 = rising(q.b1, 2 * cap), b2 = rising(q.b2, 2 * cap), b3 = rising(q.b3, 2 * cap);
  const auto xs = scaled_powers(pt.x, q.c1, cap), ys = scaled_powers(pt.y, q.c2, cap),
             zs = scaled_powers(pt.z, q.c3, cap);
  Wide s = 0.0L;
  for (int m = 0; m <= cap; ++m)
    for (int n = 0; n <= cap; ++n)
      for (int k = 0; k <= cap; ++k) s += b1[m + k] * b2[m + n] * b3[n + k] * xs[m] * ys[n] * zs[k];
  return narrow(s);
}

Complex h_b_a_cube(const HbParams& q, double a, const Point3& pt, int cap) {
  const auto sum12 = rising(q.b1 + q.b2, 4 * cap), b3 = rising(q.b3, 2 * cap);
  const auto xs = scaled_powers(pt.x, q.c1, cap), ys = scaled_powers(pt.y, q.c2, cap),
             zs = scaled_powers(pt.z, q.c3, cap);
  const long double norm = std::exp(std::lgamma(q.b1.real() + q.b2.real()) - std::lgamma(q.b1.real()) -
                                    std::lgamma(q.b2.real()));
  Wide s = 0.0L;
  for (int m = 0; m <= cap; ++m)
    for (int n = 0; n <= cap; ++n)
      for (int k = 0; k <= cap; ++k) {
        const double x = q.b1.real() + a + m + k, y = q.b2.real() + a + m + n;
        const long double beta_val = std::exp(std::lgamma(x) + std::lgamma(y) - std::lgamma(x + y));
        s += sum12[2 * m + n + k] * b3[n + k] * beta_val * norm * xs[m] * ys[n] * zs[k];
      }
  return narrow(s);
}

Complex x4_cube(Complex b1, Complex b2, Complex c1, Complex c2, Complex c3, const Point3& pt, int cap) {
  const auto r1 = rising(b1, 4 * cap), r2 = rising(b2, 2 * cap);
  const auto xs = scaled_powers(pt.x, c1, cap), ys = scaled_powers(pt.y, c2, cap), zs = scaled_powers(pt.z, c3, cap);
  Wide s = 0.0L;
  for (int m = 0; m <= cap; ++m)
    for (int n = 0; n <= cap; ++n)
      for (int k = 0; k <= cap; ++k) s += r1[2 * m + n + k] * r2[n + k] * xs[m] * ys[n] * zs[k];
  return narrow(s);
}

const HbParams kUnitParams{1.0, 1.0, 1.0, 2.0, 2.0, 2.0};

TEST(Region, HbExamples) {
  EXPECT_TRUE(in_region_hb({0.0, 0.0, 0.0}));
  EXPECT_TRUE(in_region_hb({0.25, 0.25, 0.0625}));
  EXPECT_NEAR(hb_region_measure({0.25, 0.25, 0.0625}), 0.6875, 1e-15);
  EXPECT_FALSE(in_region_hb({0.5, 0.5, 0.5}));
  EXPECT_FALSE(in_region_hb({1.0, 0.0, 0.0}));  // boundary excluded
  EXPECT_TRUE(in_region_hb({Complex(0.0, 0.3), Complex(-0.2, 0.1), 0.1}));
}

TEST(Region, X4Examples) {
  EXPECT_TRUE(in_region_x4({0.0, 0.0, 0.0}));
  EXPECT_TRUE(in_region_x4({0.04, 0.09, 0.01}));
  EXPECT_NEAR(x4_region_measure({0.04, 0.09, 0.01}), 0.56, 1e-15);
  EXPECT_FALSE(in_region_x4({0.25, 0.25, 0.0}));
}

TEST(EngineConfigTest, Validation) {
  EngineConfig c;
  EXPECT_NO_THROW(c.validate());
  c.stall_shells = 0;
  EXPECT_THROW(c.validate(), DomainError);
  c = {};
  c.series_tol = 0.0;
  EXPECT_THROW(c.validate(), DomainError);
  c = {};
  c.max_shell = 0;
  EXPECT_THROW(c.validate(), DomainError);
}

TEST(SumShells, ExponentialProduct) {
  const double x = 0.1, y = 0.2, z = 0.3;
  const auto r = sum_shells(
      [&](int m, int n, int k) {
        return std::pow(x, m) * std::pow(y, n) * std::pow(z, k) /
               (std::tgamma(m + 1.0) * std::tgamma(n + 1.0) * std::tgamma(k + 1.0));
      },
      EngineConfig{});
  EXPECT_TRUE(r.converged);
  EXPECT_REL(r.value, std::exp(0.6), 1e-13);
}

TEST(SumShells, SingleTerm) {
  const auto r = sum_shells([](int m, int n, int k) { return m + n + k == 0 ? 7.0 : 0.0; }, EngineConfig{});
  EXPECT_TRUE(r.converged);
  EXPECT_EQ(r.value, Complex(7.0));
  EXPECT_LE(r.shells_used, 5);
  EXPECT_EQ(r.tail_estimate, 0.0);
}

TEST(SumShells, GeometricProduct) {
  const auto r = sum_shells(
      [](int m, int n, int k) { return std::pow(0.2, m) * std::pow(0.3, n) * std::pow(0.1, k); }, EngineConfig{});
  EXPECT_TRUE(r.converged);
  EXPECT_REL(r.value, 1.0 / (0.8 * 0.7 * 0.9), 1e-12);
}

TEST(SumShells, NonConvergenceFlagAtShellCap) {
  EngineConfig cfg;
  cfg.max_shell = 10;
  const auto r = sum_shells([](int, int, int) { return 0.5; }, cfg);
  EXPECT_FALSE(r.converged);
  EXPECT_EQ(r.shells_used, 10);
}

TEST(SumShells, NonFiniteTermThrows) {
  EXPECT_THROW(sum_shells([](int m, int, int) { return m == 2 ? std::nan("") : 0.1; }, EngineConfig{}),
               NumericalError);
}

TEST(HB, OriginIsOne) {
  const HbParams q{Complex(0.3, 1.0), 2.0, -0.5, 1.5, Complex(2.0, -1.0), 0.7};
  EXPECT_EQ(h_b(q, {0.0, 0.0, 0.0}).value, Complex(1.0));
}

TEST(HB, FullCube) {
  const Point3 pt{0.05, 0.05, 0.05};
  const auto r = h_b(kUnitParams, pt);
  EXPECT_TRUE(r.converged);
  EXPECT_REL(r.value, h_b_cube(kUnitParams, pt, 60), 1e-12);
}

TEST(HB, FullCubeComplex) {
  const HbParams q{Complex(0.8, 0.5), 1.4, Complex(1.9, -0.3), Complex(1.2, 0.4), 2.6, 1.7};
  const Point3 pt{Complex(0.1, -0.05), Complex(-0.08, 0.02), Complex(0.0, 0.12)};
  EXPECT_REL(h_b(q, pt).value, h_b_cube(q, pt, 80), 1e-12);
}

TEST(HB, PrintedFormsAgree) {
  const HbParams q{0.85, 0.9, 1.1, 1.3, 1.7, 2.1};
  const Point3 pt{0.04, 0.06, 0.05};
  EXPECT_REL(h_b(q, pt).value, h_b_beta_form(q, pt).value, 1e-13);
}

TEST(HB, RegionAndParameterErrors) {
  EXPECT_THROW(h_b(kUnitParams, {0.5, 0.5, 0.5}), RegionError);
  HbParams bad = kUnitParams;
  bad.c2 = -1.0;
  EXPECT_THROW(h_b(bad, {0.1, 0.1, 0.1}), DomainError);
}

TEST(HBA, ZeroShiftIsHb) {
  const Point3 pt{0.05, 0.05, 0.05};
  EXPECT_REL(h_b_a(kUnitParams, 0.0, pt).value, h_b(kUnitParams, pt).value, 1e-13);
}

TEST(HBA, OriginIsBetaRatio) {
  const HbParams q{1.3, 0.6, 2.0, 1.0, 1.0, 1.0};
  const Complex b1 = q.b1, b2 = q.b2;
  EXPECT_REL(h_b_a(q, 1.0, {0.0, 0.0, 0.0}).value, b1 * b2 / ((b1 + b2) * (b1 + b2 + 1.0)), 1e-13);
}

TEST(HBA, FullCube) {
  const Point3 pt{0.03, 0.04, 0.05};
  EXPECT_REL(h_b_a(kUnitParams, 0.5, pt).value, h_b_a_cube(kUnitParams, 0.5, pt, 50), 1e-12);
}

TEST(X4, OriginIsOne) { EXPECT_EQ(x4(1.3, 0.4, 2.0, 1.1, 0.9, {0.0, 0.0, 0.0}).value, Complex(1.0)); }

TEST(X4, FullCube) {
  const Point3 pt{0.02, 0.05, 0.05};
  EXPECT_REL(x4(1.0, 1.0, 2.0, 2.0, 2.0, pt).value, x4_cube(1.0, 1.0, 2.0, 2.0, 2.0, pt, 60), 1e-12);
}

TEST(X4, DegeneratesToSingleSeries) {
  const double b1 = 1.2, c1 = 1.9, x = 0.05;
  double s = 0.0, term = 1.0;
  for (int m = 0; m < 200; ++m) {
    s += term;
    // (b1)_{2m+2} / (b1)_{2m} = (b1+2m)(b1+2m+1)
    term *= (b1 + 2 * m) * (b1 + 2 * m + 1) / ((c1 + m) * (m + 1)) * x;
  }
  EXPECT_REL(x4(b1, 0.7, c1, 1.0, 1.0, {x, 0.0, 0.0}).value, s, 1e-13);
}

TEST(X4, RegionError) { EXPECT_THROW(x4(1.0, 1.0, 2.0, 2.0, 2.0, {0.25, 0.25, 0.0}), RegionError); }

TEST(HBPV, OriginIsBetaRatio) {
  const HbParams q{1.4, 0.8, 1.0, 2.0, 2.0, 2.0};
  const Extension e{0.6, 0.3};
  EXPECT_REL(h_b_pv(q, e, {0.0, 0.0, 0.0}).value, extended_beta(1.4, 0.8, e) / beta(1.4, 0.8), 1e-13);
}

TEST(HBPV, NuZeroIsChaudhrySeries) {
  const Point3 pt{0.05, 0.05, 0.05};
  EXPECT_REL(h_b_pv(kUnitParams, Extension{0.5, 0.0}, pt).value, h_b_chaudhry(kUnitParams, 0.5, pt).value, 1e-10);
}

TEST(HBPV, OracleValue) {
  const auto r = h_b_pv(kUnitParams, Extension{1.0, 0.5}, {0.04, 0.04, 0.04});
  EXPECT_TRUE(r.converged);
  EXPECT_REL(r.value, 0.0081578448661304903578131, 1e-12);
}

TEST(HBPV, SharedCacheGivesSameValue) {
  const Extension e{0.9, 0.4};
  BetaCache cache(kUnitParams.b1, kUnitParams.b2, e);
  const Point3 pt{0.03, -0.02, 0.05};
  EXPECT_EQ(h_b_pv(kUnitParams, cache, pt).value, h_b_pv(kUnitParams, e, pt).value);
}

TEST(HBPV, RequiresPositiveB1B2) {
  HbParams q = kUnitParams;
  q.b2 = -0.5;
  EXPECT_THROW(h_b_pv(q, Extension{1.0, 0.5}, {0.01, 0.01, 0.01}), DomainError);
}

TEST(SeriesProperties, TermwiseFormsAgreeThroughShellTen) {
  SplitMix64 g(41);
  for (int s = 0; s < 10; ++s) {
    HbParams q = sample::params(g);
    q.b2 += Complex(0.0, g.uniform(-1.0, 1.0));
    q.c3 += Complex(0.0, g.uniform(-1.0, 1.0));
    const auto pt = sample::complex_point(g, 0.3);
    for (int N = 0; N <= 10; ++N)
      for (int m = 0; m <= N; ++m)
        for (int n = 0; m + n <= N; ++n)
          EXPECT_REL(h_b_term(q, pt, m, n, N - m - n), h_b_term_beta_form(q, pt, m, n, N - m - n), 1e-13);
  }
}

TEST(SeriesProperties, ReductionsOnSamples) {
  SplitMix64 g(43);
  for (int s = 0; s < 10; ++s) {
    const auto q = sample::params(g);
    const auto pt = sample::complex_point(g, 0.15);
    EXPECT_REL(h_b_a(q, 0.0, pt).value, h_b(q, pt).value, 1e-10);
    const Complex p(g.uniform(0.2, 2.0), g.uniform(-1.0, 1.0));
    EXPECT_REL(h_b_pv(q, Extension{p, 0.0}, pt).value, h_b_chaudhry(q, p, pt).value, 1e-10);
  }
}

TEST(SeriesProperties, ShellSumsEventuallyDecrease) {
  SplitMix64 g(47);
  int checked = 0;
  for (int s = 0; s < 5; ++s) {
    const auto q = sample::params(g);
    // positive point at 0.4-0.45 of the boundary measure keeps every term positive
    const double r = g.uniform(0.12, 0.14);
    const Point3 pt{r, 0.8 * r, 0.9 * r};
    ASSERT_TRUE(in_scaled_region_hb(pt, 0.5));
    std::vector<double> mags;
    const auto term = [&](int m, int n, int k) { return h_b_term(q, pt, m, n, k); };
    const auto res = sum_shells(term, EngineConfig{}, [&](int, Complex sn) { mags.push_back(std::abs(sn)); });
    ASSERT_TRUE(res.converged);
    ASSERT_GT(mags.size(), 25u);
    for (std::size_t N = 21; N + 1 < mags.size(); ++N, ++checked) EXPECT_LT(mags[N + 1] / mags[N], 1.0) << "N=" << N;
  }
  EXPECT_GT(checked, 0);
}

TEST(SeriesProperties, ConvergedTailWithinTolerance) {
  SplitMix64 g(53);
  for (int s = 0; s < 10; ++s) {
    const auto q = sample::params(g);
    const auto pt = sample::complex_point(g, 0.2);
    const EngineConfig cfg;
    const auto r = h_b_pv(q, sample::extension(g), pt, cfg);
    ASSERT_TRUE(r.converged);
    EXPECT_LE(r.tail_estimate, cfg.series_tol * (1.0 + std::abs(r.value)));
  }
}

TEST(SeriesProperties, TighterToleranceStaysWithinTail) {
  SplitMix64 g(59);
  for (int s = 0; s < 10; ++s) {
    const auto q = sample::params(g);
    const auto pt = sample::complex_point(g, 0.2);
    EngineConfig loose;
    loose.series_tol = 1e-8;
    EngineConfig tight = loose;
    tight.series_tol = loose.series_tol / 10.0;
    const auto a = h_b(q, pt, loose), b = h_b(q, pt, tight);
    ASSERT_TRUE(a.converged);
    EXPECT_LE(std::abs(a.value - b.value), 10.0 * a.tail_estimate + 1e-15) << "sample " << s;
  }
}

}  // namespace
}  // namespace hbpv

#include <cmath>
#include <numbers>

#include "test_util.hpp"

namespace hbpv {
namespace {

const HbParams kUnitParams{1.0, 1.0, 1.0, 2.0, 2.0, 2.0};
const Extension kExt{1.0, 0.5};
const Point3 kSample{0.03, 0.04, 0.02};

TEST(CheckReportTest, PassedIffWithinTolerance) {
  CheckReport r("x", CheckKind::Residual, 1e-6);
  EXPECT_TRUE(r.passed);
  SampleRecord a;
  a.residual = 1e-7;
  r.add(a);
  EXPECT_TRUE(r.passed);
  a.residual = 1e-6;
  r.add(a);
  EXPECT_TRUE(r.passed);
  a.residual = 2e-6;
  r.add(a);
  EXPECT_FALSE(r.passed);
  EXPECT_EQ(r.samples, 3);
  EXPECT_DOUBLE_EQ(r.max_rel_residual, 2e-6);
}

TEST(CheckReportTest, StrictBoundRejectsRatioOne) {
  CheckReport r("b", CheckKind::StrictBound, 1.0);
  SampleRecord a;
  a.residual = 0.999;
  r.add(a);
  EXPECT_TRUE(r.passed);
  a.residual = 1.0;
  r.add(a);
  EXPECT_FALSE(r.passed);
}

TEST(CheckReportTest, NanResidualFails) {
  CheckReport r("n", CheckKind::Residual, 1.0);
  SampleRecord a;
  a.residual = std::nan("");
  r.add(a);
  EXPECT_FALSE(r.passed);
  EXPECT_TRUE(std::isnan(r.max_rel_residual));
}

TEST(Mellin, UnitParams) {
  const auto r = mellin_check(kUnitParams, 0.5, {0.03, 0.03, 0.03}, 1.5);
  EXPECT_TRUE(r.passed);
  EXPECT_LE(r.max_rel_residual, 1e-5);
}

TEST(Mellin, OriginCollapsesToBetaRatio) {
  const HbParams q{1.4, 0.9, 1.0, 1.5, 1.5, 1.5};
  const double nu = 0.75, s = 2.0;
  const auto r = mellin_check(q, nu, {0.0, 0.0, 0.0}, s);
  EXPECT_TRUE(r.passed);
  const double front = std::pow(2.0, s - 1.0) / std::sqrt(std::numbers::pi) * std::tgamma(0.5 * (s - nu)) *
                       std::tgamma(0.5 * (s + nu + 1.0));
  EXPECT_REL(r.details.front().rhs, front * beta(1.4 + s, 0.9 + s) / beta(1.4, 0.9), 1e-12);
}

TEST(Mellin, GammaProductIdentity) {
  const auto r = mellin_gamma_check(2.0, 0.5);
  EXPECT_TRUE(r.passed);
  EXPECT_LE(r.max_rel_residual, 1e-8);
  EXPECT_REL(r.details.front().rhs, std::sqrt(2.0) * std::tgamma(0.75) * std::tgamma(1.75), 1e-13);
}

TEST(Mellin, DomainErrors) {
  EXPECT_THROW(mellin_check(kUnitParams, 0.0, kSample, 1.0), DomainError);
  EXPECT_THROW(mellin_check(kUnitParams, 0.5, kSample, 0.5), DomainError);
  EXPECT_THROW(mellin_check(kUnitParams, 0.5, {0.3, 0.3, 0.0}, 1.5), RegionError);
  EXPECT_THROW(mellin_gamma_check(0.5, 1.0), DomainError);
}

TEST(Derivative, ZeroOrderIsIdentity) {
  const auto r = derivative_check(kUnitParams, kExt, kSample, 0, 0, 0);
  EXPECT_LE(r.max_rel_residual, 1e-14);
}

TEST(Derivative, FirstOrderPrefactorAndShift) {
  const Point3 pt{0.03, 0.03, 0.03};
  const auto r = derivative_check(kUnitParams, kExt, pt, 1, 0, 0);
  EXPECT_TRUE(r.passed);
  const Complex shifted = h_b_pv(HbParams{2.0, 2.0, 1.0, 3.0, 2.0, 2.0}, kExt, pt).value;
  EXPECT_REL(r.details.front().rhs, 0.5 * shifted, 1e-12);
}

TEST(Derivative, MixedOrderResidual) {
  const auto r = derivative_check(kUnitParams, kExt, {0.03, 0.03, 0.03}, 1, 1, 0);
  EXPECT_TRUE(r.passed);
  EXPECT_LE(r.max_rel_residual, 1e-5);
}

TEST(Derivative, ThirdOrderAndRichardsonGain) {
  const HbParams q{1.3, 0.8, 1.6, 2.2, 1.4, 2.9};
  for (auto [M, N, K] : {std::array{3, 0, 0}, {0, 3, 0}, {0, 0, 3}, {1, 1, 1}, {2, 0, 1}}) {
    const auto r = derivative_check(q, kExt, kSample, M, N, K);
    EXPECT_TRUE(r.passed) << M << N << K;
    const auto& d = r.details.front();
    EXPECT_LE(d.residual, 0.5 * d.notes.front().second) << M << N << K;
  }
}

TEST(Derivative, Errors) {
  EXPECT_THROW(derivative_check(kUnitParams, kExt, kSample, 4, 0, 0), DomainError);
  EXPECT_THROW(derivative_check(kUnitParams, kExt, kSample, -1, 0, 0), DomainError);
  EXPECT_THROW(derivative_check(kUnitParams, kExt, {0.495, 0.0, 0.495}, 1, 0, 0), RegionError);
}

TEST(Recursion, B3Sample) {
  const auto r = recursion_b3_check(kUnitParams, kExt, kSample);
  EXPECT_TRUE(r.passed);
  EXPECT_LE(r.max_rel_residual, 1e-9);
}

TEST(Recursion, B3CollapsesWithoutYZ) {
  const auto r = recursion_b3_check(kUnitParams, kExt, {0.2, 0.0, 0.0});
  EXPECT_EQ(r.details.front().lhs, r.details.front().rhs);
  EXPECT_LE(recursion_b3_check(kUnitParams, kExt, {0.0, 0.0, 0.0}).max_rel_residual, 1e-15);
}

TEST(Recursion, MultiStep) {
  const auto one = recursion_b3_multi_check(kUnitParams, kExt, kSample, 1);
  const auto single = recursion_b3_check(kUnitParams, kExt, kSample);
  EXPECT_EQ(one.details.front().lhs, single.details.front().lhs);
  EXPECT_EQ(one.details.front().rhs, single.details.front().rhs);
  EXPECT_LE(recursion_b3_multi_check(kUnitParams, kExt, kSample, 3).max_rel_residual, 1e-8);
  EXPECT_LE(recursion_b3_multi_check(kUnitParams, kExt, {0.0, 0.0, 0.0}, 3).max_rel_residual, 1e-15);
  EXPECT_THROW(recursion_b3_multi_check(kUnitParams, kExt, kSample, 0), DomainError);
}

TEST(Recursion, DenominatorRecursions) {
  for (int j = 1; j <= 3; ++j) {
    const auto r = recursion_c_check(kUnitParams, kExt, kSample, j);
    EXPECT_TRUE(r.passed) << "c" << j;
    EXPECT_LE(r.max_rel_residual, 1e-9);
    EXPECT_LE(recursion_c_check(kUnitParams, kExt, {0.0, 0.0, 0.0}, j).max_rel_residual, 1e-15);
  }
  EXPECT_THROW(recursion_c_check(kUnitParams, kExt, kSample, 4), DomainError);
}

TEST(Recursion, C1WithoutXIsIndependentOfC1) {
  const Point3 pt{0.0, 0.05, 0.04};
  const auto r = recursion_c1_check(kUnitParams, kExt, pt);
  EXPECT_LE(r.max_rel_residual, 1e-14);
  HbParams shifted = kUnitParams;
  shifted.c1 += 1.0;
  EXPECT_REL(h_b_pv(kUnitParams, kExt, pt).value, h_b_pv(shifted, kExt, pt).value, 1e-14);
}

TEST(Recursion, RandomSamples) {
  SplitMix64 g(71);
  for (int s = 0; s < 5; ++s) {
    const auto q = sample::params(g);
    const auto e = sample::extension(g);
    const auto pt = sample::complex_point(g);
    EXPECT_TRUE(recursion_b3_multi_check(q, e, pt, 2).passed);
    for (int j = 1; j <= 3; ++j) EXPECT_TRUE(recursion_c_check(q, e, pt, j).passed) << "c" << j;
  }
}

TEST(Bound, OriginMatchesDirectInequality) {
  const HbParams q{1.3, 0.7, 1.0, 1.0, 1.0, 1.0};
  const double p = 0.8, nu = 0.6;
  const auto r = bound_check(q, Extension{p, nu}, {0.0, 0.0, 0.0});
  EXPECT_TRUE(r.passed);
  const double direct = std::abs(extended_beta(1.3, 0.7, Extension{p, nu}));
  const double rhs = std::pow(2.0, nu) * std::pow(p, -nu) * std::tgamma(nu + 0.5) / std::sqrt(std::numbers::pi) *
                     beta(1.3 + nu, 0.7 + nu).real();
  EXPECT_LT(direct, rhs);
  EXPECT_REL(r.details.front().rhs * beta(1.3, 0.7), rhs, 1e-12);
  EXPECT_REL(r.details.front().residual, direct / rhs, 1e-12);
}

TEST(Bound, ComplexExample) {
  const auto r = bound_check(kUnitParams, Extension{Complex(0.5, 0.5), 0.5},
                             {Complex(0.0, 0.02), 0.03, -0.02});
  EXPECT_TRUE(r.passed);
  EXPECT_LT(r.max_rel_residual, 1.0);
}

TEST(Bound, RhsGrowsAsRealPartShrinks) {
  const Point3 pt{0.02, 0.03, 0.01};
  double prev = 0.0;
  for (double re : {1.0, 0.8, 0.6, 0.4, 0.2}) {
    const Complex p = std::polar(1.0, std::acos(re));
    const double rhs = std::abs(bound_check(kUnitParams, Extension{p, 0.5}, pt).details.front().rhs);
    EXPECT_GT(rhs, prev);
    prev = rhs;
  }
}

TEST(Bound, Errors) {
  HbParams q = kUnitParams;
  q.b3 = Complex(1.0, 0.1);
  EXPECT_THROW(bound_check(q, kExt, kSample), DomainError);
  EXPECT_THROW(bound_check(kUnitParams, Extension{1.0, 0.0}, kSample), DomainError);
  EXPECT_THROW(bessel_bound_check(0.0, 1.0), DomainError);
}

TEST(Verify, EverySuitePassesOnSmallSamples) {
  for (const auto& suite : verify_suite_names()) {
    if (suite == "all") continue;
    for (const auto& r : run_verify(suite, 2, 9)) EXPECT_TRUE(r.passed) << suite << "/" << r.name;
  }
}

TEST(Verify, EmptyRunPasses) {
  const auto reports = run_verify("all", 0, 1);
  EXPECT_FALSE(reports.empty());
  for (const auto& r : reports) {
    EXPECT_TRUE(r.passed);
    EXPECT_EQ(r.samples, 0);
  }
}

TEST(Verify, SeededRunsRepeat) {
  const auto a = run_verify("recursion", 2, 7), b = run_verify("recursion", 2, 7);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].max_rel_residual, b[i].max_rel_residual);
}

TEST(Verify, UnknownSuiteAndNegativeSamples) {
  EXPECT_THROW(run_verify("nonsense", 1, 1), DomainError);
  EXPECT_THROW(run_verify("all", -1, 1), DomainError);
}

TEST(Sampling, SplitMix64ReferenceOutputs) {
  // first outputs for seed 0 published with the generator
  SplitMix64 g(0);
  EXPECT_EQ(g.next(), 0xE220A8397B1DCDAFULL);
  EXPECT_EQ(g.next(), 0x6E789E6AA1B965F4ULL);
  EXPECT_EQ(g.next(), 0x06C45D188009454FULL);
  SplitMix64 h(42);
  for (int i = 0; i < 1000; ++i) {
    const double u = h.uniform();
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
  }
}

}  // namespace
}  // namespace hbpv

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "disclab/spaces.hpp"

using namespace disclab;

namespace {

double beta_form(std::size_t n, double p, double alpha) {
  return std::pow((alpha + 1.0) * std::beta(alpha + 1.0, 0.5 * static_cast<double>(n) * p + 1.0), 1.0 / p);
}

}  // namespace

TEST(Spaces, ValidationAndJson) {
  EXPECT_THROW(validate(SpaceSpec{DirichletType{2.0, 3.5}}), DomainError);
  EXPECT_THROW(validate(SpaceSpec{WeightedBergman{2.0, -1.0}}), DomainError);
  EXPECT_THROW(validate(SpaceSpec{Hardy{0.5}}), DomainError);
  for (SpaceSpec s : {SpaceSpec{WeightedHardy{-0.5}}, SpaceSpec{Hardy{3}}, SpaceSpec{WeightedBergman{2, 1}},
                      SpaceSpec{DirichletType{3, 2}}}) {
    EXPECT_EQ(to_json(space_from_json(to_json(s))), to_json(s));
  }
}

TEST(SNu, CoefficientNorm) {
  PowerSeries f({3.0, {0.0, 4.0}});
  EXPECT_DOUBLE_EQ(s_nu_norm(f, 0.0), 5.0);
  EXPECT_NEAR(s_nu_norm(f, 0.5), std::sqrt(9.0 + 16.0 * 2.0), 1e-14);
  EXPECT_NEAR(s_nu_norm(PowerSeries::monomial(3), -1.0), 0.25, 1e-15);
}

TEST(SNu, LacunaryNormOverflowIsRangeError) {
  PrecisionScope s(128);
  LacunarySeries f({{Real(1), BigInt(10)}});
  EXPECT_NEAR(s_nu_norm_lacunary(f, Real(-0.5)).to_double(), 1.0 / std::sqrt(11.0), 1e-15);
}

class BergmanBeta : public ::testing::TestWithParam<std::tuple<int, double, double>> {};

TEST_P(BergmanBeta, MonomialsMatchBetaClosedForm) {
  auto [n, p, alpha] = GetParam();
  QuadratureConfig cfg;
  cfg.tolerance = 1e-10;
  NormReport r = bergman_norm(PowerSeries::monomial(static_cast<std::size_t>(n)), p, alpha, cfg);
  EXPECT_NEAR(r.value, beta_form(static_cast<std::size_t>(n), p, alpha), 1e-8);
}

INSTANTIATE_TEST_SUITE_P(Grid, BergmanBeta,
                         ::testing::Combine(::testing::Range(0, 9), ::testing::Values(2.0, 3.0),
                                            ::testing::Values(0.0, 1.0, 2.0)));

TEST(Bergman, NegativeAlphaEndpointSingularity) {
  // (alpha+1) B(alpha+1, 2) for f = z, p = 2, alpha = -0.5
  NormReport r = bergman_norm(PowerSeries::monomial(1), 2.0, -0.5);
  EXPECT_NEAR(r.value, beta_form(1, 2.0, -0.5), 1e-8);
}

TEST(Bergman, HilbertCaseMatchesCoefficientFormula) {
  // ||f||^2_{A^2_alpha} = sum |a_n|^2 (alpha+1) B(alpha+1, n+1)
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int t = 0; t < 5; ++t) {
    std::vector<std::complex<double>> a(8);
    for (auto& c : a) c = {u(rng), u(rng)};
    PowerSeries f(a);
    double alpha = 0.5 * t;
    double sq = 0.0;
    for (std::size_t n = 0; n < a.size(); ++n) sq += std::norm(a[n]) * std::pow(beta_form(n, 2.0, alpha), 2.0);
    EXPECT_NEAR(bergman_norm(f, 2.0, alpha).value, std::sqrt(sq), 1e-8);
  }
}

TEST(Dirichlet, MonomialClosedForm) {
  for (std::size_t n = 1; n <= 8; ++n) {
    // 2 * 2 n^2 int_0^1 (1 - r^2) r^{2n-1} dr = 2n / (n + 1), checked with mpmath quad
    double expected = std::sqrt(2.0 * static_cast<double>(n) / static_cast<double>(n + 1));
    EXPECT_NEAR(dirichlet_norm(PowerSeries::monomial(n), 2.0, 1.0).value, expected, 1e-8);
  }
  EXPECT_DOUBLE_EQ(dirichlet_norm(PowerSeries::constant({3.0, 4.0}), 3.0, 2.0).value, 5.0);
}

TEST(Bergman, ZeroFunctionAndValidation) {
  EXPECT_EQ(bergman_norm(PowerSeries(), 2.0, 0.0).value, 0.0);
  EXPECT_THROW(bergman_norm(PowerSeries::monomial(1), 0.5, 0.0), DomainError);
  QuadratureConfig bad;
  bad.tolerance = 0.0;
  EXPECT_THROW(bergman_norm(PowerSeries::monomial(1), 2.0, 0.0, bad), DomainError);
}

TEST(Bergman, UnreachableToleranceReportsBestValue) {
  QuadratureConfig cfg;
  cfg.tolerance = 1e-300;
  cfg.refinement_limit = 1;
  try {
    bergman_norm(PowerSeries({1.0, 0.3, -0.2}), 3.0, 1.0, cfg);
    FAIL() << "expected ToleranceNotMet";
  } catch (const ToleranceNotMet& e) {
    EXPECT_GT(e.best(), 0.0);
  }
}

TEST(CircleMean, MatchesParseval) {
  PowerSeries f({1.0, 2.0, {0.0, -1.0}});
  const double r = 0.75;
  double expected = std::sqrt(1.0 + 4.0 * r * r + std::pow(r, 4));
  EXPECT_NEAR(circle_mean(f, 2.0, 0.25, 64), expected, 1e-13);
  EXPECT_THROW(circle_mean(f, 2.0, 0.25, 1), DomainError);
}

TEST(Norm, DispatchCoversEverySpace) {
  PowerSeries f = PowerSeries::monomial(2);
  EXPECT_NEAR(norm(f, WeightedHardy{0.5}).value, std::sqrt(3.0), 1e-14);
  EXPECT_NEAR(norm(f, Hardy{2}, {}, 0.5).value, 0.25, 1e-14);
  EXPECT_THROW(norm(f, Hardy{2}), DomainError);
  EXPECT_NEAR(norm(f, WeightedBergman{2, 0}).value, beta_form(2, 2, 0), 1e-8);
  EXPECT_NEAR(norm(f, DirichletType{2, 1}).value, std::sqrt(4.0 / 3.0), 1e-8);
  nlohmann::json j = to_json(norm(f, DirichletType{2, 1}));
  EXPECT_EQ(j["space"], "dirichlet");
  EXPECT_TRUE(j.contains("quadrature"));
}

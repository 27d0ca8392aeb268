#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "disclab/series.hpp"

using namespace disclab;

namespace {

PowerSeries random_poly(std::mt19937_64& rng, std::size_t degree) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<std::complex<double>> a(degree + 1);
  for (auto& c : a) c = {u(rng), u(rng)};
  return PowerSeries(std::move(a));
}

}  // namespace

TEST(DiscPoint, RejectsGapOutsideUnitInterval) {
  EXPECT_THROW(DiscPoint(Real(0), Real(0)), DomainError);
  EXPECT_THROW(DiscPoint(Real(1.5), Real(0)), DomainError);
  EXPECT_NO_THROW(DiscPoint(Real(1), Real(0)));
}

TEST(PowerSeries, ArithmeticAndDerivative) {
  PowerSeries f({1.0, 2.0, 3.0});
  PowerSeries g = PowerSeries::monomial(4, {0.0, 1.0});
  PowerSeries h = f + g;
  EXPECT_EQ(h.degree(), 4u);
  EXPECT_EQ(h.at(4), std::complex<double>(0.0, 1.0));
  EXPECT_TRUE((f - f).is_zero());
  PowerSeries d = derivative(f);
  ASSERT_EQ(d.coefficients.size(), 2u);
  EXPECT_EQ(d.at(0), 2.0);
  EXPECT_EQ(d.at(1), 6.0);
  EXPECT_TRUE(derivative(PowerSeries::constant(5.0)).coefficients.empty());
}

TEST(Eval, MatchesDirectSummation) {
  std::mt19937_64 rng(7);
  PrecisionScope s(256);
  for (int trial = 0; trial < 50; ++trial) {
    PowerSeries f = random_poly(rng, trial % 15);
    double gap = 0.05 + 0.9 * std::uniform_real_distribution<double>()(rng);
    double angle = 6.0 * std::uniform_real_distribution<double>()(rng);
    std::complex<long double> direct = 0.0L;
    for (std::size_t n = 0; n < f.coefficients.size(); ++n) {
      direct += std::complex<long double>(f.coefficients[n]) *
                std::pow(std::polar<long double>(1.0L - gap, angle), static_cast<int>(n));
    }
    ComplexReal v = eval(f, DiscPoint(Real(gap), Real(angle)));
    EXPECT_NEAR(v.re.to_double(), static_cast<double>(direct.real()), 1e-13);
    EXPECT_NEAR(v.im.to_double(), static_cast<double>(direct.imag()), 1e-13);
  }
}

TEST(Eval, LacunaryMatchesReference) {
  PrecisionScope s(256);
  LacunarySeries f({{Real(2), BigInt(2)}, {Real(5), BigInt(100)}});
  ComplexReal v = eval_lacunary(f, DiscPoint(Real::parse("2.164e-3"), Real(1)));
  // reference: 30-digit evaluation of |2 z^2 + 5 z^100|
  EXPECT_EQ(v.modulus().to_string(25), "2.652916846154864514483955");
}

TEST(Eval, HugeExponentPhaseIsExact) {
  PrecisionScope s(256);
  LacunarySeries f({{Real(1), BigInt("100000000000000000")}});
  ComplexReal v = eval_lacunary(f, DiscPoint(Real::parse("1e-18"), Real::parse("0.3")));
  EXPECT_EQ(v.re.to_string(25), "8.111468637655293451818853e-1");
  EXPECT_EQ(v.im.to_string(25), "4.00963238316591356866906e-1");
}

TEST(Eval, PowFromGapAgreesWithRepeatedProduct) {
  PrecisionScope s(256);
  Real gap = Real::parse("0.125");
  Real prod(1);
  for (int n = 0; n < 40; ++n) {
    EXPECT_LT(abs(pow_from_gap(gap, BigInt(n)) - prod), Real::parse("1e-70"));
    prod *= Real(1) - gap;
  }
  EXPECT_EQ(pow_from_gap(Real(1), BigInt(3)), Real(0));
}

TEST(LacunarySeries, ValidatesOrdering) {
  EXPECT_THROW(LacunarySeries({{Real(1), BigInt(5)}, {Real(1), BigInt(5)}}), DomainError);
  EXPECT_THROW(LacunarySeries({{Real(-1), BigInt(5)}}), DomainError);
}

TEST(CircleProfile, ResidueReductionMatchesDirectEvaluation) {
  PrecisionScope s(256);
  LacunarySeries f({{Real(2), BigInt(2)}, {Real(5), BigInt(100)}, {Real(11), BigInt(30117)}});
  const Real gap = Real::parse("2.962e-6");
  const std::size_t grid = 64;
  auto prof = circle_profile(f, gap, grid);
  for (std::size_t j = 0; j < grid; j += 7) {
    Real theta = Real(2) * Real::pi() * Real(static_cast<unsigned long>(j)) / Real(64);
    Real direct = eval_lacunary(f, DiscPoint(gap, theta)).modulus();
    EXPECT_LT(abs(prof[j] - direct), Real::parse("1e-60"));
  }
  auto fast = circle_profile_fast(MixedSeries{PowerSeries(), f}, gap, grid);
  for (std::size_t j = 0; j < grid; ++j) EXPECT_NEAR(static_cast<double>(fast[j]), prof[j].to_double(), 1e-12);
  EXPECT_THROW(circle_profile(f, gap, 0), DomainError);
}

TEST(CircleProfile, MixedHeadAndTail) {
  PrecisionScope s(256);
  MixedSeries g{PowerSeries({1.0, 0.5}), LacunarySeries({{Real(3), BigInt(10)}})};
  auto prof = circle_profile(g, Real(0.5), 16);
  for (std::size_t j = 0; j < 16; ++j) {
    double theta = 2.0 * std::numbers::pi * static_cast<double>(j) / 16.0;
    std::complex<double> z = std::polar(0.5, theta);
    double direct = std::abs(1.0 + 0.5 * z + 3.0 * std::pow(z, 10));
    EXPECT_NEAR(prof[j].to_double(), direct, 1e-14);
  }
}

TEST(CircleProfile, CsvHasHeaderAndRows) {
  PrecisionScope s(64);
  std::ostringstream os;
  write_profile_csv(os, circle_profile(PowerSeries({1.0}), Real(0.5), 4));
  std::string text = os.str();
  EXPECT_EQ(text.rfind("theta,modulus\n", 0), 0u);
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 5);
}

#include <gtest/gtest.h>

#include "disclab/real.hpp"

using namespace disclab;

TEST(Precision, ScopeRestoresPrevious) {
  const unsigned before = working_precision();
  {
    PrecisionScope s(512);
    EXPECT_EQ(working_precision(), 512u);
    EXPECT_EQ(Real(1).precision(), 512u);
  }
  EXPECT_EQ(working_precision(), before);
}

TEST(Precision, RejectsTooFewBits) { EXPECT_THROW(PrecisionScope(20), DomainError); }

TEST(Real, ParseAndRender) {
  PrecisionScope s(256);
  Real x = Real::parse("1.25e-3");
  EXPECT_EQ(x.to_string(10), "1.25e-3");
  EXPECT_EQ(Real(0).to_string(5), "0");
  EXPECT_EQ(Real(-2).to_string(5), "-2");
  EXPECT_THROW(Real::parse("abc"), DomainError);
}

TEST(Real, Log1pKeepsTinyGaps) {
  PrecisionScope s(256);
  // (1 - 1e-20)^(10^20); reference from an independent 60-digit evaluation.
  Real v = exp(Real(BigInt("100000000000000000000")) * log1p(-Real::parse("1e-20")));
  EXPECT_EQ(v.to_string(30), "3.67879441171442321593684372956e-1");
}

TEST(Real, FloorAndBigInt) {
  PrecisionScope s(128);
  EXPECT_EQ(Real::parse("-2.5").floor_to_int(), BigInt(-3));
  EXPECT_EQ(bit_length(BigInt(255)), 8u);
  EXPECT_EQ(bit_length(BigInt(0)), 0u);
  EXPECT_THROW(parse_bigint("12x"), DomainError);
}

TEST(Numeral, RationalIsExactAtEveryPrecision) {
  Numeral third("1/3");
  EXPECT_TRUE(third.is_rational_form());
  for (unsigned bits : {128u, 256u, 1024u}) {
    PrecisionScope s(bits);
    Real x = third.to_real();
    EXPECT_LT(abs(x * Real(3) - Real(1)), exp(-Real(static_cast<long>(bits) - 2) * log(Real(2))));
  }
}

TEST(Numeral, FromRealRoundsInRequestedDirection) {
  PrecisionScope s(256);
  Real x = Real::parse("2.81199");
  EXPECT_EQ(Numeral::from_real(x, 4, MPFR_RNDD).text(), "2.811");
  EXPECT_EQ(Numeral::from_real(x, 4, MPFR_RNDU).text(), "2.812");
  EXPECT_LE(Numeral::from_real(x, 4, MPFR_RNDD).to_real(), x);
}

TEST(Numeral, RejectsMalformedText) {
  EXPECT_THROW(Numeral("1/0"), DomainError);
  EXPECT_THROW(Numeral("inf"), DomainError);
  EXPECT_THROW(Numeral("x1"), DomainError);
}

TEST(Numeral, RoundTripsThroughText) {
  PrecisionScope s(256);
  Real x = Real::parse("4.935e-20");
  Numeral n = Numeral::from_real(x, 4, MPFR_RNDD);
  EXPECT_EQ(n.text(), "4.935e-20");
  EXPECT_EQ(Numeral(n.text()).to_real(), x);
}

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "disclab/construction.hpp"
#include "disclab/spaces.hpp"

using namespace disclab;

namespace {

const LacunaryWitness& six_step() {
  static const LacunaryWitness w = build(BuildConfig{});
  return w;
}

// Smallest n with c / (n+1)^{1/k} < 2^{-k/2}, i.e. n + 1 > c^k 2^{k^2/2}, for
// even k where the right side is an integer.
BigInt exponent_oracle_even(long c, unsigned k) {
  BigInt v;
  mpz_ui_pow_ui(v.get_mpz_t(), static_cast<unsigned long>(c), k);
  v <<= k * k / 2;
  return v;  // n + 1 > v  <=>  n >= v
}

}  // namespace

TEST(Build, CoefficientsFollowMinimalRule) {
  const auto& w = six_step();
  ASSERT_EQ(w.size(), 6u);
  BigInt sum = 0;
  for (std::size_t k = 1; k <= 6; ++k) {
    BigInt c = parse_bigint(w.steps[k - 1].coefficient.text());
    EXPECT_EQ(c, sum + static_cast<unsigned long>(k) + 1) << k;
    sum += c;
  }
}

TEST(Build, ExponentsAreForcedByInequalityTwo) {
  const auto& w = six_step();
  EXPECT_EQ(w.steps[1].exponent, exponent_oracle_even(5, 2));
  EXPECT_EQ(w.steps[3].exponent, exponent_oracle_even(23, 4));
  EXPECT_EQ(w.steps[5].exponent, exponent_oracle_even(95, 6));
  // odd k: compare against the real-valued threshold
  for (unsigned k : {1u, 3u, 5u}) {
    double c = std::stod(w.steps[k - 1].coefficient.text());
    long double threshold = std::pow(static_cast<long double>(c) * std::pow(2.0L, k / 2.0L), k);
    long double n = std::stold(w.steps[k - 1].exponent.get_str());
    EXPECT_GT(n + 1, threshold);
    EXPECT_LE(n, threshold);
  }
}

TEST(Build, FinalStepReachesTinyGapAndHugeExponent) {
  const auto& w = six_step();
  PrecisionScope s(256);
  EXPECT_LT(w.gap(6), Real::parse("1e-10"));
  EXPECT_GT(Real(w.steps[5].exponent), Real::parse("1e10"));
  EXPECT_EQ(w.steps[5].exponent.get_str(), "192699928576000000");
  EXPECT_EQ(w.steps[5].gap.text(), "4.935e-20");
}

TEST(Build, GapsAndExponentsAreStrictlyOrdered) {
  const auto& w = six_step();
  PrecisionScope s(256);
  for (std::size_t k = 2; k <= w.size(); ++k) {
    EXPECT_LT(w.gap(k), w.gap(k - 1) / 2 + Real::parse("1e-300"));
    EXPECT_GT(w.steps[k - 1].exponent, w.steps[k - 2].exponent);
  }
}

TEST(Verify, CertifiesEveryMarginAtTwoPrecisions) {
  VerificationReport r = verify(six_step());
  EXPECT_TRUE(r.pass);
  EXPECT_EQ(r.precision, 256u);
  EXPECT_EQ(r.check_precision, 512u);
  for (const auto& e : r.entries) {
    EXPECT_TRUE(e.certified) << check_name(e.check) << " " << e.step;
    EXPECT_EQ(e.margin.sign(), e.margin_check.sign());
  }
  EXPECT_EQ(r.first_failure(), nullptr);
}

TEST(Verify, PassesAtHigherPrecisionToo) { EXPECT_TRUE(verify(six_step(), 384).pass); }

TEST(Verify, CorruptedCoefficientFailsInequalityOne) {
  LacunaryWitness w = six_step();
  w.steps[1].coefficient = Numeral(std::string("2"));
  VerificationReport r = verify(w);
  ASSERT_FALSE(r.pass);
  EXPECT_EQ(r.first_failure()->check, Check::Ineq1);
  EXPECT_EQ(r.first_failure()->step, 2u);
}

TEST(Verify, CorruptedGapFailsInequalityFive) {
  LacunaryWitness w = six_step();
  w.steps[5].gap = Numeral(std::string("1e-15"));
  VerificationReport r = verify(w);
  ASSERT_FALSE(r.pass);
  bool saw5 = false;
  for (const auto& e : r.entries) saw5 |= e.check == Check::Ineq5 && !e.certified;
  EXPECT_TRUE(saw5);
}

TEST(MinModulus, BoundsGridMinimumAndTarget) {
  const auto& w = six_step();
  PrecisionScope s(256);
  const LacunarySeries f = w.series();
  for (std::size_t p = 1; p <= w.size(); ++p) {
    Real lb = min_modulus_lower_bound(w, p);
    EXPECT_GT(lb, Real(static_cast<unsigned long>(p)));
    auto prof = circle_profile(f, w.gap(p), 512);
    Real mn = *std::min_element(prof.begin(), prof.end(), [](const Real& a, const Real& b) { return a < b; });
    EXPECT_GE(mn, lb);
  }
  EXPECT_THROW(min_modulus_lower_bound(w, 0), DomainError);
  EXPECT_THROW(min_modulus_lower_bound(w, 7), DomainError);
}

TEST(Membership, TailAndPrefix) {
  const auto& w = six_step();
  PrecisionScope s(256);
  MembershipTail m = membership_tail(w, Real(1));
  EXPECT_EQ(m.k, 2u);
  EXPECT_LT(abs(m.partial - Real(4) / Real(9)), Real::parse("1e-70"));
  EXPECT_EQ(m.tail, Real(0.5));
  Real prev = Real::infinity();
  for (const char* nu : {"1/3", "1/2", "1"}) {
    MembershipTail t = membership_tail(w, Numeral(nu).to_real());
    EXPECT_EQ(t.tail, exp(Real(1 - static_cast<long>(t.k)) * log(Real(2))));
    EXPECT_LT(t.total, prev);
    prev = t.total;
    Real prefix = s_nu_norm_lacunary(w.series(), -Numeral(nu).to_real());
    EXPECT_LE(prefix * prefix, t.total);
  }
  EXPECT_THROW(membership_tail(w, Numeral("1/6").to_real()), NotApplicable);
}

TEST(Serialization, RoundTripIsLossless) {
  const auto& w = six_step();
  nlohmann::json j = to_json(w);
  LacunaryWitness back = witness_from_json(nlohmann::json::parse(j.dump()));
  EXPECT_EQ(to_json(back), j);
  for (std::size_t k = 0; k < w.size(); ++k) {
    EXPECT_EQ(back.steps[k].exponent, w.steps[k].exponent);
    EXPECT_EQ(back.steps[k].gap, w.steps[k].gap);
  }
}

TEST(Serialization, RejectsMalformedDocuments) {
  nlohmann::json j = to_json(six_step());
  auto broken = j;
  broken["steps"][0]["n"] = "1.5";
  EXPECT_THROW(witness_from_json(broken), DomainError);
  broken = j;
  broken["mode"] = "sometimes";
  EXPECT_THROW(witness_from_json(broken), DomainError);
  broken = j;
  broken.erase("growth");
  EXPECT_THROW(witness_from_json(broken), DomainError);
}

TEST(Serialization, MarginsCsv) {
  std::ostringstream os;
  write_margins_csv(os, verify(six_step()));
  EXPECT_EQ(os.str().rfind("k,check,margin\n", 0), 0u);
}

TEST(WeightedMode, TargetsScaleWithPhi) {
  BuildConfig cfg;
  cfg.steps = 8;
  cfg.nu = NuSchedule::single(Numeral(std::string("1")));
  cfg.growth = Growth::weighted(WeightFunction::log_reciprocal());
  LacunaryWitness w = build(cfg);
  EXPECT_EQ(w.mode, NuMode::SingleNu);
  EXPECT_TRUE(verify(w).pass);
  PrecisionScope s(256);
  for (std::size_t p = 1; p <= w.size(); ++p) {
    Real t = Real(static_cast<unsigned long>(p)) * -log(w.gap(p));
    EXPECT_EQ(w.target(p), t);
    EXPECT_GT(min_modulus_lower_bound(w, p), t);
  }
  EXPECT_NO_THROW(membership_tail(w, Real(1)));
  EXPECT_THROW(membership_tail(w, Real(0.5)), NotApplicable);
}

TEST(WeightedMode, NoEscalationIsInfeasible) {
  BuildConfig cfg;
  cfg.steps = 1;
  cfg.escalation_limit = 0;
  cfg.growth = Growth::weighted(WeightFunction::log_reciprocal());
  try {
    build(cfg);
    FAIL() << "expected InfeasibleError";
  } catch (const InfeasibleError& e) {
    EXPECT_EQ(e.step(), 1u);
    EXPECT_EQ(e.inequality(), "5");
  }
}

TEST(ExplicitTargets, BuildsAgainstGivenThresholds) {
  BuildConfig cfg;
  cfg.steps = 3;
  cfg.growth = Growth::explicit_targets({Numeral(std::string("1")), Numeral(std::string("5")),
                                         Numeral(std::string("20"))});
  LacunaryWitness w = build(cfg);
  EXPECT_TRUE(verify(w).pass);
  PrecisionScope s(256);
  EXPECT_GT(min_modulus_lower_bound(w, 3), Real(20));
}

TEST(Config, Validation) {
  BuildConfig cfg;
  cfg.steps = 0;
  EXPECT_THROW(build(cfg), DomainError);
  EXPECT_THROW(NuSchedule::parse("1/k^2"), DomainError);
  EXPECT_THROW(NuSchedule::parse("const:-1"), DomainError);
}

#include "asdefect/errors.hpp"
#include "asdefect/kernel.hpp"

#include <gtest/gtest.h>

using namespace asdefect;

namespace {

FieldPtr field(long p, int s = 4) { return FiniteField::get({p, s}); }

TruncSeries mono(const FieldPtr& F, int n, int i, int j, long c = 1) {
  return TruncSeries::monomial(F, n, i, j, F->from_integer(c));
}

}  // namespace

TEST(JacobianExponent, Identity) {
  auto F = field(2);
  MapGerm g(mono(F, 8, 1, 0), mono(F, 8, 0, 1));
  auto j = jacobian_exponent(g);
  EXPECT_EQ(j.c, 0);
  EXPECT_TRUE(j.principal);
}

TEST(JacobianExponent, ArtinSchreierForm) {
  for (long p : {2L, 3L, 5L}) {
    for (int c = 1; c <= 6; ++c) {
      auto F = field(p);
      MapGerm g(mono(F, 20, 1, 0), mono(F, 20, 0, static_cast<int>(p)) - mono(F, 20, c, 1));
      EXPECT_EQ(jacobian_exponent(g).c, c) << p << " " << c;
    }
  }
}

TEST(JacobianExponent, QuotientForm) {
  for (long p : {2L, 3L, 5L}) {
    auto F = field(p);
    const int n = 30;
    TruncSeries u = mono(F, n, static_cast<int>(p), 0) *
                    invert_unit(mono(F, n, 0, 0) - mono(F, n, static_cast<int>(p - 1), 0));
    MapGerm g(u, mono(F, n, 0, 1));
    EXPECT_EQ(jacobian_exponent(g).c, 2 * p - 2) << p;
  }
}

TEST(JacobianExponent, VanishingJacobianIsAnError) {
  auto F = field(2);
  MapGerm g(mono(F, 8, 2, 0), mono(F, 8, 0, 2));
  EXPECT_THROW(jacobian_exponent(g), TruncationError);
}

TEST(ClassifyType, Examples) {
  auto F = field(2);
  EXPECT_EQ(classify_type(seed_artin_schreier({2, 4}, 1)), GermClass::T1);
  EXPECT_EQ(classify_type(MapGerm(mono(F, 8, 1, 0), mono(F, 8, 0, 1))), GermClass::T0);
  MapGerm t2(mono(F, 8, 2, 0) + mono(F, 8, 2, 1), mono(F, 8, 0, 1) + mono(F, 8, 3, 0));
  EXPECT_EQ(classify_type(t2), GermClass::T2);
  MapGerm other(mono(F, 8, 1, 0), mono(F, 8, 0, 3));
  EXPECT_EQ(classify_type(other), GermClass::other);
  MapGerm unknown(mono(F, 4, 1, 0), mono(F, 4, 0, 5));
  EXPECT_THROW(classify_type(unknown), TruncationError);
}

TEST(Complexity, Examples) {
  auto F = field(2);
  EXPECT_EQ(complexity(seed_artin_schreier({2, 4}, 3)), 2);
  EXPECT_EQ(complexity(MapGerm(mono(F, 8, 1, 0), mono(F, 8, 0, 1))), 1);
  EXPECT_EQ(complexity(MapGerm(mono(F, 8, 2, 0), mono(F, 8, 0, 1) + mono(F, 8, 1, 0))), 2);
  EXPECT_THROW(complexity(MapGerm(mono(F, 8, 1, 0), mono(F, 8, 2, 0))), Error);
}

TEST(SeedArtinSchreier, TypeAndExponent) {
  for (long p : {2L, 3L, 5L}) {
    for (int e : {1, 2, 3}) {
      MapGerm g = seed_artin_schreier({p, 4}, e);
      EXPECT_EQ(classify_type(g), GermClass::T1);
      EXPECT_EQ(jacobian_exponent(g).c, (p - 1) * e);
    }
  }
  auto F = field(3);
  MapGerm g = seed_artin_schreier({3, 4}, 1, 10);
  EXPECT_TRUE(g.v().agrees_with(mono(F, 10, 0, 3) - mono(F, 10, 2, 1)));
  EXPECT_THROW(seed_artin_schreier({2, 4}, 0), Error);
}

TEST(OracleTransition, SeedStepStaysTypeOne) {
  auto res = oracle_transition(seed_artin_schreier({2, 4}, 1), TransformStep::make(3, 1));
  EXPECT_EQ(res.type, GermClass::T1);
  EXPECT_EQ(res.c, 2);
  EXPECT_EQ(res.sigma_bar, 1);
  EXPECT_EQ(res.mbar, 3);
  EXPECT_EQ(res.qbar, 2);
  EXPECT_TRUE(res.chain_rule_ok);
}

TEST(OracleTransition, SeedStepSwitchesToTypeTwo) {
  auto res = oracle_transition(seed_artin_schreier({2, 4}, 1), TransformStep::make(4, 1));
  EXPECT_EQ(res.type, GermClass::T2);
  EXPECT_EQ(res.c, 4);
  EXPECT_EQ(res.sigma_bar, 2);
  EXPECT_TRUE(res.chain_rule_ok);
  EXPECT_EQ(complexity(res.germ), 2);
}

TEST(OracleTransition, TypeTwoInputs) {
  // u = x^2(1 + x), v = y at p = 2: J = x^2, jac ratio 2.
  auto F = field(2);
  const int n = 64;
  MapGerm g(mono(F, n, 2, 0) + mono(F, n, 3, 0), mono(F, n, 0, 1));
  ASSERT_EQ(jacobian_exponent(g).c, 2);
  auto a = oracle_transition(g, TransformStep::make(3, 1));
  EXPECT_EQ(a.type, GermClass::T1);
  EXPECT_EQ(a.c, 3);
  auto b = oracle_transition(g, TransformStep::make(1, 2));
  EXPECT_EQ(b.type, GermClass::T2);
  EXPECT_EQ(b.c, 2);
  auto c = oracle_transition(g, TransformStep::make(3, 2));
  EXPECT_EQ(c.type, GermClass::T2);
  EXPECT_EQ(c.c, 4);
  EXPECT_TRUE(a.chain_rule_ok && b.chain_rule_ok && c.chain_rule_ok);
}

TEST(OracleTransition, IdentityGermStaysUnramified) {
  auto F = field(3);
  MapGerm g(mono(F, 16, 1, 0), mono(F, 16, 0, 1));
  auto res = oracle_transition(g, TransformStep::make(2, 3, 2));
  EXPECT_EQ(res.type, GermClass::T0);
  EXPECT_EQ(res.c, 0);
  EXPECT_TRUE(res.chain_rule_ok);
}

TEST(OracleTransition, CaseZeroGivesTypeZero) {
  auto res = oracle_transition(seed_artin_schreier({3, 4}, 1), TransformStep::make(2, 3));
  EXPECT_EQ(res.type, GermClass::T0);
  EXPECT_TRUE(res.chain_rule_ok);
}

TEST(OracleTransition, ReportsInsufficientPrecision) {
  MapGerm g = seed_artin_schreier({2, 4}, 3, 8);
  EXPECT_THROW(oracle_transition(g, TransformStep::make(7, 1)), TruncationError);
}

TEST(OracleTransition, RejectsOtherGermsAndBadSteps) {
  auto F = field(2);
  EXPECT_THROW(oracle_transition(MapGerm(mono(F, 8, 1, 0), mono(F, 8, 0, 3)), TransformStep::make(2, 1)), Error);
  EXPECT_THROW(oracle_transition(seed_artin_schreier({2, 4}, 1), TransformStep::make(1, 2)), Error);
}

TEST(GaloisDifference, Examples) {
  auto a = galois_difference({2, 4}, 1, 1);
  EXPECT_EQ(a.value, Rat(1));
  EXPECT_TRUE(a.check);
  auto b = galois_difference({3, 4}, 2, 1);
  auto c = galois_difference({3, 4}, 2, 2);
  EXPECT_EQ(b.value, Rat(2));
  EXPECT_EQ(b.value, c.value);
  EXPECT_TRUE(b.check && c.check);
  EXPECT_THROW(galois_difference({3, 4}, 0, 1), Error);
  EXPECT_THROW(galois_difference({3, 4}, 1, 3), Error);
}

TEST(DetectStrongMonomial, IdentityWitness) {
  auto F = field(2);
  auto r = detect_strong_monomial(MapGerm(mono(F, 10, 2, 0), mono(F, 10, 0, 1)), 3);
  ASSERT_EQ(r.outcome, StrongMonomialResult::Outcome::yes);
  EXPECT_EQ(r.witness->a, 1);
  EXPECT_EQ(r.witness->d, 1);
  EXPECT_EQ(r.witness->exponent, 2);
}

TEST(DetectStrongMonomial, ShearAfterUnitAbsorption) {
  auto F = field(2);
  const int n = 12;
  MapGerm g(mono(F, n, 3, 0) + mono(F, n, 3, 1), mono(F, n, 0, 1) + mono(F, n, 1, 0));
  auto r = detect_strong_monomial(g, 2);
  ASSERT_EQ(r.outcome, StrongMonomialResult::Outcome::yes);
  EXPECT_EQ(r.witness->exponent, 3);
  // Witness check: u / x^3 = 1 + y is a unit; w = v = y + x has a nonzero y-linear term.
  EXPECT_NE(g.u().div_x_pow(3).constant_term(), 0);
  EXPECT_NE(g.v().coeff(0, 1), 0);
}

TEST(DetectStrongMonomial, StableShapeIsCertifiedNo) {
  auto F = field(2);
  const int n = 40;
  // u = x^2, v = y^2 + x^5 y with ω(y)/ω(x) = 2: ω(y^2) = 4 < ω(x^5 y) = 7.
  MapGerm g(mono(F, n, 2, 0), mono(F, n, 0, 2) + mono(F, n, 5, 1));
  auto r = detect_strong_monomial(g, 3, MonomialWeights{Rat(1), Rat(2)});
  ASSERT_EQ(r.outcome, StrongMonomialResult::Outcome::no);
  EXPECT_EQ(r.certificate->leading_value, Rat(4));
  EXPECT_EQ(r.certificate->competing_value, Rat(7));
  // Without weights no claim is made.
  EXPECT_EQ(detect_strong_monomial(g, 3).outcome, StrongMonomialResult::Outcome::unknown);
  // Weights violating the inequality do not give a certificate.
  auto r2 = detect_strong_monomial(g, 2, MonomialWeights{Rat(1), Rat(5)});
  EXPECT_NE(r2.outcome, StrongMonomialResult::Outcome::no);
}

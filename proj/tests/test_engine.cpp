#include "asdefect/engine.hpp"
#include "asdefect/errors.hpp"

#include <gtest/gtest.h>

#include <numeric>

using namespace asdefect;

namespace {

Rat R(long n, long d = 1) { return Rat(BigInt(n), BigInt(d)); }
TransformStep S(long m, long q) { return TransformStep::make(m, q); }

Schedule column_lower(long p) {
  Schedule s;
  s.tail = std::vector<TransformStep>{S(p, 1), S(p * p * p, 1)};
  return s;
}

Schedule column_upper(long p) {
  Schedule s;
  s.tail = std::vector<TransformStep>{S(p * p, 1)};
  return s;
}

}  // namespace

TEST(TransformStep, CofactorsSatisfyUnimodularity) {
  for (long m = 1; m <= 12; ++m) {
    for (long q = 1; q <= 12; ++q) {
      if (std::gcd(m, q) != 1) {
        EXPECT_THROW(TransformStep::make(m, q), Error);
        continue;
      }
      TransformStep s = TransformStep::make(m, q);
      EXPECT_EQ(s.m * s.b_cof - s.q * s.a_cof, 1);
      EXPECT_GE(s.a_cof, 0);
      EXPECT_LT(s.a_cof, std::max<long>(m, 1));
    }
  }
  TransformStep s = S(3, 1);
  EXPECT_EQ(s.a_cof, 2);
  EXPECT_EQ(s.b_cof, 1);
  s = S(2, 3);
  EXPECT_EQ(s.a_cof, 1);
  EXPECT_EQ(s.b_cof, 2);
}

TEST(StepFromType1, Examples) {
  auto s0 = ExtensionState::seed(2, GermType::T1, R(1));
  auto a = step_from_type1(s0, S(3, 1));
  EXPECT_EQ(a.type, GermType::T1);
  EXPECT_EQ(a.jac_ratio, R(2));
  EXPECT_EQ(a.M, 3);
  auto b = step_from_type1(s0, S(4, 1));
  EXPECT_EQ(b.type, GermType::T2);
  EXPECT_EQ(b.jac_ratio, R(4));
  auto s3 = ExtensionState::seed(3, GermType::T1, R(1));
  EXPECT_EQ(step_from_type1(s3, S(2, 3)).type, GermType::T0);
}

TEST(StepFromType1, Errors) {
  auto t2 = ExtensionState::seed(2, GermType::T2, R(2));
  EXPECT_THROW(step_from_type1(t2, S(3, 1)), Error);
  auto t1 = ExtensionState::seed(2, GermType::T1, R(1));
  try {
    step_from_type1(t1, S(1, 2));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), "hypothesis violation");
  }
}

TEST(StepFromType2, Examples) {
  auto s0 = ExtensionState::seed(2, GermType::T2, R(2));
  auto a = step_from_type2(s0, S(3, 1));
  EXPECT_EQ(a.type, GermType::T1);
  EXPECT_EQ(a.jac_ratio, R(3));
  auto b = step_from_type2(s0, S(1, 2));
  EXPECT_EQ(b.type, GermType::T2);
  EXPECT_EQ(b.jac_ratio, R(2));
  auto c = step_from_type2(s0, S(3, 2));
  EXPECT_EQ(c.type, GermType::T2);
  // 2·3 - 3 + 1 = 4; the series oracle gives the same exponent.
  EXPECT_EQ(c.jac_ratio, R(4));
  EXPECT_EQ(c.Mbar, 3);
}

TEST(StepFromType2, StrictFlagRejectsTrivialMbar) {
  auto s0 = ExtensionState::seed(2, GermType::T2, R(2));
  EXPECT_NO_THROW(step_from_type2(s0, S(1, 2)));
  EngineOptions strict{true};
  EXPECT_THROW(step_from_type2(s0, S(1, 2), strict), Error);
  EXPECT_THROW(step_from_type2(ExtensionState::seed(2, GermType::T1, R(1)), S(1, 2)), Error);
}

TEST(RunSchedule, ComposesSteps) {
  Schedule s{{S(3, 1), S(4, 1)}, std::nullopt};
  Trace tr = run_schedule(ExtensionState::seed(2, GermType::T1, R(1)), s, 5);
  ASSERT_EQ(tr.states.size(), 3u);
  EXPECT_EQ(tr.states[1].type, GermType::T1);
  EXPECT_EQ(tr.states[2].type, GermType::T2);
  EXPECT_EQ(tr.states[1].jac_ratio, R(2));
  EXPECT_EQ(tr.states[2].jac_ratio, R(8));
  EXPECT_EQ(tr.states[1].M, 3);
  EXPECT_EQ(tr.states[2].M, 12);
  EXPECT_EQ(tr.sigma_values, (std::vector<long>{1, 2}));
}

TEST(RunSchedule, DepthZero) {
  auto s0 = ExtensionState::seed(2, GermType::T1, R(1));
  Trace tr = run_schedule(s0, column_upper(2), 0);
  ASSERT_EQ(tr.states.size(), 1u);
  EXPECT_EQ(tr.d_values, std::vector<Rat>{R(1)});
}

TEST(RunSchedule, LowerColumnDValues) {
  Trace tr = run_schedule(ExtensionState::seed(2, GermType::T2, R(2)), column_lower(2), 4);
  EXPECT_EQ(tr.d_values, (std::vector<Rat>{R(2), R(1), R(1), R(15, 16), R(15, 16)}));
}

TEST(RunSchedule, HaltsAtT0AndAnnotatesErrors) {
  Schedule s{{S(2, 3), S(5, 1)}, std::nullopt};
  Trace tr = run_schedule(ExtensionState::seed(3, GermType::T1, R(1)), s, 5);
  EXPECT_TRUE(tr.halted_at_t0);
  EXPECT_EQ(tr.states.size(), 2u);
  Schedule bad{{S(3, 1), S(1, 1)}, std::nullopt};
  try {
    run_schedule(ExtensionState::seed(2, GermType::T1, R(1)), bad, 5);
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("step 2"), std::string::npos);
  }
}

TEST(DistanceFromTrace, DependentTowerColumns) {
  auto lower = run_schedule(ExtensionState::seed(2, GermType::T2, R(2)), column_lower(2), 6);
  auto b = distance_from_trace(lower);
  EXPECT_TRUE(b.exact);
  EXPECT_EQ(b.upper, R(14, 15));
  EXPECT_EQ(b.describe(), "dist = -14/15 (exact)");
  auto upper = run_schedule(ExtensionState::seed(2, GermType::T1, R(1)), column_upper(2), 6);
  EXPECT_EQ(distance_from_trace(upper).upper, R(11, 15));
}

TEST(DistanceFromTrace, AllTypeTwoTailLimit) {
  // (m,q) = (3,2) at p = 2: sigma = gcd(6,2) = 2 keeps type 2.
  Schedule s{{}, std::vector<TransformStep>{S(3, 2)}};
  auto tr = run_schedule(ExtensionState::seed(2, GermType::T2, R(2)), s, 4);
  EXPECT_EQ(tr.d_values, (std::vector<Rat>{R(2), R(4, 3), R(10, 9), R(28, 27), R(82, 81)}));
  auto b = distance_from_trace(tr);
  EXPECT_TRUE(b.exact);
  EXPECT_EQ(b.upper, R(1));
}

TEST(DistanceFromTrace, FiniteTraceGivesInterval) {
  Schedule s{{S(3, 1), S(4, 1)}, std::nullopt};
  auto b = distance_from_trace(run_schedule(ExtensionState::seed(2, GermType::T1, R(1)), s, 2));
  EXPECT_FALSE(b.exact);
  EXPECT_EQ(b.lower, R(0));
  EXPECT_EQ(b.upper, R(2, 3));
}

TEST(DistanceFromTrace, RejectsT0AndNonMonotoneTraces) {
  Schedule s{{S(2, 3)}, std::nullopt};
  auto tr = run_schedule(ExtensionState::seed(3, GermType::T1, R(1)), s, 1);
  EXPECT_THROW(distance_from_trace(tr), Error);
  Trace forged;
  forged.states = {ExtensionState::seed(2, GermType::T1, R(1)), ExtensionState::seed(2, GermType::T1, R(2))};
  forged.d_values = {R(1), R(2)};
  EXPECT_THROW(distance_from_trace(forged), Error);
}

TEST(DefectVerdict, Cases) {
  Schedule t2{{}, std::vector<TransformStep>{S(3, 2)}};
  auto v = defect_verdict(run_schedule(ExtensionState::seed(2, GermType::T2, R(2)), t2, 3));
  EXPECT_EQ(v.verdict, Verdict::defectless);
  EXPECT_EQ(v.e_over_nu, 2);
  EXPECT_EQ(v.defect_power, 1);
  auto w = defect_verdict(run_schedule(ExtensionState::seed(2, GermType::T2, R(2)), column_lower(2), 4));
  EXPECT_EQ(w.verdict, Verdict::defect);
  EXPECT_EQ(w.defect_power, 2);
  EXPECT_EQ(w.e_over_nu * w.defect_power, 2);
  Schedule t0{{S(2, 3)}, std::vector<TransformStep>{S(2, 1)}};
  EXPECT_EQ(defect_verdict(run_schedule(ExtensionState::seed(3, GermType::T1, R(1)), t0, 3)).verdict,
            Verdict::unramified_split);
  Schedule finite{{S(3, 1)}, std::nullopt};
  EXPECT_EQ(defect_verdict(run_schedule(ExtensionState::seed(2, GermType::T1, R(1)), finite, 1)).verdict,
            Verdict::undetermined);
}

TEST(ValueGroupIndex, Cases) {
  Schedule t2{{}, std::vector<TransformStep>{S(3, 2)}};
  EXPECT_EQ(value_group_index(run_schedule(ExtensionState::seed(2, GermType::T2, R(2)), t2, 3)), 2);
  Schedule t1{{}, std::vector<TransformStep>{S(3, 1)}};
  EXPECT_EQ(value_group_index(run_schedule(ExtensionState::seed(2, GermType::T1, R(1)), t1, 3)), 1);
  Schedule mixed{{S(3, 1), S(4, 1)}, std::nullopt};
  auto tr = run_schedule(ExtensionState::seed(2, GermType::T1, R(1)), mixed, 2);
  EXPECT_EQ(tr.states[2].Mbar, 6);
  // ωL = (1/12)Z, νK = Z·ν(u_0)/6 = (1/6)Z: cosets {0, 1/12}.
  EXPECT_EQ(value_group_index(tr), 2);
}

TEST(SwitchingCertificate, Cases) {
  auto lower = run_schedule(ExtensionState::seed(2, GermType::T2, R(2)), column_lower(2), 8);
  auto rep = switching_certificate(lower);
  EXPECT_TRUE(rep.passed);
  EXPECT_EQ(rep.switch_count(), 8u);
  EXPECT_EQ(rep.p_adic_growth.back(), 16u);
  Schedule t1{{}, std::vector<TransformStep>{S(3, 1), S(5, 2)}};
  auto all1 = switching_certificate(run_schedule(ExtensionState::seed(2, GermType::T1, R(1)), t1, 6));
  EXPECT_TRUE(all1.passed);
  EXPECT_EQ(all1.switch_count(), 0u);

  Trace forged;
  forged.p = 2;
  auto a = ExtensionState::seed(2, GermType::T1, R(1));
  auto b = a;
  b.type = GermType::T2;
  b.M = 3;
  forged.states = {a, b};
  forged.steps = {S(3, 1)};
  auto bad = switching_certificate(forged);
  EXPECT_FALSE(bad.passed);
  ASSERT_EQ(bad.checks.size(), 1u);
  EXPECT_NE(bad.checks[0].condition.find("p | m"), std::string::npos);
}

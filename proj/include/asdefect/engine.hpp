#pragma once

#include "asdefect/rational.hpp"
#include "asdefect/values.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace asdefect {

enum class GermType { T0, T1, T2 };

const char* type_name(GermType t);
GermType parse_type(const std::string& s);

// Exponent-level data of one map R_i -> S_i. jac_ratio is c/(p-1) where J = (x^c).
struct ExtensionState {
  long p = 2;
  GermType type = GermType::T1;
  Rat jac_ratio;
  std::size_t depth = 0;
  BigInt M = 1;
  BigInt Mbar = 1;

  static ExtensionState seed(long p, GermType type, const Rat& jac_ratio);

  Rat omega_x() const { return Rat(BigInt(1), M); }
  BigInt c() const;  // (p-1)·jac_ratio, asserted integral
  Rat d() const { return jac_ratio / Rat(M); }
};

struct TransformStep {
  long m = 1;
  long q = 1;
  long a_cof = 0;  // a'
  long b_cof = 1;  // b'
  long alpha_label = 1;

  // Computes cofactors with m·b' - q·a' = 1 and 0 <= a' < m; validates gcd(m, q) = 1.
  static TransformStep make(long m, long q, long alpha_label = 1);
  void validate() const;

  friend bool operator==(const TransformStep&, const TransformStep&) = default;
};

struct Schedule {
  std::vector<TransformStep> prefix;
  std::optional<std::vector<TransformStep>> tail;

  void validate() const;
  // Step used at 0-based index i (prefix first, then the tail repeated).
  std::optional<TransformStep> step_at(std::size_t i) const;
};

struct EngineOptions {
  bool strict_mbar = false;  // require m̄ > 1 on type-2 steps
};

// Full outcome of a single transition.
struct Transition {
  ExtensionState next;
  long sigma = 1;
  BigInt mbar;
  BigInt qbar;
};

Transition transition(const ExtensionState& state, const TransformStep& step,
                      const EngineOptions& opts = {});
ExtensionState step_from_type1(const ExtensionState& state, const TransformStep& step);
ExtensionState step_from_type2(const ExtensionState& state, const TransformStep& step,
                               const EngineOptions& opts = {});

struct Trace {
  long p = 2;
  std::vector<ExtensionState> states;
  std::vector<TransformStep> steps;
  std::vector<Rat> d_values;
  std::vector<long> sigma_values;
  std::vector<BigInt> mbar_values;
  bool halted_at_t0 = false;
  // Set by run_schedule; required for infinite-behavior verdicts.
  std::optional<Schedule> schedule;
  // Index of states[0] in the caller's numbering (synthesized traces start at 1 when augmented).
  std::size_t first_index = 0;
  // Positions into states marking construction checkpoints.
  std::vector<std::size_t> checkpoints;

  const ExtensionState& final_state() const { return states.back(); }
  std::size_t depth() const { return states.size() - 1; }
};

Trace run_schedule(const ExtensionState& state0, const Schedule& schedule, std::size_t depth,
                   const EngineOptions& opts = {});

// Exact behavior of a schedule with periodic tail, derived from a super-period of the tail.
struct TailClosure {
  bool reaches_t0 = false;
  bool tail_has_t1 = false;
  bool tail_has_t2 = false;
  Rat limit;               // inf of d_i when !reaches_t0
  Rat period_decrement;    // d drop across the first analysed super-period
  BigInt period_growth;    // product of m across a super-period
  std::size_t super_period_steps = 0;
};

std::optional<TailClosure> close_tail(const ExtensionState& state0, const Schedule& schedule,
                                      const EngineOptions& opts = {});

DistanceBound distance_from_trace(const Trace& trace);

enum class Verdict { defectless, defect, unramified_split, undetermined };
const char* verdict_name(Verdict v);

struct DefectVerdict {
  Verdict verdict = Verdict::undetermined;
  long e_over_nu = 1;
  long defect_power = 1;
  BigInt group_index_at_depth = 1;
};

DefectVerdict defect_verdict(const Trace& trace);
BigInt value_group_index(const Trace& trace);

struct SwitchCheck {
  std::size_t step_index = 0;  // 0-based step producing the switch
  GermType from = GermType::T1;
  GermType to = GermType::T1;
  bool ok = true;
  std::string condition;
};

struct SwitchingReport {
  bool passed = true;
  std::vector<SwitchCheck> checks;
  std::vector<unsigned> p_adic_growth;  // v_p(M_i) per state
  std::size_t switch_count() const { return checks.size(); }
};

SwitchingReport switching_certificate(const Trace& trace);

}  // namespace asdefect

#pragma once

#include "asdefect/engine.hpp"

#include <optional>
#include <string>
#include <vector>

namespace asdefect {

// Relation between the step of the lower level K -> L and the step of the upper level L -> M.
// The upper level's base-side step (m̄', q̄') must be the lower level's top-side step (m, q).
struct LinkRecord {
  long m = 1, q = 1;             // lower step on L
  BigInt mbar, qbar;             // lower step on K
  long m_upper = 1, q_upper = 1; // upper step on M
  BigInt mbar_upper, qbar_upper; // upper step on L
  bool base_consistent = false;  // m̄' = m and q̄' = q
  bool parity_rule = false;      // lower T1: m = p·m̄, m' = m̄; lower T2: m̄ = p·m, m' = m̄; q' = q = q̄
  bool ok() const { return base_consistent && parity_rule; }
};

struct TowerState {
  long index = 0;
  ExtensionState lower;
  ExtensionState upper;
};

struct TowerTrace {
  long p = 2;
  std::vector<TowerState> states;  // index 0..depth
  std::vector<LinkRecord> links;   // links[k]: step from states[k]; one extra lookahead step
  std::vector<Rat> d_lower, d_upper;
  std::vector<bool> audit_flags;   // filled by stable_form_audit callers
  DistanceBound lower_bound, upper_bound;

  bool links_ok() const;
  std::size_t depth() const { return states.empty() ? 0 : states.size() - 1; }
};

LinkRecord check_link(const ExtensionState& lower, const TransformStep& lower_step, const ExtensionState& upper,
                      const TransformStep& upper_step);

struct WorkedExample {
  long p = 2;
  long c = 1;
  // Recurrence values for k = 1..depth.
  std::vector<Rat> d_lower, d_upper;
  DistanceBound lower;         // exact, from the closed period decrement
  DistanceBound upper;
  DistanceBound finite_lower;  // [0, min d] over the first depth values
  DistanceBound finite_upper;
  TowerTrace tower;            // the same data executed through the engine
};

// Dependent tower u = x^p/(1 - x^{p-1}), v = y^p - x^c y; requires (p-1) | c.
WorkedExample worked_example(long p, long c, std::size_t depth);

TowerTrace build_independent_tower(long p, std::size_t depth, long e = 1, long lambda_cap = 64);

struct AuditRow {
  long index = 0;
  GermType lower = GermType::T1, upper = GermType::T2;
  bool stable_pattern = false;  // u = unit·z^p, v = unit·w^p + Ω
  std::string lead_source;      // "p*c" or "c'"
  BigInt lead_exponent;         // z-exponent k of the Ω leading term z^k w
  Rat w_over_z;                 // μ(w)/μ(z), from the next upper step
  bool inequality_ok = false;   // (p-1)·μ(w)/μ(z) < k
  Rat order_requirement;        // tails need ord > p·q/m of the next lower step
  bool not_strongly_monomial = false;
  std::optional<std::string> kernel_outcome;
  bool kernel_agrees = true;
};

struct AuditReport {
  std::vector<AuditRow> rows;
  std::size_t mismatches = 0;
  bool all_flagged() const;
  std::vector<bool> flags() const;
};

// kernel_limit: largest Ω exponent cross-checked with the series kernel (0 disables).
AuditReport stable_form_audit(const TowerTrace& trace, int kernel_limit = 64);

struct SingleLevelRow {
  std::size_t index = 0;
  GermType type = GermType::T1;
  bool strongly_monomial = false;
};
std::vector<SingleLevelRow> stable_form_audit(const Trace& trace);

}  // namespace asdefect

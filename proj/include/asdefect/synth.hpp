#pragma once

#include "asdefect/engine.hpp"

#include <optional>
#include <vector>

namespace asdefect {

// Prescribed type at every depth: prefix, then tail repeated forever.
struct SwitchPlan {
  std::vector<int> prefix;
  std::vector<int> tail;

  void validate() const;
  int at(std::size_t n) const;
};

struct SynthParams {
  long p = 2;
  long p_aux = 3;
  long e = 1;
  Rat alpha;
  std::size_t depth = 1;
  long lambda_cap = 64;

  void validate() const;
};

// Blowup datum putting q/m in the window (c_ratio - (target + 2^-t)·M, c_ratio - target·M).
// to_type 1: m = p_aux^λ, λ >= 1, p_aux ∤ q. to_type 2: m = p^λ, λ >= 2, p ∤ q.
TransformStep choose_step(const Rat& c_ratio, const BigInt& M, const Rat& target, int to_type, unsigned t,
                          long p, long p_aux, long lambda_cap = 64);

struct SynthesisResult {
  Schedule schedule;
  Trace trace;
  DistanceBound bound;
  bool augmented = false;  // a type-1 stage was prepended and discarded
  std::optional<TransformStep> discarded_step;
};

SynthesisResult synthesize(const SynthParams& params, const SwitchPlan& plan);

// alpha < d_t < alpha + 2^-t at every recorded checkpoint with t > 0.
bool verify_envelope(const Trace& trace, const Rat& alpha);

}  // namespace asdefect

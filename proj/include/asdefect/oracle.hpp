#pragma once

#include "asdefect/engine.hpp"
#include "asdefect/kernel.hpp"

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

namespace asdefect {

// A random germ described by finite polynomials, so it can be instantiated at any precision.
struct GermRecipe {
  FieldSpec field;
  GermType type = GermType::T1;
  int c = 1;  // Jacobian exponent of the base germ
  std::vector<Term> u_terms, v_terms;
  std::vector<Term> y_shift;      // y -> y + t(x), terms with j = 0
  std::vector<Term> u_factor;     // u -> u·(1 + r(u, v)), r as terms in (u, v)
  std::vector<Term> v_factor;     // v -> v·s(u, v) + g(u), s(0,0) != 0
  std::vector<Term> v_add;        // g(u), terms with j = 0

  MapGerm instantiate(int order) const;
};

// Base germ of the given type and exponent, then random coordinate changes on both sides.
GermRecipe random_recipe(std::mt19937_64& rng, const FieldSpec& field, GermType type, int c);

struct Prediction {
  GermType type = GermType::T0;
  BigInt c = 0;
};
using Predictor = std::function<Prediction(const ExtensionState&, const TransformStep&)>;
Prediction engine_prediction(const ExtensionState& state, const TransformStep& step);

struct OracleConfig {
  std::uint64_t seed = 0x5eed2024ULL;
  std::size_t cases = 200;
  int precision = 64;
  int precision_cap = 0;  // 0: four times the starting precision
  std::vector<long> primes{2, 3};
  long max_mq = 7;
  int field_degree = 4;
};

enum class CaseStatus { match, mismatch, skipped, flagged };
const char* case_status_name(CaseStatus s);

struct OracleCase {
  std::size_t index = 0;
  long p = 2;
  GermType input_type = GermType::T1;
  int input_c = 0;
  TransformStep step;
  Prediction predicted;
  GermClass kernel_type = GermClass::other;
  int kernel_c = 0;
  bool chain_rule_ok = false;
  int complexity = 0;
  int precision_used = 0;
  CaseStatus status = CaseStatus::skipped;
  std::string note;
};

struct OracleSummary {
  std::vector<OracleCase> rows;
  std::size_t matches = 0, mismatches = 0, skipped = 0, flagged = 0;
  std::size_t chain_rule_failures = 0, complexity_failures = 0;
  double skip_rate() const {
    return rows.empty() ? 0.0 : static_cast<double>(skipped + flagged) / static_cast<double>(rows.size());
  }
};

// Draws the germ type, exponent and a legal step for case `index`.
OracleCase draw_case(const OracleConfig& cfg, std::size_t index, GermRecipe& recipe);
OracleSummary run_oracle_suite(const OracleConfig& cfg, const Predictor& predictor = engine_prediction);

}  // namespace asdefect

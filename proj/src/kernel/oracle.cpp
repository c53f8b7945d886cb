#include "asdefect/oracle.hpp"

#include "asdefect/errors.hpp"

#include <numeric>

namespace asdefect {

namespace {

TruncSeries poly_in(const std::vector<Term>& terms, const TruncSeries& u, const TruncSeries& v) {
  TruncSeries out(u.field(), std::min(u.order(), v.order()));
  for (const auto& t : terms) {
    out = out + (u.pow(t.i) * v.pow(t.j)).scaled(t.c);
  }
  return out;
}

Elem random_nonzero(std::mt19937_64& rng, const FiniteField& F) {
  return static_cast<Elem>(std::uniform_int_distribution<int>(1, F.size() - 1)(rng));
}

int uniform(std::mt19937_64& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

}  // namespace

MapGerm GermRecipe::instantiate(int order) const {
  auto F = FiniteField::get(field);
  TruncSeries u = TruncSeries::from_terms(F, order, u_terms);
  TruncSeries v = TruncSeries::from_terms(F, order, v_terms);
  if (!y_shift.empty()) {
    UniSeries t(order, 0);
    for (const auto& term : y_shift) {
      if (term.i < order) t[term.i] = F->add(t[term.i], term.c);
    }
    u = u.shift_y(t);
    v = v.shift_y(t);
  }
  TruncSeries one = TruncSeries::constant(F, order, 1);
  TruncSeries u2 = u * (one + poly_in(u_factor, u, v));
  TruncSeries v2 = v * poly_in(v_factor, u, v) + poly_in(v_add, u, v);
  return MapGerm(u2, v2);
}

GermRecipe random_recipe(std::mt19937_64& rng, const FieldSpec& field, GermType type, int c) {
  auto Fp = FiniteField::get(field);
  const FiniteField& F = *Fp;
  const int p = static_cast<int>(field.p);
  GermRecipe r;
  r.field = field;
  r.type = type;
  r.c = c;
  if (type == GermType::T1) {
    // u = x, v = G(x, y^p) + x^c·y·B(x, y); then J = x^c·(B + y·B_y).
    r.u_terms.push_back({1, 0, 1});
    r.v_terms.push_back({0, p, random_nonzero(rng, F)});
    for (int k = uniform(rng, 0, 3); k > 0; --k) {
      r.v_terms.push_back({uniform(rng, 1, 2 * p + 2), p * uniform(rng, 0, 2), random_nonzero(rng, F)});
    }
    r.v_terms.push_back({c, 1, random_nonzero(rng, F)});
    for (int k = uniform(rng, 0, 2); k > 0; --k) {
      // (0,0) would land on the leading x^c·y term and could cancel it
      int i = uniform(rng, 0, 3), j = uniform(rng, i == 0 ? 1 : 0, 2);
      r.v_terms.push_back({c + i, 1 + j, random_nonzero(rng, F)});
    }
  } else if (type == GermType::T2) {
    // u = x^p·(γ0 + H(x^p, y) + x^{k+1}·w), v = y; then J = x^{p+k}·unit when p ∤ k+1.
    const int k = c - p;
    if (k < 0 || (k + 1) % p == 0) throw invalid_input("exponent not realizable by a type-2 germ");
    r.u_terms.push_back({p, 0, random_nonzero(rng, F)});
    for (int n = uniform(rng, 0, 2); n > 0; --n) {
      int a = uniform(rng, 0, 2), b = uniform(rng, a == 0 ? 1 : 0, 2);
      r.u_terms.push_back({p + p * a, b, random_nonzero(rng, F)});
    }
    r.u_terms.push_back({p + k + 1, 0, random_nonzero(rng, F)});
    for (int n = uniform(rng, 0, 2); n > 0; --n) {
      int i = uniform(rng, 0, 2), j = uniform(rng, i == 0 ? 1 : 0, 2);
      r.u_terms.push_back({p + k + 1 + i, j, random_nonzero(rng, F)});
    }
    r.v_terms.push_back({0, 1, 1});
  } else {
    throw invalid_input("random germs are generated for types T1 and T2 only");
  }
  for (int n = uniform(rng, 0, 2); n > 0; --n) r.y_shift.push_back({uniform(rng, 1, 4), 0, random_nonzero(rng, F)});
  for (int n = uniform(rng, 0, 2); n > 0; --n) {
    int i = uniform(rng, 0, 2), j = uniform(rng, i == 0 ? 1 : 0, 2 - i);
    r.u_factor.push_back({i, j, random_nonzero(rng, F)});
  }
  r.v_factor.push_back({0, 0, random_nonzero(rng, F)});
  if (uniform(rng, 0, 1) == 1) r.v_factor.push_back({uniform(rng, 0, 1), 1, random_nonzero(rng, F)});
  if (uniform(rng, 0, 1) == 1) r.v_add.push_back({uniform(rng, 1, 3), 0, random_nonzero(rng, F)});
  return r;
}

Prediction engine_prediction(const ExtensionState& state, const TransformStep& step) {
  ExtensionState next = transition(state, step).next;
  Prediction out;
  out.type = next.type;
  out.c = next.type == GermType::T0 ? BigInt(0) : next.c();
  return out;
}

const char* case_status_name(CaseStatus s) {
  switch (s) {
    case CaseStatus::match: return "match";
    case CaseStatus::mismatch: return "MISMATCH";
    case CaseStatus::skipped: return "skipped";
    case CaseStatus::flagged: return "flagged";
  }
  return "?";
}

OracleCase draw_case(const OracleConfig& cfg, std::size_t index, GermRecipe& recipe) {
  std::seed_seq seq{static_cast<std::uint32_t>(cfg.seed), static_cast<std::uint32_t>(cfg.seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  std::mt19937_64 rng(seq);
  if (cfg.primes.empty()) throw invalid_input("oracle suite needs at least one prime");
  OracleCase oc;
  oc.index = index;
  oc.p = cfg.primes[static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(cfg.primes.size()) - 1))];
  const int p = static_cast<int>(oc.p);
  oc.input_type = uniform(rng, 0, 1) == 0 ? GermType::T1 : GermType::T2;
  // Integral jac ratios only: exponents (p-1)·j.
  int j;
  if (oc.input_type == GermType::T1) {
    j = uniform(rng, 1, 3);
  } else {
    do {
      j = uniform(rng, 2, 4);
    } while ((p - 1) * j < p || ((p - 1) * j - p + 1) % p == 0);
  }
  oc.input_c = (p - 1) * j;
  const int lo = oc.input_type == GermType::T1 ? 2 : 1;
  long m, q;
  do {
    m = uniform(rng, lo, static_cast<int>(cfg.max_mq));
    q = uniform(rng, 1, static_cast<int>(cfg.max_mq));
  } while (std::gcd(m, q) != 1);
  FieldSpec spec{oc.p, cfg.field_degree};
  auto F = FiniteField::get(spec);
  oc.step = TransformStep::make(m, q, random_nonzero(rng, *F));
  recipe = random_recipe(rng, spec, oc.input_type, oc.input_c);
  return oc;
}

OracleSummary run_oracle_suite(const OracleConfig& cfg, const Predictor& predictor) {
  OracleSummary sum;
  for (std::size_t idx = 0; idx < cfg.cases; ++idx) {
    GermRecipe recipe;
    OracleCase oc = draw_case(cfg, idx, recipe);
    try {
      oc.predicted = predictor(ExtensionState::seed(oc.p, oc.input_type, Rat(BigInt(oc.input_c), BigInt(oc.p - 1))),
                               oc.step);
    } catch (const Error& e) {
      oc.status = CaseStatus::mismatch;
      oc.note = std::string("predictor failed: ") + e.what();
      sum.rows.push_back(oc);
      ++sum.mismatches;
      continue;
    }
    std::optional<OracleTransition> res;
    const int cap = cfg.precision_cap > 0 ? cfg.precision_cap : 4 * cfg.precision;
    for (int n = cfg.precision; n <= cap; n *= 2) {
      oc.precision_used = n;
      try {
        MapGerm g = recipe.instantiate(n);
        res = oracle_transition(g, oc.step);
        break;
      } catch (const LambdaNonUnitError& e) {
        oc.status = CaseStatus::flagged;
        oc.note = e.what();
        break;
      } catch (const TruncationError& e) {
        oc.note = e.what();
      }
    }
    if (!res) {
      if (oc.status != CaseStatus::flagged) oc.status = CaseStatus::skipped;
      (oc.status == CaseStatus::flagged ? sum.flagged : sum.skipped)++;
      sum.rows.push_back(oc);
      continue;
    }
    oc.note.clear();
    oc.kernel_type = res->type;
    oc.kernel_c = res->c;
    oc.chain_rule_ok = res->chain_rule_ok;
    bool ok = true;
    if (res->input_c != oc.input_c) {
      ok = false;
      oc.note = "generated germ has Jacobian exponent " + std::to_string(res->input_c);
    }
    const char* want = type_name(oc.predicted.type);
    if (std::string(germ_class_name(res->type)) != want) {
      ok = false;
      oc.note += std::string(" type ") + germ_class_name(res->type) + " vs predicted " + want;
    } else if (oc.predicted.type != GermType::T0 && BigInt(res->c) != oc.predicted.c) {
      ok = false;
      oc.note += " c' = " + std::to_string(res->c) + " vs predicted " + oc.predicted.c.get_str();
    }
    if (!res->chain_rule_ok) {
      ok = false;
      ++sum.chain_rule_failures;
      oc.note += " chain rule failed";
    }
    if (res->type != GermClass::other) {
      oc.complexity = res->type == GermClass::T0 ? 1 : complexity(res->germ);
      const int expected = res->type == GermClass::T0 ? 1 : static_cast<int>(oc.p);
      if (oc.complexity != expected) {
        ++sum.complexity_failures;
        ok = false;
        oc.note += " complexity " + std::to_string(oc.complexity);
      }
    }
    oc.status = ok ? CaseStatus::match : CaseStatus::mismatch;
    (ok ? sum.matches : sum.mismatches)++;
    sum.rows.push_back(oc);
  }
  return sum;
}

}  // namespace asdefect

#include "asdefect/engine.hpp"

#include "asdefect/errors.hpp"

#include <algorithm>
#include <numeric>

namespace asdefect {

const char* type_name(GermType t) {
  switch (t) {
    case GermType::T0: return "T0";
    case GermType::T1: return "T1";
    case GermType::T2: return "T2";
  }
  return "?";
}

GermType parse_type(const std::string& s) {
  if (s == "T0") return GermType::T0;
  if (s == "T1") return GermType::T1;
  if (s == "T2") return GermType::T2;
  throw invalid_input("unknown type '" + s + "' (expected T0, T1 or T2)");
}

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::defectless: return "defectless";
    case Verdict::defect: return "defect";
    case Verdict::unramified_split: return "unramified_split";
    case Verdict::undetermined: return "undetermined";
  }
  return "?";
}

ExtensionState ExtensionState::seed(long p, GermType type, const Rat& jac_ratio) {
  if (!is_prime(p)) throw invalid_input("p = " + std::to_string(p) + " is not prime");
  if (type == GermType::T0) throw invalid_input("seed type must be T1 or T2");
  ExtensionState s;
  s.p = p;
  s.type = type;
  s.jac_ratio = jac_ratio;
  Rat c = jac_ratio * Rat(p - 1);
  if (!c.is_integer() || c.sign() <= 0) {
    throw invalid_input("seed jac_ratio " + jac_ratio.str() + " gives non-positive or non-integral c");
  }
  // A type-2 germ u = x^p·unit has J divisible by x^p.
  if (type == GermType::T2 && c < Rat(p)) {
    throw invalid_input("type-2 seed needs c >= p, got c = " + c.str());
  }
  return s;
}

BigInt ExtensionState::c() const {
  Rat c = jac_ratio * Rat(p - 1);
  if (!c.is_integer()) throw consistency_error("(p-1)·jac_ratio = " + c.str() + " is not an integer");
  return c.num();
}

TransformStep TransformStep::make(long m, long q, long alpha_label) {
  TransformStep s;
  s.m = m;
  s.q = q;
  s.alpha_label = alpha_label;
  if (m < 1 || q < 1) throw invalid_input("step needs m, q >= 1");
  if (std::gcd(m, q) != 1) {
    throw invalid_input("gcd(m,q) = " + std::to_string(std::gcd(m, q)) + " for (m,q) = (" +
                        std::to_string(m) + "," + std::to_string(q) + "); gcd(m,q)=1 is required");
  }
  if (m == 1) {
    s.a_cof = 0;
    s.b_cof = 1;
  } else {
    // q·a' ≡ -1 (mod m)
    long qm = q % m;
    long a = 0;
    while ((qm * a + 1) % m != 0) ++a;
    s.a_cof = a;
    s.b_cof = (1 + q * a) / m;
  }
  s.validate();
  return s;
}

void TransformStep::validate() const {
  if (m < 1 || q < 1) throw invalid_input("step needs m, q >= 1");
  if (std::gcd(m, q) != 1) {
    throw invalid_input("gcd(m,q) = " + std::to_string(std::gcd(m, q)) + " for (m,q) = (" +
                        std::to_string(m) + "," + std::to_string(q) + "); gcd(m,q)=1 is required");
  }
  if (a_cof < 0 || b_cof < 0 || m * b_cof - q * a_cof != 1) {
    throw invalid_input("cofactors violate m·b' - q·a' = 1");
  }
  if (alpha_label == 0) throw invalid_input("residue constant label must be nonzero");
}

void Schedule::validate() const {
  for (const auto& s : prefix) s.validate();
  if (tail) {
    if (tail->empty()) throw invalid_input("tail, when present, must be nonempty");
    for (const auto& s : *tail) s.validate();
  }
}

std::optional<TransformStep> Schedule::step_at(std::size_t i) const {
  if (i < prefix.size()) return prefix[i];
  if (!tail) return std::nullopt;
  return (*tail)[(i - prefix.size()) % tail->size()];
}

namespace {

void check_exponent(const ExtensionState& s) {
  Rat c = s.jac_ratio * Rat(s.p - 1);
  if (!c.is_integer() || c.sign() <= 0) {
    throw consistency_error("resulting exponent (p-1)·jac_ratio = " + c.str() +
                            " is not a positive integer");
  }
}

}  // namespace

Transition transition(const ExtensionState& state, const TransformStep& step,
                      const EngineOptions& opts) {
  step.validate();
  const long p = state.p;
  const long m = step.m, q = step.q;
  Transition out;
  out.next = state;
  out.next.depth = state.depth + 1;
  out.next.M = state.M * m;

  if (state.type == GermType::T0) {
    throw wrong_type_error("type T0 is absorbing; no further transitions");
  }
  if (state.type == GermType::T1) {
    if (m <= 1) throw hypothesis_error("type-1 transition needs m > 1, got m = " + std::to_string(m));
    out.sigma = std::gcd(m, p * q);
    out.mbar = m / out.sigma;
    out.qbar = p * q / out.sigma;
    out.next.Mbar = state.Mbar * out.mbar;
    if (Rat(BigInt(q), BigInt(m)) >= state.jac_ratio) {
      out.next.type = GermType::T0;
      out.next.jac_ratio = Rat(0);
      return out;
    }
    if (out.sigma == 1) {
      out.next.type = GermType::T1;
      out.next.jac_ratio = state.jac_ratio * Rat(m) - Rat(q);
    } else if (out.sigma == p) {
      out.next.type = GermType::T2;
      out.next.jac_ratio = state.jac_ratio * Rat(m) - Rat(q) + Rat(1);
    } else {
      throw consistency_error("sigma = " + std::to_string(out.sigma) + " is neither 1 nor p");
    }
  } else {
    out.sigma = std::gcd(p * m, q);
    out.mbar = p * m / out.sigma;
    out.qbar = q / out.sigma;
    if (opts.strict_mbar && out.mbar <= 1) {
      throw hypothesis_error("strict mode requires m̄ > 1, got m̄ = " + out.mbar.get_str());
    }
    out.next.Mbar = state.Mbar * out.mbar;
    if (out.sigma == 1) {
      out.next.type = GermType::T1;
      out.next.jac_ratio = state.jac_ratio * Rat(m) - Rat(m);
    } else if (out.sigma == p) {
      out.next.type = GermType::T2;
      out.next.jac_ratio = state.jac_ratio * Rat(m) - Rat(m) + Rat(1);
    } else {
      throw consistency_error("sigma = " + std::to_string(out.sigma) + " is neither 1 nor p");
    }
  }
  check_exponent(out.next);
  if (out.next.type == GermType::T2 && state.type == GermType::T1 && m % p != 0) {
    throw consistency_error("T1 -> T2 switch with p not dividing m");
  }
  if (out.next.type == GermType::T1 && state.type == GermType::T2 &&
      (q % p == 0 || out.mbar % p != 0)) {
    throw consistency_error("T2 -> T1 switch violates p ∤ q, p | m̄");
  }
  return out;
}

ExtensionState step_from_type1(const ExtensionState& state, const TransformStep& step) {
  if (state.type != GermType::T1) {
    throw wrong_type_error(std::string("step_from_type1 needs a T1 state, got ") + type_name(state.type));
  }
  return transition(state, step).next;
}

ExtensionState step_from_type2(const ExtensionState& state, const TransformStep& step,
                               const EngineOptions& opts) {
  if (state.type != GermType::T2) {
    throw wrong_type_error(std::string("step_from_type2 needs a T2 state, got ") + type_name(state.type));
  }
  return transition(state, step, opts).next;
}

Trace run_schedule(const ExtensionState& state0, const Schedule& schedule, std::size_t depth,
                   const EngineOptions& opts) {
  if (state0.type == GermType::T0) throw wrong_type_error("initial state must be T1 or T2");
  schedule.validate();
  Trace tr;
  tr.p = state0.p;
  tr.states.push_back(state0);
  tr.d_values.push_back(state0.d());
  tr.schedule = schedule;
  for (std::size_t i = 0; i < depth; ++i) {
    auto step = schedule.step_at(i);
    if (!step) break;
    Transition t;
    try {
      t = transition(tr.states.back(), *step, opts);
    } catch (const Error& e) {
      throw Error(e.error_class(), e.kind(), "step " + std::to_string(i + 1) + ": " + e.what());
    }
    tr.steps.push_back(*step);
    tr.sigma_values.push_back(t.sigma);
    tr.mbar_values.push_back(t.mbar);
    tr.states.push_back(t.next);
    if (t.next.type == GermType::T0) {
      tr.halted_at_t0 = true;
      break;
    }
    Rat d = t.next.d();
    if (d > tr.d_values.back()) {
      throw consistency_error("d-sequence increased at step " + std::to_string(i + 1));
    }
    tr.d_values.push_back(d);
  }
  return tr;
}

std::optional<TailClosure> close_tail(const ExtensionState& state0, const Schedule& schedule,
                                      const EngineOptions& opts) {
  if (!schedule.tail) return std::nullopt;
  TailClosure out;
  ExtensionState s = state0;
  auto advance = [&](const TransformStep& st) {
    s = transition(s, st, opts).next;
    return s.type != GermType::T0;
  };
  for (const auto& st : schedule.prefix) {
    if (!advance(st)) {
      out.reaches_t0 = true;
      return out;
    }
  }
  // Period-start snapshots; the type at a period start determines all later types.
  std::vector<ExtensionState> starts{s};
  std::vector<std::vector<GermType>> seen_types;
  std::size_t n1 = 0, n2 = 0;
  bool found = false;
  while (!found) {
    std::vector<GermType> types;
    for (const auto& st : *schedule.tail) {
      if (!advance(st)) {
        out.reaches_t0 = true;
        return out;
      }
      types.push_back(s.type);
    }
    seen_types.push_back(types);
    starts.push_back(s);
    for (std::size_t k = 0; k + 1 < starts.size(); ++k) {
      if (starts[k].type == s.type) {
        n1 = k;
        n2 = starts.size() - 1;
        found = true;
        break;
      }
    }
  }
  const std::size_t span = n2 - n1;
  // One further super-period: checks the geometric pattern and that T0 stays out of reach.
  for (std::size_t k = 0; k < span; ++k) {
    std::vector<GermType> types;
    for (const auto& st : *schedule.tail) {
      if (!advance(st)) {
        out.reaches_t0 = true;
        return out;
      }
      types.push_back(s.type);
    }
    seen_types.push_back(types);
    starts.push_back(s);
  }
  for (std::size_t k = n1; k < n2; ++k) {
    for (GermType t : seen_types[k]) {
      out.tail_has_t1 |= t == GermType::T1;
      out.tail_has_t2 |= t == GermType::T2;
    }
  }
  const ExtensionState& a = starts[n1];
  const ExtensionState& b = starts[n2];
  const ExtensionState& c = starts[n2 + span];
  out.super_period_steps = span * schedule.tail->size();
  out.period_growth = b.M / a.M;
  out.period_decrement = a.d() - b.d();
  Rat next_decrement = b.d() - c.d();
  if (next_decrement * Rat(out.period_growth) != out.period_decrement) {
    throw consistency_error("tail decrements are not geometric");
  }
  if (out.period_growth == 1) {
    if (out.period_decrement.sign() != 0) throw consistency_error("nonzero decrement with unit growth");
    out.limit = a.d();
  } else {
    out.limit = limit_of_decrement_series(a.d(), out.period_decrement,
                                          Rat(BigInt(1), out.period_growth));
  }
  return out;
}

DistanceBound distance_from_trace(const Trace& trace) {
  if (trace.states.empty()) throw invalid_input("empty trace");
  if (trace.halted_at_t0) throw hypothesis_error("trace reached T0; distance is not defined");
  for (std::size_t i = 1; i < trace.d_values.size(); ++i) {
    if (trace.d_values[i] > trace.d_values[i - 1]) {
      throw monotonicity_error("d-values increase at depth " + std::to_string(i));
    }
  }
  if (trace.schedule && trace.schedule->tail) {
    auto closure = close_tail(trace.states.front(), *trace.schedule);
    if (closure && !closure->reaches_t0) {
      if (closure->limit.sign() < 0) throw consistency_error("negative limit " + closure->limit.str());
      if (closure->limit > trace.d_values.back()) throw consistency_error("limit exceeds trace values");
      return DistanceBound::point(closure->limit);
    }
  }
  DistanceBound b = DistanceBound::interval(Rat(0), trace.d_values.front());
  for (const Rat& d : trace.d_values) b = bound_refine(b, d);
  return b;
}

namespace {

BigInt finite_group_index(const Trace& trace) {
  const ExtensionState& last = trace.final_state();
  const ExtensionState& first = trace.states.front();
  if (last.type == GermType::T0) return 1;
  const long a0 = first.type == GermType::T2 ? first.p : 1;
  const long a = last.type == GermType::T2 ? last.p : 1;
  GroupLattice omega_l(Rat(1), last.M);
  GroupLattice nu_k(Rat(a0), last.Mbar);
  if (Rat(a0) / Rat(last.Mbar) != Rat(a) / Rat(last.M)) {
    throw consistency_error("value of u at final depth disagrees with accumulated m̄");
  }
  return lattice_index(omega_l, nu_k);
}

}  // namespace

BigInt value_group_index(const Trace& trace) {
  if (trace.states.empty()) throw invalid_input("empty trace");
  if (!trace.halted_at_t0 && trace.schedule && trace.schedule->tail) {
    auto closure = close_tail(trace.states.front(), *trace.schedule);
    if (closure && closure->reaches_t0) return 1;
    if (closure) return closure->tail_has_t1 ? BigInt(1) : BigInt(trace.p);
  }
  return finite_group_index(trace);
}

DefectVerdict defect_verdict(const Trace& trace) {
  DefectVerdict v;
  v.group_index_at_depth = finite_group_index(trace);
  auto split = [&] {
    v.verdict = Verdict::unramified_split;
    v.e_over_nu = 1;
    v.defect_power = 1;
  };
  if (trace.halted_at_t0) {
    split();
    return v;
  }
  if (!trace.schedule || !trace.schedule->tail) return v;
  auto closure = close_tail(trace.states.front(), *trace.schedule);
  if (closure->reaches_t0) {
    split();
  } else if (closure->tail_has_t1) {
    v.verdict = Verdict::defect;
    v.e_over_nu = 1;
    v.defect_power = trace.p;
  } else {
    v.verdict = Verdict::defectless;
    v.e_over_nu = trace.p;
    v.defect_power = 1;
  }
  return v;
}

SwitchingReport switching_certificate(const Trace& trace) {
  SwitchingReport rep;
  const long p = trace.p;
  for (const auto& s : trace.states) rep.p_adic_growth.push_back(p_adic_valuation(s.M, p));
  for (std::size_t i = 0; i + 1 < trace.states.size() && i < trace.steps.size(); ++i) {
    GermType from = trace.states[i].type, to = trace.states[i + 1].type;
    if (from == to || to == GermType::T0) continue;
    const TransformStep& st = trace.steps[i];
    SwitchCheck ck;
    ck.step_index = i;
    ck.from = from;
    ck.to = to;
    if (from == GermType::T1) {
      ck.condition = "T1->T2 requires p | m (sigma = gcd(m, pq) = p)";
      ck.ok = st.m % p == 0;
    } else {
      BigInt mbar = i < trace.mbar_values.size() ? trace.mbar_values[i]
                                                 : BigInt(p * st.m / std::gcd(p * st.m, st.q));
      ck.condition = "T2->T1 requires p ∤ q and p | m̄ (sigma = gcd(pm, q) = 1)";
      ck.ok = st.q % p != 0 && mpz_divisible_ui_p(mbar.get_mpz_t(), static_cast<unsigned long>(p));
    }
    rep.passed = rep.passed && ck.ok;
    rep.checks.push_back(ck);
  }
  return rep;
}

}  // namespace asdefect

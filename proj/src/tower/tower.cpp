#include "asdefect/tower.hpp"

#include "asdefect/errors.hpp"
#include "asdefect/kernel.hpp"
#include "asdefect/synth.hpp"

#include <algorithm>
#include <string>

namespace asdefect {

bool TowerTrace::links_ok() const {
  for (const auto& l : links) {
    if (!l.ok()) return false;
  }
  return true;
}

LinkRecord check_link(const ExtensionState& lower, const TransformStep& lower_step, const ExtensionState& upper,
                      const TransformStep& upper_step) {
  const Transition tl = transition(lower, lower_step);
  const Transition tu = transition(upper, upper_step);
  const long p = lower.p;
  LinkRecord r;
  r.m = lower_step.m;
  r.q = lower_step.q;
  r.mbar = tl.mbar;
  r.qbar = tl.qbar;
  r.m_upper = upper_step.m;
  r.q_upper = upper_step.q;
  r.mbar_upper = tu.mbar;
  r.qbar_upper = tu.qbar;
  r.base_consistent = tu.mbar == lower_step.m && tu.qbar == lower_step.q;
  bool m_rule = false;
  if (lower.type == GermType::T1) {
    m_rule = BigInt(lower_step.m) == p * tl.mbar;
  } else if (lower.type == GermType::T2) {
    m_rule = tl.mbar == p * BigInt(lower_step.m);
  }
  r.parity_rule = m_rule && BigInt(upper_step.m) == tl.mbar && upper_step.q == lower_step.q &&
                  tl.qbar == lower_step.q;
  return r;
}

namespace {

// ω(x_{A_k}) on the lower column, normalized by ω(x_{A_1}) = 1.
Rat omega_lower(long p, std::size_t k) {
  if (k == 1) return Rat(1);
  const unsigned e = static_cast<unsigned>(k % 2 == 1 ? 2 * k - 2 : 2 * k - 3);
  return Rat(BigInt(1), ipow(p, e));
}

// ω(x_{S_k}) on the upper column.
Rat omega_upper(long p, std::size_t k) { return Rat(BigInt(1), ipow(p, static_cast<unsigned>(2 * k - 2))); }

std::vector<Rat> lower_recurrence(long p, std::size_t depth) {
  std::vector<Rat> d{Rat(2)};
  for (std::size_t k = 1; d.size() < depth; ++k) {
    d.push_back(k % 2 == 1 ? d.back() - omega_lower(p, k) : d.back());
  }
  return d;
}

std::vector<Rat> upper_recurrence(long p, long c, std::size_t depth) {
  std::vector<Rat> d{Rat(BigInt(c), BigInt(p - 1))};
  for (std::size_t k = 1; d.size() < depth; ++k) {
    d.push_back(k % 2 == 0 ? d.back() - omega_upper(p, k) : d.back());
  }
  return d;
}

// Limit of a two-step periodic decrement pattern read off three consecutive periods.
Rat close_two_period(const std::vector<Rat>& d, std::size_t first) {
  const Rat d0 = d[first] - d[first + 2];
  const Rat d1 = d[first + 2] - d[first + 4];
  const Rat d2 = d[first + 4] - d[first + 6];
  if (d0.sign() <= 0 || d1 * d1 != d0 * d2) {
    throw consistency_error("worked example recurrence is not geometric over its period");
  }
  return limit_of_decrement_series(d[first], d0, d1 / d0);
}

DistanceBound finite_bound(const std::vector<Rat>& d) {
  Rat lo = d.front();
  for (const auto& v : d) lo = min(lo, v);
  return DistanceBound::interval(Rat(0), lo);
}

}  // namespace

WorkedExample worked_example(long p, long c, std::size_t depth) {
  if (!is_prime(p)) throw invalid_input("p must be prime");
  if (c < 1) throw invalid_input("c must be a positive integer");
  if (c % (p - 1) != 0) throw invalid_input("c must be divisible by p-1");
  if (depth < 1) throw invalid_input("depth must be >= 1");

  WorkedExample out;
  out.p = p;
  out.c = c;
  const std::size_t span = std::max<std::size_t>(depth, 8);
  const auto lower = lower_recurrence(p, span);
  const auto upper = upper_recurrence(p, c, span);
  out.lower = DistanceBound::point(close_two_period(lower, 0));
  out.upper = DistanceBound::point(close_two_period(upper, 1));
  out.d_lower.assign(lower.begin(), lower.begin() + static_cast<long>(depth));
  out.d_upper.assign(upper.begin(), upper.begin() + static_cast<long>(depth));
  out.finite_lower = finite_bound(out.d_lower);
  out.finite_upper = finite_bound(out.d_upper);

  // Same columns through engine steps: lower alternates (p,1), (p^3,1); upper repeats (p^2,1).
  TowerTrace& t = out.tower;
  t.p = p;
  ExtensionState lo = ExtensionState::seed(p, GermType::T2, Rat(2));
  ExtensionState up = ExtensionState::seed(p, GermType::T1, Rat(BigInt(c), BigInt(p - 1)));
  const TransformStep upper_step = TransformStep::make(p * p, 1);
  for (std::size_t k = 1; k <= depth; ++k) {
    t.states.push_back(TowerState{static_cast<long>(k), lo, up});
    t.d_lower.push_back(lo.d());
    t.d_upper.push_back(up.d());
    const TransformStep lower_step = TransformStep::make(k % 2 == 1 ? p : p * p * p, 1);
    t.links.push_back(check_link(lo, lower_step, up, upper_step));
    lo = transition(lo, lower_step).next;
    up = transition(up, upper_step).next;
  }
  t.lower_bound = finite_bound(t.d_lower);
  t.upper_bound = finite_bound(t.d_upper);
  return out;
}

TowerTrace build_independent_tower(long p, std::size_t depth, long e, long lambda_cap) {
  if (!is_prime(p)) throw invalid_input("p must be prime");
  if (depth < 1) throw invalid_input("depth must be >= 1");
  if (e < 1) throw invalid_input("seed exponent e must be >= 1");

  // Preamble: K-level seed of type 1 moved to type 2, then the L -> M seed on top of it.
  ExtensionState lower = ExtensionState::seed(p, GermType::T1, Rat(e));
  lower = transition(lower, choose_step(lower.jac_ratio, lower.M, Rat(0), 2, 0, p, p, lambda_cap)).next;
  ExtensionState upper = ExtensionState::seed(p, GermType::T1, Rat(e));
  {
    const TransformStep us = choose_step(upper.jac_ratio, upper.M, Rat(0), 2, 0, p, p, lambda_cap);
    const TransformStep ls = TransformStep::make(us.m / p, us.q);
    const LinkRecord link = check_link(lower, ls, upper, us);
    if (!link.ok()) throw consistency_error("preamble link relation violated");
    lower = transition(lower, ls).next;
    upper = transition(upper, us).next;
  }

  TowerTrace t;
  t.p = p;
  for (std::size_t i = 0; i <= depth; ++i) {
    const bool even = i % 2 == 0;
    if (lower.type != (even ? GermType::T1 : GermType::T2) || upper.type != (even ? GermType::T2 : GermType::T1)) {
      throw consistency_error("tower types at depth " + std::to_string(i) + " break the alternation");
    }
    t.states.push_back(TowerState{static_cast<long>(i), lower, upper});
    t.d_lower.push_back(lower.d());
    t.d_upper.push_back(upper.d());

    const unsigned window = static_cast<unsigned>(i + 1);
    TransformStep ls, us;
    if (even) {
      ls = choose_step(lower.jac_ratio, lower.M, Rat(0), 2, window, p, p, lambda_cap);
      us = TransformStep::make(ls.m / p, ls.q);
    } else {
      us = choose_step(upper.jac_ratio, upper.M, Rat(0), 2, window, p, p, lambda_cap);
      ls = TransformStep::make(us.m / p, us.q);
    }
    const LinkRecord link = check_link(lower, ls, upper, us);
    if (!link.ok()) throw consistency_error("link relation violated at depth " + std::to_string(i));
    t.links.push_back(link);
    if (i == depth) break;  // the last link is lookahead for the audit
    lower = transition(lower, ls).next;
    upper = transition(upper, us).next;
  }

  for (std::size_t i = 1; i < t.states.size(); ++i) {
    if (t.d_lower[i] > t.d_lower[i - 1] || t.d_upper[i] > t.d_upper[i - 1]) {
      throw monotonicity_error("tower d-sequence increased at depth " + std::to_string(i));
    }
  }
  t.lower_bound = DistanceBound::interval(Rat(0), t.d_lower.back());
  t.upper_bound = DistanceBound::interval(Rat(0), t.d_upper.back());
  return t;
}

bool AuditReport::all_flagged() const {
  if (rows.empty()) return false;
  for (const auto& r : rows) {
    if (!r.not_strongly_monomial) return false;
  }
  return true;
}

std::vector<bool> AuditReport::flags() const {
  std::vector<bool> f;
  for (const auto& r : rows) f.push_back(r.not_strongly_monomial);
  return f;
}

AuditReport stable_form_audit(const TowerTrace& trace, int kernel_limit) {
  AuditReport rep;
  const long p = trace.p;
  for (std::size_t k = 0; k < trace.states.size() && k < trace.links.size(); ++k) {
    const TowerState& s = trace.states[k];
    const LinkRecord& link = trace.links[k];
    AuditRow row;
    row.index = s.index;
    row.lower = s.lower.type;
    row.upper = s.upper.type;
    if (s.lower.type == GermType::T1 && s.upper.type == GermType::T2) {
      row.stable_pattern = true;
      row.lead_source = "p*c";
      row.lead_exponent = p * s.lower.c();
    } else if (s.lower.type == GermType::T2 && s.upper.type == GermType::T1) {
      row.stable_pattern = true;
      row.lead_source = "c'";
      row.lead_exponent = s.upper.c();
    }
    row.w_over_z = Rat(BigInt(link.q_upper), BigInt(link.m_upper));
    row.order_requirement = Rat(BigInt(p * link.q), BigInt(link.m));
    if (row.stable_pattern) {
      row.inequality_ok = Rat(p - 1) * row.w_over_z < Rat(row.lead_exponent);
      row.not_strongly_monomial = row.inequality_ok;
    }

    if (row.stable_pattern && kernel_limit > 0 && row.lead_exponent <= kernel_limit) {
      const int lead = static_cast<int>(row.lead_exponent.get_si());
      // Unseen terms have value >= order·min(1, μ(w)/μ(z)); it must clear μ(w^p).
      const Rat floor_weight = min(Rat(1), row.w_over_z);
      const Rat needed = Rat(p) * row.w_over_z / floor_weight;
      const int order = std::max(lead + 2 * static_cast<int>(p) + 8,
                                 static_cast<int>(BigInt(needed.num() / needed.den()).get_si()) + 2);
      const FieldPtr F = FiniteField::get(FieldSpec{p, 4});
      const TruncSeries u = TruncSeries::monomial(F, order, static_cast<int>(p), 0, 1);
      const TruncSeries v = TruncSeries::monomial(F, order, 0, static_cast<int>(p), 1) +
                            TruncSeries::monomial(F, order, lead, 1, 1);
      const auto res = detect_strong_monomial(MapGerm(u, v), 4, MonomialWeights{Rat(1), row.w_over_z});
      row.kernel_outcome = outcome_name(res.outcome);
      row.kernel_agrees = (res.outcome == StrongMonomialResult::Outcome::no) == row.not_strongly_monomial;
      if (!row.kernel_agrees) ++rep.mismatches;
    }
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

std::vector<SingleLevelRow> stable_form_audit(const Trace& trace) {
  std::vector<SingleLevelRow> rows;
  for (std::size_t i = 0; i < trace.states.size(); ++i) {
    rows.push_back(SingleLevelRow{i, trace.states[i].type, trace.states[i].type == GermType::T2});
  }
  return rows;
}

}  // namespace asdefect

#include "asdefect/synth.hpp"

#include "asdefect/errors.hpp"

#include <numeric>
#include <string>

namespace asdefect {

void SwitchPlan::validate() const {
  if (tail.empty()) throw invalid_input("switch plan tail must be nonempty");
  for (int v : prefix) {
    if (v != 1 && v != 2) throw invalid_input("switch plan entries must be 1 or 2");
  }
  bool has_one = false;
  for (int v : tail) {
    if (v != 1 && v != 2) throw invalid_input("switch plan entries must be 1 or 2");
    has_one |= v == 1;
  }
  if (!has_one) throw invalid_input("switch plan tail must contain a 1 (type 2 cannot persist forever)");
}

int SwitchPlan::at(std::size_t n) const {
  if (n < prefix.size()) return prefix[n];
  return tail[(n - prefix.size()) % tail.size()];
}

void SynthParams::validate() const {
  if (!is_prime(p) || !is_prime(p_aux)) throw invalid_input("p and p_aux must be prime");
  if (p == p_aux) throw invalid_input("p_aux must differ from p");
  if (e < 1) throw invalid_input("seed exponent e must be >= 1");
  if (alpha.sign() < 0) throw invalid_input("target alpha must be >= 0");
  if (!(Rat(e) > alpha)) throw invalid_input("seed exponent e must exceed alpha");
  if (lambda_cap < 2) throw invalid_input("lambda cap must be >= 2");
}

TransformStep choose_step(const Rat& c_ratio, const BigInt& M, const Rat& target, int to_type, unsigned t,
                          long p, long p_aux, long lambda_cap) {
  if (to_type != 1 && to_type != 2) throw invalid_input("to_type must be 1 or 2");
  const Rat hi = c_ratio - target * Rat(M);
  Rat lo = c_ratio - (target + pow2_neg(t)) * Rat(M);
  if (hi.sign() <= 0) {
    throw infeasible_error("empty window: target " + target.str() + " is not below c_ratio/M");
  }
  if (lo.sign() < 0) lo = Rat(0);
  const long base = to_type == 1 ? p_aux : p;
  const long lambda0 = to_type == 1 ? 1 : 2;
  for (long lambda = lambda0; lambda <= lambda_cap; ++lambda) {
    const BigInt m = ipow(base, static_cast<unsigned>(lambda));
    // smallest integer strictly above lo·m
    const Rat lo_m = lo * Rat(m);
    BigInt q = lo_m.num() / lo_m.den() + 1;
    if (q < 1) q = 1;
    const Rat hi_m = hi * Rat(m);
    for (; Rat(q) < hi_m; ++q) {
      if (mpz_divisible_ui_p(q.get_mpz_t(), static_cast<unsigned long>(base))) continue;
      if (!m.fits_slong_p() || !q.fits_slong_p()) {
        throw infeasible_error("step exceeds machine integer range at lambda = " + std::to_string(lambda));
      }
      return TransformStep::make(m.get_si(), q.get_si());
    }
  }
  throw infeasible_error("no admissible step with lambda <= " + std::to_string(lambda_cap));
}

SynthesisResult synthesize(const SynthParams& params, const SwitchPlan& plan) {
  params.validate();
  plan.validate();
  const long p = params.p, pa = params.p_aux;
  const bool augmented = plan.at(0) == 2;
  auto phi = [&](std::size_t n) { return augmented ? (n == 0 ? 1 : plan.at(n - 1)) : plan.at(n); };
  const std::size_t total = params.depth + (augmented ? 1 : 0);

  const ExtensionState seed = ExtensionState::seed(p, GermType::T1, Rat(params.e));
  ExtensionState state = seed;
  Schedule schedule;
  auto apply = [&](const TransformStep& st) {
    schedule.prefix.push_back(st);
    state = transition(state, st).next;
  };
  const TransformStep keep_two = TransformStep::make(pa * pa, p * p);
  const TransformStep leave_two = TransformStep::make(p * p, pa * pa);
  std::size_t i = 0;
  while (i < total) {
    if (state.type != GermType::T1) throw consistency_error("checkpoint state is not of type 1");
    if (phi(i + 1) == 1) {
      apply(choose_step(state.jac_ratio, state.M, params.alpha, 1, static_cast<unsigned>(i + 1), p, pa,
                        params.lambda_cap));
      i += 1;
      continue;
    }
    std::size_t run = 0;
    while (phi(i + 1 + run) == 2) ++run;
    const unsigned next_checkpoint = static_cast<unsigned>(i + run + 1);
    apply(choose_step(state.jac_ratio, state.M, params.alpha, 2, next_checkpoint, p, pa, params.lambda_cap));
    for (std::size_t k = 1; k < run; ++k) apply(keep_two);
    apply(leave_two);
    i += run + 1;
  }

  Trace trace = run_schedule(seed, schedule, total);
  for (std::size_t n = 0; n < trace.states.size(); ++n) {
    const GermType want = phi(n) == 1 ? GermType::T1 : GermType::T2;
    if (trace.states[n].type != want) {
      throw consistency_error("realized type " + std::string(type_name(trace.states[n].type)) + " at depth " +
                              std::to_string(n) + " differs from the plan");
    }
    if (n > 0) {
      if (trace.steps[n - 1].m <= 1 || trace.mbar_values[n - 1] <= 1) {
        throw consistency_error("synthesized step with m <= 1 or m̄ <= 1 at depth " + std::to_string(n));
      }
    }
    if (phi(n) == 1) trace.checkpoints.push_back(n);
  }

  SynthesisResult out;
  out.augmented = augmented;
  if (augmented) {
    trace.states.erase(trace.states.begin());
    for (auto& s : trace.states) s.depth -= 1;
    trace.steps.erase(trace.steps.begin());
    trace.d_values.erase(trace.d_values.begin());
    trace.sigma_values.erase(trace.sigma_values.begin());
    trace.mbar_values.erase(trace.mbar_values.begin());
    trace.first_index = 1;
    std::vector<std::size_t> shifted;
    for (std::size_t c : trace.checkpoints) {
      if (c > 0) shifted.push_back(c - 1);
    }
    trace.checkpoints = shifted;
    out.discarded_step = schedule.prefix.front();
    schedule.prefix.erase(schedule.prefix.begin());
  }
  trace.schedule = schedule;
  out.schedule = schedule;

  if (!verify_envelope(trace, params.alpha)) throw consistency_error("synthesized trace violates the envelope");
  Rat upper = trace.d_values.back();
  out.bound = DistanceBound::interval(params.alpha, upper);
  out.trace = std::move(trace);
  return out;
}

bool verify_envelope(const Trace& trace, const Rat& alpha) {
  for (std::size_t k : trace.checkpoints) {
    if (k >= trace.d_values.size()) return false;
    const std::size_t t = trace.first_index + k;
    if (t == 0) continue;
    const Rat& d = trace.d_values[k];
    if (!(alpha < d && d < alpha + pow2_neg(static_cast<unsigned>(t)))) return false;
  }
  return true;
}

}  // namespace asdefect

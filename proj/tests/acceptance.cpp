// One line per acceptance criterion; exit status is nonzero if any line fails.
#include "asdefect/kernel.hpp"
#include "asdefect/oracle.hpp"
#include "asdefect/synth.hpp"
#include "asdefect/tower.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>
#include <string>

using namespace asdefect;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void criterion(int n, const char* title, double limit_ms, const std::function<Outcome()>& body) {
  const auto t0 = Clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double ms = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
  const bool in_time = ms < limit_ms;
  const bool pass = o.pass && in_time;
  if (!pass) ++failures;
  std::printf("[%s] %d. %s | %s | %.1f ms (limit %.0f ms)\n", pass ? "PASS" : "FAIL", n, title, o.detail.c_str(), ms,
              limit_ms);
}

// Closed forms, written out independently of the library.
Rat lower_closed(long p) {
  const long p4 = p * p * p * p;
  return Rat(BigInt(p4 - 2), BigInt(p4 - 1));
}
Rat upper_closed(long p, long c) {
  const long p4 = p * p * p * p;
  return Rat(BigInt(c * p * p * p + (c - 1) * p * p + c * p + c), BigInt(p4 - 1));
}

const std::vector<std::pair<long, long>> kWorkedCases{{2, 1}, {2, 2}, {3, 2}, {5, 4}};

TruncSeries mono(const FieldPtr& F, int n, int i, int j, long long c = 1) {
  return TruncSeries::monomial(F, n, i, j, F->from_integer(c));
}

}  // namespace

int main() {
  criterion(1, "worked-example distances, exact, zero tolerance", 4000.0, [] {
    std::ostringstream d;
    bool ok = true;
    for (auto [p, c] : kWorkedCases) {
      const auto t0 = Clock::now();
      const auto w = worked_example(p, c, 6);
      const double ms = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
      const bool here = w.lower.exact && w.upper.exact && w.lower.lower == lower_closed(p) &&
                        w.upper.lower == upper_closed(p, c) && ms < 1000.0;
      ok &= here;
      d << "(" << p << "," << c << "): " << w.lower.describe() << ", " << w.upper.describe() << (here ? "" : " BAD")
        << "; ";
    }
    return Outcome{ok, d.str() + "each < 1 s"};
  });

  criterion(2, "recurrence vs engine, first 6 steps of both columns", 1000.0, [] {
    bool ok = true;
    std::size_t compared = 0;
    for (auto [p, c] : kWorkedCases) {
      const auto w = worked_example(p, c, 6);
      for (std::size_t k = 0; k < 6; ++k) {
        ok &= w.tower.d_lower.at(k) == w.d_lower.at(k) && w.tower.d_upper.at(k) == w.d_upper.at(k);
        compared += 2;
      }
    }
    return Outcome{ok, std::to_string(compared) + " exact d-value comparisons"};
  });

  criterion(3, "oracle equivalence, 200 cases, p in {2,3}, m,q <= 7, precision 64", 60000.0, [] {
    OracleConfig cfg;
    const auto s = run_oracle_suite(cfg);
    std::ostringstream d;
    d << "match " << s.matches << ", mismatch " << s.mismatches << ", skipped+flagged " << s.skipped + s.flagged
      << " (rate " << s.skip_rate() << " < 0.10)";
    return Outcome{s.rows.size() >= 200 && cfg.precision >= 64 && s.mismatches == 0 && s.skip_rate() < 0.10,
                   d.str()};
  });

  criterion(4, "Jacobian ground truths for p in {2,3,5}", 2000.0, [] {
    bool ok = true;
    std::ostringstream d;
    for (long p : {2L, 3L, 5L}) {
      const FieldPtr F = FiniteField::get({p, 4});
      const int n = 40;
      TruncSeries u(F, n);
      for (int k = 0; p + k * (p - 1) < n; ++k) u.set(static_cast<int>(p + k * (p - 1)), 0, 1);  // x^p/(1 - x^{p-1})
      const int c1 = jacobian_exponent(MapGerm(u, mono(F, n, 0, 1))).c;
      ok &= c1 == 2 * p - 2;
      d << "p=" << p << ": c=" << c1;
      for (long c = p - 1; c <= 4 * (p - 1); c += p - 1) {
        const int c2 = jacobian_exponent(
                           MapGerm(mono(F, n, 1, 0), mono(F, n, 0, static_cast<int>(p)) - mono(F, n, static_cast<int>(c), 1)))
                           .c;
        ok &= c2 == c;
      }
      d << ", y^p - x^c y exact for c = " << p - 1 << ".." << 4 * (p - 1) << "; ";
    }
    return Outcome{ok, d.str()};
  });

  criterion(5, "switching synthesis, 20 steps, 3 plans x alpha in {0, 1/2}, width < 2^-15", 10000.0, [] {
    const std::vector<std::pair<const char*, SwitchPlan>> plans{
        {"const 1", SwitchPlan{{}, {1}}}, {"(1,2) periodic", SwitchPlan{{}, {1, 2}}}, {"(2,2,1)+(1)", SwitchPlan{{2, 2, 1}, {1}}}};
    bool ok = true;
    std::ostringstream d;
    for (const auto& [name, plan] : plans) {
      for (const Rat& alpha : {Rat(0), Rat(BigInt(1), BigInt(2))}) {
        SynthParams params;
        params.p = 2;
        params.p_aux = 3;
        params.e = 1;
        params.alpha = alpha;
        params.depth = 20;
        const auto r = synthesize(params, plan);
        bool types = r.trace.states.size() == 21;
        for (std::size_t n = 0; n < r.trace.states.size(); ++n) {
          types &= r.trace.states[n].type == (plan.at(n) == 1 ? GermType::T1 : GermType::T2);
        }
        const bool env = verify_envelope(r.trace, alpha);
        const bool width = r.bound.contains(alpha) && r.bound.width() < pow2_neg(15);
        ok &= types && env && width;
        if (!(types && env && width)) {
          d << name << " alpha " << alpha.str() << " types " << types << " envelope " << env << " width " << width
            << "; ";
        }
      }
    }
    return Outcome{ok, ok ? std::string("types, envelope and width hold in all 6 runs") : d.str()};
  });

  criterion(6, "value-group index and verdicts for p in {2,3}", 2000.0, [] {
    bool ok = true;
    std::ostringstream d;
    for (long p : {2L, 3L}) {
      const long odd = p == 2 ? 3 : 2;  // coprime to p
      Schedule all_two, all_one, switching;
      all_two.tail = std::vector<TransformStep>{TransformStep::make(odd, p)};
      all_one.tail = std::vector<TransformStep>{TransformStep::make(odd, 1)};
      switching.tail = std::vector<TransformStep>{TransformStep::make(p, 1), TransformStep::make(p * p * p, 1)};
      const auto t2 = run_schedule(ExtensionState::seed(p, GermType::T2, Rat(2)), all_two, 12);
      const auto t1 = run_schedule(ExtensionState::seed(p, GermType::T1, Rat(2)), all_one, 12);
      const auto ts = run_schedule(ExtensionState::seed(p, GermType::T2, Rat(2)), switching, 12);
      const auto v2 = defect_verdict(t2), vs = defect_verdict(ts);
      const bool here = value_group_index(t2) == p && v2.verdict == Verdict::defectless &&
                        value_group_index(t1) == 1 && value_group_index(ts) == 1 && vs.verdict == Verdict::defect;
      ok &= here;
      d << "p=" << p << ": all-T2 index " << value_group_index(t2).get_str() << " " << verdict_name(v2.verdict)
        << ", all-T1 index " << value_group_index(t1).get_str() << ", switching index "
        << value_group_index(ts).get_str() << " " << verdict_name(vs.verdict) << "; ";
    }
    return Outcome{ok, d.str()};
  });

  criterion(7, "independent tower p=2 depth 8: links, squeeze into [0, 2^-6], audit", 5000.0, [] {
    const auto t = build_independent_tower(2, 8);
    const auto audit = stable_form_audit(t);
    const Rat cap = pow2_neg(6);
    const bool squeeze = t.lower_bound.lower == Rat(0) && t.upper_bound.lower == Rat(0) &&
                         t.lower_bound.upper <= cap && t.upper_bound.upper <= cap;
    std::ostringstream d;
    d << "links " << (t.links_ok() ? "clean" : "BROKEN") << ", lower " << t.lower_bound.describe() << ", upper "
      << t.upper_bound.describe() << ", flagged " << (audit.all_flagged() ? "every depth" : "NOT every depth")
      << ", kernel mismatches " << audit.mismatches;
    return Outcome{t.links_ok() && squeeze && audit.all_flagged() && audit.mismatches == 0, d.str()};
  });

  criterion(8, "property suites: monotone d, switching certificate, chain rule, j-independence, complexity", 60000.0,
            [] {
              std::mt19937_64 rng(8);
              std::size_t runs = 0, completed = 0;
              bool monotone = true, certified = true;
              const long primes[] = {2, 3, 5};
              while (completed < 1000 && runs < 20000) {
                const long p = primes[rng() % 3];
                const bool two = rng() % 2 == 0;
                const long c = (two ? p : 1) + static_cast<long>(rng() % 12);
                const auto seed =
                    ExtensionState::seed(p, two ? GermType::T2 : GermType::T1, Rat(BigInt(c), BigInt(p - 1)));
                Schedule s;
                const std::size_t len = 1 + rng() % 25;
                while (s.prefix.size() < len) {
                  const long m = 1 + static_cast<long>(rng() % 9), q = 1 + static_cast<long>(rng() % 9);
                  if (std::gcd(m, q) == 1) s.prefix.push_back(TransformStep::make(m, q));
                }
                ++runs;
                Trace tr;
                try {
                  tr = run_schedule(seed, s, len);
                } catch (const Error& e) {
                  if (e.error_class() == ErrorClass::invariant) monotone = false;
                  continue;
                }
                ++completed;
                for (std::size_t i = 1; i < tr.d_values.size(); ++i) monotone &= tr.d_values[i] <= tr.d_values[i - 1];
                certified &= switching_certificate(tr).passed;
              }
              OracleConfig cfg;
              cfg.cases = 1000;
              cfg.primes = {2, 3, 5};
              cfg.max_mq = 9;
              const auto suite = run_oracle_suite(cfg);
              bool galois = true;
              for (long p : {2L, 3L, 5L}) {
                for (int e = 1; e <= 3; ++e) {
                  const auto first = galois_difference({p, 4}, e, 1);
                  galois &= first.check;
                  for (int j = 2; j < p; ++j) {
                    const auto other = galois_difference({p, 4}, e, j);
                    galois &= other.check && other.value == first.value;
                  }
                }
              }
              std::ostringstream d;
              d << completed << " schedules completed (" << runs - completed << " rejected draws), monotone " << monotone << ", certificates " << certified
                << "; oracle 1000: mismatch " << suite.mismatches << ", chain-rule failures "
                << suite.chain_rule_failures << ", complexity failures " << suite.complexity_failures
                << "; galois shift-independence " << galois;
              return Outcome{monotone && certified && completed == 1000 && suite.mismatches == 0 &&
                                 suite.chain_rule_failures == 0 && suite.complexity_failures == 0 && galois,
                             d.str()};
            });

  std::printf("%s: %d of 8 criteria failed\n", failures == 0 ? "ACCEPTED" : "REJECTED", failures);
  return failures == 0 ? 0 : 1;
}

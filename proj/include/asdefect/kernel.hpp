#pragma once

#include "asdefect/engine.hpp"
#include "asdefect/errors.hpp"
#include "asdefect/series.hpp"

#include <optional>
#include <string>
#include <vector>

namespace asdefect {

// A pair (u, v) presenting R -> S, with u, v in the coordinates (x, y) of S.
class MapGerm {
 public:
  MapGerm(TruncSeries u, TruncSeries v);

  const TruncSeries& u() const { return u_; }
  const TruncSeries& v() const { return v_; }
  const FieldPtr& field() const { return u_.field(); }
  long p() const { return u_.F().p(); }
  int order() const { return std::min(u_.order(), v_.order()); }

  // u = x^a·unit; nullopt when not of that shape within the guarantee.
  std::optional<int> a() const { return a_; }
  // v = x^b·f with x not dividing f.
  std::optional<int> b() const { return b_; }
  // ord_y f(0, y); 0 when f is a unit.
  std::optional<int> d() const { return d_; }

 private:
  TruncSeries u_, v_;
  std::optional<int> a_, b_, d_;
};

enum class GermClass { T0, T1, T2, other };
const char* germ_class_name(GermClass g);

struct JacobianExponent {
  int c = 0;
  bool principal = true;  // J = x^c·unit within the guarantee
};

TruncSeries jacobian_determinant(const MapGerm& g);
JacobianExponent jacobian_exponent(const MapGerm& g);
GermClass classify_type(const MapGerm& g);
int complexity(const MapGerm& g);
MapGerm seed_artin_schreier(const FieldSpec& field, int e, int order = 64);

// Raised when the unit Λ of a type-1 transition vanishes at the origin.
class LambdaNonUnitError : public Error {
 public:
  explicit LambdaNonUnitError(const std::string& what)
      : Error(ErrorClass::infeasible, "non-unit Lambda", what) {}
};

struct OracleTransition {
  MapGerm germ;
  GermClass type = GermClass::other;
  int c = 0;           // Jacobian x1-exponent of the new germ
  int input_c = 0;     // Jacobian x-exponent of the input germ
  int sigma_bar = 1;   // gcd of the x1-exponents of u and v̄ after substitution
  int mbar = 1;
  int qbar = 1;
  bool chain_rule_ok = false;
  int working_order = 0;
};

// Runs the substitution pipeline of a type-1 or type-2 transition on a concrete germ.
// working_cap bounds the internal working order (0 means the input guarantee allows).
OracleTransition oracle_transition(const MapGerm& germ, const TransformStep& step, int working_cap = 0);

struct GaloisDifference {
  Rat value;   // in units of ω(x)
  bool check = false;
};
GaloisDifference galois_difference(const FieldSpec& field, int e, int j);

struct MonomialWitness {
  // x = Z^a W^b, y = Z^c W^d (det = ±1)
  int a = 1, b = 0, c = 0, d = 1;
  bool swapped = false;  // roles of u and v exchanged
  bool z_is_first = true;
  int exponent = 1;      // u = unit · z^exponent, w = v
  std::string description;
};

struct MonomialCertificate {
  int u_exponent = 0;
  int residue_order = 0;
  Rat leading_value;     // ω(y^p)
  Rat competing_value;   // least ω among the other terms of v
  std::string description;
};

struct StrongMonomialResult {
  enum class Outcome { yes, no, unknown } outcome = Outcome::unknown;
  std::optional<MonomialWitness> witness;
  std::optional<MonomialCertificate> certificate;
};
const char* outcome_name(StrongMonomialResult::Outcome o);

struct MonomialWeights {
  Rat x;  // ω(x)
  Rat y;  // ω(y)
};

StrongMonomialResult detect_strong_monomial(const MapGerm& germ, int search_bound,
                                            const std::optional<MonomialWeights>& weights = std::nullopt);

}  // namespace asdefect

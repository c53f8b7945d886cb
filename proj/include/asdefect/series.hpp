#pragma once

#include "asdefect/engine.hpp"
#include "asdefect/field.hpp"

#include <optional>
#include <vector>

namespace asdefect {

using Elem = FiniteField::Elem;

struct Term {
  int i = 0;  // x-exponent
  int j = 0;  // y-exponent
  Elem c = 0;
};

// Univariate truncated series in x: coefficients of x^0..x^{n-1}, all guaranteed.
using UniSeries = std::vector<Elem>;

// Bivariate power series in (x, y) over F_{p^s}; every monomial of total degree
// below order() is exact, nothing above is known.
class TruncSeries {
 public:
  TruncSeries(FieldPtr field, int order);

  static TruncSeries constant(FieldPtr field, int order, Elem c);
  static TruncSeries monomial(FieldPtr field, int order, int i, int j, Elem c);
  static TruncSeries from_terms(FieldPtr field, int order, const std::vector<Term>& terms);
  // Embeds a univariate series in x (guarantee = its length, capped by order).
  static TruncSeries from_x(FieldPtr field, int order, const UniSeries& f);

  const FieldPtr& field() const { return field_; }
  const FiniteField& F() const { return *field_; }
  int order() const { return order_; }

  Elem coeff(int i, int j) const;  // throws TruncationError outside the guarantee
  void set(int i, int j, Elem c);
  void add_to(int i, int j, Elem c);

  std::vector<Term> terms() const;  // nonzero terms, by total degree then j
  bool is_zero() const;
  Elem constant_term() const { return order_ > 0 ? data_[0] : 0; }

  TruncSeries truncated(int order) const;
  TruncSeries scaled(Elem c) const;
  TruncSeries pow(unsigned long k) const;
  TruncSeries d_dx() const;
  TruncSeries d_dy() const;

  // Smallest i with a nonzero coefficient x^i y^j inside the guarantee.
  std::optional<int> x_order() const;
  // Total degree of the lowest nonzero monomial.
  std::optional<int> total_order() const;
  // f / x^k; requires every coefficient with i < k to vanish. Guarantee drops by k.
  TruncSeries div_x_pow(int k) const;
  TruncSeries mul_x_pow(int k) const;
  UniSeries x_axis() const;  // f(x, 0)
  UniSeries y_axis() const;  // f(0, y)

  // f(x, y + h(x)) with h(0) = 0.
  TruncSeries shift_y(const UniSeries& h) const;

  friend TruncSeries operator+(const TruncSeries& a, const TruncSeries& b);
  friend TruncSeries operator-(const TruncSeries& a, const TruncSeries& b);
  friend TruncSeries operator*(const TruncSeries& a, const TruncSeries& b);

  // Equality of all coefficients within the common guarantee.
  bool agrees_with(const TruncSeries& o) const;

 private:
  static std::size_t index(int i, int j) {
    std::size_t d = static_cast<std::size_t>(i + j);
    return d * (d + 1) / 2 + static_cast<std::size_t>(j);
  }
  void check_field(const TruncSeries& o) const;

  FieldPtr field_;
  int order_;
  std::vector<Elem> data_;
};

enum class ArithOp { add, mul };
TruncSeries series_arith(ArithOp op, const TruncSeries& f, const TruncSeries& g);
TruncSeries invert_unit(const TruncSeries& f);

// Residue constant α for a step label: the field element with that integer encoding.
Elem resolve_alpha(const FiniteField& F, long label);

// x = x1^m (y1+α)^a', y = x1^q (y1+α)^b'. The result is exact below output order
// min(N·min(m,q), working_order) (working_order <= 0 means no cap).
TruncSeries substitute_monomial(const TruncSeries& f, const TransformStep& step, int working_order = 0);

// Univariate helpers over the same field (length = guarantee).
UniSeries uni_mul(const FiniteField& F, const UniSeries& a, const UniSeries& b);
UniSeries uni_inverse(const FiniteField& F, const UniSeries& a);

}  // namespace asdefect

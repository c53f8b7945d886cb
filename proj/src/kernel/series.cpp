#include "asdefect/series.hpp"

#include "asdefect/errors.hpp"

#include <algorithm>
#include <string>

namespace asdefect {

TruncSeries::TruncSeries(FieldPtr field, int order) : field_(std::move(field)), order_(order) {
  if (!field_) throw invalid_input("series without a field");
  if (order_ < 0) order_ = 0;
  data_.assign(index(0, order_), 0);
}

TruncSeries TruncSeries::constant(FieldPtr field, int order, Elem c) {
  TruncSeries s(std::move(field), order);
  if (order > 0) s.data_[0] = c;
  return s;
}

TruncSeries TruncSeries::monomial(FieldPtr field, int order, int i, int j, Elem c) {
  TruncSeries s(std::move(field), order);
  if (i + j < order) s.set(i, j, c);
  return s;
}

TruncSeries TruncSeries::from_terms(FieldPtr field, int order, const std::vector<Term>& terms) {
  TruncSeries s(std::move(field), order);
  for (const auto& t : terms) {
    if (t.i < 0 || t.j < 0) throw invalid_input("negative exponent in series term");
    if (t.i + t.j < order) s.add_to(t.i, t.j, t.c);
  }
  return s;
}

TruncSeries TruncSeries::from_x(FieldPtr field, int order, const UniSeries& f) {
  TruncSeries s(std::move(field), std::min<int>(order, static_cast<int>(f.size())));
  for (int i = 0; i < s.order_; ++i) s.data_[index(i, 0)] = f[i];
  return s;
}

Elem TruncSeries::coeff(int i, int j) const {
  if (i < 0 || j < 0) return 0;
  if (i + j >= order_) {
    throw TruncationError("coefficient of x^" + std::to_string(i) + " y^" + std::to_string(j) +
                          " is beyond guaranteed order " + std::to_string(order_));
  }
  return data_[index(i, j)];
}

void TruncSeries::set(int i, int j, Elem c) {
  if (i < 0 || j < 0 || i + j >= order_) throw invalid_input("monomial outside the guarantee");
  data_[index(i, j)] = c;
}

void TruncSeries::add_to(int i, int j, Elem c) {
  auto& slot = data_[index(i, j)];
  slot = field_->add(slot, c);
}

std::vector<Term> TruncSeries::terms() const {
  std::vector<Term> out;
  for (int d = 0; d < order_; ++d) {
    for (int j = 0; j <= d; ++j) {
      Elem c = data_[index(d - j, j)];
      if (c != 0) out.push_back({d - j, j, c});
    }
  }
  return out;
}

bool TruncSeries::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](Elem c) { return c == 0; });
}

TruncSeries TruncSeries::truncated(int order) const {
  TruncSeries s(field_, std::min(order, order_));
  std::copy(data_.begin(), data_.begin() + static_cast<long>(s.data_.size()), s.data_.begin());
  return s;
}

TruncSeries TruncSeries::scaled(Elem c) const {
  TruncSeries s(field_, order_);
  for (std::size_t k = 0; k < data_.size(); ++k) s.data_[k] = field_->mul(data_[k], c);
  return s;
}

TruncSeries TruncSeries::pow(unsigned long k) const {
  TruncSeries result = constant(field_, order_, 1);
  TruncSeries base = *this;
  while (k > 0) {
    if (k & 1) result = result * base;
    k >>= 1;
    if (k > 0) base = base * base;
  }
  return result;
}

TruncSeries TruncSeries::d_dx() const {
  TruncSeries s(field_, std::max(order_ - 1, 0));
  for (int d = 0; d < s.order_; ++d) {
    for (int j = 0; j <= d; ++j) {
      int i = d - j;
      Elem c = data_[index(i + 1, j)];
      if (c != 0) s.data_[index(i, j)] = field_->mul(c, field_->from_integer(i + 1));
    }
  }
  return s;
}

TruncSeries TruncSeries::d_dy() const {
  TruncSeries s(field_, std::max(order_ - 1, 0));
  for (int d = 0; d < s.order_; ++d) {
    for (int j = 0; j <= d; ++j) {
      int i = d - j;
      Elem c = data_[index(i, j + 1)];
      if (c != 0) s.data_[index(i, j)] = field_->mul(c, field_->from_integer(j + 1));
    }
  }
  return s;
}

std::optional<int> TruncSeries::x_order() const {
  std::optional<int> best;
  for (const auto& t : terms()) {
    if (!best || t.i < *best) best = t.i;
  }
  return best;
}

std::optional<int> TruncSeries::total_order() const {
  for (int d = 0; d < order_; ++d) {
    for (int j = 0; j <= d; ++j) {
      if (data_[index(d - j, j)] != 0) return d;
    }
  }
  return std::nullopt;
}

TruncSeries TruncSeries::div_x_pow(int k) const {
  if (k < 0) throw invalid_input("negative power");
  if (k > order_) throw TruncationError("cannot divide by x^" + std::to_string(k) + " at order " + std::to_string(order_));
  for (int d = 0; d < order_; ++d) {
    for (int i = 0; i < std::min(k, d + 1); ++i) {
      if (data_[index(i, d - i)] != 0) throw consistency_error("series is not divisible by x^" + std::to_string(k));
    }
  }
  TruncSeries s(field_, order_ - k);
  for (int d = 0; d < s.order_; ++d) {
    for (int j = 0; j <= d; ++j) s.data_[index(d - j, j)] = data_[index(d - j + k, j)];
  }
  return s;
}

TruncSeries TruncSeries::mul_x_pow(int k) const {
  TruncSeries s(field_, order_ + k);
  for (const auto& t : terms()) s.data_[index(t.i + k, t.j)] = t.c;
  return s;
}

UniSeries TruncSeries::x_axis() const {
  UniSeries out(order_);
  for (int i = 0; i < order_; ++i) out[i] = data_[index(i, 0)];
  return out;
}

UniSeries TruncSeries::y_axis() const {
  UniSeries out(order_);
  for (int j = 0; j < order_; ++j) out[j] = data_[index(0, j)];
  return out;
}

TruncSeries TruncSeries::shift_y(const UniSeries& h) const {
  if (!h.empty() && h[0] != 0) throw invalid_input("shift must vanish at the origin");
  const int n = std::min<int>(order_, static_cast<int>(h.size()));
  const FiniteField& F = *field_;
  TruncSeries result(field_, n);
  TruncSeries power = constant(field_, n, 1);  // (y + h)^j
  TruncSeries lin(field_, n);                  // y + h
  if (n > 1) lin.set(0, 1, 1);
  for (int i = 1; i < n; ++i) lin.set(i, 0, h[i]);
  for (int j = 0; j < n; ++j) {
    // result += F_j(x) · (y+h)^j, where F_j(x) = sum_i f(i,j) x^i
    auto pterms = power.terms();
    for (int i = 0; i + j < n; ++i) {
      Elem c = data_[index(i, j)];
      if (c == 0) continue;
      for (const auto& t : pterms) {
        if (t.i + i + t.j >= n) continue;
        result.add_to(t.i + i, t.j, F.mul(c, t.c));
      }
    }
    if (j + 1 < n) power = power * lin;
  }
  return result;
}

void TruncSeries::check_field(const TruncSeries& o) const {
  if (field_ != o.field_ && !(field_->spec() == o.field_->spec())) {
    throw invalid_input("field mismatch between series");
  }
}

TruncSeries operator+(const TruncSeries& a, const TruncSeries& b) {
  a.check_field(b);
  TruncSeries s(a.field_, std::min(a.order_, b.order_));
  for (std::size_t k = 0; k < s.data_.size(); ++k) s.data_[k] = a.field_->add(a.data_[k], b.data_[k]);
  return s;
}

TruncSeries operator-(const TruncSeries& a, const TruncSeries& b) {
  a.check_field(b);
  TruncSeries s(a.field_, std::min(a.order_, b.order_));
  for (std::size_t k = 0; k < s.data_.size(); ++k) s.data_[k] = a.field_->sub(a.data_[k], b.data_[k]);
  return s;
}

TruncSeries operator*(const TruncSeries& a, const TruncSeries& b) {
  a.check_field(b);
  const FiniteField& F = *a.field_;
  const int n = std::min(a.order_, b.order_);
  TruncSeries s(a.field_, n);
  auto ta = a.terms();
  auto tb = b.terms();
  struct LogTerm {
    int i, j, d, l;
  };
  std::vector<LogTerm> lb;
  lb.reserve(tb.size());
  for (const auto& t : tb) lb.push_back({t.i, t.j, t.i + t.j, F.log(t.c)});
  for (const auto& t : ta) {
    const int d1 = t.i + t.j;
    if (d1 >= n) break;
    const int l1 = F.log(t.c);
    for (const auto& u : lb) {
      if (d1 + u.d >= n) break;
      auto& slot = s.data_[TruncSeries::index(t.i + u.i, t.j + u.j)];
      slot = F.add(slot, F.exp(l1 + u.l));
    }
  }
  return s;
}

bool TruncSeries::agrees_with(const TruncSeries& o) const {
  check_field(o);
  const int n = std::min(order_, o.order_);
  for (std::size_t k = 0; k < index(0, n); ++k) {
    if (data_[k] != o.data_[k]) return false;
  }
  return true;
}

TruncSeries series_arith(ArithOp op, const TruncSeries& f, const TruncSeries& g) {
  return op == ArithOp::add ? f + g : f * g;
}

TruncSeries invert_unit(const TruncSeries& f) {
  if (f.order() == 0) throw TruncationError("empty series has no known constant term");
  const FiniteField& F = f.F();
  const Elem c0 = f.constant_term();
  if (c0 == 0) throw domain_error("series is not a unit");
  const Elem neg_inv = F.neg(F.inv(c0));
  const int n = f.order();
  auto tf = f.terms();
  TruncSeries h(f.field(), n);
  h.set(0, 0, F.inv(c0));
  for (int d = 1; d < n; ++d) {
    for (int j = 0; j <= d; ++j) {
      const int i = d - j;
      Elem acc = 0;
      for (const auto& t : tf) {
        if (t.i + t.j == 0) continue;
        if (t.i + t.j > d) break;
        if (t.i > i || t.j > j) continue;
        Elem hv = h.coeff(i - t.i, j - t.j);
        if (hv != 0) acc = F.add(acc, F.mul(t.c, hv));
      }
      if (acc != 0) h.set(i, j, F.mul(neg_inv, acc));
    }
  }
  return h;
}

Elem resolve_alpha(const FiniteField& F, long label) {
  if (label == 0) throw domain_error("residue constant alpha must be nonzero");
  if (label < 0 || label >= F.size()) {
    throw domain_error("alpha label " + std::to_string(label) + " does not name an element of F_" +
                       std::to_string(F.size()));
  }
  return static_cast<Elem>(label);
}

namespace {

// C(k, l) mod p by Lucas' theorem.
long binom_mod_p(long k, long l, long p, const std::vector<std::vector<long>>& small) {
  long out = 1;
  while (k > 0 || l > 0) {
    long kd = k % p, ld = l % p;
    if (ld > kd) return 0;
    out = out * small[kd][ld] % p;
    k /= p;
    l /= p;
  }
  return out;
}

}  // namespace

TruncSeries substitute_monomial(const TruncSeries& f, const TransformStep& step, int working_order) {
  step.validate();
  const FiniteField& F = f.F();
  const Elem alpha = resolve_alpha(F, step.alpha_label);
  const long p = F.p();
  long out_order = static_cast<long>(f.order()) * std::min(step.m, step.q);
  if (working_order > 0) out_order = std::min<long>(out_order, working_order);
  const int n = static_cast<int>(out_order);
  std::vector<std::vector<long>> small(p, std::vector<long>(p, 0));
  for (long a = 0; a < p; ++a) {
    small[a][0] = 1;
    for (long b = 1; b <= a; ++b) small[a][b] = (small[a - 1][b - 1] + (b <= a - 1 ? small[a - 1][b] : 0)) % p;
  }
  TruncSeries out(f.field(), n);
  for (const auto& t : f.terms()) {
    const long e = static_cast<long>(t.i) * step.m + static_cast<long>(t.j) * step.q;
    if (e >= n) continue;
    const long k = static_cast<long>(t.i) * step.a_cof + static_cast<long>(t.j) * step.b_cof;
    for (long l = 0; l <= k && e + l < n; ++l) {
      long b = binom_mod_p(k, l, p, small);
      if (b == 0) continue;
      Elem c = F.mul(F.mul(t.c, F.from_integer(b)), F.pow(alpha, k - l));
      out.add_to(static_cast<int>(e), static_cast<int>(l), c);
    }
  }
  return out;
}

UniSeries uni_mul(const FiniteField& F, const UniSeries& a, const UniSeries& b) {
  const std::size_t n = std::min(a.size(), b.size());
  UniSeries out(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; i + j < n; ++j) {
      if (b[j] != 0) out[i + j] = F.add(out[i + j], F.mul(a[i], b[j]));
    }
  }
  return out;
}

UniSeries uni_inverse(const FiniteField& F, const UniSeries& a) {
  if (a.empty() || a[0] == 0) throw domain_error("univariate series is not a unit");
  const std::size_t n = a.size();
  UniSeries h(n, 0);
  h[0] = F.inv(a[0]);
  const Elem neg_inv = F.neg(h[0]);
  for (std::size_t k = 1; k < n; ++k) {
    Elem acc = 0;
    for (std::size_t i = 1; i <= k; ++i) {
      if (a[i] != 0 && h[k - i] != 0) acc = F.add(acc, F.mul(a[i], h[k - i]));
    }
    h[k] = F.mul(neg_inv, acc);
  }
  return h;
}

}  // namespace asdefect

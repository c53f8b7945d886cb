#include "asdefect/kernel.hpp"

#include "asdefect/errors.hpp"

#include <algorithm>
#include <array>
#include <numeric>
#include <string>

namespace asdefect {

namespace {

// Smallest j with f(i0, j) != 0 among guaranteed coefficients.
std::optional<int> first_y_power(const TruncSeries& f, int i0) {
  for (int j = 0; i0 + j < f.order(); ++j) {
    if (f.coeff(i0, j) != 0) return j;
  }
  return std::nullopt;
}

TruncSeries transposed(const TruncSeries& f) {
  TruncSeries out(f.field(), f.order());
  for (const auto& t : f.terms()) out.set(t.j, t.i, t.c);
  return out;
}

}  // namespace

MapGerm::MapGerm(TruncSeries u, TruncSeries v) : u_(std::move(u)), v_(std::move(v)) {
  if (!(u_.F().spec() == v_.F().spec())) throw invalid_input("germ components live over different fields");
  if (u_.order() == 0 || v_.order() == 0) throw TruncationError("germ component with empty guarantee");
  if (u_.constant_term() != 0 || v_.constant_term() != 0) {
    throw invalid_input("germ components must be non-units");
  }
  if (auto xo = u_.x_order(); xo && *xo < u_.order() && u_.coeff(*xo, 0) != 0) a_ = *xo;
  if (auto xo = v_.x_order()) {
    b_ = *xo;
    d_ = first_y_power(v_, *xo);
  }
}

const char* germ_class_name(GermClass g) {
  switch (g) {
    case GermClass::T0: return "T0";
    case GermClass::T1: return "T1";
    case GermClass::T2: return "T2";
    case GermClass::other: return "other";
  }
  return "?";
}

const char* outcome_name(StrongMonomialResult::Outcome o) {
  switch (o) {
    case StrongMonomialResult::Outcome::yes: return "yes";
    case StrongMonomialResult::Outcome::no: return "no";
    case StrongMonomialResult::Outcome::unknown: return "unknown";
  }
  return "?";
}

TruncSeries jacobian_determinant(const MapGerm& g) {
  return g.u().d_dx() * g.v().d_dy() - g.u().d_dy() * g.v().d_dx();
}

JacobianExponent jacobian_exponent(const MapGerm& g) {
  TruncSeries j = jacobian_determinant(g);
  auto c = j.x_order();
  if (!c) {
    throw TruncationError("Jacobian determinant vanishes below order " + std::to_string(j.order()) +
                          " (inseparable or insufficient precision)");
  }
  return {*c, j.coeff(*c, 0) != 0};
}

GermClass classify_type(const MapGerm& g) {
  if (!g.b()) throw TruncationError("v vanishes within the guarantee");
  if (!g.d()) throw TruncationError("residue order of v not determined within the guarantee");
  if (!g.a() || *g.b() != 0) return GermClass::other;
  const long p = g.p();
  const int a = *g.a(), d = *g.d();
  if (a == 1 && d == 1) return GermClass::T0;
  if (a == 1 && d == p) return GermClass::T1;
  if (a == p && d == 1) return GermClass::T2;
  return GermClass::other;
}

int complexity(const MapGerm& g) {
  if (!g.b() || !g.d()) throw TruncationError("orders of v not determined within the guarantee");
  if (*g.d() == 0) throw invalid_input("germ is not well prepared: f is a unit");
  if (!g.a()) throw TruncationError("u is not a monomial times a unit within the guarantee");
  return *g.a() * *g.d();
}

MapGerm seed_artin_schreier(const FieldSpec& spec, int e, int order) {
  if (e < 1) throw domain_error("seed exponent e must be >= 1");
  auto F = FiniteField::get(spec);
  const int p = static_cast<int>(spec.p);
  TruncSeries u = TruncSeries::monomial(F, order, 1, 0, 1);
  TruncSeries v = TruncSeries::monomial(F, order, 0, p, 1) -
                  TruncSeries::monomial(F, order, e * (p - 1), 1, 1);
  return MapGerm(u, v);
}

namespace {

// Σ_j f_j(x) h(x)^j for univariate h with h(0) = 0; exact to length min(order, |h|).
UniSeries eval_at_y(const TruncSeries& f, const UniSeries& h) {
  const FiniteField& F = f.F();
  const int n = std::min<int>(f.order(), static_cast<int>(h.size()));
  UniSeries out(n, 0);
  UniSeries hp(n, 0);
  hp[0] = 1;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i + j < n; ++i) {
      Elem c = f.coeff(i, j);
      if (c == 0) continue;
      for (int k = 0; k + i < n; ++k) {
        if (hp[k] != 0) out[i + k] = F.add(out[i + k], F.mul(c, hp[k]));
      }
    }
    hp = uni_mul(F, hp, UniSeries(h.begin(), h.begin() + n));
  }
  return out;
}

// Root h(x) of v(x, h(x)) = 0 with h(0) = 0, for v with a nonzero y-linear term.
UniSeries weierstrass_root(const TruncSeries& v) {
  const FiniteField& F = v.F();
  const int n = v.order();
  TruncSeries vy = v.d_dy();
  UniSeries h(n, 0);
  for (int iter = 0; iter < 64; ++iter) {
    UniSeries r = eval_at_y(v, h);
    if (std::all_of(r.begin(), r.end(), [](Elem c) { return c == 0; })) return h;
    UniSeries dv = eval_at_y(vy, h);
    UniSeries inv = uni_inverse(F, dv);
    // r has positive order, so r·inv is exact to length n even though inv is one shorter.
    UniSeries corr(n, 0);
    for (int i = 0; i < n; ++i) {
      if (r[i] == 0) continue;
      for (int j = 0; j < static_cast<int>(inv.size()) && i + j < n; ++j) {
        if (inv[j] != 0) corr[i + j] = F.add(corr[i + j], F.mul(r[i], inv[j]));
      }
    }
    for (int i = 0; i < n; ++i) h[i] = F.sub(h[i], corr[i]);
  }
  throw consistency_error("Newton iteration for the y-root did not converge");
}

// Expansion v(x,0) = Σ e_i u(x,0)^i for 1 <= i <= cap; returns v - Σ e_i u^i.
TruncSeries subtract_u_polynomial(const TruncSeries& u, const TruncSeries& v, int cap) {
  const FiniteField& F = u.F();
  const int n = std::min(u.order(), v.order());
  if (cap >= n) throw TruncationError("normalization degree " + std::to_string(cap) + " exceeds guarantee");
  UniSeries ux = u.x_axis(), rem = v.x_axis();
  ux.resize(n);
  rem.resize(n);
  const Elem lead = ux[1];
  if (lead == 0) throw consistency_error("u is not x times a unit");
  TruncSeries out = v.truncated(n);
  TruncSeries upow_b = u.truncated(n);
  UniSeries upow = ux;
  for (int i = 1; i <= cap; ++i) {
    Elem e = F.mul(rem[i], F.inv(F.pow(lead, i)));
    if (e != 0) {
      for (int k = 0; k < n; ++k) rem[k] = F.sub(rem[k], F.mul(e, upow[k]));
      out = out - upow_b.scaled(e);
    }
    if (i < cap) {
      upow = uni_mul(F, upow, ux);
      upow_b = upow_b * u;
    }
  }
  return out;
}

struct MinimalCofactors {
  long c, d;  // mbar·d - c·qbar = 1, c >= 0, 1 <= d <= qbar
};

MinimalCofactors minimal_cofactors(long mbar, long qbar) {
  for (long d = 1; d <= qbar; ++d) {
    if ((mbar * d - 1) % qbar == 0) return {(mbar * d - 1) / qbar, d};
  }
  throw consistency_error("no unimodular completion");
}

}  // namespace

OracleTransition oracle_transition(const MapGerm& germ, const TransformStep& step, int working_cap) {
  step.validate();
  const GermClass cls = classify_type(germ);
  if (cls == GermClass::other) throw wrong_type_error("germ is not of type 0, 1 or 2");
  const long p = germ.p();
  const long m = step.m, q = step.q;
  if (cls == GermClass::T1 && m <= 1) throw hypothesis_error("type-1 transition needs m > 1");
  const JacobianExponent jin = jacobian_exponent(germ);
  if (!jin.principal) throw consistency_error("input Jacobian is not x^c times a unit");

  TruncSeries u = germ.u(), vbar = germ.v();
  if (cls == GermClass::T2) {
    UniSeries h = weierstrass_root(vbar);
    u = u.shift_y(h);
    vbar = vbar.shift_y(h);
    for (Elem c : vbar.x_axis()) {
      if (c != 0) throw consistency_error("straightened v does not vanish on y = 0");
    }
  } else {
    const long residue = cls == GermClass::T1 ? p : 1;
    vbar = subtract_u_polynomial(u, vbar, static_cast<int>(residue * q / m));
  }

  const long max_order = static_cast<long>(std::min(u.order(), vbar.order())) * std::min(m, q);
  const long cap = working_cap > 0 ? std::min<long>(working_cap, max_order) : max_order;
  const long probe = std::min<long>(cap, p * std::max(m, q) + m + q + 2);

  auto x1_order = [](const TruncSeries& s, const char* name) {
    auto o = s.x_order();
    if (!o) throw TruncationError(std::string("x1-order of ") + name + " not visible at working order");
    return *o;
  };
  const int A = x1_order(substitute_monomial(u, step, static_cast<int>(probe)), "u");
  const int B = x1_order(substitute_monomial(vbar, step, static_cast<int>(probe)), "v");
  const int g = std::gcd(A, B);
  const long mbar = A / g, qbar = B / g;
  const long c_pred = m * jin.c + m + q - 1 - static_cast<long>(g) * (mbar + qbar - 1);
  if (c_pred < 0) throw consistency_error("chain rule predicts a negative exponent");
  const long W = std::max(A, B) + std::max<long>(c_pred + 2, p + 1) + 2;
  if (W > cap) {
    throw TruncationError("working order " + std::to_string(W) + " exceeds available " + std::to_string(cap));
  }

  const int w = static_cast<int>(W);
  TruncSeries U = substitute_monomial(u, step, w).div_x_pow(A);
  TruncSeries V = substitute_monomial(vbar, step, w).div_x_pow(B);
  const int inner = w - std::max(A, B);
  U = U.truncated(inner);
  V = V.truncated(inner);
  if (U.constant_term() == 0) throw consistency_error("u / x1^A is not a unit");
  if (V.constant_term() == 0) {
    throw LambdaNonUnitError("v / x1^B vanishes at the origin (two minimal-value terms)");
  }
  auto [cc, dd] = minimal_cofactors(mbar, qbar);
  TruncSeries Uinv = invert_unit(U), Vinv = invert_unit(V);
  TruncSeries u1 = (U.pow(dd) * Vinv.pow(cc)).mul_x_pow(g);
  TruncSeries v1 = V.pow(mbar) * Uinv.pow(qbar);
  const Elem beta = v1.constant_term();
  v1 = v1 - TruncSeries::constant(v1.field(), v1.order(), beta);

  OracleTransition out{MapGerm(u1, v1)};
  out.type = classify_type(out.germ);
  JacobianExponent jout = jacobian_exponent(out.germ);
  if (!jout.principal) throw consistency_error("new Jacobian is not x1^c times a unit");
  out.c = jout.c;
  out.input_c = jin.c;
  out.sigma_bar = g;
  out.mbar = static_cast<int>(mbar);
  out.qbar = static_cast<int>(qbar);
  out.working_order = w;
  out.chain_rule_ok = static_cast<long>(g) * (mbar + qbar - 1) + out.c == m * jin.c + m + q - 1;
  return out;
}

GaloisDifference galois_difference(const FieldSpec& spec, int e, int j) {
  if (e < 1) throw domain_error("exponent e must be >= 1");
  if (j < 1 || j > spec.p - 1) throw domain_error("Galois index j must lie in [1, p-1]");
  auto F = FiniteField::get(spec);
  const int p = static_cast<int>(spec.p);
  const int order = e * p + p + 2;
  // y = x^e·Θ; as a series in (x, Θ), σ_j(y) - y = x^e·(Θ + j) - x^e·Θ.
  TruncSeries y = TruncSeries::monomial(F, order, e, 1, 1);
  TruncSeries shifted = y + TruncSeries::monomial(F, order, e, 0, F->from_integer(j));
  TruncSeries diff = shifted - y;
  auto val = diff.x_order();
  if (!val || diff.total_order() != e) throw consistency_error("Galois difference vanished");

  MapGerm seed = seed_artin_schreier(spec, e, order);
  const int c = jacobian_exponent(seed).c;
  // v(x, x^eΘ) must equal x^{ep}(Θ^p - Θ).
  TruncSeries image(F, order);
  for (const auto& t : seed.v().terms()) {
    if (t.i + e * t.j + t.j < order) image.add_to(t.i + e * t.j, t.j, t.c);
  }
  TruncSeries expected = TruncSeries::monomial(F, order, e * p, p, 1) - TruncSeries::monomial(F, order, e * p, 1, 1);
  GaloisDifference out;
  out.value = Rat(*val);
  out.check = image.agrees_with(expected) && out.value == Rat(c) / Rat(p - 1);
  return out;
}

namespace {

// Monomial change x = Z^a W^b, y = Z^c W^d.
TruncSeries monomial_chart(const TruncSeries& f, int a, int b, int c, int d, int order_cap) {
  const int n = std::min(order_cap, f.order() * std::min(a + b, c + d));
  TruncSeries out(f.field(), n);
  for (const auto& t : f.terms()) {
    int zi = a * t.i + c * t.j, wj = b * t.i + d * t.j;
    if (zi + wj < n) out.add_to(zi, wj, t.c);
  }
  return out;
}

// P = Z^k·unit and Q has a nonzero W-linear term with Q(0,0) = 0.
std::optional<int> monomial_in_first(const TruncSeries& P, const TruncSeries& Q) {
  auto k = P.x_order();
  if (!k || *k < 1 || *k >= P.order() || P.coeff(*k, 0) == 0) return std::nullopt;
  if (Q.order() < 2 || Q.constant_term() != 0 || Q.coeff(0, 1) == 0) return std::nullopt;
  return k;
}

}  // namespace

StrongMonomialResult detect_strong_monomial(const MapGerm& germ, int search_bound,
                                            const std::optional<MonomialWeights>& weights) {
  StrongMonomialResult res;
  const long p = germ.p();
  if (weights && germ.a() == p && germ.b() == 0 && germ.d() == p) {
    const Rat lead = Rat(p) * weights->y;
    Rat competing = Rat(germ.v().order()) * min(weights->x, weights->y);
    for (const auto& t : germ.v().terms()) {
      if (t.i == 0 && t.j == p) continue;
      competing = min(competing, Rat(t.i) * weights->x + Rat(t.j) * weights->y);
    }
    if (lead < competing) {
      MonomialCertificate cert;
      cert.u_exponent = static_cast<int>(p);
      cert.residue_order = static_cast<int>(p);
      cert.leading_value = lead;
      cert.competing_value = competing;
      cert.description = "u = unit·x^p, v = unit·y^p + x·Omega with value(y^p) = " + lead.str() +
                         " below every other term (>= " + competing.str() + ")";
      res.outcome = StrongMonomialResult::Outcome::no;
      res.certificate = cert;
      return res;
    }
  }
  const int cap = 4 * germ.order();
  // Identity first, then by increasing entry sum so the simplest witness wins.
  std::vector<std::array<int, 4>> charts{{1, 0, 0, 1}};
  for (int total = 2; total <= 4 * search_bound; ++total) {
    for (int a = 0; a <= search_bound; ++a) {
      for (int b = 0; b <= search_bound; ++b) {
        for (int c = 0; c <= search_bound; ++c) {
          int d = total - a - b - c;
          if (d < 0 || d > search_bound) continue;
          long det = static_cast<long>(a) * d - static_cast<long>(b) * c;
          if ((det == 1 || det == -1) && !(a == 1 && b == 0 && c == 0 && d == 1)) charts.push_back({a, b, c, d});
        }
      }
    }
  }
  for (const auto& [a, b, c, d] : charts) {
    TruncSeries U = monomial_chart(germ.u(), a, b, c, d, cap);
    TruncSeries V = monomial_chart(germ.v(), a, b, c, d, cap);
    for (int swap = 0; swap < 2; ++swap) {
      const TruncSeries& P = swap ? V : U;
      const TruncSeries& Q = swap ? U : V;
      for (int first = 0; first < 2; ++first) {
        auto k = first == 0 ? monomial_in_first(P, Q) : monomial_in_first(transposed(P), transposed(Q));
        if (!k) continue;
        MonomialWitness w{a, b, c, d, swap == 1, first == 0, *k, ""};
        w.description = "x = Z^" + std::to_string(a) + " W^" + std::to_string(b) + ", y = Z^" +
                        std::to_string(c) + " W^" + std::to_string(d) + "; " + (swap ? "v" : "u") +
                        " = unit·" + (first == 0 ? "Z" : "W") + "^" + std::to_string(*k) + ", w = " +
                        (swap ? "u" : "v");
        res.outcome = StrongMonomialResult::Outcome::yes;
        res.witness = w;
        return res;
      }
    }
  }
  return res;
}

}  // namespace asdefect

#include "asdefect/rational.hpp"

#include "asdefect/errors.hpp"

#include <cctype>

namespace asdefect {

Rat::Rat(const BigInt& num, const BigInt& den) {
  if (den == 0) throw domain_error("zero denominator");
  v_ = mpq_class(num, den);
  v_.canonicalize();
}

namespace {

bool parse_integer(std::string_view s, BigInt& out) {
  if (s.empty()) return false;
  std::size_t start = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (start == s.size()) return false;
  for (std::size_t i = start; i < s.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  }
  std::string body(s[0] == '+' ? s.substr(1) : s);
  return out.set_str(body, 10) == 0;
}

}  // namespace

Rat Rat::parse(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  auto slash = text.find('/');
  BigInt n, d = 1;
  bool ok = slash == std::string_view::npos
                ? parse_integer(text, n)
                : parse_integer(text.substr(0, slash), n) && parse_integer(text.substr(slash + 1), d);
  if (!ok) throw invalid_input("cannot parse rational '" + std::string(text) + "'");
  if (d == 0) throw invalid_input("zero denominator in '" + std::string(text) + "'");
  return Rat(n, d);
}

std::string Rat::str() const { return num().get_str() + "/" + den().get_str(); }

std::string Rat::pretty() const { return is_integer() ? num().get_str() : str(); }

Rat& Rat::operator/=(const Rat& o) {
  if (o.v_ == 0) throw domain_error("division by zero");
  v_ /= o.v_;
  return *this;
}

Rat min(const Rat& a, const Rat& b) { return b < a ? b : a; }
Rat max(const Rat& a, const Rat& b) { return a < b ? b : a; }

Rat pow2_neg(unsigned k) {
  BigInt d;
  mpz_ui_pow_ui(d.get_mpz_t(), 2, k);
  return Rat(BigInt(1), d);
}

Rat rpow(const Rat& base, unsigned k) {
  Rat out(1);
  for (unsigned i = 0; i < k; ++i) out *= base;
  return out;
}

BigInt ipow(long base, unsigned k) {
  BigInt out;
  mpz_pow_ui(out.get_mpz_t(), BigInt(base).get_mpz_t(), k);
  return out;
}

long ipow_small(long base, unsigned k) {
  long out = 1;
  for (unsigned i = 0; i < k; ++i) out *= base;
  return out;
}

unsigned p_adic_valuation(const BigInt& n, long p) {
  if (n == 0) throw domain_error("valuation of zero");
  BigInt x = abs(n);
  unsigned v = 0;
  while (mpz_divisible_ui_p(x.get_mpz_t(), static_cast<unsigned long>(p))) {
    x /= p;
    ++v;
  }
  return v;
}

bool is_prime(long n) {
  if (n < 2) return false;
  for (long d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

}  // namespace asdefect

#pragma once

#include <gmpxx.h>

#include <compare>
#include <ostream>
#include <string>
#include <string_view>

namespace asdefect {

using BigInt = mpz_class;

// Exact rational in lowest terms with positive denominator.
class Rat {
 public:
  Rat() : v_(0) {}
  Rat(long n) : v_(n) {}  // NOLINT(google-explicit-constructor)
  explicit Rat(const BigInt& n) : v_(n) {}
  Rat(const BigInt& num, const BigInt& den);

  // Accepts "n", "n/d" with optional sign; throws invalid_input otherwise.
  static Rat parse(std::string_view text);

  BigInt num() const { return v_.get_num(); }
  BigInt den() const { return v_.get_den(); }

  bool is_integer() const { return v_.get_den() == 1; }
  int sign() const { return sgn(v_); }
  double approx() const { return v_.get_d(); }

  // Always "num/den", also for integers.
  std::string str() const;
  // "num" for integers, "num/den" otherwise.
  std::string pretty() const;

  Rat operator-() const { return Rat(mpq_class(-v_)); }
  Rat& operator+=(const Rat& o) { v_ += o.v_; return *this; }
  Rat& operator-=(const Rat& o) { v_ -= o.v_; return *this; }
  Rat& operator*=(const Rat& o) { v_ *= o.v_; return *this; }
  Rat& operator/=(const Rat& o);

  friend Rat operator+(Rat a, const Rat& b) { return a += b; }
  friend Rat operator-(Rat a, const Rat& b) { return a -= b; }
  friend Rat operator*(Rat a, const Rat& b) { return a *= b; }
  friend Rat operator/(Rat a, const Rat& b) { return a /= b; }

  friend bool operator==(const Rat& a, const Rat& b) { return a.v_ == b.v_; }
  friend std::strong_ordering operator<=>(const Rat& a, const Rat& b) {
    int c = cmp(a.v_, b.v_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  const mpq_class& raw() const { return v_; }

 private:
  explicit Rat(mpq_class v) : v_(std::move(v)) { v_.canonicalize(); }
  mpq_class v_;
};

inline std::ostream& operator<<(std::ostream& os, const Rat& r) { return os << r.str(); }

Rat min(const Rat& a, const Rat& b);
Rat max(const Rat& a, const Rat& b);
// 2^-k
Rat pow2_neg(unsigned k);
Rat rpow(const Rat& base, unsigned k);
BigInt ipow(long base, unsigned k);
long ipow_small(long base, unsigned k);
// Exponent of p in n (n != 0).
unsigned p_adic_valuation(const BigInt& n, long p);
bool is_prime(long n);

}  // namespace asdefect

#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

namespace asdefect {

struct FieldSpec {
  long p = 2;
  int s = 4;
  friend bool operator==(const FieldSpec&, const FieldSpec&) = default;
};

// F_{p^s} presented as F_p[t]/(g) with g a primitive polynomial. An element is
// encoded as the integer sum d_i p^i of its coefficient digits d_i (coefficient of t^i),
// so the prime field F_p is encoded by 0..p-1 itself.
class FiniteField {
 public:
  using Elem = std::uint16_t;

  // Shared, built once per spec.
  static std::shared_ptr<const FiniteField> get(FieldSpec spec);

  const FieldSpec& spec() const { return spec_; }
  long p() const { return spec_.p; }
  int size() const { return size_; }
  // Monic defining polynomial, coefficients from t^0 up to t^s.
  const std::vector<int>& modulus() const { return modulus_; }

  Elem add(Elem a, Elem b) const {
    if (spec_.p == 2) return static_cast<Elem>(a ^ b);
    if (!add_table_.empty()) return add_table_[static_cast<std::size_t>(a) * size_ + b];
    return add_digits(a, b);
  }
  Elem neg(Elem a) const { return neg_[a]; }
  Elem sub(Elem a, Elem b) const { return add(a, neg_[b]); }
  Elem mul(Elem a, Elem b) const {
    if (a == 0 || b == 0) return 0;
    return exp_[log_[a] + log_[b]];
  }
  Elem inv(Elem a) const;
  Elem pow(Elem a, long long n) const;
  // log and exp with respect to the generator t; log(0) is undefined.
  int log(Elem a) const { return log_[a]; }
  Elem exp(int k) const { return exp_[k]; }

  Elem from_integer(long long n) const;
  std::vector<int> to_digits(Elem a) const;
  Elem from_digits(std::span<const int> digits) const;

 private:
  explicit FiniteField(FieldSpec spec);
  Elem add_digits(Elem a, Elem b) const;

  FieldSpec spec_;
  int size_ = 0;
  std::vector<int> modulus_;
  std::vector<Elem> exp_;  // length 2(size-1) to skip a modulo in mul
  std::vector<int> log_;
  std::vector<Elem> neg_;
  std::vector<Elem> add_table_;
};

using FieldPtr = std::shared_ptr<const FiniteField>;

}  // namespace asdefect

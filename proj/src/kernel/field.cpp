#include "asdefect/field.hpp"

#include "asdefect/errors.hpp"
#include "asdefect/rational.hpp"

#include <map>
#include <mutex>
#include <string>

namespace asdefect {

namespace {

constexpr int kMaxFieldSize = 1 << 16;
constexpr int kMaxAddTable = 2500;

// Polynomials over F_p as coefficient vectors, lowest degree first.
std::vector<int> mul_by_t_mod(const std::vector<int>& a, const std::vector<int>& g, long p) {
  const int s = static_cast<int>(g.size()) - 1;
  std::vector<int> out(s, 0);
  int carry = a[s - 1];
  for (int i = s - 1; i > 0; --i) out[i] = a[i - 1];
  out[0] = 0;
  // t^s = -(g_0 + ... + g_{s-1} t^{s-1})
  for (int i = 0; i < s; ++i) {
    out[i] = static_cast<int>(((out[i] - static_cast<long>(carry) * g[i]) % p + p) % p);
  }
  return out;
}

int encode(const std::vector<int>& digits, long p) {
  int v = 0;
  for (int i = static_cast<int>(digits.size()) - 1; i >= 0; --i) v = static_cast<int>(v * p + digits[i]);
  return v;
}

}  // namespace

FiniteField::FiniteField(FieldSpec spec) : spec_(spec) {
  if (!is_prime(spec.p)) throw invalid_input("field characteristic " + std::to_string(spec.p) + " is not prime");
  if (spec.s < 1) throw invalid_input("field extension degree must be >= 1");
  long long q = 1;
  for (int i = 0; i < spec.s; ++i) {
    q *= spec.p;
    if (q > kMaxFieldSize) throw invalid_input("field too large for 16-bit element encoding");
  }
  size_ = static_cast<int>(q);
  const long p = spec.p;
  const int s = spec.s;

  // Search monic degree-s polynomials for one where t has order q-1.
  std::vector<int> lower(s, 0);
  bool found = false;
  std::vector<int> powers;
  for (long code = 0; code < size_ && !found; ++code) {
    long c = code;
    for (int i = 0; i < s; ++i) {
      lower[i] = static_cast<int>(c % p);
      c /= p;
    }
    if (lower[0] == 0) continue;  // divisible by t
    std::vector<int> g = lower;
    g.push_back(1);
    std::vector<int> cur(s, 0);
    cur[0] = 1;
    powers.assign(1, 1);
    bool primitive = true;
    for (int k = 1; k < size_ - 1; ++k) {
      cur = mul_by_t_mod(cur, g, p);
      int e = encode(cur, p);
      if (e == 1) {
        primitive = false;
        break;
      }
      powers.push_back(e);
    }
    if (!primitive) continue;
    if (size_ > 2 && encode(mul_by_t_mod(cur, g, p), p) != 1) continue;
    modulus_ = g;
    found = true;
  }
  if (!found) throw consistency_error("no primitive polynomial found");

  exp_.resize(2 * static_cast<std::size_t>(size_ - 1));
  log_.assign(size_, -1);
  for (int k = 0; k < size_ - 1; ++k) {
    exp_[k] = static_cast<Elem>(powers[k]);
    exp_[k + size_ - 1] = static_cast<Elem>(powers[k]);
    log_[powers[k]] = k;
  }
  neg_.resize(size_);
  for (int a = 0; a < size_; ++a) {
    auto d = to_digits(static_cast<Elem>(a));
    for (auto& x : d) x = static_cast<int>((p - x) % p);
    neg_[a] = from_digits(d);
  }
  if (p != 2 && size_ <= kMaxAddTable) {
    add_table_.resize(static_cast<std::size_t>(size_) * size_);
    for (int a = 0; a < size_; ++a) {
      for (int b = 0; b < size_; ++b) {
        add_table_[static_cast<std::size_t>(a) * size_ + b] =
            add_digits(static_cast<Elem>(a), static_cast<Elem>(b));
      }
    }
  }
}

std::shared_ptr<const FiniteField> FiniteField::get(FieldSpec spec) {
  static std::mutex mu;
  static std::map<std::pair<long, int>, std::shared_ptr<const FiniteField>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(spec.p, spec.s);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  auto f = std::shared_ptr<const FiniteField>(new FiniteField(spec));
  cache.emplace(key, f);
  return f;
}

FiniteField::Elem FiniteField::add_digits(Elem a, Elem b) const {
  const long p = spec_.p;
  int out = 0, scale = 1;
  for (int i = 0; i < spec_.s; ++i) {
    int d = static_cast<int>((a % p + b % p) % p);
    out += d * scale;
    scale *= static_cast<int>(p);
    a = static_cast<Elem>(a / p);
    b = static_cast<Elem>(b / p);
  }
  return static_cast<Elem>(out);
}

FiniteField::Elem FiniteField::inv(Elem a) const {
  if (a == 0) throw domain_error("inverse of zero field element");
  return exp_[(size_ - 1 - log_[a]) % (size_ - 1)];
}

FiniteField::Elem FiniteField::pow(Elem a, long long n) const {
  if (n == 0) return 1;
  if (a == 0) {
    if (n < 0) throw domain_error("negative power of zero");
    return 0;
  }
  long long k = (static_cast<long long>(log_[a]) * (n % (size_ - 1))) % (size_ - 1);
  if (k < 0) k += size_ - 1;
  return exp_[k];
}

FiniteField::Elem FiniteField::from_integer(long long n) const {
  long long r = n % spec_.p;
  if (r < 0) r += spec_.p;
  return static_cast<Elem>(r);
}

std::vector<int> FiniteField::to_digits(Elem a) const {
  std::vector<int> d(spec_.s, 0);
  for (int i = 0; i < spec_.s; ++i) {
    d[i] = static_cast<int>(a % spec_.p);
    a = static_cast<Elem>(a / spec_.p);
  }
  return d;
}

FiniteField::Elem FiniteField::from_digits(std::span<const int> digits) const {
  if (static_cast<int>(digits.size()) > spec_.s) throw invalid_input("too many digits for field element");
  int out = 0, scale = 1;
  for (int d : digits) {
    if (d < 0 || d >= spec_.p) throw invalid_input("field digit out of range");
    out += d * scale;
    scale *= static_cast<int>(spec_.p);
  }
  return static_cast<Elem>(out);
}

}  // namespace asdefect

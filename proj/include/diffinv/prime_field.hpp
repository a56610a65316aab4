#pragma once

#include <algorithm>
#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "diffinv/error.hpp"

namespace diffinv {

inline bool is_prime(std::uint32_t n) {
  if (n < 2) return false;
  for (std::uint32_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

/// Reduce a signed integer into [0, p).
inline std::uint32_t reduce_mod(long long v, std::uint32_t p) {
  long long r = v % static_cast<long long>(p);
  return static_cast<std::uint32_t>(r < 0 ? r + p : r);
}

inline std::uint32_t mul_mod(std::uint32_t a, std::uint32_t b, std::uint32_t p) {
  return static_cast<std::uint32_t>(static_cast<std::uint64_t>(a) * b % p);
}

inline std::uint32_t pow_mod(std::uint32_t a, std::uint64_t e, std::uint32_t p) {
  std::uint32_t r = 1 % p;
  while (e) {
    if (e & 1) r = mul_mod(r, a, p);
    a = mul_mod(a, a, p);
    e >>= 1;
  }
  return r;
}

/// Inverse modulo a prime via Fermat. Throws on zero.
inline std::uint32_t inv_mod(std::uint32_t a, std::uint32_t p) {
  if (a % p == 0) throw DomainError("inverse of zero in F_" + std::to_string(p));
  return pow_mod(a, p - 2, p);
}

/// Element of the prime field F_p.
class Fp {
 public:
  Fp(long long value, std::uint32_t p) : p_(p) {
    if (!is_prime(p)) throw DomainError("modulus " + std::to_string(p) + " is not prime");
    r_ = reduce_mod(value, p);
  }

  std::uint32_t residue() const { return r_; }
  std::uint32_t modulus() const { return p_; }
  bool is_zero() const { return r_ == 0; }

  /// Signed representative in (-p/2, p/2].
  long long centered() const {
    return r_ > p_ / 2 ? static_cast<long long>(r_) - p_ : static_cast<long long>(r_);
  }

  Fp operator+(const Fp& o) const { return make(check(o), (r_ + o.r_) % p_); }
  Fp operator-(const Fp& o) const { return make(check(o), (r_ + p_ - o.r_) % p_); }
  Fp operator*(const Fp& o) const { return make(check(o), mul_mod(r_, o.r_, p_)); }
  Fp operator-() const { return make(p_, (p_ - r_) % p_); }
  Fp& operator+=(const Fp& o) { return *this = *this + o; }
  Fp& operator-=(const Fp& o) { return *this = *this - o; }
  Fp& operator*=(const Fp& o) { return *this = *this * o; }

  Fp inverse() const { return make(p_, inv_mod(r_, p_)); }
  Fp operator/(const Fp& o) const { return *this * o.inverse(); }
  Fp pow(std::uint64_t e) const { return make(p_, pow_mod(r_, e, p_)); }

  friend bool operator==(const Fp&, const Fp&) = default;

  friend std::ostream& operator<<(std::ostream& os, const Fp& a) { return os << a.r_; }

 private:
  struct Raw {};
  Fp(Raw, std::uint32_t r, std::uint32_t p) : r_(r), p_(p) {}
  static Fp make(std::uint32_t p, std::uint32_t r) { return Fp(Raw{}, r, p); }

  std::uint32_t check(const Fp& o) const {
    if (o.p_ != p_)
      throw FieldMismatch("mixed moduli " + std::to_string(p_) + " and " + std::to_string(o.p_));
    return p_;
  }

  std::uint32_t r_ = 0;
  std::uint32_t p_ = 2;
};

/// Dense univariate polynomial over F_p, coefficients low to high, trailing zeros stripped.
class FpPoly {
 public:
  explicit FpPoly(std::uint32_t p) : p_(p) {}
  FpPoly(std::vector<std::uint32_t> coeffs, std::uint32_t p) : c_(std::move(coeffs)), p_(p) {
    for (auto& c : c_) c %= p_;
    trim();
  }

  static FpPoly monomial(std::uint32_t coeff, std::size_t degree, std::uint32_t p) {
    std::vector<std::uint32_t> c(degree + 1, 0);
    c[degree] = coeff % p;
    return FpPoly(std::move(c), p);
  }
  static FpPoly x(std::uint32_t p) { return monomial(1, 1, p); }
  static FpPoly constant(std::uint32_t v, std::uint32_t p) { return FpPoly({v}, p); }

  std::uint32_t modulus() const { return p_; }
  bool is_zero() const { return c_.empty(); }
  /// Degree; -1 for the zero polynomial.
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  std::uint32_t coeff(std::size_t i) const { return i < c_.size() ? c_[i] : 0; }
  std::uint32_t lead() const { return c_.empty() ? 0 : c_.back(); }
  const std::vector<std::uint32_t>& coeffs() const { return c_; }

  FpPoly operator+(const FpPoly& o) const {
    std::vector<std::uint32_t> r(std::max(c_.size(), o.c_.size()), 0);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = (coeff(i) + o.coeff(i)) % p_;
    return FpPoly(std::move(r), p_);
  }
  FpPoly operator-(const FpPoly& o) const {
    std::vector<std::uint32_t> r(std::max(c_.size(), o.c_.size()), 0);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = (coeff(i) + p_ - o.coeff(i)) % p_;
    return FpPoly(std::move(r), p_);
  }
  FpPoly operator*(const FpPoly& o) const {
    if (is_zero() || o.is_zero()) return FpPoly(p_);
    std::vector<std::uint32_t> r(c_.size() + o.c_.size() - 1, 0);
    for (std::size_t i = 0; i < c_.size(); ++i)
      for (std::size_t j = 0; j < o.c_.size(); ++j)
        r[i + j] = (r[i + j] + mul_mod(c_[i], o.c_[j], p_)) % p_;
    return FpPoly(std::move(r), p_);
  }
  FpPoly scaled(std::uint32_t s) const {
    std::vector<std::uint32_t> r(c_);
    for (auto& c : r) c = mul_mod(c, s % p_, p_);
    return FpPoly(std::move(r), p_);
  }

  /// Quotient and remainder; divisor must be nonzero.
  std::pair<FpPoly, FpPoly> divmod(const FpPoly& d) const {
    if (d.is_zero()) throw DomainError("polynomial division by zero");
    std::vector<std::uint32_t> rem(c_);
    if (degree() < d.degree()) return {FpPoly(p_), *this};
    std::vector<std::uint32_t> q(c_.size() - d.c_.size() + 1, 0);
    const std::uint32_t li = inv_mod(d.lead(), p_);
    for (int k = degree() - d.degree(); k >= 0; --k) {
      std::uint32_t f = mul_mod(rem[k + d.degree()], li, p_);
      q[k] = f;
      if (!f) continue;
      for (std::size_t j = 0; j < d.c_.size(); ++j)
        rem[k + j] = (rem[k + j] + p_ - mul_mod(f, d.c_[j], p_)) % p_;
    }
    return {FpPoly(std::move(q), p_), FpPoly(std::move(rem), p_)};
  }
  FpPoly operator%(const FpPoly& d) const { return divmod(d).second; }

  FpPoly monic() const {
    if (is_zero()) return *this;
    return scaled(inv_mod(lead(), p_));
  }

  std::uint32_t eval(std::uint32_t x) const {
    std::uint32_t acc = 0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = (mul_mod(acc, x, p_) + *it) % p_;
    return acc;
  }

  friend bool operator==(const FpPoly&, const FpPoly&) = default;

 private:
  void trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
  }

  std::vector<std::uint32_t> c_;
  std::uint32_t p_;
};

inline FpPoly gcd(FpPoly a, FpPoly b) {
  while (!b.is_zero()) {
    FpPoly r = a % b;
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

/// base^e mod m over F_p.
inline FpPoly powmod(FpPoly base, std::uint64_t e, const FpPoly& m) {
  FpPoly r = FpPoly::constant(1, m.modulus()) % m;
  base = base % m;
  while (e) {
    if (e & 1) r = (r * base) % m;
    base = (base * base) % m;
    e >>= 1;
  }
  return r;
}

/// Irreducibility over F_p via gcd(f, x^{p^i} - x) = 1 for i <= deg/2.
inline bool is_irreducible(const FpPoly& f) {
  const int n = f.degree();
  if (n <= 0) return false;
  if (n == 1) return true;
  const std::uint32_t p = f.modulus();
  FpPoly xp = FpPoly::x(p) % f;
  for (int i = 1; i <= n / 2; ++i) {
    xp = powmod(xp, p, f);
    if (gcd(f, xp - FpPoly::x(p)).degree() > 0) return false;
  }
  return true;
}

/// Degrees of the distinct irreducible factors of f (f nonzero, non-constant).
inline std::vector<int> irreducible_factor_degrees(FpPoly f) {
  const std::uint32_t p = f.modulus();
  std::vector<int> degrees;
  f = f.monic();
  FpPoly xp = FpPoly::x(p);
  for (int d = 1; f.degree() > 0; ++d) {
    xp = powmod(xp, p, f);
    FpPoly g = gcd(f, xp - FpPoly::x(p));
    if (g.degree() > 0) {
      degrees.push_back(d);
      while (true) {
        auto [q, r] = f.divmod(g);
        if (!r.is_zero()) break;
        f = q;
        // strip every power of the factors found at this degree
        FpPoly g2 = gcd(f, g);
        if (g2.degree() <= 0) break;
        g = g2;
      }
      xp = xp % f;
    }
    if (d > 64) throw ConsistencyError("factor degree search did not terminate");
  }
  return degrees;
}

}  // namespace diffinv

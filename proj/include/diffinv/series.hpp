#pragma once

// Integer polynomials, rational power series, and Molien's formula with a
// Brauer lift for characteristic not dividing the group order.

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "diffinv/error.hpp"
#include "diffinv/ffield.hpp"
#include "diffinv/grouprep.hpp"

namespace diffinv {

class IntPolynomial {
 public:
  IntPolynomial() = default;
  IntPolynomial(std::vector<long long> coeffs) : c_(std::move(coeffs)) { trim(); }  // NOLINT: implicit from lists
  IntPolynomial(std::initializer_list<long long> coeffs) : c_(coeffs) { trim(); }

  static IntPolynomial monomial(long long c, std::size_t deg) {
    std::vector<long long> v(deg + 1, 0);
    v[deg] = c;
    return IntPolynomial(std::move(v));
  }
  static IntPolynomial constant(long long c) { return monomial(c, 0); }
  /// 1 - t^d.
  static IntPolynomial one_minus_t_pow(std::size_t d) { return constant(1) - monomial(1, d); }

  /// Product of (1 - t^d) over the given degrees.
  static IntPolynomial hsop_denominator(const std::vector<int>& degrees) {
    IntPolynomial r = constant(1);
    for (int d : degrees) {
      if (d <= 0) throw DomainError("parameter degrees must be positive");
      r = r * one_minus_t_pow(static_cast<std::size_t>(d));
    }
    return r;
  }

  const std::vector<long long>& coeffs() const { return c_; }
  bool is_zero() const { return c_.empty(); }
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  long long operator[](std::size_t i) const { return i < c_.size() ? c_[i] : 0; }
  long long lead() const { return c_.empty() ? 0 : c_.back(); }

  IntPolynomial operator+(const IntPolynomial& o) const {
    std::vector<long long> r(std::max(c_.size(), o.c_.size()), 0);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = detail::checked_add((*this)[i], o[i]);
    return IntPolynomial(std::move(r));
  }
  IntPolynomial operator-() const {
    std::vector<long long> r(c_);
    for (auto& v : r) v = -v;
    return IntPolynomial(std::move(r));
  }
  IntPolynomial operator-(const IntPolynomial& o) const { return *this + (-o); }
  IntPolynomial operator*(const IntPolynomial& o) const {
    if (is_zero() || o.is_zero()) return {};
    std::vector<long long> r(c_.size() + o.c_.size() - 1, 0);
    for (std::size_t i = 0; i < c_.size(); ++i)
      for (std::size_t j = 0; j < o.c_.size(); ++j)
        r[i + j] = detail::checked_add(r[i + j], detail::checked_mul(c_[i], o.c_[j]));
    return IntPolynomial(std::move(r));
  }
  IntPolynomial scaled(long long s) const { return *this * constant(s); }

  long long content() const {
    long long g = 0;
    for (auto v : c_) g = std::gcd(g, v < 0 ? -v : v);
    return g;
  }

  /// Exact quotient in Z[t], or nullopt if d does not divide this.
  std::optional<IntPolynomial> divide_exact(const IntPolynomial& d) const {
    if (d.is_zero()) throw DomainError("division by the zero polynomial");
    if (is_zero()) return IntPolynomial{};
    if (degree() < d.degree()) return std::nullopt;
    std::vector<long long> rem(c_);
    std::vector<long long> q(c_.size() - d.c_.size() + 1, 0);
    for (std::size_t k = q.size(); k-- > 0;) {
      const long long top = rem[k + d.c_.size() - 1];
      if (top % d.lead() != 0) return std::nullopt;
      const long long f = top / d.lead();
      q[k] = f;
      if (!f) continue;
      for (std::size_t j = 0; j < d.c_.size(); ++j) rem[k + j] = detail::checked_add(rem[k + j], -detail::checked_mul(f, d.c_[j]));
    }
    if (std::any_of(rem.begin(), rem.end(), [](long long v) { return v != 0; })) return std::nullopt;
    return IntPolynomial(std::move(q));
  }

  IntPolynomial divide_scalar_exact(long long s) const {
    std::vector<long long> r(c_);
    for (auto& v : r) {
      if (v % s) throw ConsistencyError("inexact scalar division");
      v /= s;
    }
    return IntPolynomial(std::move(r));
  }

  /// "1+t^6", "t+t^2+2*t^3", "1-t^2"; "0" for zero.
  std::string to_string(const std::string& var = "t") const {
    if (is_zero()) return "0";
    std::string s;
    for (std::size_t i = 0; i < c_.size(); ++i) {
      long long c = c_[i];
      if (!c) continue;
      if (c < 0) {
        s += '-';
        c = -c;
      } else if (!s.empty()) {
        s += '+';
      }
      if (i == 0) {
        s += std::to_string(c);
        continue;
      }
      if (c != 1) s += std::to_string(c) + "*";
      s += var;
      if (i > 1) s += "^" + std::to_string(i);
    }
    return s;
  }

  friend bool operator==(const IntPolynomial&, const IntPolynomial&) = default;

 private:
  void trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
  }
  std::vector<long long> c_;
};

/// Primitive gcd in Z[t] with positive leading coefficient.
inline IntPolynomial gcd(IntPolynomial a, IntPolynomial b) {
  auto primitive = [](const IntPolynomial& p) {
    if (p.is_zero()) return p;
    IntPolynomial q = p.divide_scalar_exact(p.content());
    return q.lead() < 0 ? -q : q;
  };
  a = primitive(a);
  b = primitive(b);
  if (a.degree() < b.degree()) std::swap(a, b);
  while (!b.is_zero()) {
    // pseudo-remainder of a by b
    IntPolynomial r = a;
    while (!r.is_zero() && r.degree() >= b.degree()) {
      const std::size_t shift = static_cast<std::size_t>(r.degree() - b.degree());
      r = r.scaled(b.lead()) - b * IntPolynomial::monomial(r.lead(), shift);
    }
    a = std::move(b);
    b = primitive(r);
  }
  return a;
}

/// numerator / denominator with denominator(0) = 1. Equality is equality of rational functions.
class RationalSeries {
 public:
  RationalSeries(IntPolynomial numerator, IntPolynomial denominator) : num_(std::move(numerator)), den_(std::move(denominator)) {
    if (den_[0] == -1) {
      num_ = -num_;
      den_ = -den_;
    }
    if (den_[0] != 1) throw DomainError("denominator constant term must be +1 or -1");
  }

  const IntPolynomial& numerator() const { return num_; }
  const IntPolynomial& denominator() const { return den_; }

  /// Taylor coefficients 0..order.
  std::vector<long long> expand(std::size_t order) const {
    std::vector<long long> c(order + 1, 0);
    for (std::size_t k = 0; k <= order; ++k) {
      long long v = num_[k];
      for (std::size_t i = 1; i <= k && i <= static_cast<std::size_t>(std::max(den_.degree(), 0)); ++i)
        v = detail::checked_add(v, -detail::checked_mul(den_[i], c[k - i]));
      c[k] = v;
    }
    return c;
  }

  /// Lowest terms; unique since denominator(0) = 1.
  RationalSeries reduced() const {
    if (num_.is_zero()) return {{}, IntPolynomial::constant(1)};
    const IntPolynomial g = gcd(num_, den_);
    return RationalSeries(*num_.divide_exact(g), *den_.divide_exact(g));
  }

  friend bool operator==(const RationalSeries& a, const RationalSeries& b) {
    return a.num_ * b.den_ == b.num_ * a.den_;
  }

  std::string to_string() const;

 private:
  IntPolynomial num_;
  IntPolynomial den_;
};

inline std::vector<long long> series_expand(const RationalSeries& r, std::size_t order) { return r.expand(order); }

/// Greedy factorisation of a polynomial into factors 1 - t^d (largest d first),
/// returning the degrees found and whatever is left over.
inline std::pair<std::vector<int>, IntPolynomial> factor_cyclotomic_denominator(IntPolynomial p) {
  std::vector<int> degrees;
  for (int d = p.degree(); d >= 1; --d) {
    while (true) {
      auto q = p.divide_exact(IntPolynomial::one_minus_t_pow(static_cast<std::size_t>(d)));
      if (!q) break;
      degrees.push_back(d);
      p = std::move(*q);
    }
  }
  if (p[0] == -1 && p.degree() == 0) p = -p;
  std::sort(degrees.begin(), degrees.end());
  return {degrees, p};
}

/// "(t+t^2)/(1-t^2)^3", "(1+t^6)/((1-t^2)(1-t^3)(1-t^4))".
inline std::string RationalSeries::to_string() const {
  auto [degrees, rest] = factor_cyclotomic_denominator(den_);
  if (rest[0] < 0) {
    rest = -rest;  // an odd number of sign flips in the greedy split
  }
  const auto& nc = num_.coeffs();
  const long long nonzero = std::count_if(nc.begin(), nc.end(), [](long long v) { return v != 0; });
  std::string num = num_.to_string();
  const bool single = nonzero <= 1 && (num_.is_zero() || num_.lead() > 0);
  std::vector<std::string> factors;
  for (std::size_t i = 0; i < degrees.size();) {
    std::size_t j = i;
    while (j < degrees.size() && degrees[j] == degrees[i]) ++j;
    std::string f = "(" + IntPolynomial::one_minus_t_pow(static_cast<std::size_t>(degrees[i])).to_string() + ")";
    if (j - i > 1) f += "^" + std::to_string(j - i);
    factors.push_back(f);
    i = j;
  }
  if (!(rest == IntPolynomial::constant(1))) factors.push_back("(" + rest.to_string() + ")");
  if (factors.empty()) return num;
  std::string den;
  for (const auto& f : factors) den += f;
  if (factors.size() > 1) den = "(" + den + ")";
  return (single ? num : "(" + num + ")") + "/" + den;
}

// ---------------------------------------------------------------------------
// Molien series

/// Which group element's character value multiplies 1/det(1 - t g) when g acts on V.
/// `direct` uses chi(g): with det taken on V this counts f in S(V*) with g f = chi(g) f.
/// `inverse` uses chi(g^{-1}) and therefore counts the conjugate character.
enum class CharacterConvention { direct, inverse };

namespace detail {

/// Exact quotient of polynomials with cyclotomic coefficients, divisor constant term 1.
inline CyclotomicPoly divide_unit_constant(const CyclotomicPoly& a, const CyclotomicPoly& d) {
  if (d.empty() || !(d[0] == CyclotomicScalar(d[0].ring(), 1))) throw ConsistencyError("divisor must have constant term 1");
  if (a.size() < d.size()) throw ConsistencyError("dividend degree too small");
  const std::size_t qn = a.size() - d.size() + 1;
  CyclotomicPoly q;
  for (std::size_t k = 0; k < qn; ++k) {
    CyclotomicScalar v = a[k];
    for (std::size_t i = 1; i < d.size() && i <= k; ++i) v = v - d[i] * q[k - i];
    q.push_back(v);
  }
  for (std::size_t k = qn; k < a.size(); ++k) {
    CyclotomicScalar v = a[k];
    for (std::size_t i = 1; i < d.size(); ++i)
      if (i <= k && k - i < qn) v = v - d[i] * q[k - i];
    if (!v.is_zero()) throw ConsistencyError("Brauer determinant does not divide (1-t^e)^n");
  }
  return q;
}

}  // namespace detail

/// (1/|G|) sum over g of chi0(g) / det0(1 - t g), with g acting on V. The sum is
/// taken over the common denominator (1 - t^e)^n, e the lift's root order.
inline RationalSeries molien(const MatrixGroup& group, const LinearCharacter& chi, const BrauerLift& lift,
                             CharacterConvention convention = CharacterConvention::direct) {
  const std::uint32_t p = group.modulus();
  if (group.order() % p == 0)
    throw ModularError("group of order " + std::to_string(group.order()) + " is modular in characteristic " + std::to_string(p));
  if (chi.source().elements() != group.elements()) throw DomainError("character is defined on a different group");
  const unsigned e = lift.root_order();
  const std::size_t n = group.dimension();
  const CyclotomicRing& ring = lift.ring();

  // (1 - t^e)^n with cyclotomic coefficients
  IntPolynomial common = IntPolynomial::constant(1);
  for (std::size_t i = 0; i < n; ++i) common = common * IntPolynomial::one_minus_t_pow(e);
  CyclotomicPoly common_cyc;
  for (std::size_t i = 0; i <= static_cast<std::size_t>(common.degree()); ++i) common_cyc.emplace_back(ring, common[i]);

  CyclotomicPoly total(common_cyc.size(), CyclotomicScalar(ring, 0));
  for (std::size_t k = 0; k < group.order(); ++k) {
    const std::size_t ck = convention == CharacterConvention::direct ? k : group.inverse(k);
    const CyclotomicScalar weight = lift.lift(chi.value(ck));
    const CyclotomicPoly q = detail::divide_unit_constant(common_cyc, brauer_det(group.element(k), lift));
    for (std::size_t i = 0; i < q.size(); ++i) total[i] += weight * q[i];
  }
  std::vector<long long> num;
  for (const auto& c : total) {
    if (!c.is_integer()) throw ConsistencyError("Molien numerator has a non-rational coefficient");
    num.push_back(c.to_integer());
  }
  IntPolynomial numerator(std::move(num));
  return RationalSeries(numerator.divide_scalar_exact(static_cast<long long>(group.order())), common);
}

/// Molien series with the lift chosen from the group exponent.
inline RationalSeries molien(const MatrixGroup& group, const LinearCharacter& chi,
                             CharacterConvention convention = CharacterConvention::direct) {
  if (group.order() % group.modulus() == 0)
    throw ModularError("group of order " + std::to_string(group.order()) + " is modular in characteristic " +
                       std::to_string(group.modulus()));
  return molien(group, chi, BrauerLift::for_exponent(group.modulus(), static_cast<unsigned>(group.exponent())), convention);
}

struct HsopNumerator {
  IntPolynomial numerator;
  bool nonnegative = false;  ///< necessary for freeness over the parameter subalgebra
};

/// r * prod (1 - t^d); throws NotFreeError unless that is a polynomial.
inline HsopNumerator rewrite_over_hsop(const RationalSeries& r, const std::vector<int>& degrees) {
  const IntPolynomial lifted = r.numerator() * IntPolynomial::hsop_denominator(degrees);
  auto q = lifted.divide_exact(r.denominator());
  if (!q) throw NotFreeError("series is not a polynomial over parameters of the claimed degrees");
  HsopNumerator out{*q, true};
  for (auto c : q->coeffs())
    if (c < 0) out.nonnegative = false;
  return out;
}

/// Rebuild N / prod (1 - t^d) from a dimension table; accepted only when the
/// implied numerator vanishes over a window of at least max(d) top degrees.
inline std::optional<RationalSeries> hilbert_from_dims(const std::vector<long long>& dims, const std::vector<int>& degrees) {
  if (dims.empty()) return std::nullopt;
  const IntPolynomial den = IntPolynomial::hsop_denominator(degrees);
  const std::size_t top = dims.size() - 1;
  std::vector<long long> num(top + 1, 0);
  for (std::size_t k = 0; k <= top; ++k)
    for (std::size_t i = 0; i <= k && i <= static_cast<std::size_t>(std::max(den.degree(), 0)); ++i)
      num[k] = detail::checked_add(num[k], detail::checked_mul(den[i], dims[k - i]));
  IntPolynomial n(num);
  const int max_d = degrees.empty() ? 1 : *std::max_element(degrees.begin(), degrees.end());
  if (static_cast<int>(top) - n.degree() < max_d) return std::nullopt;
  return RationalSeries(n, den);
}

}  // namespace diffinv

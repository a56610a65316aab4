#pragma once

// Extension fields for eigenvalues, cyclotomic integers, and the Brauer lift
// between them.

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "diffinv/error.hpp"
#include "diffinv/fp_matrix.hpp"
#include "diffinv/prime_field.hpp"

namespace diffinv {

// ---------------------------------------------------------------------------
// Characteristic polynomial

/// det(x*I - m) by fraction-free (Bareiss) elimination over F_p[x]. Monic of degree n.
inline FpPoly characteristic_polynomial(const FpMatrix& m) {
  if (!m.is_square()) throw DomainError("characteristic polynomial of a non-square matrix");
  const std::size_t n = m.rows();
  const std::uint32_t p = m.modulus();
  if (n == 0) return FpPoly::constant(1, p);
  std::vector<std::vector<FpPoly>> a(n, std::vector<FpPoly>(n, FpPoly(p)));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      FpPoly e = FpPoly::constant((p - m(i, j)) % p, p);
      a[i][j] = i == j ? e + FpPoly::x(p) : e;
    }
  bool negate = false;
  FpPoly prev = FpPoly::constant(1, p);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a[k][k].is_zero()) {
      std::size_t r = k + 1;
      while (r < n && a[r][k].is_zero()) ++r;
      if (r == n) return FpPoly(p);
      std::swap(a[r], a[k]);
      negate = !negate;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) {
        auto [q, rem] = (a[k][k] * a[i][j] - a[i][k] * a[k][j]).divmod(prev);
        if (!rem.is_zero()) throw ConsistencyError("Bareiss step was not exact");
        a[i][j] = std::move(q);
      }
    prev = a[k][k];
  }
  FpPoly det = a[n - 1][n - 1];
  return negate ? det.scaled(p - 1) : det;
}

// ---------------------------------------------------------------------------
// Extension fields F_{p^k}

class ExtFieldScalar;

/// F_p[x]/(f) for a monic irreducible f. By default f is the first monic
/// irreducible of degree k when the non-leading coefficients are read as a
/// base-p number with the x^{k-1} coefficient most significant.
class ExtField {
 public:
  ExtField(std::uint32_t p, unsigned k) {
    if (k == 0) throw DomainError("extension degree must be positive");
    auto impl = std::make_shared<Impl>();
    impl->p = p;
    impl->k = k;
    impl->order = 1;
    for (unsigned i = 0; i < k; ++i) impl->order *= p;
    for (std::uint64_t idx = 0; idx < impl->order; ++idx) {
      std::vector<std::uint32_t> c(k + 1, 0);
      std::uint64_t v = idx;
      for (unsigned i = 0; i < k; ++i, v /= p) c[i] = static_cast<std::uint32_t>(v % p);
      c[k] = 1;
      FpPoly f(std::move(c), p);
      if (is_irreducible(f)) {
        impl->modulus = std::move(f);
        break;
      }
    }
    if (impl->modulus.degree() != static_cast<int>(k))
      throw ConsistencyError("no irreducible polynomial found");
    impl_ = std::move(impl);
  }

  explicit ExtField(const FpPoly& modulus) {
    if (!is_irreducible(modulus)) throw DomainError("defining polynomial is reducible");
    auto impl = std::make_shared<Impl>();
    impl->p = modulus.modulus();
    impl->k = static_cast<unsigned>(modulus.degree());
    impl->order = 1;
    for (unsigned i = 0; i < impl->k; ++i) impl->order *= impl->p;
    impl->modulus = modulus.monic();
    impl_ = std::move(impl);
  }

  std::uint32_t characteristic() const { return impl_->p; }
  unsigned degree() const { return impl_->k; }
  std::uint64_t order() const { return impl_->order; }
  const FpPoly& modulus() const { return impl_->modulus; }

  /// Element whose coefficient vector is the base-p digits of index.
  ExtFieldScalar element(std::uint64_t index) const;
  ExtFieldScalar embed(long long v) const;
  ExtFieldScalar zero() const;
  ExtFieldScalar one() const;
  /// Smallest-index generator of the multiplicative group.
  ExtFieldScalar primitive_element() const;

  friend bool operator==(const ExtField& a, const ExtField& b) {
    return a.impl_ == b.impl_ || (a.impl_->p == b.impl_->p && a.impl_->modulus == b.impl_->modulus);
  }

 private:
  struct Impl {
    std::uint32_t p = 2;
    unsigned k = 1;
    std::uint64_t order = 2;
    FpPoly modulus{2};
    mutable std::once_flag primitive_once;
    mutable std::uint64_t primitive_index = 0;
  };
  std::shared_ptr<const Impl> impl_;
};

class ExtFieldScalar {
 public:
  ExtFieldScalar(ExtField field, std::vector<std::uint32_t> coeffs)
      : field_(std::move(field)), c_(std::move(coeffs)) {
    c_.resize(field_.degree(), 0);
    for (auto& c : c_) c %= field_.characteristic();
  }

  const ExtField& field() const { return field_; }
  const std::vector<std::uint32_t>& coeffs() const { return c_; }
  bool is_zero() const {
    return std::all_of(c_.begin(), c_.end(), [](std::uint32_t c) { return c == 0; });
  }
  bool is_one() const { return *this == field_.one(); }

  std::uint64_t index() const {
    std::uint64_t v = 0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) v = v * field_.characteristic() + *it;
    return v;
  }

  /// Value in F_p when the element lies in the prime subfield.
  std::optional<std::uint32_t> prime_value() const {
    for (std::size_t i = 1; i < c_.size(); ++i)
      if (c_[i]) return std::nullopt;
    return c_[0];
  }

  ExtFieldScalar operator+(const ExtFieldScalar& o) const {
    check(o);
    const std::uint32_t p = field_.characteristic();
    std::vector<std::uint32_t> r(c_.size());
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = (c_[i] + o.c_[i]) % p;
    return {field_, std::move(r)};
  }
  ExtFieldScalar operator-(const ExtFieldScalar& o) const {
    check(o);
    const std::uint32_t p = field_.characteristic();
    std::vector<std::uint32_t> r(c_.size());
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = (c_[i] + p - o.c_[i]) % p;
    return {field_, std::move(r)};
  }
  ExtFieldScalar operator-() const { return field_.zero() - *this; }
  ExtFieldScalar operator*(const ExtFieldScalar& o) const {
    check(o);
    const std::uint32_t p = field_.characteristic();
    FpPoly prod = FpPoly(c_, p) * FpPoly(o.c_, p);
    return {field_, (prod % field_.modulus()).coeffs()};
  }
  ExtFieldScalar pow(std::uint64_t e) const {
    ExtFieldScalar r = field_.one();
    ExtFieldScalar b = *this;
    while (e) {
      if (e & 1) r = r * b;
      b = b * b;
      e >>= 1;
    }
    return r;
  }
  ExtFieldScalar inverse() const {
    if (is_zero()) throw DomainError("inverse of zero in F_q");
    return pow(field_.order() - 2);
  }

  /// Multiplicative order; divides q - 1.
  std::uint64_t multiplicative_order() const {
    if (is_zero()) throw DomainError("order of zero");
    std::uint64_t n = field_.order() - 1;
    std::uint64_t ord = n;
    for (std::uint64_t d = 2; d <= n; ++d) {
      if (n % d) continue;
      while (n % d == 0) n /= d;
      while (ord % d == 0 && pow(ord / d).is_one()) ord /= d;
      if (n == 1) break;
    }
    return ord;
  }

  friend bool operator==(const ExtFieldScalar& a, const ExtFieldScalar& b) {
    return a.field_ == b.field_ && a.c_ == b.c_;
  }

  std::string to_string() const {
    std::string s;
    for (std::size_t i = c_.size(); i-- > 0;) {
      if (!c_[i]) continue;
      if (!s.empty()) s += '+';
      if (i == 0 || c_[i] != 1) s += std::to_string(c_[i]);
      if (i >= 1) s += (c_[i] != 1 ? "*a" : "a");
      if (i >= 2) s += "^" + std::to_string(i);
    }
    return s.empty() ? "0" : s;
  }

 private:
  void check(const ExtFieldScalar& o) const {
    if (!(field_ == o.field_)) throw FieldMismatch("extension field operands from different fields");
  }

  ExtField field_;
  std::vector<std::uint32_t> c_;
};

inline ExtFieldScalar ExtField::element(std::uint64_t index) const {
  if (index >= order()) throw DomainError("element index out of range");
  std::vector<std::uint32_t> c(degree(), 0);
  for (unsigned i = 0; i < degree(); ++i, index /= characteristic())
    c[i] = static_cast<std::uint32_t>(index % characteristic());
  return {*this, std::move(c)};
}
inline ExtFieldScalar ExtField::embed(long long v) const {
  std::vector<std::uint32_t> c(degree(), 0);
  c[0] = reduce_mod(v, characteristic());
  return {*this, std::move(c)};
}
inline ExtFieldScalar ExtField::zero() const { return embed(0); }
inline ExtFieldScalar ExtField::one() const { return embed(1); }
inline ExtFieldScalar ExtField::primitive_element() const {
  std::call_once(impl_->primitive_once, [this] {
    for (std::uint64_t idx = 1; idx < order(); ++idx)
      if (element(idx).multiplicative_order() == order() - 1) {
        impl_->primitive_index = idx;
        return;
      }
    throw ConsistencyError("multiplicative group has no generator");
  });
  return element(impl_->primitive_index);
}

/// Roots of f (coefficients in F_p) inside F, with multiplicity, ordered by element index.
inline std::vector<ExtFieldScalar> roots_in(const FpPoly& f, const ExtField& field) {
  if (f.modulus() != field.characteristic())
    throw FieldMismatch("polynomial and field have different characteristic");
  std::vector<ExtFieldScalar> coeffs;
  for (auto c : f.coeffs()) coeffs.push_back(field.embed(c));
  std::vector<ExtFieldScalar> roots;
  if (f.is_zero()) throw DomainError("roots of the zero polynomial");
  for (std::uint64_t idx = 0; idx < field.order() && roots.size() < coeffs.size() - 1; ++idx) {
    const ExtFieldScalar lambda = field.element(idx);
    std::vector<ExtFieldScalar> cur = coeffs;
    while (cur.size() > 1) {
      // synthetic division by (x - lambda), low-to-high coefficients
      std::vector<ExtFieldScalar> q(cur.size() - 1, field.zero());
      ExtFieldScalar carry = field.zero();
      for (std::size_t i = cur.size(); i-- > 1;) {
        carry = cur[i] + carry * lambda;
        q[i - 1] = carry;
      }
      if (!(cur[0] + carry * lambda).is_zero()) break;
      roots.push_back(lambda);
      cur = std::move(q);
    }
  }
  return roots;
}

/// Eigenvalues with multiplicity in the minimal splitting field of the characteristic polynomial.
struct Eigenvalues {
  ExtField field;
  std::vector<ExtFieldScalar> values;
};

inline unsigned splitting_degree(const FpPoly& f) {
  unsigned k = 1;
  for (int d : irreducible_factor_degrees(f)) k = std::lcm(k, static_cast<unsigned>(d));
  return k;
}

inline Eigenvalues eigenvalues_bar(const FpMatrix& m) {
  const FpPoly chi = characteristic_polynomial(m);
  ExtField field(m.modulus(), chi.degree() > 0 ? splitting_degree(chi) : 1);
  auto roots = roots_in(chi, field);
  if (static_cast<int>(roots.size()) != chi.degree())
    throw ConsistencyError("characteristic polynomial did not split in its splitting field");
  return {field, std::move(roots)};
}

// ---------------------------------------------------------------------------
// Cyclotomic integers Z[zeta_e]

namespace detail {

using IntCoeffs = std::vector<long long>;

inline void trim(IntCoeffs& c) {
  while (!c.empty() && c.back() == 0) c.pop_back();
}

inline long long checked_mul(long long a, long long b) {
  long long r;
  if (__builtin_mul_overflow(a, b, &r)) throw ConsistencyError("integer overflow in exact arithmetic");
  return r;
}
inline long long checked_add(long long a, long long b) {
  long long r;
  if (__builtin_add_overflow(a, b, &r)) throw ConsistencyError("integer overflow in exact arithmetic");
  return r;
}

/// Exact quotient by a monic divisor; throws if the remainder is nonzero.
inline IntCoeffs divide_monic(IntCoeffs a, const IntCoeffs& d) {
  trim(a);
  if (a.size() < d.size()) {
    if (!a.empty()) throw ConsistencyError("inexact cyclotomic division");
    return {};
  }
  IntCoeffs q(a.size() - d.size() + 1, 0);
  for (std::size_t k = q.size(); k-- > 0;) {
    const long long f = a[k + d.size() - 1];
    q[k] = f;
    for (std::size_t j = 0; j < d.size(); ++j) a[k + j] = checked_add(a[k + j], -checked_mul(f, d[j]));
  }
  trim(a);
  if (!a.empty()) throw ConsistencyError("inexact cyclotomic division");
  return q;
}

inline IntCoeffs cyclotomic_polynomial(unsigned e) {
  IntCoeffs f(e + 1, 0);
  f[0] = -1;
  f[e] = 1;
  for (unsigned d = 1; d < e; ++d)
    if (e % d == 0) f = divide_monic(f, cyclotomic_polynomial(d));
  return f;
}

}  // namespace detail

/// The ring Z[zeta_e], elements in the power basis 1, zeta, ..., zeta^{phi(e)-1}.
class CyclotomicRing {
 public:
  explicit CyclotomicRing(unsigned e) : e_(e) {
    if (e == 0) throw DomainError("root order must be positive");
    phi_ = std::make_shared<const detail::IntCoeffs>(detail::cyclotomic_polynomial(e));
  }
  unsigned root_order() const { return e_; }
  std::size_t rank() const { return phi_->size() - 1; }
  const detail::IntCoeffs& defining_polynomial() const { return *phi_; }
  friend bool operator==(const CyclotomicRing& a, const CyclotomicRing& b) { return a.e_ == b.e_; }

 private:
  unsigned e_;
  std::shared_ptr<const detail::IntCoeffs> phi_;
};

class CyclotomicScalar {
 public:
  CyclotomicScalar(CyclotomicRing ring, long long v) : ring_(std::move(ring)), c_(ring_.rank(), 0) {
    c_[0] = v;
  }
  /// zeta^m for any integer m.
  static CyclotomicScalar zeta_pow(const CyclotomicRing& ring, long long m) {
    const long long e = ring.root_order();
    const long long r = ((m % e) + e) % e;
    detail::IntCoeffs c(static_cast<std::size_t>(r) + 1, 0);
    c[r] = 1;
    return CyclotomicScalar(ring, std::move(c));
  }

  const CyclotomicRing& ring() const { return ring_; }
  const detail::IntCoeffs& coeffs() const { return c_; }
  bool is_zero() const {
    return std::all_of(c_.begin(), c_.end(), [](long long c) { return c == 0; });
  }
  bool is_integer() const {
    return std::all_of(c_.begin() + 1, c_.end(), [](long long c) { return c == 0; });
  }
  long long to_integer() const {
    if (!is_integer()) throw ConsistencyError("cyclotomic value is not a rational integer");
    return c_[0];
  }

  CyclotomicScalar operator+(const CyclotomicScalar& o) const {
    check(o);
    detail::IntCoeffs r(c_.size());
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = detail::checked_add(c_[i], o.c_[i]);
    return CyclotomicScalar(ring_, std::move(r));
  }
  CyclotomicScalar operator-() const {
    detail::IntCoeffs r(c_.size());
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = -c_[i];
    return CyclotomicScalar(ring_, std::move(r));
  }
  CyclotomicScalar operator-(const CyclotomicScalar& o) const { return *this + (-o); }
  CyclotomicScalar operator*(const CyclotomicScalar& o) const {
    check(o);
    detail::IntCoeffs r(c_.size() + o.c_.size() - 1, 0);
    for (std::size_t i = 0; i < c_.size(); ++i)
      for (std::size_t j = 0; j < o.c_.size(); ++j)
        r[i + j] = detail::checked_add(r[i + j], detail::checked_mul(c_[i], o.c_[j]));
    return CyclotomicScalar(ring_, std::move(r));
  }
  CyclotomicScalar& operator+=(const CyclotomicScalar& o) { return *this = *this + o; }

  friend bool operator==(const CyclotomicScalar& a, const CyclotomicScalar& b) {
    return a.ring_ == b.ring_ && a.c_ == b.c_;
  }

 private:
  CyclotomicScalar(CyclotomicRing ring, detail::IntCoeffs c) : ring_(std::move(ring)), c_(std::move(c)) {
    reduce();
  }

  void reduce() {
    const auto& phi = ring_.defining_polynomial();
    const std::size_t n = ring_.rank();
    for (std::size_t k = c_.size(); k-- > n;) {
      const long long f = c_[k];
      if (!f) continue;
      for (std::size_t j = 0; j <= n; ++j)
        c_[k - n + j] = detail::checked_add(c_[k - n + j], -detail::checked_mul(f, phi[j]));
    }
    c_.resize(n, 0);
  }

  void check(const CyclotomicScalar& o) const {
    if (!(ring_ == o.ring_)) throw FieldMismatch("cyclotomic operands with different root orders");
  }

  CyclotomicRing ring_;
  detail::IntCoeffs c_;
};

/// Polynomial in t with cyclotomic coefficients, low to high.
using CyclotomicPoly = std::vector<CyclotomicScalar>;

// ---------------------------------------------------------------------------
// Brauer lift

/// Smallest k >= 1 with e | p^k - 1.
inline unsigned lift_field_degree(std::uint32_t p, unsigned e) {
  if (e % p == 0) throw ModularError("root order " + std::to_string(e) + " is divisible by p");
  if (e == 1) return 1;
  std::uint64_t pk = p % e;
  unsigned k = 1;
  while (pk != 1) {
    pk = pk * p % e;
    ++k;
  }
  return k;
}

/// Group isomorphism from the order-e subgroup of F_q^x onto <zeta_e>, sending
/// primitive_element()^{(q-1)/e} to zeta_e.
class BrauerLift {
 public:
  BrauerLift(ExtField field, unsigned e) : field_(std::move(field)), ring_(e) {
    if ((field_.order() - 1) % e != 0)
      throw DomainError("F_q^x has no subgroup of order " + std::to_string(e));
    const ExtFieldScalar h = field_.primitive_element().pow((field_.order() - 1) / e);
    ExtFieldScalar acc = field_.one();
    for (unsigned m = 0; m < e; ++m) {
      log_.emplace(acc.index(), m);
      acc = acc * h;
    }
  }

  static BrauerLift for_exponent(std::uint32_t p, unsigned e) {
    return BrauerLift(ExtField(p, lift_field_degree(p, e)), e);
  }

  const ExtField& field() const { return field_; }
  unsigned root_order() const { return ring_.root_order(); }
  const CyclotomicRing& ring() const { return ring_; }

  CyclotomicScalar lift(const ExtFieldScalar& lambda) const {
    if (!(lambda.field() == field_)) throw FieldMismatch("value is not in the lift's source field");
    auto it = log_.find(lambda.index());
    if (it == log_.end())
      throw DomainError("value " + lambda.to_string() + " is not an e-th root of unity, e = " +
                        std::to_string(root_order()));
    return CyclotomicScalar::zeta_pow(ring_, it->second);
  }
  CyclotomicScalar lift(const Fp& a) const {
    if (a.modulus() != field_.characteristic()) throw FieldMismatch("prime field mismatch in lift");
    return lift(field_.embed(a.residue()));
  }

 private:
  ExtField field_;
  CyclotomicRing ring_;
  std::map<std::uint64_t, unsigned> log_;
};

/// prod over eigenvalues lambda of (1 - lift(lambda) t). Rejects elements whose
/// order is divisible by p, and eigenvalues outside the lift's root group.
inline CyclotomicPoly brauer_det(const FpMatrix& m, const BrauerLift& lift) {
  if (m.modulus() != lift.field().characteristic()) throw FieldMismatch("matrix and lift characteristic differ");
  const std::uint64_t ord = matrix_order(m);
  if (ord % m.modulus() == 0)
    throw ModularError("modular element: order " + std::to_string(ord) + " is divisible by " +
                       std::to_string(m.modulus()));
  const FpPoly chi = characteristic_polynomial(m);
  auto roots = roots_in(chi, lift.field());
  if (static_cast<int>(roots.size()) != chi.degree())
    throw DomainError("eigenvalues do not lie in the lift field");
  CyclotomicPoly poly{CyclotomicScalar(lift.ring(), 1)};
  for (const auto& lambda : roots) {
    const CyclotomicScalar z = lift.lift(lambda);
    CyclotomicPoly next(poly.size() + 1, CyclotomicScalar(lift.ring(), 0));
    for (std::size_t i = 0; i < poly.size(); ++i) {
      next[i] += poly[i];
      next[i + 1] += -(z * poly[i]);
    }
    poly = std::move(next);
  }
  return poly;
}

}  // namespace diffinv

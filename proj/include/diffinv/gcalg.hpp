#pragma once

// Sparse exact arithmetic in the free graded-commutative algebra
// S(V*) (x) Lambda(V*) on even generators x1..xn and odd generators y1..yn.

#include <algorithm>
#include <array>
#include <bit>
#include <cctype>
#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "diffinv/error.hpp"
#include "diffinv/prime_field.hpp"

namespace diffinv {

inline constexpr unsigned kMaxRank = 8;

/// (polynomial degree in the x's, exterior degree in the y's).
struct Bidegree {
  int xdeg = 0;
  int ydeg = 0;

  friend auto operator<=>(const Bidegree&, const Bidegree&) = default;
  Bidegree operator+(const Bidegree& o) const { return {xdeg + o.xdeg, ydeg + o.ydeg}; }
  Bidegree operator-(const Bidegree& o) const { return {xdeg - o.xdeg, ydeg - o.ydeg}; }
  /// Componentwise <=.
  bool divides(const Bidegree& o) const { return xdeg <= o.xdeg && ydeg <= o.ydeg; }
  int topological() const { return 2 * xdeg + ydeg; }
  std::string to_string() const { return "(" + std::to_string(xdeg) + "," + std::to_string(ydeg) + ")"; }
};

/// Canonical sorted exterior mask plus the sign of the sorting permutation.
struct SignedMask {
  std::uint32_t mask = 0;  ///< bit k set means y_{k+1} present
  int sign = 1;
  bool zero = false;  ///< a repeated odd generator kills the product
};

/// Sort a word of odd generators (1-based indices), tracking the Koszul sign.
inline SignedMask sign_normalize(std::span<const unsigned> factors) {
  SignedMask out;
  for (std::size_t a = 0; a < factors.size(); ++a) {
    if (factors[a] == 0 || factors[a] > 32) throw DomainError("odd generator index out of range");
    const std::uint32_t bit = 1u << (factors[a] - 1);
    if (out.mask & bit) out.zero = true;
    out.mask |= bit;
    for (std::size_t b = a + 1; b < factors.size(); ++b)
      if (factors[a] > factors[b]) out.sign = -out.sign;
  }
  if (out.zero) out.sign = 0;
  return out;
}

class Monomial {
 public:
  Monomial() = default;
  explicit Monomial(unsigned rank) : rank_(static_cast<std::uint8_t>(rank)) {
    if (rank > kMaxRank) throw DomainError("rank exceeds " + std::to_string(kMaxRank));
  }
  Monomial(std::span<const unsigned> exponents, std::uint32_t mask) : Monomial(exponents.size()) {
    for (std::size_t i = 0; i < exponents.size(); ++i) {
      if (exponents[i] > 0xffff) throw DomainError("exponent too large");
      exps_[i] = static_cast<std::uint16_t>(exponents[i]);
    }
    if (mask >> rank_) throw DomainError("exterior mask exceeds rank");
    mask_ = mask;
  }

  unsigned rank() const { return rank_; }
  unsigned exponent(unsigned i) const { return exps_[i]; }
  void set_exponent(unsigned i, unsigned e) { exps_[i] = static_cast<std::uint16_t>(e); }
  std::uint32_t mask() const { return mask_; }
  bool has_y(unsigned i) const { return (mask_ >> i) & 1u; }

  unsigned xdeg() const {
    unsigned s = 0;
    for (unsigned i = 0; i < rank_; ++i) s += exps_[i];
    return s;
  }
  unsigned ydeg() const { return static_cast<unsigned>(std::popcount(mask_)); }
  Bidegree bidegree() const { return {static_cast<int>(xdeg()), static_cast<int>(ydeg())}; }
  unsigned topological_degree() const { return 2 * xdeg() + ydeg(); }

  /// y indices, 1-based ascending.
  std::vector<unsigned> y_indices() const {
    std::vector<unsigned> r;
    for (unsigned i = 0; i < rank_; ++i)
      if (has_y(i)) r.push_back(i + 1);
    return r;
  }

  /// Exterior mask read with y1 as the most significant bit.
  std::uint32_t mask_key() const {
    std::uint32_t k = 0;
    for (unsigned i = 0; i < rank_; ++i)
      if (has_y(i)) k |= 1u << (rank_ - 1 - i);
    return k;
  }

  friend bool operator==(const Monomial& a, const Monomial& b) {
    return a.rank_ == b.rank_ && a.mask_ == b.mask_ && a.exps_ == b.exps_;
  }

  /// Graded lex on exponents (x1 > x2 > ...), then exterior degree, then mask with y1 most significant.
  friend std::strong_ordering operator<=>(const Monomial& a, const Monomial& b) {
    if (auto c = a.rank_ <=> b.rank_; c != 0) return c;
    if (auto c = a.xdeg() <=> b.xdeg(); c != 0) return c;
    for (unsigned i = 0; i < a.rank_; ++i)
      if (auto c = a.exps_[i] <=> b.exps_[i]; c != 0) return c;
    if (auto c = a.ydeg() <=> b.ydeg(); c != 0) return c;
    return a.mask_key() <=> b.mask_key();
  }

  std::size_t hash() const {
    std::size_t h = mask_ * 0x9e3779b97f4a7c15ull + rank_;
    for (unsigned i = 0; i < rank_; ++i) h = (h ^ exps_[i]) * 0x100000001b3ull;
    return h;
  }

  std::string to_string() const {
    std::string s;
    for (unsigned i = 0; i < rank_; ++i) {
      if (!exps_[i]) continue;
      if (!s.empty()) s += '*';
      s += "x" + std::to_string(i + 1);
      if (exps_[i] > 1) s += "^" + std::to_string(exps_[i]);
    }
    for (unsigned i = 0; i < rank_; ++i) {
      if (!has_y(i)) continue;
      if (!s.empty()) s += '*';
      s += "y" + std::to_string(i + 1);
    }
    return s.empty() ? "1" : s;
  }

 private:
  std::array<std::uint16_t, kMaxRank> exps_{};
  std::uint8_t rank_ = 0;
  std::uint32_t mask_ = 0;
};

struct MonomialHash {
  std::size_t operator()(const Monomial& m) const { return m.hash(); }
};

/// a*b with the Koszul sign; nullopt when an odd generator repeats.
inline std::optional<std::pair<Monomial, int>> multiply(const Monomial& a, const Monomial& b) {
  if (a.rank() != b.rank()) throw DomainError("rank mismatch in monomial product");
  if (a.mask() & b.mask()) return std::nullopt;
  Monomial r(a.rank());
  for (unsigned i = 0; i < a.rank(); ++i) r.set_exponent(i, a.exponent(i) + b.exponent(i));
  // moving each odd generator of b left past the larger ones of a
  int swaps = 0;
  for (unsigned j = 0; j < b.rank(); ++j)
    if (b.has_y(j)) swaps += std::popcount(a.mask() >> (j + 1));
  std::array<unsigned, kMaxRank> e{};
  for (unsigned i = 0; i < a.rank(); ++i) e[i] = r.exponent(i);
  Monomial out(std::span<const unsigned>(e.data(), a.rank()), a.mask() | b.mask());
  return std::make_pair(out, (swaps % 2) ? -1 : 1);
}

/// Sparse element of the graded-commutative algebra. Terms are kept with the
/// leading (largest) monomial first and no zero coefficients.
class GCElement {
 public:
  using TermMap = std::map<Monomial, std::uint32_t, std::greater<>>;

  GCElement(unsigned rank, std::uint32_t p) : rank_(rank), p_(p) {
    if (!is_prime(p)) throw DomainError("modulus is not prime");
    if (rank > kMaxRank) throw DomainError("rank exceeds " + std::to_string(kMaxRank));
  }

  static GCElement constant(long long c, unsigned rank, std::uint32_t p) {
    GCElement e(rank, p);
    e.add_term(Monomial(rank), c);
    return e;
  }
  static GCElement monomial(const Monomial& m, std::uint32_t p, long long c = 1) {
    GCElement e(m.rank(), p);
    e.add_term(m, c);
    return e;
  }
  /// x_i, 1-based.
  static GCElement x(unsigned i, unsigned rank, std::uint32_t p) {
    if (i == 0 || i > rank) throw DomainError("x index out of range");
    Monomial m(rank);
    m.set_exponent(i - 1, 1);
    return monomial(m, p);
  }
  /// y_i, 1-based.
  static GCElement y(unsigned i, unsigned rank, std::uint32_t p) {
    if (i == 0 || i > rank) throw DomainError("y index out of range");
    std::array<unsigned, kMaxRank> e{};
    return monomial(Monomial(std::span<const unsigned>(e.data(), rank), 1u << (i - 1)), p);
  }

  unsigned rank() const { return rank_; }
  std::uint32_t modulus() const { return p_; }
  const TermMap& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }

  Fp coefficient(const Monomial& m) const {
    auto it = terms_.find(m);
    return Fp(it == terms_.end() ? 0 : it->second, p_);
  }

  void add_term(const Monomial& m, long long c) { add_residue(m, reduce_mod(c, p_)); }

  void add_residue(const Monomial& m, std::uint32_t r) {
    if (m.rank() != rank_) throw DomainError("monomial rank mismatch");
    if (r == 0) return;
    auto [it, inserted] = terms_.try_emplace(m, r);
    if (!inserted) {
      it->second = (it->second + r) % p_;
      if (it->second == 0) terms_.erase(it);
    }
  }

  /// Bidegree when every term shares it; nullopt for zero or inhomogeneous elements.
  std::optional<Bidegree> bidegree() const {
    if (terms_.empty()) return std::nullopt;
    const Bidegree b = terms_.begin()->first.bidegree();
    for (const auto& [m, c] : terms_)
      if (m.bidegree() != b) return std::nullopt;
    return b;
  }
  bool is_homogeneous() const { return terms_.empty() || bidegree().has_value(); }

  GCElement operator+(const GCElement& o) const {
    check(o);
    GCElement r(*this);
    for (const auto& [m, c] : o.terms_) r.add_residue(m, c);
    return r;
  }
  GCElement operator-() const {
    GCElement r(rank_, p_);
    for (const auto& [m, c] : terms_) r.terms_.emplace(m, p_ - c);
    return r;
  }
  GCElement operator-(const GCElement& o) const { return *this + (-o); }
  GCElement& operator+=(const GCElement& o) {
    check(o);
    for (const auto& [m, c] : o.terms_) add_residue(m, c);
    return *this;
  }

  GCElement scaled(const Fp& s) const {
    if (s.modulus() != p_) throw FieldMismatch("scalar modulus mismatch");
    GCElement r(rank_, p_);
    if (s.is_zero()) return r;
    for (const auto& [m, c] : terms_) r.terms_.emplace(m, mul_mod(c, s.residue(), p_));
    return r;
  }
  GCElement scaled(long long s) const { return scaled(Fp(s, p_)); }

  /// Graded-commutative product.
  GCElement operator*(const GCElement& o) const {
    check(o);
    GCElement r(rank_, p_);
    for (const auto& [ma, ca] : terms_)
      for (const auto& [mb, cb] : o.terms_) {
        auto prod = multiply(ma, mb);
        if (!prod) continue;
        std::uint32_t c = mul_mod(ca, cb, p_);
        if (prod->second < 0) c = (p_ - c) % p_;
        r.add_residue(prod->first, c);
      }
    return r;
  }

  friend bool operator==(const GCElement& a, const GCElement& b) {
    return a.rank_ == b.rank_ && a.p_ == b.p_ && a.terms_ == b.terms_;
  }

 private:
  void check(const GCElement& o) const {
    if (o.rank_ != rank_) throw DomainError("rank mismatch");
    if (o.p_ != p_) throw FieldMismatch("modulus mismatch");
  }

  unsigned rank_;
  std::uint32_t p_;
  TermMap terms_;
};

inline GCElement gc_mul(const GCElement& a, const GCElement& b) { return a * b; }

inline GCElement power(const GCElement& f, unsigned e) {
  GCElement r = GCElement::constant(1, f.rank(), f.modulus());
  for (unsigned k = 0; k < e; ++k) r = r * f;
  return r;
}

// ---------------------------------------------------------------------------
// Plain-text syntax: terms joined by + or -, factors joined by *, e.g.
// "x1^4*x2^2*y1*y3-x3*y2". Coefficients other than 1 and -1 are written "c*".

inline std::string to_string(const GCElement& f) {
  if (f.is_zero()) return "0";
  const std::uint32_t p = f.modulus();
  std::string s;
  bool first = true;
  for (const auto& [m, c] : f.terms()) {
    const bool neg = p > 2 && c == p - 1;
    if (neg)
      s += '-';
    else if (!first)
      s += '+';
    const bool is_const = m.xdeg() == 0 && m.ydeg() == 0;
    if (!neg && c != 1) {
      s += std::to_string(c);
      if (!is_const) s += '*' + m.to_string();
    } else {
      s += m.to_string();
    }
    first = false;
  }
  return s;
}

inline GCElement parse_element(std::string_view text, unsigned rank, std::uint32_t p) {
  GCElement out(rank, p);
  std::size_t pos = 0;
  auto fail = [&](const std::string& why) -> ParseError {
    return ParseError("cannot parse element at offset " + std::to_string(pos) + ": " + why);
  };
  auto skip_ws = [&] {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  };
  auto read_uint = [&]() -> unsigned long long {
    if (pos >= text.size() || !std::isdigit(static_cast<unsigned char>(text[pos]))) throw fail("expected digits");
    unsigned long long v = 0;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
      v = v * 10 + static_cast<unsigned>(text[pos++] - '0');
      if (v > (1ull << 40)) throw fail("number too large");
    }
    return v;
  };

  skip_ws();
  if (pos == text.size()) throw fail("empty input");
  bool first = true;
  while (true) {
    skip_ws();
    if (pos == text.size()) break;
    long long sign = 1;
    if (text[pos] == '+' || text[pos] == '-') {
      sign = text[pos] == '-' ? -1 : 1;
      ++pos;
      skip_ws();
    } else if (!first) {
      throw fail("expected + or -");
    }
    first = false;

    long long coeff = sign;
    std::array<unsigned, kMaxRank> exps{};
    std::vector<unsigned> ys;
    bool any_factor = false;
    while (true) {
      skip_ws();
      if (pos >= text.size()) throw fail("dangling operator");
      const char ch = text[pos];
      if (std::isdigit(static_cast<unsigned char>(ch))) {
        coeff = static_cast<long long>(reduce_mod(coeff, p) * (read_uint() % p) % p);
      } else if (ch == 'x' || ch == 'y') {
        ++pos;
        const auto idx = read_uint();
        if (idx == 0 || idx > rank) throw fail("generator index out of range");
        unsigned long long e = 1;
        skip_ws();
        if (pos < text.size() && text[pos] == '^') {
          ++pos;
          skip_ws();
          e = read_uint();
        }
        if (ch == 'x') {
          exps[idx - 1] += static_cast<unsigned>(e);
        } else {
          for (unsigned long long k = 0; k < e; ++k) ys.push_back(static_cast<unsigned>(idx));
        }
      } else {
        throw fail(std::string("unexpected character '") + ch + "'");
      }
      any_factor = true;
      skip_ws();
      if (pos < text.size() && text[pos] == '*') {
        ++pos;
        continue;
      }
      break;
    }
    if (!any_factor) throw fail("empty term");
    const SignedMask sm = sign_normalize(ys);
    if (sm.zero) continue;
    out.add_term(Monomial(std::span<const unsigned>(exps.data(), rank), sm.mask), coeff * sm.sign);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Coordinates for a single bidegree

/// Monomials of a bidegree, in descending monomial order.
inline std::vector<Monomial> bidegree_basis(Bidegree bd, unsigned rank) {
  std::vector<Monomial> out;
  if (bd.xdeg < 0 || bd.ydeg < 0 || bd.ydeg > static_cast<int>(rank) || rank == 0) return out;
  std::vector<std::uint32_t> masks;
  for (std::uint32_t m = 0; m < (1u << rank); ++m)
    if (std::popcount(m) == bd.ydeg) masks.push_back(m);
  std::sort(masks.begin(), masks.end(), [rank](std::uint32_t a, std::uint32_t b) {
    return Monomial(std::vector<unsigned>(rank, 0), a).mask_key() > Monomial(std::vector<unsigned>(rank, 0), b).mask_key();
  });
  std::vector<unsigned> e(rank, 0);
  std::function<void(unsigned, unsigned)> rec = [&](unsigned i, unsigned left) {
    if (i + 1 == rank) {
      e[i] = left;
      for (auto m : masks) out.emplace_back(e, m);
      return;
    }
    for (unsigned v = left + 1; v-- > 0;) {
      e[i] = v;
      rec(i + 1, left - v);
    }
  };
  rec(0, static_cast<unsigned>(bd.xdeg));
  return out;
}

/// Index over bidegree_basis for converting elements to and from dense vectors.
class BidegreeBasis {
 public:
  BidegreeBasis(Bidegree bd, unsigned rank, std::uint32_t p) : bd_(bd), rank_(rank), p_(p), monomials_(bidegree_basis(bd, rank)) {
    index_.reserve(monomials_.size());
    for (std::size_t k = 0; k < monomials_.size(); ++k) index_.emplace(monomials_[k], k);
  }

  Bidegree bidegree() const { return bd_; }
  unsigned rank() const { return rank_; }
  std::uint32_t modulus() const { return p_; }
  std::size_t size() const { return monomials_.size(); }
  const std::vector<Monomial>& monomials() const { return monomials_; }

  std::optional<std::size_t> index_of(const Monomial& m) const {
    auto it = index_.find(m);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  /// Dense coordinates; throws if f has a term outside this bidegree.
  std::vector<std::uint8_t> coordinates(const GCElement& f) const {
    std::vector<std::uint8_t> v(size(), 0);
    for (const auto& [m, c] : f.terms()) {
      auto idx = index_of(m);
      if (!idx) throw DomainError("term " + m.to_string() + " lies outside bidegree " + bd_.to_string());
      v[*idx] = static_cast<std::uint8_t>(c);
    }
    return v;
  }

  GCElement element(std::span<const std::uint8_t> v) const {
    GCElement f(rank_, p_);
    for (std::size_t k = 0; k < v.size(); ++k)
      if (v[k]) f.add_residue(monomials_[k], v[k]);
    return f;
  }

 private:
  Bidegree bd_;
  unsigned rank_;
  std::uint32_t p_;
  std::vector<Monomial> monomials_;
  std::unordered_map<Monomial, std::size_t, MonomialHash> index_;
};

}  // namespace diffinv

#pragma once

// Module structure over a parameter subalgebra A: spans of A-multiples,
// generation and freeness certificates, the covariant map Theta, algebra
// indecomposables and relation extraction. Membership is always decided by
// exact row reduction in bidegree coordinates.

#include <algorithm>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "diffinv/error.hpp"
#include "diffinv/gcalg.hpp"
#include "diffinv/grouprep.hpp"
#include "diffinv/invariants.hpp"
#include "diffinv/linalg.hpp"
#include "diffinv/series.hpp"

namespace diffinv {

/// One product a^alpha of the parameters.
struct AMonomial {
  std::vector<unsigned> exponents;
  GCElement value;
};

class HsopSubalgebra {
 public:
  HsopSubalgebra(std::vector<GCElement> generators, std::vector<std::string> names = {})
      : gens_(std::move(generators)), names_(std::move(names)) {
    if (gens_.empty()) throw DomainError("parameter list is empty");
    for (std::size_t k = 0; k < gens_.size(); ++k) {
      const auto bd = gens_[k].bidegree();
      if (!bd || bd->ydeg != 0 || bd->xdeg <= 0) throw DomainError("parameters must be homogeneous of positive x-degree and y-degree 0");
      degrees_.push_back(bd->xdeg);
      if (names_.size() <= k) names_.push_back("a" + std::to_string(k + 1));
    }
  }

  const std::vector<GCElement>& generators() const { return gens_; }
  const std::vector<int>& degrees() const { return degrees_; }
  const std::vector<std::string>& names() const { return names_; }
  unsigned rank() const { return gens_.front().rank(); }
  std::uint32_t modulus() const { return gens_.front().modulus(); }

  /// All a^alpha with sum alpha_k e_k = d, exponent tuples in lex order.
  const std::vector<AMonomial>& monomials(int d) const {
    std::lock_guard lock(mu_);
    auto it = memo_.find(d);
    if (it != memo_.end()) return it->second;
    std::vector<AMonomial> out;
    if (d >= 0) {
      std::vector<unsigned> alpha(gens_.size(), 0);
      enumerate(0, d, alpha, out);
    }
    return memo_.emplace(d, std::move(out)).first->second;
  }

  std::string monomial_name(const std::vector<unsigned>& alpha) const {
    std::string s;
    for (std::size_t k = 0; k < alpha.size(); ++k) {
      if (!alpha[k]) continue;
      if (!s.empty()) s += "*";
      s += names_[k];
      if (alpha[k] > 1) s += "^" + std::to_string(alpha[k]);
    }
    return s.empty() ? "1" : s;
  }

 private:
  GCElement power_locked(std::size_t k, unsigned e) const {
    auto& cache = powers_[k];
    if (cache.empty()) cache.push_back(GCElement::constant(1, rank(), modulus()));
    while (cache.size() <= e) cache.push_back(cache.back() * gens_[k]);
    return cache[e];
  }

  void enumerate(std::size_t k, int left, std::vector<unsigned>& alpha, std::vector<AMonomial>& out) const {
    if (k == gens_.size()) {
      if (left != 0) return;
      GCElement v = GCElement::constant(1, rank(), modulus());
      for (std::size_t j = 0; j < alpha.size(); ++j)
        if (alpha[j]) v = v * power_locked(j, alpha[j]);
      out.push_back({alpha, std::move(v)});
      return;
    }
    for (int e = left / degrees_[k]; e >= 0; --e) {
      alpha[k] = static_cast<unsigned>(e);
      enumerate(k + 1, left - e * degrees_[k], alpha, out);
    }
    alpha[k] = 0;
  }

  std::vector<GCElement> gens_;
  std::vector<std::string> names_;
  std::vector<int> degrees_;
  mutable std::mutex mu_;
  mutable std::map<int, std::vector<AMonomial>> memo_;
  mutable std::map<std::size_t, std::vector<GCElement>> powers_;
};

// ---------------------------------------------------------------------------
// Parameters

/// The ideal generated by polys contains every x-monomial of each degree in the
/// window [d0, d0 + max e], d0 = sum(e - 1) + 1 unless given.
inline bool hsop_check(const std::vector<GCElement>& polys, unsigned rank, std::optional<int> window_start = std::nullopt) {
  if (polys.size() != rank)
    throw DomainError("parameter count " + std::to_string(polys.size()) + " differs from Krull dimension " + std::to_string(rank));
  std::vector<int> degrees;
  for (const auto& f : polys) {
    const auto bd = f.bidegree();
    if (f.rank() != rank || !bd || bd->ydeg != 0 || bd->xdeg <= 0)
      throw DomainError("parameters must be homogeneous in x only, of positive degree");
    degrees.push_back(bd->xdeg);
  }
  const std::uint32_t p = polys.front().modulus();
  int d0 = 1;
  for (int e : degrees) d0 += e - 1;
  if (window_start) d0 = *window_start;
  const int top = d0 + *std::max_element(degrees.begin(), degrees.end());
  for (int d = d0; d <= top; ++d) {
    const BidegreeBasis target({d, 0}, rank, p);
    DenseMatrix m(0, target.size(), p);
    for (std::size_t k = 0; k < polys.size(); ++k) {
      if (degrees[k] > d) continue;
      for (const auto& mono : bidegree_basis({d - degrees[k], 0}, rank)) {
        const auto v = target.coordinates(GCElement::monomial(mono, p) * polys[k]);
        m.append_row(v);
      }
    }
    if (rank_of(m) != target.size()) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// A-spans

struct EchelonSpan {
  DenseMatrix echelon;  ///< first pivots.size() rows are the reduced basis
  std::vector<std::size_t> pivots;

  std::size_t dimension() const { return pivots.size(); }
};

/// Span of {a * g : a in A, g in gens} inside one bidegree.
inline EchelonSpan a_span(const std::vector<GCElement>& gens, const HsopSubalgebra& hsop, const BidegreeBasis& bb) {
  const Bidegree bd = bb.bidegree();
  DenseMatrix m(0, bb.size(), hsop.modulus());
  for (const auto& g : gens) {
    const auto gbd = g.bidegree();
    if (!gbd) {
      if (g.is_zero()) continue;
      throw DomainError("module generators must be homogeneous");
    }
    if (gbd->ydeg != bd.ydeg || gbd->xdeg > bd.xdeg) continue;
    for (const auto& a : hsop.monomials(bd.xdeg - gbd->xdeg)) m.append_row(bb.coordinates(a.value * g));
  }
  auto pivots = row_reduce(m);
  m.truncate_rows(pivots.size());
  return {std::move(m), std::move(pivots)};
}

/// dims of the A-span at (x, ydeg) for x in [0, max_xdeg].
inline std::vector<std::size_t> a_span_dims(const std::vector<GCElement>& gens, const HsopSubalgebra& hsop, int ydeg,
                                            int max_xdeg) {
  std::vector<std::size_t> dims;
  for (int x = 0; x <= max_xdeg; ++x) dims.push_back(a_span(gens, hsop, BidegreeBasis({x, ydeg}, hsop.rank(), hsop.modulus())).dimension());
  return dims;
}

inline std::vector<std::size_t> fixed_dims(const InvariantContext& ctx, int ydeg, int max_xdeg) {
  std::vector<std::size_t> dims;
  for (int x = 0; x <= max_xdeg; ++x) dims.push_back(ctx.dimension({x, ydeg}));
  return dims;
}

/// Zero after reduction against the span means membership.
inline bool in_span(const GCElement& f, const EchelonSpan& span, const BidegreeBasis& bb) {
  auto v = bb.coordinates(f);
  reduce_against(v, span.echelon, span.pivots);
  return std::all_of(v.begin(), v.end(), [](std::uint8_t c) { return c == 0; });
}

struct GenerationResult {
  bool ok = false;
  std::optional<Bidegree> failure;
  std::optional<GCElement> witness;  ///< a fixed element outside the span at the failure
  std::string detail;
  std::vector<std::size_t> span_dims;
  std::vector<std::size_t> fixed_dims;
};

/// The A-span of gens equals the fixed family at every (x, ydeg), x <= max_xdeg.
inline GenerationResult generation_check(const std::vector<GCElement>& gens, const HsopSubalgebra& hsop,
                                         const InvariantContext& ctx, int ydeg, int max_xdeg) {
  GenerationResult r;
  for (const auto& g : gens)
    if (!ctx.is_fixed(g)) {
      r.failure = g.bidegree();
      r.detail = "generator " + to_string(g) + " is not in the fixed family";
      return r;
    }
  for (int x = 0; x <= max_xdeg; ++x) {
    const Bidegree bd{x, ydeg};
    const BidegreeBasis& bb = ctx.coordinates(bd);
    const EchelonSpan span = a_span(gens, hsop, bb);
    const FixedSpaceBasis& fixed = ctx.fixed_space(bd);
    r.span_dims.push_back(span.dimension());
    r.fixed_dims.push_back(fixed.dimension());
    if (r.failure || span.dimension() == fixed.dimension()) continue;
    r.failure = bd;
    r.detail = "span dimension " + std::to_string(span.dimension()) + " < fixed dimension " + std::to_string(fixed.dimension()) +
               " at " + bd.to_string();
    for (const auto& f : fixed.basis)
      if (!in_span(f, span, bb)) {
        r.witness = f;
        break;
      }
  }
  r.ok = !r.failure.has_value();
  return r;
}

// ---------------------------------------------------------------------------
// Generator discovery and freeness

struct LabeledGenerator {
  std::string name;
  GCElement element;
  Bidegree bidegree;
};

struct GeneratorReport {
  std::string context;
  int ydeg = 0;
  std::vector<LabeledGenerator> generators;
  IntPolynomial numerator;  ///< coefficient of t^x = number of generators of x-degree x
  int bound = 0;

  std::vector<GCElement> elements() const {
    std::vector<GCElement> v;
    for (const auto& g : generators) v.push_back(g.element);
    return v;
  }
  std::vector<int> degrees() const {
    std::vector<int> v;
    for (const auto& g : generators) v.push_back(g.bidegree.xdeg);
    return v;
  }
};

inline IntPolynomial degree_numerator(const std::vector<int>& xdegs) {
  IntPolynomial n;
  for (int d : xdegs) n = n + IntPolynomial::monomial(1, static_cast<std::size_t>(d));
  return n;
}

/// Ascending in x-degree, adjoin a reduced echelon basis of fixed / A-span.
inline GeneratorReport find_module_generators(const HsopSubalgebra& hsop, const InvariantContext& ctx, int ydeg, int max_xdeg,
                                              std::string context = {}) {
  GeneratorReport rep{std::move(context), ydeg, {}, {}, max_xdeg};
  std::vector<GCElement> gens;
  std::vector<int> xdegs;
  for (int x = 0; x <= max_xdeg; ++x) {
    const Bidegree bd{x, ydeg};
    const BidegreeBasis& bb = ctx.coordinates(bd);
    const FixedSpaceBasis& fixed = ctx.fixed_space(bd);
    if (fixed.dimension() == 0) continue;
    const EchelonSpan span = a_span(gens, hsop, bb);
    if (span.dimension() == fixed.dimension()) continue;
    DenseMatrix rest(0, bb.size(), hsop.modulus());
    for (const auto& f : fixed.basis) {
      auto v = bb.coordinates(f);
      reduce_against(v, span.echelon, span.pivots);
      rest.append_row(v);
    }
    const std::size_t r = row_reduce(rest).size();
    for (std::size_t k = 0; k < r; ++k) {
      GCElement g = bb.element(rest.row(k));
      rep.generators.push_back({"m" + std::to_string(rep.generators.size() + 1), g, bd});
      gens.push_back(std::move(g));
      xdegs.push_back(x);
    }
  }
  rep.numerator = degree_numerator(xdegs);
  return rep;
}

/// Expansion of N / prod(1 - t^e), the A-span dims and the fixed dims agree up to the bound.
struct FreenessCertificate {
  bool ok = false;
  RationalSeries series{IntPolynomial{}, IntPolynomial::constant(1)};
  std::vector<long long> expanded;
  std::vector<std::size_t> span_dims;
  std::vector<std::size_t> fixed_dims;
};

inline FreenessCertificate freeness_triangle(const std::vector<GCElement>& gens, const HsopSubalgebra& hsop,
                                             const InvariantContext& ctx, int ydeg, int max_xdeg) {
  std::vector<int> xdegs;
  for (const auto& g : gens) {
    const auto bd = g.bidegree();
    if (!bd || bd->ydeg != ydeg) throw DomainError("generator outside the family's y-degree");
    xdegs.push_back(bd->xdeg);
  }
  FreenessCertificate c;
  c.series = RationalSeries(degree_numerator(xdegs), IntPolynomial::hsop_denominator(hsop.degrees()));
  c.expanded = c.series.expand(static_cast<std::size_t>(std::max(max_xdeg, 0)));
  c.span_dims = a_span_dims(gens, hsop, ydeg, max_xdeg);
  c.fixed_dims = fixed_dims(ctx, ydeg, max_xdeg);
  c.ok = true;
  for (int x = 0; x <= max_xdeg; ++x) {
    const auto e = static_cast<std::size_t>(c.expanded[x]);
    if (c.expanded[x] < 0 || e != c.span_dims[x] || e != c.fixed_dims[x]) c.ok = false;
  }
  return c;
}

// ---------------------------------------------------------------------------
// Theta: relative H-invariants to G-covariants with values in the exterior powers

/// sum_j rho(t_j)(f) * omega_j with omega_j = y_{j+1} (i = 1) or y_{j+2} y_{j+3} (i = 2), indices mod 3.
/// Requires f to be a relative invariant of ctx_h; reps index elements of the representation's group.
inline GCElement theta(const GCElement& f, int i, const Representation& rep, const std::vector<std::size_t>& reps,
                       const InvariantContext* relative = nullptr) {
  const unsigned n = f.rank();
  if (n != 3 || reps.size() != 3) throw DomainError("theta is defined for rank 3 with three coset representatives");
  if (i != 1 && i != 2) throw DomainError("theta index must be 1 or 2");
  if (relative && !relative->is_fixed(f)) throw DomainError("argument is not a relative invariant: " + to_string(f));
  const std::uint32_t p = f.modulus();
  GCElement out(n, p);
  for (unsigned j = 0; j < 3; ++j) {
    const GCElement omega = i == 1 ? GCElement::y(j + 1, n, p)
                                   : GCElement::y((j + 1) % 3 + 1, n, p) * GCElement::y((j + 2) % 3 + 1, n, p);
    out += act(rep, reps[j], f) * omega;
  }
  return out;
}

struct ThetaIsoResult {
  bool ok = false;
  std::optional<Bidegree> failure;
  std::string detail;
};

/// For i = 1, 2 and every x <= max_xdeg, theta carries a basis of the relative fixed
/// space at (x, 0) onto a basis of the G-fixed space at (x, i).
inline ThetaIsoResult theta_iso_check(const InvariantContext& g_ctx, const InvariantContext& relative, const MatrixGroup& h,
                                      const std::vector<std::size_t>& reps, int max_xdeg) {
  ThetaIsoResult r;
  if (!is_transversal(g_ctx.representation().source(), h, reps)) {
    r.detail = "representatives are not a left transversal";
    return r;
  }
  for (int i = 1; i <= 2; ++i)
    for (int x = 0; x <= max_xdeg; ++x) {
      const Bidegree bd{x, i};
      const auto& src = relative.fixed_space({x, 0}).basis;
      const FixedSpaceBasis& dst = g_ctx.fixed_space(bd);
      const BidegreeBasis& bb = g_ctx.coordinates(bd);
      DenseMatrix m(0, bb.size(), g_ctx.modulus());
      bool fixed = true;
      for (const auto& f : src) {
        const GCElement img = theta(f, i, g_ctx.representation(), reps);
        fixed = fixed && g_ctx.is_fixed(img);
        m.append_row(bb.coordinates(img));
      }
      const std::size_t rk = rank_of(m);
      if (!fixed || rk != src.size() || rk != dst.dimension()) {
        r.failure = bd;
        r.detail = "theta at " + bd.to_string() + ": source " + std::to_string(src.size()) + ", image rank " + std::to_string(rk) +
                   ", target " + std::to_string(dst.dimension()) + (fixed ? "" : ", image not invariant");
        return r;
      }
    }
  r.ok = true;
  return r;
}

// ---------------------------------------------------------------------------
// Algebra indecomposables

struct IndecomposableEntry {
  Bidegree bidegree;
  std::size_t invariant_dim = 0;
  std::size_t decomposable_dim = 0;
  std::vector<GCElement> representatives;  ///< reduced echelon basis of the complement
};

struct MinimalGenerators {
  std::vector<IndecomposableEntry> entries;  ///< only bidegrees with a nonzero complement
  int bound = 0;
  int max_ydeg = 0;

  std::size_t total() const {
    std::size_t n = 0;
    for (const auto& e : entries) n += e.representatives.size();
    return n;
  }
  std::vector<GCElement> generators() const {
    std::vector<GCElement> v;
    for (const auto& e : entries) v.insert(v.end(), e.representatives.begin(), e.representatives.end());
    return v;
  }
};

/// Span of g * Inv(bd - deg g) over generators g of strictly smaller bidegree.
inline EchelonSpan decomposables(const InvariantContext& ctx, const std::vector<GCElement>& gens, Bidegree bd) {
  const BidegreeBasis& bb = ctx.coordinates(bd);
  DenseMatrix m(0, bb.size(), ctx.modulus());
  for (const auto& g : gens) {
    const Bidegree gbd = *g.bidegree();
    if (!gbd.divides(bd) || gbd == bd) continue;
    for (const auto& u : ctx.fixed_space(bd - gbd).basis) {
      const GCElement prod = g * u;
      if (!prod.is_zero()) m.append_row(bb.coordinates(prod));
    }
  }
  auto pivots = row_reduce(m);
  m.truncate_rows(pivots.size());
  return {std::move(m), std::move(pivots)};
}

/// Bidegrees are visited by x-degree then y-degree, so every generator that can
/// divide bd is already known when bd is processed. (0,0) is excluded.
inline MinimalGenerators minimal_algebra_generators(const InvariantContext& ctx, int max_xdeg, int max_ydeg = -1) {
  if (max_ydeg < 0) max_ydeg = static_cast<int>(ctx.rank());
  MinimalGenerators out{{}, max_xdeg, max_ydeg};
  std::vector<GCElement> gens;
  for (int x = 0; x <= max_xdeg; ++x)
    for (int y = 0; y <= max_ydeg; ++y) {
      if (x == 0 && y == 0) continue;
      const Bidegree bd{x, y};
      const FixedSpaceBasis& inv = ctx.fixed_space(bd);
      if (inv.dimension() == 0) continue;
      const EchelonSpan dec = decomposables(ctx, gens, bd);
      if (dec.dimension() == inv.dimension()) continue;
      const BidegreeBasis& bb = ctx.coordinates(bd);
      DenseMatrix rest(0, bb.size(), ctx.modulus());
      for (const auto& f : inv.basis) {
        auto v = bb.coordinates(f);
        reduce_against(v, dec.echelon, dec.pivots);
        rest.append_row(v);
      }
      const std::size_t r = row_reduce(rest).size();
      IndecomposableEntry e{bd, inv.dimension(), dec.dimension(), {}};
      for (std::size_t k = 0; k < r; ++k) e.representatives.push_back(bb.element(rest.row(k)));
      gens.insert(gens.end(), e.representatives.begin(), e.representatives.end());
      out.entries.push_back(std::move(e));
    }
  return out;
}

/// f lies in the span of products of the given generators of smaller bidegree.
inline bool in_decomposables(const InvariantContext& ctx, const std::vector<GCElement>& gens, const GCElement& f) {
  const auto bd = f.bidegree();
  if (!bd) throw DomainError("element is not homogeneous");
  if (f.is_zero()) return true;
  return in_span(f, decomposables(ctx, gens, *bd), ctx.coordinates(*bd));
}

/// f lies in the decomposables plus the span of the other generators of its bidegree,
/// so dropping f from gens leaves the generated subalgebra unchanged.
inline bool is_obsolete(const InvariantContext& ctx, const std::vector<GCElement>& gens, const GCElement& f) {
  const auto bd = f.bidegree();
  if (!bd) throw DomainError("element is not homogeneous");
  if (f.is_zero()) return true;
  const BidegreeBasis& bb = ctx.coordinates(*bd);
  const EchelonSpan dec = decomposables(ctx, gens, *bd);
  DenseMatrix m = dec.echelon;
  for (const auto& g : gens)
    if (!(g == f) && g.bidegree() == bd) m.append_row(bb.coordinates(g));
  auto pivots = row_reduce(m);
  m.truncate_rows(pivots.size());
  return in_span(f, {std::move(m), std::move(pivots)}, bb);
}

/// candidates together with the decomposables span the invariants at bd, with
/// no redundancy: |candidates| equals the complement dimension.
inline bool spans_complement(const InvariantContext& ctx, const std::vector<GCElement>& gens, Bidegree bd,
                             const std::vector<GCElement>& candidates) {
  const EchelonSpan dec = decomposables(ctx, gens, bd);
  const std::size_t inv = ctx.dimension(bd);
  for (const auto& c : candidates)
    if (!ctx.is_fixed(c) || (!c.is_zero() && c.bidegree() != bd)) return false;
  const BidegreeBasis& bb = ctx.coordinates(bd);
  DenseMatrix m = dec.echelon;
  for (const auto& c : candidates) m.append_row(bb.coordinates(c));
  return candidates.size() + dec.dimension() == inv && rank_of(m) == inv;
}

// ---------------------------------------------------------------------------
// Relations

struct RelationTerm {
  std::vector<unsigned> a_exponents;
  std::size_t generator = 0;
  Fp coefficient;
};

struct RelationRecord {
  std::string left;
  GCElement product;
  bool in_span = false;
  bool unique = false;
  bool residual_zero = false;
  std::vector<RelationTerm> terms;  ///< nonzero coefficients only, in column order
};

/// Solves product = sum c * a^alpha * g over all columns of the product's bidegree.
inline RelationRecord relation_extract(const GCElement& product, const std::vector<GCElement>& gens, const HsopSubalgebra& hsop,
                                       std::string left = {}) {
  RelationRecord rec{std::move(left), product, false, false, false, {}};
  const std::uint32_t p = hsop.modulus();
  std::optional<Bidegree> bd = product.bidegree();
  if (!bd) {
    if (!product.is_zero()) throw DomainError("product is not homogeneous");
    rec.in_span = rec.unique = rec.residual_zero = true;
    return rec;
  }
  const BidegreeBasis bb(*bd, hsop.rank(), p);
  struct Column {
    std::vector<unsigned> alpha;
    std::size_t gen;
    GCElement value;
  };
  std::vector<Column> cols;
  for (std::size_t k = 0; k < gens.size(); ++k) {
    const auto gbd = gens[k].bidegree();
    if (!gbd || gbd->ydeg != bd->ydeg || gbd->xdeg > bd->xdeg) continue;
    for (const auto& a : hsop.monomials(bd->xdeg - gbd->xdeg)) cols.push_back({a.exponents, k, a.value * gens[k]});
  }
  DenseMatrix m(bb.size(), cols.size(), p);
  for (std::size_t c = 0; c < cols.size(); ++c) {
    const auto v = bb.coordinates(cols[c].value);
    for (std::size_t r = 0; r < v.size(); ++r) m(r, c) = v[r];
  }
  const auto sol = solve(m, bb.coordinates(product));
  if (!sol) return rec;
  rec.in_span = true;
  rec.unique = sol->unique;
  GCElement check(product.rank(), p);
  for (std::size_t c = 0; c < cols.size(); ++c) {
    if (!sol->x[c]) continue;
    const Fp coeff(sol->x[c], p);
    rec.terms.push_back({cols[c].alpha, cols[c].gen, coeff});
    check += cols[c].value.scaled(coeff);
  }
  rec.residual_zero = (check - product).is_zero();
  return rec;
}

/// "-d4-a1*d1+d3" style rendering with the given generator names.
inline std::string to_string(const RelationRecord& rec, const HsopSubalgebra& hsop, const std::vector<std::string>& gen_names) {
  if (!rec.in_span) return "not in span";
  if (rec.terms.empty()) return "0";
  std::string s;
  for (const auto& t : rec.terms) {
    const long long c = t.coefficient.centered();
    s += c < 0 ? "-" : (s.empty() ? "" : "+");
    const long long mag = c < 0 ? -c : c;
    if (mag != 1) s += std::to_string(mag) + "*";
    const std::string a = hsop.monomial_name(t.a_exponents);
    if (a != "1") s += a + "*";
    s += gen_names.at(t.generator);
  }
  return s;
}

}  // namespace diffinv

#pragma once

// Finite matrix groups by closure, their representations and actions on the
// graded-commutative algebra, linear characters, and coset transversals.

#include <cstdint>
#include <deque>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "diffinv/error.hpp"
#include "diffinv/fp_matrix.hpp"
#include "diffinv/gcalg.hpp"
#include "diffinv/linalg.hpp"

namespace diffinv {

/// Finite group of invertible matrices, enumerated breadth-first from the
/// identity by left multiplication with the generators in the order given.
class MatrixGroup {
 public:
  static MatrixGroup closure(std::vector<FpMatrix> generators) {
    if (generators.empty()) throw DomainError("closure needs at least one generator");
    const FpMatrix& g0 = generators.front();
    if (!g0.is_square()) throw DomainError("group generators must be square");
    for (const auto& g : generators) {
      if (g.rows() != g0.rows() || g.cols() != g0.cols() || g.modulus() != g0.modulus())
        throw DomainError("group generators differ in shape or modulus");
      if (!g.try_inverse()) throw DomainError("generator " + g.to_string() + " is not invertible");
    }
    MatrixGroup G;
    G.generators_ = std::move(generators);
    G.add(FpMatrix::identity(g0.rows(), g0.modulus()), npos, npos);
    for (std::size_t k = 0; k < G.elements_.size(); ++k)
      for (std::size_t gi = 0; gi < G.generators_.size(); ++gi) {
        FpMatrix next = G.generators_[gi] * G.elements_[k];
        if (!G.lookup_.count(next)) G.add(std::move(next), k, gi);
      }
    for (const auto& g : G.generators_) G.generator_indices_.push_back(G.index(g));
    const std::size_t n = G.elements_.size();
    G.table_.resize(n * n);
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) G.table_[a * n + b] = static_cast<std::uint32_t>(G.index(G.elements_[a] * G.elements_[b]));
    G.inverse_.resize(n);
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        if (G.table_[a * n + b] == 0) G.inverse_[a] = b;
    return G;
  }

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  std::size_t order() const { return elements_.size(); }
  const std::vector<FpMatrix>& elements() const { return elements_; }
  const FpMatrix& element(std::size_t k) const { return elements_.at(k); }
  const std::vector<FpMatrix>& generators() const { return generators_; }
  const std::vector<std::size_t>& generator_indices() const { return generator_indices_; }
  std::size_t dimension() const { return elements_.front().rows(); }
  std::uint32_t modulus() const { return elements_.front().modulus(); }
  std::size_t identity() const { return 0; }

  std::optional<std::size_t> index_of(const FpMatrix& m) const {
    auto it = lookup_.find(m);
    if (it == lookup_.end()) return std::nullopt;
    return it->second;
  }
  std::size_t index(const FpMatrix& m) const {
    auto k = index_of(m);
    if (!k) throw DomainError("matrix " + m.to_string() + " is not in the group");
    return *k;
  }
  bool contains(const FpMatrix& m) const { return lookup_.count(m) > 0; }

  std::size_t product(std::size_t a, std::size_t b) const { return table_[a * order() + b]; }
  std::size_t inverse(std::size_t a) const { return inverse_[a]; }

  /// BFS tree edge: element k = generators()[via] * element(parent). Identity has none.
  std::optional<std::pair<std::size_t, std::size_t>> bfs_parent(std::size_t k) const {
    if (parent_[k] == npos) return std::nullopt;
    return std::make_pair(parent_[k], via_[k]);
  }

  std::uint64_t element_order(std::size_t k) const {
    std::uint64_t n = 1;
    for (std::size_t acc = k; acc != identity(); acc = product(acc, k)) ++n;
    return n;
  }

  std::uint64_t exponent() const {
    std::uint64_t e = 1;
    for (std::size_t k = 0; k < order(); ++k) e = std::lcm(e, element_order(k));
    return e;
  }

  /// Every element of `sub` lies in this group.
  bool contains_all(const MatrixGroup& sub) const {
    for (const auto& h : sub.elements())
      if (!contains(h)) return false;
    return true;
  }

 private:
  void add(FpMatrix m, std::size_t parent, std::size_t via) {
    lookup_.emplace(m, elements_.size());
    elements_.push_back(std::move(m));
    parent_.push_back(parent);
    via_.push_back(via);
  }

  std::vector<FpMatrix> generators_;
  std::vector<std::size_t> generator_indices_;
  std::vector<FpMatrix> elements_;
  std::vector<std::size_t> parent_;
  std::vector<std::size_t> via_;
  std::map<FpMatrix, std::size_t> lookup_;
  std::vector<std::uint32_t> table_;
  std::vector<std::size_t> inverse_;
};

using GroupPtr = std::shared_ptr<const MatrixGroup>;

inline GroupPtr make_group(std::vector<FpMatrix> generators) {
  return std::make_shared<const MatrixGroup>(MatrixGroup::closure(std::move(generators)));
}

/// Inverse-transpose: the matrix of g acting on the dual basis.
inline FpMatrix dual_action_matrix(const FpMatrix& g) { return g.inverse().transpose(); }

/// Homomorphism from a matrix group into GL_m(F_p). Images use the column
/// convention: g v_j = sum_i image(g)(i, j) v_i.
class Representation {
 public:
  Representation(GroupPtr source, std::vector<FpMatrix> images) : source_(std::move(source)), images_(std::move(images)) {
    if (images_.size() != source_->order()) throw DomainError("one image per group element required");
    const std::size_t n = source_->order();
    for (const auto& m : images_)
      if (!m.is_square() || m.rows() != images_.front().rows()) throw DomainError("representation images must share a square shape");
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        if (!(images_[source_->product(a, b)] == images_[a] * images_[b]))
          throw DomainError("images are not multiplicative at " + std::to_string(a) + "," + std::to_string(b));
  }

  static Representation natural(GroupPtr g) {
    std::vector<FpMatrix> images = g->elements();
    return Representation(std::move(g), std::move(images));
  }

  /// Representation determined by generator images, extended along the BFS tree.
  static Representation from_generator_images(GroupPtr g, const std::vector<FpMatrix>& gen_images) {
    if (gen_images.size() != g->generators().size()) throw DomainError("one image per generator required");
    std::vector<FpMatrix> images(g->order());
    images[0] = FpMatrix::identity(gen_images.front().rows(), gen_images.front().modulus());
    for (std::size_t k = 1; k < g->order(); ++k) {
      auto [parent, via] = *g->bfs_parent(k);
      images[k] = gen_images[via] * images[parent];
    }
    return Representation(std::move(g), std::move(images));
  }

  const MatrixGroup& source() const { return *source_; }
  const GroupPtr& source_ptr() const { return source_; }
  std::size_t dimension() const { return images_.front().rows(); }
  std::uint32_t modulus() const { return images_.front().modulus(); }
  const FpMatrix& image(std::size_t k) const { return images_.at(k); }
  const std::vector<FpMatrix>& images() const { return images_; }
  FpMatrix image_of(const FpMatrix& g) const { return images_[source_->index(g)]; }

  std::vector<std::size_t> kernel() const {
    std::vector<std::size_t> k;
    for (std::size_t i = 0; i < images_.size(); ++i)
      if (images_[i].is_identity()) k.push_back(i);
    return k;
  }

  /// Closure of the generator images.
  GroupPtr image_group() const {
    std::vector<FpMatrix> gens;
    for (auto gi : source_->generator_indices()) gens.push_back(images_[gi]);
    return make_group(std::move(gens));
  }

  Representation restrict_to(GroupPtr sub) const {
    std::vector<FpMatrix> images;
    for (const auto& h : sub->elements()) images.push_back(image_of(h));
    return Representation(std::move(sub), std::move(images));
  }

 private:
  GroupPtr source_;
  std::vector<FpMatrix> images_;
};

/// Conjugation action g(v) = g v g^{-1} on trace-zero matrices in the given basis.
inline Representation conjugation_rep(GroupPtr group, const std::vector<FpMatrix>& basis) {
  const std::size_t d = group->dimension();
  const std::uint32_t p = group->modulus();
  if (basis.size() != d * d - 1) throw DomainError("basis must have n^2-1 elements to span trace-zero matrices");
  DenseMatrix B(d * d, basis.size(), p);
  for (std::size_t j = 0; j < basis.size(); ++j) {
    const FpMatrix& v = basis[j];
    if (v.rows() != d || v.cols() != d || v.modulus() != p) throw DomainError("basis matrix shape mismatch");
    std::uint32_t tr = 0;
    for (std::size_t i = 0; i < d; ++i) tr = (tr + v(i, i)) % p;
    if (tr) throw DomainError("basis matrix " + v.to_string() + " has nonzero trace");
    for (std::size_t k = 0; k < d * d; ++k) B(k, j) = static_cast<std::uint8_t>(v(k / d, k % d));
  }
  if (rank_of(B) != basis.size()) throw DomainError("basis does not span the trace-zero matrices");
  std::vector<FpMatrix> images;
  for (const auto& g : group->elements()) {
    const FpMatrix ginv = g.inverse();
    FpMatrix img(basis.size(), basis.size(), p);
    for (std::size_t j = 0; j < basis.size(); ++j) {
      const FpMatrix w = g * basis[j] * ginv;
      std::vector<std::uint8_t> rhs(d * d);
      for (std::size_t k = 0; k < d * d; ++k) rhs[k] = static_cast<std::uint8_t>(w(k / d, k % d));
      auto sol = solve(B, rhs);
      if (!sol) throw ConsistencyError("conjugate left the trace-zero subspace");
      for (std::size_t i = 0; i < basis.size(); ++i) img.set(i, j, sol->x[i]);
    }
    images.push_back(std::move(img));
  }
  return Representation(std::move(group), std::move(images));
}

/// Linear character with values in F_p^x.
class LinearCharacter {
 public:
  static LinearCharacter trivial(GroupPtr g) {
    std::vector<std::uint32_t> v(g->order(), 1);
    return LinearCharacter(std::move(g), std::move(v));
  }

  /// Extends generator values along the BFS tree and checks multiplicativity exhaustively.
  static LinearCharacter from_generator_values(GroupPtr g, const std::vector<long long>& gen_values) {
    const std::uint32_t p = g->modulus();
    if (gen_values.size() != g->generators().size()) throw DomainError("one value per generator required");
    std::vector<std::uint32_t> v(g->order(), 1);
    for (std::size_t k = 1; k < g->order(); ++k) {
      auto [parent, via] = *g->bfs_parent(k);
      v[k] = mul_mod(reduce_mod(gen_values[via], p), v[parent], p);
    }
    return LinearCharacter(std::move(g), std::move(v));
  }

  const MatrixGroup& source() const { return *group_; }
  const GroupPtr& source_ptr() const { return group_; }
  Fp value(std::size_t k) const { return Fp(values_.at(k), group_->modulus()); }
  Fp value_of(const FpMatrix& g) const { return value(group_->index(g)); }
  bool is_trivial() const {
    return std::all_of(values_.begin(), values_.end(), [](std::uint32_t v) { return v == 1; });
  }

  /// The character of rep's image group through which this one factors.
  LinearCharacter descend(const Representation& rep, GroupPtr image) const {
    if (rep.source_ptr() != group_ && !(rep.source().elements() == group_->elements()))
      throw DomainError("representation and character have different source groups");
    std::vector<std::uint32_t> v(image->order(), 0);
    for (std::size_t k = 0; k < group_->order(); ++k) {
      const std::size_t t = image->index(rep.image(k));
      if (v[t] && v[t] != values_[k]) throw DomainError("character is not trivial on the kernel of the representation");
      v[t] = values_[k];
    }
    return LinearCharacter(std::move(image), std::move(v));
  }

 private:
  LinearCharacter(GroupPtr g, std::vector<std::uint32_t> values) : group_(std::move(g)), values_(std::move(values)) {
    const std::size_t n = group_->order();
    const std::uint32_t p = group_->modulus();
    if (values_[0] != 1) throw DomainError("character value at identity must be 1");
    for (std::size_t a = 0; a < n; ++a) {
      if (values_[a] == 0) throw DomainError("character values must be nonzero");
      for (std::size_t b = 0; b < n; ++b)
        if (values_[group_->product(a, b)] != mul_mod(values_[a], values_[b], p))
          throw DomainError("generator values do not define a homomorphism");
    }
  }

  GroupPtr group_;
  std::vector<std::uint32_t> values_;
};

/// Left coset representatives of H in G, as indices into G.
struct CosetTransversal {
  std::vector<std::size_t> representatives;
};

inline bool is_subgroup(const MatrixGroup& g, const MatrixGroup& h) {
  return h.dimension() == g.dimension() && h.modulus() == g.modulus() && g.contains_all(h);
}

/// First element in BFS order of each left coset tH.
inline CosetTransversal transversal(const MatrixGroup& g, const MatrixGroup& h) {
  if (!is_subgroup(g, h)) throw DomainError("H is not a subgroup of G");
  std::vector<bool> covered(g.order(), false);
  CosetTransversal t;
  for (std::size_t k = 0; k < g.order(); ++k) {
    if (covered[k]) continue;
    t.representatives.push_back(k);
    for (const auto& hm : h.elements()) covered[g.product(k, g.index(hm))] = true;
  }
  return t;
}

/// The cosets tH for t in reps are pairwise disjoint and cover G.
inline bool is_transversal(const MatrixGroup& g, const MatrixGroup& h, const std::vector<std::size_t>& reps) {
  if (!is_subgroup(g, h) || reps.size() * h.order() != g.order()) return false;
  std::vector<bool> covered(g.order(), false);
  for (auto k : reps)
    for (const auto& hm : h.elements()) {
      const std::size_t e = g.product(k, g.index(hm));
      if (covered[e]) return false;
      covered[e] = true;
    }
  return true;
}

// ---------------------------------------------------------------------------
// Action on the graded-commutative algebra

/// Algebra automorphism induced by rho(g): x_k and y_k both map to
/// sum_j D(j, k) x_j (resp. y_j) with D the dual action matrix.
class Substitution {
 public:
  explicit Substitution(const FpMatrix& rho_g) : dual_(dual_action_matrix(rho_g)), n_(static_cast<unsigned>(rho_g.rows())) {
    if (n_ > kMaxRank) throw DomainError("representation dimension exceeds rank limit");
    const std::uint32_t p = dual_.modulus();
    monomial_ = true;
    for (unsigned k = 0; k < n_; ++k) {
      unsigned nonzero = 0;
      for (unsigned j = 0; j < n_; ++j)
        if (dual_(j, k)) {
          ++nonzero;
          perm_[k] = j;
          scale_[k] = dual_(j, k);
        }
      if (nonzero != 1) monomial_ = false;
    }
    for (unsigned k = 0; k < n_; ++k) {
      GCElement lx(n_, p), ly(n_, p);
      for (unsigned j = 0; j < n_; ++j)
        if (dual_(j, k)) {
          lx += GCElement::x(j + 1, n_, p).scaled(static_cast<long long>(dual_(j, k)));
          ly += GCElement::y(j + 1, n_, p).scaled(static_cast<long long>(dual_(j, k)));
        }
      xs_.push_back(std::move(lx));
      ys_.push_back(std::move(ly));
    }
  }

  const FpMatrix& dual() const { return dual_; }
  bool is_monomial() const { return monomial_; }

  GCElement apply(const GCElement& f) const {
    if (f.rank() != n_) throw DomainError("element rank does not match representation dimension");
    GCElement out(n_, f.modulus());
    if (monomial_) {
      for (const auto& [m, c] : f.terms()) {
        auto [img, coeff] = apply_monomial_fast(m, f.modulus());
        out.add_residue(img, mul_mod(coeff, c, f.modulus()));
      }
      return out;
    }
    std::vector<std::vector<GCElement>> powers(n_);
    for (const auto& [m, c] : f.terms()) {
      GCElement t = GCElement::constant(c, n_, f.modulus());
      for (unsigned k = 0; k < n_; ++k) {
        const unsigned e = m.exponent(k);
        if (!e) continue;
        auto& pw = powers[k];
        if (pw.empty()) pw.push_back(GCElement::constant(1, n_, f.modulus()));
        while (pw.size() <= e) pw.push_back(pw.back() * xs_[k]);
        t = t * pw[e];
      }
      for (unsigned k = 0; k < n_; ++k)
        if (m.has_y(k)) t = t * ys_[k];
      out += t;
    }
    return out;
  }

 private:
  std::pair<Monomial, std::uint32_t> apply_monomial_fast(const Monomial& m, std::uint32_t p) const {
    std::array<unsigned, kMaxRank> e{};
    std::uint32_t coeff = 1;
    for (unsigned k = 0; k < n_; ++k) {
      const unsigned ek = m.exponent(k);
      if (!ek) continue;
      e[perm_[k]] = ek;
      coeff = mul_mod(coeff, pow_mod(scale_[k], ek, p), p);
    }
    std::vector<unsigned> word;
    for (unsigned k = 0; k < n_; ++k)
      if (m.has_y(k)) {
        word.push_back(perm_[k] + 1);
        coeff = mul_mod(coeff, scale_[k], p);
      }
    const SignedMask sm = sign_normalize(word);
    if (sm.sign < 0) coeff = (p - coeff) % p;
    return {Monomial(std::span<const unsigned>(e.data(), n_), sm.mask), coeff};
  }

  FpMatrix dual_;
  unsigned n_;
  bool monomial_ = false;
  std::array<unsigned, kMaxRank> perm_{};
  std::array<std::uint32_t, kMaxRank> scale_{};
  std::vector<GCElement> xs_;
  std::vector<GCElement> ys_;
};

inline GCElement act(const FpMatrix& rho_g, const GCElement& f) { return Substitution(rho_g).apply(f); }

inline GCElement act(const Representation& rep, std::size_t element, const GCElement& f) {
  return act(rep.image(element), f);
}

// ---------------------------------------------------------------------------
// Induced-module isomorphism check

struct ModuleIsoResult {
  bool ok = false;
  std::optional<std::size_t> witness_generator;  ///< index into G.generators()
  std::optional<std::size_t> witness_basis;      ///< 0-based dual basis index
  std::string detail;
};

/// Matrix of g on k(G/H) (x) W in the basis t_c (x) w: g t_c = t_c' h contributes chi(h) at (c', c).
inline FpMatrix induced_matrix(const MatrixGroup& g, const MatrixGroup& h, const LinearCharacter& chi,
                               const std::vector<std::size_t>& reps, std::size_t element) {
  const std::uint32_t p = g.modulus();
  FpMatrix m(reps.size(), reps.size(), p);
  for (std::size_t c = 0; c < reps.size(); ++c) {
    const std::size_t gt = g.product(element, reps[c]);
    bool found = false;
    for (std::size_t c2 = 0; c2 < reps.size() && !found; ++c2) {
      const FpMatrix& hm = g.element(g.product(g.inverse(reps[c2]), gt));
      if (h.contains(hm)) {
        m.set(c2, c, chi.value_of(hm).residue());
        found = true;
      }
    }
    if (!found) throw DomainError("representatives do not cover every coset");
  }
  return m;
}

/// Checks that phi (column s = coordinates of phi(x_s) in the basis t_c (x) w)
/// is bijective and intertwines the dual action of rep with the induced action.
inline ModuleIsoResult verify_module_iso(const Representation& rep, const MatrixGroup& h, const LinearCharacter& chi,
                                         const std::vector<std::size_t>& reps, const FpMatrix& phi) {
  const MatrixGroup& g = rep.source();
  ModuleIsoResult r;
  if (!is_transversal(g, h, reps)) {
    r.detail = "representatives are not a left transversal";
    return r;
  }
  if (phi.rows() != reps.size() || phi.cols() != rep.dimension() || !phi.try_inverse()) {
    r.detail = "phi is not bijective";
    return r;
  }
  for (std::size_t gi = 0; gi < g.generators().size(); ++gi) {
    const std::size_t e = g.generator_indices()[gi];
    const FpMatrix lhs = phi * dual_action_matrix(rep.image(e));
    const FpMatrix rhs = induced_matrix(g, h, chi, reps, e) * phi;
    if (lhs == rhs) continue;
    r.witness_generator = gi;
    for (std::size_t s = 0; s < phi.cols(); ++s)
      for (std::size_t c = 0; c < phi.rows(); ++c)
        if (lhs(c, s) != rhs(c, s) && !r.witness_basis) r.witness_basis = s;
    r.detail = "generator " + std::to_string(gi) + " does not commute with phi";
    return r;
  }
  r.ok = true;
  return r;
}

}  // namespace diffinv

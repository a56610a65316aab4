#pragma once

// Fixed spaces and relative invariants, one bidegree at a time, as exact
// nullspaces over F_p. Averaging is only offered for non-modular images.

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <vector>

#include "diffinv/error.hpp"
#include "diffinv/gcalg.hpp"
#include "diffinv/grouprep.hpp"
#include "diffinv/linalg.hpp"

namespace diffinv {

enum class SystemMode {
  generators,    ///< stack one equation block per group generator
  all_elements,  ///< stack one block per group element
};

struct FixedSpaceBasis {
  Bidegree bidegree;
  /// Reduced echelon basis over the descending monomial order; leading coefficient 1.
  std::vector<GCElement> basis;

  std::size_t dimension() const { return basis.size(); }
};

/// A group acting through a representation, optionally twisted by a linear
/// character: the family of all f with g f = chi(g) f. Fixed spaces are
/// memoised per bidegree; the memo is guarded so a context may be shared
/// between threads.
class InvariantContext {
 public:
  explicit InvariantContext(Representation rep, std::optional<LinearCharacter> chi = std::nullopt)
      : rep_(std::move(rep)), chi_(std::move(chi)) {
    if (chi_ && chi_->source().elements() != rep_.source().elements())
      throw DomainError("character and representation have different groups");
    if (rep_.dimension() > kMaxRank) throw DomainError("representation dimension exceeds rank limit");
  }

  const Representation& representation() const { return rep_; }
  const std::optional<LinearCharacter>& character() const { return chi_; }
  unsigned rank() const { return static_cast<unsigned>(rep_.dimension()); }
  std::uint32_t modulus() const { return rep_.modulus(); }

  Fp chi(std::size_t element) const { return chi_ ? chi_->value(element) : Fp(1, modulus()); }

  const BidegreeBasis& coordinates(Bidegree bd) const {
    std::lock_guard lock(mu_);
    auto it = coords_.find(bd);
    if (it == coords_.end()) it = coords_.emplace(bd, std::make_shared<const BidegreeBasis>(bd, rank(), modulus())).first;
    return *it->second;
  }

  const FixedSpaceBasis& fixed_space(Bidegree bd) const {
    {
      std::lock_guard lock(mu_);
      auto it = fixed_.find(bd);
      if (it != fixed_.end()) return *it->second;
    }
    auto computed = std::make_shared<const FixedSpaceBasis>(compute_fixed_space(bd, SystemMode::generators));
    std::lock_guard lock(mu_);
    return *fixed_.emplace(bd, std::move(computed)).first->second;
  }

  std::size_t dimension(Bidegree bd) const { return fixed_space(bd).dimension(); }

  FixedSpaceBasis compute_fixed_space(Bidegree bd, SystemMode mode) const {
    const BidegreeBasis& bb = coordinates(bd);
    FixedSpaceBasis out{bd, {}};
    const std::size_t n = bb.size();
    if (n == 0) return out;
    const std::uint32_t p = modulus();

    std::vector<std::size_t> system;
    if (mode == SystemMode::generators) {
      system = rep_.source().generator_indices();
    } else {
      for (std::size_t k = 0; k < rep_.source().order(); ++k) system.push_back(k);
    }

    std::optional<DenseMatrix> kernel;  // rows span the current solution space; nullopt = everything
    for (const std::size_t e : system) {
      const Substitution s(rep_.image(e));
      const Fp c = chi(e);
      const std::size_t k = kernel ? kernel->rows() : n;
      DenseMatrix a(n, k, p);
      for (std::size_t j = 0; j < k; ++j) {
        const GCElement f = kernel ? bb.element(kernel->row(j)) : GCElement::monomial(bb.monomials()[j], p);
        const GCElement img = s.apply(f) - f.scaled(c);
        for (const auto& [m, coeff] : img.terms()) a(*bb.index_of(m), j) = static_cast<std::uint8_t>(coeff);
      }
      DenseMatrix null = nullspace(std::move(a));
      kernel = kernel ? null.multiply(*kernel) : std::move(null);
      if (kernel->rows() == 0) break;
    }
    if (!kernel) {
      kernel = DenseMatrix(n, n, p);
      for (std::size_t i = 0; i < n; ++i) (*kernel)(i, i) = 1;
    }
    const std::size_t r = row_reduce(*kernel).size();
    for (std::size_t i = 0; i < r; ++i) out.basis.push_back(bb.element(kernel->row(i)));
    return out;
  }

  /// g f = chi(g) f for every generator (equivalently every element).
  bool is_fixed(const GCElement& f) const {
    for (auto e : rep_.source().generator_indices())
      if (!(act(rep_.image(e), f) == f.scaled(chi(e)))) return false;
    return true;
  }

  bool is_fixed_by_all_elements(const GCElement& f) const {
    for (std::size_t e = 0; e < rep_.source().order(); ++e)
      if (!(act(rep_.image(e), f) == f.scaled(chi(e)))) return false;
    return true;
  }

 private:
  Representation rep_;
  std::optional<LinearCharacter> chi_;
  mutable std::mutex mu_;
  mutable std::map<Bidegree, std::shared_ptr<const FixedSpaceBasis>> fixed_;
  mutable std::map<Bidegree, std::shared_ptr<const BidegreeBasis>> coords_;
};

inline FixedSpaceBasis fixed_space(Bidegree bd, const Representation& rep, const std::optional<LinearCharacter>& chi,
                                   SystemMode mode = SystemMode::generators) {
  return InvariantContext(rep, chi).compute_fixed_space(bd, mode);
}

/// (1/|image|) sum over the image group of chi(s)^{-1} s(f). Refuses modular images.
inline GCElement reynolds(const GCElement& f, const Representation& rep, const std::optional<LinearCharacter>& chi) {
  const GroupPtr image = rep.image_group();
  const std::uint32_t p = rep.modulus();
  if (image->order() % p == 0)
    throw ModularError("group image of order " + std::to_string(image->order()) + " cannot be averaged in characteristic " +
                       std::to_string(p));
  const LinearCharacter chi_bar = chi ? chi->descend(rep, image) : LinearCharacter::trivial(image);
  GCElement sum(f.rank(), p);
  for (std::size_t k = 0; k < image->order(); ++k) sum += act(image->element(k), f).scaled(chi_bar.value(k).inverse());
  return sum.scaled(Fp(static_cast<long long>(image->order()), p).inverse());
}

/// dims[ydeg][xdeg] for xdeg in [0, max_xdeg].
inline std::map<int, std::vector<std::size_t>> dimension_table(const InvariantContext& ctx, const std::vector<int>& ydegs,
                                                                int max_xdeg) {
  std::map<int, std::vector<std::size_t>> table;
  for (int y : ydegs) {
    auto& row = table[y];
    for (int x = 0; x <= max_xdeg; ++x) row.push_back(ctx.dimension({x, y}));
  }
  return table;
}

}  // namespace diffinv

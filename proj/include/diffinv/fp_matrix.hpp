#pragma once

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "diffinv/prime_field.hpp"

namespace diffinv {

/// Small dense matrix over F_p with value semantics. Used for group elements
/// and representation images, where entries identify the element.
class FpMatrix {
 public:
  FpMatrix() = default;
  FpMatrix(std::size_t rows, std::size_t cols, std::uint32_t p)
      : rows_(rows), cols_(cols), p_(p), a_(rows * cols, 0) {
    if (!is_prime(p)) throw DomainError("modulus " + std::to_string(p) + " is not prime");
  }

  /// Row-major integer entries, reduced mod p.
  static FpMatrix from_rows(std::size_t rows, std::size_t cols, const std::vector<long long>& entries,
                            std::uint32_t p) {
    if (entries.size() != rows * cols)
      throw DomainError("expected " + std::to_string(rows * cols) + " matrix entries, got " +
                        std::to_string(entries.size()));
    FpMatrix m(rows, cols, p);
    for (std::size_t k = 0; k < entries.size(); ++k) m.a_[k] = reduce_mod(entries[k], p);
    return m;
  }

  /// Square matrix from row-major entries; size inferred.
  static FpMatrix square(const std::vector<long long>& entries, std::uint32_t p) {
    std::size_t n = 0;
    while (n * n < entries.size()) ++n;
    if (n * n != entries.size()) throw DomainError("entry count is not a perfect square");
    return from_rows(n, n, entries, p);
  }

  static FpMatrix identity(std::size_t n, std::uint32_t p) {
    FpMatrix m(n, n, p);
    for (std::size_t i = 0; i < n; ++i) m.a_[i * n + i] = 1 % p;
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::uint32_t modulus() const { return p_; }
  bool is_square() const { return rows_ == cols_; }

  std::uint32_t operator()(std::size_t r, std::size_t c) const { return a_[r * cols_ + c]; }
  void set(std::size_t r, std::size_t c, long long v) { a_[r * cols_ + c] = reduce_mod(v, p_); }
  Fp at(std::size_t r, std::size_t c) const { return Fp(a_[r * cols_ + c], p_); }

  FpMatrix operator*(const FpMatrix& o) const {
    if (cols_ != o.rows_ || p_ != o.p_) throw DomainError("matrix shape or modulus mismatch in product");
    FpMatrix r(rows_, o.cols_, p_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t k = 0; k < cols_; ++k) {
        const std::uint32_t aik = a_[i * cols_ + k];
        if (!aik) continue;
        for (std::size_t j = 0; j < o.cols_; ++j)
          r.a_[i * o.cols_ + j] = (r.a_[i * o.cols_ + j] + mul_mod(aik, o.a_[k * o.cols_ + j], p_)) % p_;
      }
    return r;
  }

  FpMatrix operator-(const FpMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_ || p_ != o.p_) throw DomainError("matrix shape mismatch");
    FpMatrix r(*this);
    for (std::size_t k = 0; k < a_.size(); ++k) r.a_[k] = (a_[k] + p_ - o.a_[k]) % p_;
    return r;
  }

  FpMatrix scaled(long long s) const {
    FpMatrix r(*this);
    const std::uint32_t sr = reduce_mod(s, p_);
    for (auto& v : r.a_) v = mul_mod(v, sr, p_);
    return r;
  }

  FpMatrix transpose() const {
    FpMatrix r(cols_, rows_, p_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) r.a_[j * rows_ + i] = a_[i * cols_ + j];
    return r;
  }

  /// Gauss-Jordan inverse; nullopt when singular.
  std::optional<FpMatrix> try_inverse() const {
    if (!is_square()) throw DomainError("inverse of a non-square matrix");
    const std::size_t n = rows_;
    FpMatrix w(*this);
    FpMatrix inv = identity(n, p_);
    for (std::size_t c = 0; c < n; ++c) {
      std::size_t piv = c;
      while (piv < n && w(piv, c) == 0) ++piv;
      if (piv == n) return std::nullopt;
      w.swap_rows(piv, c);
      inv.swap_rows(piv, c);
      const std::uint32_t s = inv_mod(w(c, c), p_);
      w.scale_row(c, s);
      inv.scale_row(c, s);
      for (std::size_t r = 0; r < n; ++r) {
        if (r == c || w(r, c) == 0) continue;
        const std::uint32_t f = p_ - w(r, c);
        w.add_row_multiple(r, c, f);
        inv.add_row_multiple(r, c, f);
      }
    }
    return inv;
  }

  FpMatrix inverse() const {
    auto r = try_inverse();
    if (!r) throw DomainError("matrix is singular");
    return *r;
  }

  bool is_identity() const { return is_square() && *this == identity(rows_, p_); }

  std::vector<long long> entries() const { return {a_.begin(), a_.end()}; }

  std::string to_string() const {
    std::ostringstream os;
    os << '[';
    for (std::size_t i = 0; i < rows_; ++i) {
      os << (i ? ",[" : "[");
      for (std::size_t j = 0; j < cols_; ++j) os << (j ? "," : "") << Fp(a_[i * cols_ + j], p_).centered();
      os << ']';
    }
    return os.str() + ']';
  }

  friend bool operator==(const FpMatrix&, const FpMatrix&) = default;
  friend auto operator<=>(const FpMatrix&, const FpMatrix&) = default;

 private:
  void swap_rows(std::size_t i, std::size_t j) {
    if (i == j) return;
    for (std::size_t c = 0; c < cols_; ++c) std::swap(a_[i * cols_ + c], a_[j * cols_ + c]);
  }
  void scale_row(std::size_t i, std::uint32_t s) {
    for (std::size_t c = 0; c < cols_; ++c) a_[i * cols_ + c] = mul_mod(a_[i * cols_ + c], s, p_);
  }
  void add_row_multiple(std::size_t dst, std::size_t src, std::uint32_t f) {
    for (std::size_t c = 0; c < cols_; ++c)
      a_[dst * cols_ + c] = (a_[dst * cols_ + c] + mul_mod(f, a_[src * cols_ + c], p_)) % p_;
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::uint32_t p_ = 2;
  std::vector<std::uint32_t> a_;
};

/// Multiplicative order of an invertible square matrix.
inline std::uint64_t matrix_order(const FpMatrix& m) {
  if (!m.try_inverse()) throw DomainError("order of a singular matrix");
  FpMatrix acc = m;
  std::uint64_t k = 1;
  while (!acc.is_identity()) {
    acc = acc * m;
    if (++k > (1ull << 32)) throw ConsistencyError("matrix order search exceeded bound");
  }
  return k;
}

}  // namespace diffinv

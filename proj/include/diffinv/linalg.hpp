#pragma once

// Dense row reduction over F_p with byte-sized entries. Inner loops are
// specialised on small compile-time moduli so they vectorise.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "diffinv/error.hpp"
#include "diffinv/prime_field.hpp"

namespace diffinv {

class DenseMatrix {
 public:
  DenseMatrix(std::size_t rows, std::size_t cols, std::uint32_t p) : rows_(rows), cols_(cols), p_(p), a_(rows * cols, 0) {
    if (p >= 256) throw DomainError("dense byte matrices require p < 256");
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::uint32_t modulus() const { return p_; }

  std::uint8_t operator()(std::size_t r, std::size_t c) const { return a_[r * cols_ + c]; }
  std::uint8_t& operator()(std::size_t r, std::size_t c) { return a_[r * cols_ + c]; }
  std::span<std::uint8_t> row(std::size_t r) { return {a_.data() + r * cols_, cols_}; }
  std::span<const std::uint8_t> row(std::size_t r) const { return {a_.data() + r * cols_, cols_}; }

  void append_row(std::span<const std::uint8_t> v) {
    if (v.size() != cols_) throw DomainError("row length mismatch");
    a_.insert(a_.end(), v.begin(), v.end());
    ++rows_;
  }
  void truncate_rows(std::size_t n) {
    rows_ = std::min(rows_, n);
    a_.resize(rows_ * cols_);
  }
  void swap_rows(std::size_t i, std::size_t j) {
    if (i == j) return;
    std::swap_ranges(a_.begin() + i * cols_, a_.begin() + (i + 1) * cols_, a_.begin() + j * cols_);
  }

  /// this * o.
  DenseMatrix multiply(const DenseMatrix& o) const;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::uint32_t p_;
  std::vector<std::uint8_t> a_;
};

namespace detail {

template <std::uint32_t P>
void axpy_fixed(std::uint8_t* __restrict dst, const std::uint8_t* __restrict src, std::uint32_t f, std::size_t n) {
  for (std::size_t j = 0; j < n; ++j) dst[j] = static_cast<std::uint8_t>((dst[j] + f * src[j]) % P);
}

inline void axpy_any(std::uint8_t* dst, const std::uint8_t* src, std::uint32_t f, std::size_t n, std::uint32_t p) {
  for (std::size_t j = 0; j < n; ++j) dst[j] = static_cast<std::uint8_t>((dst[j] + f * src[j]) % p);
}

/// dst += f * src over F_p.
inline void axpy(std::uint8_t* dst, const std::uint8_t* src, std::uint32_t f, std::size_t n, std::uint32_t p) {
  switch (p) {
    case 2: return axpy_fixed<2>(dst, src, f, n);
    case 3: return axpy_fixed<3>(dst, src, f, n);
    case 5: return axpy_fixed<5>(dst, src, f, n);
    case 7: return axpy_fixed<7>(dst, src, f, n);
    default: return axpy_any(dst, src, f, n, p);
  }
}

inline void scale(std::uint8_t* v, std::uint32_t s, std::size_t n, std::uint32_t p) {
  for (std::size_t j = 0; j < n; ++j) v[j] = static_cast<std::uint8_t>(v[j] * s % p);
}

}  // namespace detail

inline DenseMatrix DenseMatrix::multiply(const DenseMatrix& o) const {
  if (cols_ != o.rows_ || p_ != o.p_) throw DomainError("dense product shape mismatch");
  DenseMatrix r(rows_, o.cols_, p_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = 0; k < cols_; ++k) {
      const std::uint32_t f = a_[i * cols_ + k];
      if (f) detail::axpy(r.a_.data() + i * o.cols_, o.a_.data() + k * o.cols_, f, o.cols_, p_);
    }
  return r;
}

/// In-place reduced row echelon form. The first rank rows hold the echelon
/// basis with leading entry 1; remaining rows are zero. Returns pivot columns.
inline std::vector<std::size_t> row_reduce(DenseMatrix& m) {
  const std::uint32_t p = m.modulus();
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    std::size_t piv = r;
    while (piv < m.rows() && m(piv, c) == 0) ++piv;
    if (piv == m.rows()) continue;
    m.swap_rows(piv, r);
    const std::size_t tail = m.cols() - c;
    std::uint8_t* prow = m.row(r).data() + c;
    if (prow[0] != 1) detail::scale(prow, inv_mod(prow[0], p), tail, p);
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == r) continue;
      std::uint8_t* dst = m.row(i).data() + c;
      if (dst[0]) detail::axpy(dst, prow, p - dst[0], tail, p);
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

inline std::size_t rank_of(DenseMatrix m) { return row_reduce(m).size(); }

/// Basis of {v : m v = 0}, one vector per row, in reduced echelon form.
inline DenseMatrix nullspace(DenseMatrix m) {
  const std::uint32_t p = m.modulus();
  const auto pivots = row_reduce(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto c : pivots) is_pivot[c] = true;
  DenseMatrix basis(0, m.cols(), p);
  std::vector<std::uint8_t> v(m.cols());
  for (std::size_t f = 0; f < m.cols(); ++f) {
    if (is_pivot[f]) continue;
    std::fill(v.begin(), v.end(), 0);
    v[f] = 1;
    for (std::size_t r = 0; r < pivots.size(); ++r)
      v[pivots[r]] = static_cast<std::uint8_t>((p - m(r, f)) % p);
    basis.append_row(v);
  }
  row_reduce(basis);
  return basis;
}

/// Solve m x = b. Returns nullopt when inconsistent; otherwise one solution
/// (free variables zero) and whether it is unique.
struct LinearSolution {
  std::vector<std::uint8_t> x;
  bool unique = false;
};

inline std::optional<LinearSolution> solve(const DenseMatrix& m, std::span<const std::uint8_t> b) {
  if (b.size() != m.rows()) throw DomainError("right-hand side length mismatch");
  const std::uint32_t p = m.modulus();
  DenseMatrix aug(m.rows(), m.cols() + 1, p);
  for (std::size_t r = 0; r < m.rows(); ++r) {
    auto dst = aug.row(r);
    auto src = m.row(r);
    std::copy(src.begin(), src.end(), dst.begin());
    dst[m.cols()] = b[r];
  }
  const auto pivots = row_reduce(aug);
  if (!pivots.empty() && pivots.back() == m.cols()) return std::nullopt;
  LinearSolution s;
  s.x.assign(m.cols(), 0);
  for (std::size_t r = 0; r < pivots.size(); ++r) s.x[pivots[r]] = aug(r, m.cols());
  s.unique = pivots.size() == m.cols();
  return s;
}

/// Reduce v against a matrix already in reduced echelon form with the given pivots.
inline void reduce_against(std::span<std::uint8_t> v, const DenseMatrix& echelon,
                           const std::vector<std::size_t>& pivots) {
  const std::uint32_t p = echelon.modulus();
  for (std::size_t r = 0; r < pivots.size(); ++r) {
    const std::size_t c = pivots[r];
    if (v[c]) detail::axpy(v.data() + c, echelon.row(r).data() + c, p - v[c], v.size() - c, p);
  }
}

}  // namespace diffinv

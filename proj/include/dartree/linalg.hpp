#pragma once

/**
 * @file linalg.hpp
 * @brief Exact linear algebra over Z/Q and a few dense double helpers.
 *
 * Dimension statements in this library are integers, so every rank and null
 * space decision is made exactly. Integer systems are reduced fraction-free
 * (rows are kept primitive by dividing out their content); rational spans are
 * compared through their reduced row echelon forms, which are canonical.
 */

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <vector>

#include "dartree/rational.hpp"

namespace dartree {

using IntMatrix = std::vector<std::vector<Integer>>;
using RatVector = std::vector<Rational>;
using RatMatrix = std::vector<RatVector>;

/// Sparse exact vector over an index space, sorted by index, no zeros stored.
using SparseVec = std::vector<std::pair<std::size_t, Rational>>;

namespace detail {

inline void make_primitive(std::vector<Integer>& row) {
  Integer g = 0;
  for (const auto& x : row) {
    if (x != 0) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
  }
  if (g > 1)
    for (auto& x : row) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), g.get_mpz_t());
}

}  // namespace detail

/// Fraction-free Gauss-Jordan reduction of an integer matrix. On return the
/// first `pivots.size()` rows are in reduced echelon form with integer
/// entries (each pivot row primitive), remaining rows are zero.
inline std::vector<std::size_t> reduce_fraction_free(IntMatrix& a, std::size_t cols) {
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < cols && row < a.size(); ++col) {
    std::size_t sel = row;
    while (sel < a.size() && a[sel][col] == 0) ++sel;
    if (sel == a.size()) continue;
    std::swap(a[row], a[sel]);
    if (a[row][col] < 0)
      for (auto& x : a[row]) x = -x;
    detail::make_primitive(a[row]);
    const Integer p = a[row][col];
    for (std::size_t r = 0; r < a.size(); ++r) {
      if (r == row || a[r][col] == 0) continue;
      const Integer f = a[r][col];
      for (std::size_t c = 0; c < cols; ++c) a[r][c] = p * a[r][c] - f * a[row][c];
      detail::make_primitive(a[r]);
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

/// Integer null-space basis of an integer matrix with `cols` columns; one
/// vector per free column, with that column's entry positive.
inline std::vector<std::vector<Integer>> nullspace_integer(IntMatrix a, std::size_t cols) {
  const auto pivots = reduce_fraction_free(a, cols);
  std::vector<bool> is_pivot(cols, false);
  for (auto p : pivots) is_pivot[p] = true;
  Integer lcm = 1;
  for (std::size_t r = 0; r < pivots.size(); ++r)
    mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), a[r][pivots[r]].get_mpz_t());
  std::vector<std::vector<Integer>> basis;
  for (std::size_t f = 0; f < cols; ++f) {
    if (is_pivot[f]) continue;
    std::vector<Integer> v(cols, 0);
    v[f] = lcm;
    for (std::size_t r = 0; r < pivots.size(); ++r) {
      const Integer& piv = a[r][pivots[r]];
      v[pivots[r]] = -(a[r][f] * (lcm / piv));
    }
    detail::make_primitive(v);
    basis.push_back(std::move(v));
  }
  return basis;
}

/// In-place reduced row echelon form over Q; returns pivot columns and drops
/// zero rows.
inline std::vector<std::size_t> rref(RatMatrix& a) {
  std::vector<std::size_t> pivots;
  if (a.empty()) return pivots;
  const std::size_t cols = a.front().size();
  std::size_t row = 0;
  for (std::size_t col = 0; col < cols && row < a.size(); ++col) {
    std::size_t sel = row;
    while (sel < a.size() && a[sel][col] == 0) ++sel;
    if (sel == a.size()) continue;
    std::swap(a[row], a[sel]);
    const Rational inv = 1 / a[row][col];
    for (auto& x : a[row]) x *= inv;
    for (std::size_t r = 0; r < a.size(); ++r) {
      if (r == row || a[r][col] == 0) continue;
      const Rational f = a[r][col];
      for (std::size_t c = col; c < cols; ++c) a[r][c] -= f * a[row][c];
    }
    pivots.push_back(col);
    ++row;
  }
  a.resize(row);
  return pivots;
}

inline std::size_t rank(RatMatrix a) { return rref(a).size(); }

inline RatMatrix to_rational(const std::vector<std::vector<Integer>>& m) {
  RatMatrix out;
  out.reserve(m.size());
  for (const auto& row : m) {
    RatVector r;
    r.reserve(row.size());
    for (const auto& x : row) r.emplace_back(x);
    out.push_back(std::move(r));
  }
  return out;
}

/// Canonical form of the row span (its RREF).
inline RatMatrix span_canonical(RatMatrix rows) {
  rref(rows);
  return rows;
}

inline bool same_span(const RatMatrix& a, const RatMatrix& b) { return span_canonical(a) == span_canonical(b); }

/// Is every row of `sub` inside the row span of `space`?
inline bool span_contains(const RatMatrix& space, const RatMatrix& sub) {
  const std::size_t r = rank(space);
  RatMatrix both = space;
  both.insert(both.end(), sub.begin(), sub.end());
  return rank(both) == r;
}

/// Dense matrix over the union of supports of a set of sparse vectors.
inline RatMatrix densify(const std::vector<SparseVec>& vs, const std::vector<std::size_t>& columns) {
  std::map<std::size_t, std::size_t> pos;
  for (std::size_t i = 0; i < columns.size(); ++i) pos[columns[i]] = i;
  RatMatrix out;
  for (const auto& v : vs) {
    RatVector row(columns.size(), Rational(0));
    for (const auto& [idx, val] : v) row[pos.at(idx)] = val;
    out.push_back(std::move(row));
  }
  return out;
}

inline std::vector<std::size_t> support_union(const std::vector<SparseVec>& vs) {
  std::vector<std::size_t> cols;
  for (const auto& v : vs)
    for (const auto& [idx, val] : v) cols.push_back(idx);
  std::sort(cols.begin(), cols.end());
  cols.erase(std::unique(cols.begin(), cols.end()), cols.end());
  return cols;
}

inline std::size_t sparse_rank(const std::vector<SparseVec>& vs) { return rank(densify(vs, support_union(vs))); }

inline bool same_sparse_span(const std::vector<SparseVec>& a, const std::vector<SparseVec>& b) {
  std::vector<SparseVec> all = a;
  all.insert(all.end(), b.begin(), b.end());
  const auto cols = support_union(all);
  return same_span(densify(a, cols), densify(b, cols));
}

// ---- dense double helpers -------------------------------------------------

using DVector = std::vector<double>;

inline double dot(const DVector& a, const DVector& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm(const DVector& a) { return std::sqrt(dot(a, a)); }

/// Modified Gram-Schmidt; vectors whose residual norm drops below `tol` are
/// discarded. Returns the orthonormal family.
inline std::vector<DVector> gram_schmidt(const std::vector<DVector>& in, double tol = 1e-10) {
  std::vector<DVector> out;
  for (auto v : in) {
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& q : out) {
        const double c = dot(q, v);
        for (std::size_t i = 0; i < v.size(); ++i) v[i] -= c * q[i];
      }
    const double n = norm(v);
    if (n < tol) continue;
    for (auto& x : v) x /= n;
    out.push_back(std::move(v));
  }
  return out;
}

}  // namespace dartree

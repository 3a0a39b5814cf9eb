#pragma once

#include <cstddef>
#include <functional>
#include <numeric>
#include <vector>

#include "dartree/rational.hpp"

namespace dartree {

using MultiIndex = std::vector<int>;

inline int total(const MultiIndex& a) { return std::accumulate(a.begin(), a.end(), 0); }

/// alpha! = prod_j alpha_j!
inline Integer multi_factorial(const MultiIndex& a) {
  Integer r = 1;
  for (int x : a) r *= factorial(static_cast<unsigned long>(x));
  return r;
}

inline MultiIndex add(const MultiIndex& a, const MultiIndex& b) {
  MultiIndex r(a.size());
  for (std::size_t j = 0; j < a.size(); ++j) r[j] = a[j] + b[j];
  return r;
}

inline MultiIndex unit(std::size_t d, std::size_t l, int n = 1) {
  MultiIndex r(d, 0);
  r[l] = n;
  return r;
}

/// Calls fn for every alpha in N^d with |alpha| == n, in lexicographically
/// decreasing order of the first coordinate (n,0,...), ..., (0,...,n).
inline void for_each_multiindex(std::size_t d, int n, const std::function<void(const MultiIndex&)>& fn) {
  MultiIndex a(d, 0);
  std::function<void(std::size_t, int)> rec = [&](std::size_t j, int left) {
    if (j + 1 == d) {
      a[j] = left;
      fn(a);
      return;
    }
    for (int x = left; x >= 0; --x) {
      a[j] = x;
      rec(j + 1, left - x);
    }
  };
  if (d == 0) return;
  rec(0, n);
}

inline std::vector<MultiIndex> multiindices(std::size_t d, int n) {
  std::vector<MultiIndex> out;
  for_each_multiindex(d, n, [&](const MultiIndex& a) { out.push_back(a); });
  return out;
}

/// All alpha with |alpha| <= n, grouped by |alpha| ascending.
inline std::vector<MultiIndex> multiindices_upto(std::size_t d, int n) {
  std::vector<MultiIndex> out;
  for (int k = 0; k <= n; ++k) for_each_multiindex(d, k, [&](const MultiIndex& a) { out.push_back(a); });
  return out;
}

/// Coordinate subsets F of {0..d-1} are bitmasks.
using Subset = unsigned;

inline bool contains(Subset f, std::size_t j) { return (f >> j) & 1u; }

inline std::vector<std::size_t> members(Subset f, std::size_t d) {
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < d; ++j)
    if (contains(f, j)) out.push_back(j);
  return out;
}

/// Support of alpha as a subset.
inline Subset support(const MultiIndex& a) {
  Subset f = 0;
  for (std::size_t j = 0; j < a.size(); ++j)
    if (a[j] != 0) f |= 1u << j;
  return f;
}

}  // namespace dartree

#pragma once

/**
 * @file product.hpp
 * @brief Directed Cartesian product of rooted trees, enumerated up to a total
 *        depth bound.
 *
 * Vertices are d-tuples of factor-internal indices. The basis order is: total
 * depth, then depth multiindex (first coordinate descending), then the tuple
 * lexicographically. Factors are internally extended one level past the
 * bound so that children of top-generation vertices can be formed; those
 * children are valid references but carry no basis index.
 */

#include <algorithm>
#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dartree/error.hpp"
#include "dartree/multiindex.hpp"
#include "dartree/trees.hpp"

namespace dartree {

/// A product vertex: one factor-internal index per coordinate.
using VertexRef = std::vector<int>;

enum class Relation { ChildJ, ParentJ, SiblingJ, Children, Parents };

class ProductTree {
 public:
  ProductTree(std::vector<RootedTreePrefix> factors, int total_depth) : total_depth_(total_depth) {
    if (factors.empty()) fail(ErrorKind::InvalidParameter, "a product needs at least one factor");
    if (factors.size() > 16) fail(ErrorKind::InvalidParameter, "at most 16 factors are supported");
    if (total_depth < 0) fail(ErrorKind::InvalidParameter, "negative depth bound");
    for (std::size_t j = 0; j < factors.size(); ++j) {
      if (factors[j].truncation_depth() < total_depth)
        fail(ErrorKind::DepthBoundExceedsFactor, "factor " + std::to_string(j) + " (" + factors[j].name() +
                                                     ") is truncated at " +
                                                     std::to_string(factors[j].truncation_depth()) +
                                                     " < depth bound " + std::to_string(total_depth));
    }
    original_ = factors;
    for (auto& f : factors) f = extend_rays(f, total_depth + 1);
    factors_ = std::move(factors);
    enumerate();
  }

  std::size_t dim() const { return factors_.size(); }
  int total_depth_bound() const { return total_depth_; }
  std::size_t size() const { return verts_.size(); }
  const RootedTreePrefix& factor(std::size_t j) const { return factors_[j]; }
  /// Factors as supplied (without the internal one-level extension).
  const std::vector<RootedTreePrefix>& original_factors() const { return original_; }

  const VertexRef& vertex(std::size_t i) const { return verts_[i]; }
  VertexRef root() const { return VertexRef(dim(), 0); }

  std::optional<std::size_t> find(const VertexRef& v) const {
    auto it = index_.find(v);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }
  std::size_t index(const VertexRef& v) const {
    auto it = index_.find(v);
    if (it == index_.end()) fail(ErrorKind::VertexNotEnumerated, "vertex " + describe(v) + " is not enumerated");
    return it->second;
  }
  bool enumerated(const VertexRef& v) const { return index_.count(v) != 0; }

  MultiIndex depth(const VertexRef& v) const {
    MultiIndex d(dim());
    for (std::size_t j = 0; j < dim(); ++j) d[j] = factors_[j].depth(v[j]);
    return d;
  }
  int total_depth(const VertexRef& v) const { return total(depth(v)); }
  int total_depth(std::size_t i) const { return depth_of_[i]; }

  /// Basis indices of generation k (k <= depth bound).
  std::vector<std::size_t> generation(int k) const {
    std::vector<std::size_t> out;
    for (std::size_t i = gen_start_[k]; i < gen_start_[k + 1]; ++i) out.push_back(i);
    return out;
  }
  std::size_t generation_size(int k) const { return gen_start_[k + 1] - gen_start_[k]; }
  /// Number of vertices with total depth <= k.
  std::size_t count_upto(int k) const { return gen_start_[std::min(k, total_depth_) + 1]; }

  // ---- navigation ---------------------------------------------------------

  std::vector<VertexRef> chi(const VertexRef& v, std::size_t j) const {
    std::vector<VertexRef> out;
    for (int c : factors_[j].children(v[j])) {
      VertexRef w = v;
      w[j] = c;
      out.push_back(std::move(w));
    }
    return out;
  }

  VertexRef par(const VertexRef& v, std::size_t j) const {
    if (v[j] == RootedTreePrefix::root())
      fail(ErrorKind::RootHasNoParent, "coordinate " + std::to_string(j) + " of " + describe(v) + " is a root");
    VertexRef w = v;
    w[j] = factors_[j].parent(v[j]);
    return w;
  }

  std::vector<VertexRef> sib(const VertexRef& v, std::size_t j) const { return chi(par(v, j), j); }

  std::vector<VertexRef> Chi(const VertexRef& v) const {
    std::vector<VertexRef> out;
    for (std::size_t j = 0; j < dim(); ++j) {
      auto c = chi(v, j);
      out.insert(out.end(), c.begin(), c.end());
    }
    return out;
  }

  std::vector<VertexRef> Par(const VertexRef& v) const {
    std::vector<VertexRef> out;
    for (std::size_t j = 0; j < dim(); ++j)
      if (v[j] != RootedTreePrefix::root()) out.push_back(par(v, j));
    return out;
  }

  std::vector<VertexRef> navigate(const VertexRef& v, Relation rel, std::size_t j = 0) const {
    switch (rel) {
      case Relation::ChildJ: return chi(v, j);
      case Relation::ParentJ: return {par(v, j)};
      case Relation::SiblingJ: return sib(v, j);
      case Relation::Children: return Chi(v);
      case Relation::Parents: return Par(v);
    }
    return {};
  }

  /// Coordinates j with v_j not a root.
  Subset nonroot_set(const VertexRef& v) const {
    Subset f = 0;
    for (std::size_t j = 0; j < dim(); ++j)
      if (v[j] != RootedTreePrefix::root()) f |= 1u << j;
    return f;
  }

  /// Smallest caller id among the siblings of factor vertex x in factor j.
  int sibling_representative(std::size_t j, int x) const {
    const auto sibs = factors_[j].siblings(x);
    return *std::min_element(sibs.begin(), sibs.end(), [&](int a, int b) {
      return factors_[j].id(a) < factors_[j].id(b);
    });
  }

  std::size_t sibling_count(std::size_t j, int x) const { return factors_[j].siblings(x).size(); }

  /// Caller-facing ids of a vertex.
  std::vector<long> external_ids(const VertexRef& v) const {
    std::vector<long> out(dim());
    for (std::size_t j = 0; j < dim(); ++j) out[j] = factors_[j].id(v[j]);
    return out;
  }

  std::string describe(const VertexRef& v) const {
    std::string s = "(";
    for (std::size_t j = 0; j < v.size(); ++j) {
      if (j) s += ",";
      s += std::to_string(j < dim() ? factors_[j].id(v[j]) : v[j]);
    }
    return s + ")";
  }

 private:
  void enumerate() {
    const std::size_t d = dim();
    gen_start_.assign(static_cast<std::size_t>(total_depth_) + 2, 0);
    for (int k = 0; k <= total_depth_; ++k) {
      gen_start_[k] = verts_.size();
      for_each_multiindex(d, k, [&](const MultiIndex& beta) {
        VertexRef v(d, 0);
        std::function<void(std::size_t)> rec = [&](std::size_t j) {
          if (j == d) {
            index_.emplace(v, verts_.size());
            verts_.push_back(v);
            depth_of_.push_back(k);
            return;
          }
          for (int x : factors_[j].level(beta[j])) {
            v[j] = x;
            rec(j + 1);
          }
        };
        rec(0);
      });
    }
    gen_start_[total_depth_ + 1] = verts_.size();
  }

  int total_depth_;
  std::vector<RootedTreePrefix> factors_;
  std::vector<RootedTreePrefix> original_;
  std::vector<VertexRef> verts_;
  std::vector<int> depth_of_;
  std::map<VertexRef, std::size_t> index_;
  std::vector<std::size_t> gen_start_;
};

using ProductPtr = std::shared_ptr<const ProductTree>;

inline ProductPtr build_product(std::vector<RootedTreePrefix> factors, int total_depth) {
  return std::make_shared<const ProductTree>(std::move(factors), total_depth);
}

/// Enumerated vertices whose non-root coordinates are exactly F.
inline std::vector<std::size_t> phi_F(const ProductTree& p, Subset f) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < p.size(); ++i)
    if (p.nonroot_set(p.vertex(i)) == f) out.push_back(i);
  return out;
}

/// Canonical representatives: F-coordinates are sibling-class representatives
/// (minimum caller id), the others roots; total depth <= max_total_depth.
inline std::vector<VertexRef> omega_F(const ProductTree& p, Subset f, int max_total_depth) {
  std::vector<VertexRef> out;
  const int bound = std::min(max_total_depth, p.total_depth_bound());
  for (std::size_t i = 0; i < p.count_upto(bound); ++i) {
    const VertexRef& v = p.vertex(i);
    if (p.nonroot_set(v) != f) continue;
    bool rep = true;
    for (std::size_t j = 0; j < p.dim() && rep; ++j)
      if (contains(f, j) && p.sibling_representative(j, v[j]) != v[j]) rep = false;
    if (rep) out.push_back(v);
  }
  return out;
}

inline void require_in_phi(const ProductTree& p, const VertexRef& u, Subset f) {
  if (p.nonroot_set(u) != f) fail(ErrorKind::VertexNotInPhiF, "vertex " + p.describe(u) + " is not in the F-part");
}

/// prod_{j in F} sib_j(u): every coordinate in F replaced by a sibling.
/// F = {} gives {u} for any u.
inline std::vector<VertexRef> sib_F(const ProductTree& p, const VertexRef& u, Subset f) {
  if (f == 0) return {u};
  require_in_phi(p, u, f);
  std::vector<VertexRef> out{u};
  for (std::size_t j = 0; j < p.dim(); ++j) {
    if (!contains(f, j)) continue;
    std::vector<VertexRef> next;
    for (const auto& v : out)
      for (auto& w : p.sib(v, j)) next.push_back(std::move(w));
    out = std::move(next);
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Restrictions v_G of the members of sib_F(u), as vertices with the
/// coordinates outside G reset to u's.
inline std::vector<VertexRef> sib_FG(const ProductTree& p, const VertexRef& u, Subset f, Subset g) {
  if ((g & ~f) != 0) fail(ErrorKind::InvalidParameter, "G must be a subset of F");
  require_in_phi(p, u, f);
  std::vector<VertexRef> out{u};
  for (std::size_t j = 0; j < p.dim(); ++j) {
    if (!contains(g, j)) continue;
    std::vector<VertexRef> next;
    for (const auto& v : out)
      for (auto& w : p.sib(v, j)) next.push_back(std::move(w));
    out = std::move(next);
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// M_{u,F} = prod_{j in F} card(sib(u_j)).
inline std::size_t count_M(const ProductTree& p, const VertexRef& u, Subset f) {
  std::size_t m = 1;
  for (std::size_t j = 0; j < p.dim(); ++j)
    if (contains(f, j)) m *= p.sibling_count(j, u[j]);
  return m;
}

/// N_{u,F} = sum_{j in F} prod_{i in F, i != j} card(sib(u_i)).
inline std::size_t count_N(const ProductTree& p, const VertexRef& u, Subset f) {
  std::size_t n = 0;
  for (std::size_t j = 0; j < p.dim(); ++j) {
    if (!contains(f, j)) continue;
    n += count_M(p, u, f & ~(1u << j));
  }
  return n;
}

}  // namespace dartree

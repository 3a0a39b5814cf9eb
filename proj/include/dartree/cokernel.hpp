#pragma once

/**
 * @file cokernel.hpp
 * @brief The joint kernel of the adjoint multishift, block by block.
 *
 * A block is indexed by a coordinate set F and a representative u; it lives on
 * the sibling orbit sib_F(u) and is cut out by "sum over every coordinate
 * sibling line is zero" equations, which do not depend on the weights.
 */

#include <algorithm>
#include <cstddef>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include <boost/pending/disjoint_sets.hpp>

#include "dartree/error.hpp"
#include "dartree/linalg.hpp"
#include "dartree/multiindex.hpp"
#include "dartree/multishift.hpp"
#include "dartree/product.hpp"
#include "dartree/radical.hpp"

namespace dartree {

struct KernelBlock {
  Subset F = 0;
  VertexRef u;
  MultiIndex depth;
  /// Columns: the vertices of sib_F(u), sorted.
  std::vector<VertexRef> support;
  IntMatrix system;
  std::size_t M = 0;
  std::size_t N = 0;
  std::size_t dim_closed = 0;
  /// Rows are basis vectors over `support`.
  RatMatrix basis;

  /// Basis vectors in the product's index space.
  std::vector<SparseVec> sparse_basis(const ProductTree& p) const {
    std::vector<std::size_t> idx;
    for (const auto& v : support) idx.push_back(p.index(v));
    std::vector<SparseVec> out;
    for (const auto& row : basis) {
      SparseVec s;
      for (std::size_t c = 0; c < row.size(); ++c)
        if (row[c] != 0) s.emplace_back(idx[c], row[c]);
      std::sort(s.begin(), s.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
      out.push_back(std::move(s));
    }
    return out;
  }
};

/// prod_{j in F} (card(sib(u_j)) - 1); 1 for F empty.
inline std::size_t dim_L(const ProductTree& p, const VertexRef& u, Subset f) {
  std::size_t r = 1;
  for (std::size_t j = 0; j < p.dim(); ++j)
    if (contains(f, j)) r *= p.sibling_count(j, u[j]) - 1;
  return r;
}

/// One row per (j in F, v_G in sib_{F, F\{j}}(u)) with ones on the j-line
/// through v_G; columns follow sib_F(u) in sorted order.
inline IntMatrix sibling_sum_system(const ProductTree& p, const VertexRef& u, Subset f) {
  if (f == 0) fail(ErrorKind::EmptyF, "the system for F = {} is vacuous; its block is span{e_u}");
  const auto cols = sib_F(p, u, f);
  std::map<VertexRef, std::size_t> col;
  for (std::size_t c = 0; c < cols.size(); ++c) col[cols[c]] = c;
  IntMatrix rows;
  for (std::size_t j = 0; j < p.dim(); ++j) {
    if (!contains(f, j)) continue;
    for (const auto& vg : sib_FG(p, u, f, f & ~(1u << j))) {
      std::vector<Integer> row(cols.size(), 0);
      for (const auto& w : p.sib(vg, j)) row[col.at(w)] = 1;
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

inline RatMatrix block_basis_bruteforce(const IntMatrix& system, std::size_t columns) {
  return to_rational(nullspace_integer(system, columns));
}

/// Elementary tensors of per-coordinate difference vectors e_{u_j} - e_eta.
inline RatMatrix block_basis_tensor(const ProductTree& p, const VertexRef& u, Subset f) {
  if (f == 0) fail(ErrorKind::EmptyF, "no tensor factors for F = {}");
  require_in_phi(p, u, f);
  const auto cols = sib_F(p, u, f);
  const auto js = members(f, p.dim());
  // generators[j]: map factor vertex -> coefficient
  std::vector<std::vector<std::map<int, int>>> gens;
  for (auto j : js) {
    std::vector<std::map<int, int>> g;
    for (int eta : p.factor(j).siblings(u[j])) {
      if (eta == u[j]) continue;
      g.push_back({{u[j], 1}, {eta, -1}});
    }
    gens.push_back(std::move(g));
  }
  RatMatrix out;
  std::vector<std::size_t> pick(js.size(), 0);
  if (std::any_of(gens.begin(), gens.end(), [](const auto& g) { return g.empty(); })) return out;
  while (true) {
    RatVector row(cols.size(), Rational(0));
    for (std::size_t c = 0; c < cols.size(); ++c) {
      long val = 1;
      for (std::size_t k = 0; k < js.size() && val != 0; ++k) {
        const auto& g = gens[k][pick[k]];
        auto it = g.find(cols[c][js[k]]);
        val = it == g.end() ? 0 : val * it->second;
      }
      row[c] = val;
    }
    out.push_back(std::move(row));
    std::size_t k = 0;
    while (k < js.size() && ++pick[k] == gens[k].size()) pick[k++] = 0;
    if (k == js.size()) break;
  }
  return out;
}

inline KernelBlock make_block(const ProductTree& p, const VertexRef& u, Subset f) {
  KernelBlock b;
  b.F = f;
  b.u = u;
  b.depth = p.depth(u);
  b.dim_closed = dim_L(p, u, f);
  if (f == 0) {
    b.support = {u};
    b.M = 1;
    b.basis = {RatVector{Rational(1)}};
    return b;
  }
  b.support = sib_F(p, u, f);
  b.system = sibling_sum_system(p, u, f);
  b.M = count_M(p, u, f);
  b.N = count_N(p, u, f);
  b.basis = block_basis_tensor(p, u, f);
  return b;
}

/// Sum of the factor branching indices: every nonzero block has |d_u| below it.
inline int total_branching_bound(const ProductTree& p) {
  int s = 0;
  for (const auto& f : p.original_factors()) s += f.branching_index();
  return s;
}

/// The root block first, then blocks by F (as a bitmask) and basis order of u.
/// Only representatives with d_{u_j} <= k_j for j in F can carry a nonzero
/// block; `include_trivial` keeps the zero-dimensional ones in that range.
inline std::vector<KernelBlock> enumerate_blocks(const ProductTree& p, bool include_trivial = false) {
  const int bound = total_branching_bound(p);
  if (p.total_depth_bound() < bound)
    fail(ErrorKind::DepthTooShallow, "depth bound " + std::to_string(p.total_depth_bound()) +
                                         " below the total branching bound " + std::to_string(bound));
  std::vector<KernelBlock> out;
  out.push_back(make_block(p, p.root(), 0));
  for (Subset f = 1; f < (1u << p.dim()); ++f) {
    for (const auto& u : omega_F(p, f, bound)) {
      bool in_range = true;
      for (std::size_t j = 0; j < p.dim(); ++j)
        if (contains(f, j) && p.factor(j).depth(u[j]) > p.original_factors()[j].branching_index()) in_range = false;
      if (!in_range) continue;
      if (!include_trivial && dim_L(p, u, f) == 0) continue;
      out.push_back(make_block(p, u, f));
    }
  }
  return out;
}

inline std::size_t dim_E(const ProductTree& p) {
  std::size_t s = 0;
  for (const auto& b : enumerate_blocks(p)) s += b.dim_closed;
  return s;
}

/// Basis of the joint kernel of the adjoints, solved directly from
/// sum_{w in chi_j(v)} lambda_j(w) f(w) = 0 over the whole truncation.
/// Each equation is divided by the weight of its first child; the remaining
/// ratios must be rational. Equations only couple vertices of one sibling
/// orbit, so the system is solved per connected component.
inline std::vector<SparseVec> joint_kernel_bruteforce(const Multishift& m) {
  const auto& p = m.product();
  const int need = 1 + total_branching_bound(p);
  if (p.total_depth_bound() < need)
    fail(ErrorKind::DepthTooShallow, "joint kernel needs depth bound >= " + std::to_string(need));

  struct Row {
    std::vector<std::size_t> vars;
    std::vector<Rational> coef;
  };
  std::vector<Row> rows;
  const std::size_t n = p.size();
  std::vector<std::size_t> rank(n), parent(n);
  boost::disjoint_sets<std::size_t*, std::size_t*> ds(rank.data(), parent.data());
  for (std::size_t i = 0; i < n; ++i) ds.make_set(i);

  for (std::size_t vi = 0; vi < p.count_upto(p.total_depth_bound() - 1); ++vi) {
    for (std::size_t j = 0; j < p.dim(); ++j) {
      Row r;
      for (const auto& w : p.chi(p.vertex(vi), j)) r.vars.push_back(p.index(w));
      const Rational& w0 = m.sq_weight(j, r.vars.front());
      for (auto x : r.vars) {
        const Radical ratio = Radical::sqrt(m.sq_weight(j, x) / w0);
        if (!ratio.is_rational())
          fail(ErrorKind::NonRationalScaling,
               "weight ratio " + to_string(m.sq_weight(j, x) / w0) + " is not a rational square");
        r.coef.push_back(ratio.rational_value());
        ds.union_set(r.vars.front(), x);
      }
      rows.push_back(std::move(r));
    }
  }

  std::map<std::size_t, std::vector<std::size_t>> comp_vars;
  for (std::size_t i = 0; i < n; ++i) comp_vars[ds.find_set(i)].push_back(i);
  std::map<std::size_t, std::vector<const Row*>> comp_rows;
  for (const auto& r : rows) comp_rows[ds.find_set(r.vars.front())].push_back(&r);

  std::vector<SparseVec> basis;
  for (const auto& [rep, vars] : comp_vars) {
    std::map<std::size_t, std::size_t> col;
    for (std::size_t c = 0; c < vars.size(); ++c) col[vars[c]] = c;
    IntMatrix a;
    for (const Row* r : comp_rows[rep]) {
      Integer den = 1;
      for (const auto& q : r->coef) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), q.get_den_mpz_t());
      std::vector<Integer> row(vars.size(), 0);
      for (std::size_t k = 0; k < r->vars.size(); ++k) {
        const Rational scaled = r->coef[k] * Rational(den);
        row[col.at(r->vars[k])] += scaled.get_num();
      }
      a.push_back(std::move(row));
    }
    for (const auto& v : nullspace_integer(std::move(a), vars.size())) {
      SparseVec s;
      for (std::size_t c = 0; c < v.size(); ++c)
        if (v[c] != 0) s.emplace_back(vars[c], Rational(v[c]));
      basis.push_back(std::move(s));
    }
  }
  std::stable_sort(basis.begin(), basis.end(), [](const SparseVec& a, const SparseVec& b) {
    return a.front().first < b.front().first;
  });
  return basis;
}

}  // namespace dartree

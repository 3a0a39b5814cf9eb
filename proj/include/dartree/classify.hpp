#pragma once

/**
 * @file classify.hpp
 * @brief Isomorphism of the tree modules: the three equivalent combinatorial
 *        conditions, the decision, and an explicit intertwining unitary on a
 *        truncation.
 *
 * Condition (iv) compares generation counts factor by factor and decides.
 * Condition (iii) compares sibling surpluses, and condition (ii) compares
 * kernel-block dimension sums per (F, alpha); both are recomputed as
 * independent cross-checks.
 */

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dartree/cokernel.hpp"
#include "dartree/error.hpp"
#include "dartree/linalg.hpp"
#include "dartree/multiindex.hpp"
#include "dartree/multishift.hpp"
#include "dartree/product.hpp"
#include "dartree/trees.hpp"
#include "dartree/weights.hpp"

namespace dartree {

using TreeSet = std::vector<RootedTreePrefix>;

struct Mismatch {
  std::size_t factor = 0;
  int n = 0;
};

struct ConditionTable {
  bool equal = true;
  /// per factor, per n
  std::vector<std::vector<long>> first, second;
  std::optional<Mismatch> witness;
  int n_max = 0;
  /// n_max reaches every factor's branching index, so equality is for all n
  bool complete = false;
};

namespace detail {

inline void require_same_count(const TreeSet& a, const TreeSet& b) {
  if (a.size() != b.size())
    fail(ErrorKind::FactorCountMismatch, std::to_string(a.size()) + " vs " + std::to_string(b.size()) + " factors");
  if (a.empty()) fail(ErrorKind::InvalidParameter, "empty factor list");
}

inline int max_branching(const TreeSet& a, const TreeSet& b) {
  int k = 0;
  for (const auto& t : a) k = std::max(k, t.branching_index());
  for (const auto& t : b) k = std::max(k, t.branching_index());
  return k;
}

template <class Fn>
ConditionTable compare_tables(const TreeSet& a, const TreeSet& b, int n_max, Fn value) {
  require_same_count(a, b);
  ConditionTable t;
  t.n_max = n_max;
  t.complete = n_max >= max_branching(a, b);
  for (std::size_t l = 0; l < a.size(); ++l) {
    std::vector<long> ra, rb;
    for (int n = 0; n <= n_max; ++n) {
      ra.push_back(value(a[l], n));
      rb.push_back(value(b[l], n));
      if (ra.back() != rb.back() && !t.witness) t.witness = Mismatch{l, n};
    }
    t.first.push_back(std::move(ra));
    t.second.push_back(std::move(rb));
  }
  t.equal = !t.witness;
  return t;
}

}  // namespace detail

/// Smallest caller id among the siblings of x.
inline int tree_sibling_representative(const RootedTreePrefix& t, int x) {
  const auto sibs = t.siblings(x);
  return *std::min_element(sibs.begin(), sibs.end(), [&](int a, int b) { return t.id(a) < t.id(b); });
}

/// Sibling-class representatives at depth n (n <= truncation depth).
inline std::vector<int> class_representatives(const RootedTreePrefix& t, int n) {
  std::vector<int> out;
  for (int x : t.level(n))
    if (tree_sibling_representative(t, x) == x) out.push_back(x);
  return out;
}

/// sum over sibling classes at depth n of (class size - 1).
inline long sibling_surplus(const RootedTreePrefix& t, int n) {
  if (n > t.truncation_depth()) return 0;  // rays only
  long s = 0;
  for (int x : class_representatives(t, n)) s += static_cast<long>(t.siblings(x).size()) - 1;
  return s;
}

inline ConditionTable condition_iv(const TreeSet& a, const TreeSet& b, int n_max) {
  return detail::compare_tables(a, b, n_max, [](const RootedTreePrefix& t, int n) { return generation_count(t, n); });
}

inline ConditionTable condition_iii(const TreeSet& a, const TreeSet& b, int n_max) {
  return detail::compare_tables(a, b, n_max, [](const RootedTreePrefix& t, int n) { return sibling_surplus(t, n); });
}

struct BlockSumEntry {
  Subset F = 0;
  MultiIndex alpha;
  long first = 0, second = 0;
  /// the same sums as products of single-coordinate surpluses
  long first_factored = 0, second_factored = 0;
};

struct BlockSumTable {
  bool equal = true;
  bool factorization_ok = true;
  std::vector<BlockSumEntry> entries;
  std::optional<std::size_t> witness;  ///< index into entries
};

namespace detail {

/// sum_{u in canonical reps of F, d_u = alpha} prod_{j in F}(card sib(u_j) - 1),
/// enumerating the representative tuples one by one.
inline long block_sum_by_tuples(const TreeSet& trees, Subset f, const MultiIndex& alpha) {
  std::vector<std::vector<long>> per;  // per coordinate in F: surplus of each class
  for (std::size_t j = 0; j < trees.size(); ++j) {
    if (!contains(f, j)) continue;
    const auto& t = trees[j];
    std::vector<long> vals;
    if (alpha[j] > t.truncation_depth()) {
      vals.assign(t.level(t.truncation_depth()).size(), 0);
    } else {
      for (int x : class_representatives(t, alpha[j])) vals.push_back(static_cast<long>(t.siblings(x).size()) - 1);
    }
    per.push_back(std::move(vals));
  }
  long sum = 0;
  std::vector<std::size_t> pick(per.size(), 0);
  if (std::any_of(per.begin(), per.end(), [](const auto& v) { return v.empty(); })) return 0;
  while (true) {
    long prod = 1;
    for (std::size_t k = 0; k < per.size(); ++k) prod *= per[k][pick[k]];
    sum += prod;
    std::size_t k = 0;
    while (k < per.size() && ++pick[k] == per[k].size()) pick[k++] = 0;
    if (k == per.size()) break;
  }
  return sum;
}

inline long block_sum_factored(const TreeSet& trees, Subset f, const MultiIndex& alpha) {
  long prod = 1;
  for (std::size_t j = 0; j < trees.size(); ++j)
    if (contains(f, j)) prod *= sibling_surplus(trees[j], alpha[j]);
  return prod;
}

/// Same sum, read off the enumerated product.
inline long block_sum_on_product(const ProductTree& p, Subset f, const MultiIndex& alpha) {
  long sum = 0;
  for (const auto& u : omega_F(p, f, total(alpha)))
    if (p.depth(u) == alpha) sum += static_cast<long>(dim_L(p, u, f));
  return sum;
}

inline void for_each_supported(std::size_t d, int alpha_max, const std::function<void(Subset, const MultiIndex&)>& fn) {
  for (Subset f = 0; f < (1u << d); ++f)
    for (const auto& a : multiindices_upto(d, alpha_max))
      if (support(a) == f) fn(f, a);
}

}  // namespace detail

/// Per (F, alpha) with supp(alpha) = F and |alpha| <= alpha_max.
inline BlockSumTable condition_ii(const TreeSet& a, const TreeSet& b, int alpha_max) {
  detail::require_same_count(a, b);
  BlockSumTable t;
  detail::for_each_supported(a.size(), alpha_max, [&](Subset f, const MultiIndex& alpha) {
    BlockSumEntry e;
    e.F = f;
    e.alpha = alpha;
    if (f == 0) {
      e.first = e.second = e.first_factored = e.second_factored = 1;
    } else {
      e.first = detail::block_sum_by_tuples(a, f, alpha);
      e.second = detail::block_sum_by_tuples(b, f, alpha);
      e.first_factored = detail::block_sum_factored(a, f, alpha);
      e.second_factored = detail::block_sum_factored(b, f, alpha);
    }
    if (e.first != e.first_factored || e.second != e.second_factored) t.factorization_ok = false;
    if (e.first != e.second && !t.witness) t.witness = t.entries.size();
    t.entries.push_back(std::move(e));
  });
  t.equal = !t.witness;
  return t;
}

/// The same table computed on two enumerated products (alpha_max <= depth bounds).
inline BlockSumTable condition_ii(const ProductTree& p1, const ProductTree& p2, int alpha_max) {
  if (p1.dim() != p2.dim()) fail(ErrorKind::FactorCountMismatch, "products of different dimension");
  if (alpha_max > std::min(p1.total_depth_bound(), p2.total_depth_bound()))
    fail(ErrorKind::DepthTooShallow, "alpha_max exceeds a product's depth bound");
  BlockSumTable t;
  detail::for_each_supported(p1.dim(), alpha_max, [&](Subset f, const MultiIndex& alpha) {
    BlockSumEntry e;
    e.F = f;
    e.alpha = alpha;
    if (f == 0) {
      e.first = e.second = e.first_factored = e.second_factored = 1;
    } else {
      e.first = detail::block_sum_on_product(p1, f, alpha);
      e.second = detail::block_sum_on_product(p2, f, alpha);
      e.first_factored = detail::block_sum_factored(p1.original_factors(), f, alpha);
      e.second_factored = detail::block_sum_factored(p2.original_factors(), f, alpha);
    }
    if (e.first != e.first_factored || e.second != e.second_factored) t.factorization_ok = false;
    if (e.first != e.second && !t.witness) t.witness = t.entries.size();
    t.entries.push_back(std::move(e));
  });
  t.equal = !t.witness;
  return t;
}

/// Smallest alpha_max covering every possibly nonzero block of both sets.
inline int block_alpha_bound(const TreeSet& a, const TreeSet& b) {
  int sa = 0, sb = 0;
  for (const auto& t : a) sa += t.branching_index();
  for (const auto& t : b) sb += t.branching_index();
  return std::max(sa, sb);
}

/// Products are graph isomorphic iff their factor multisets match (trees are
/// prime for the Cartesian product).
inline bool products_graph_isomorphic(const TreeSet& a, const TreeSet& b) {
  if (a.size() != b.size()) return false;
  std::vector<bool> used(b.size(), false);
  for (const auto& t : a) {
    bool found = false;
    for (std::size_t k = 0; k < b.size() && !found; ++k)
      if (!used[k] && graph_isomorphic(t, b[k])) used[k] = found = true;
    if (!found) return false;
  }
  return true;
}

enum class Decision { Isomorphic, NotIsomorphic, Undecided };

inline std::string to_string(Decision d) {
  switch (d) {
    case Decision::Isomorphic: return "isomorphic";
    case Decision::NotIsomorphic: return "not_isomorphic";
    case Decision::Undecided: return "undecided_ad_eq_1";
  }
  return "?";
}

struct ClassificationReport {
  Decision decision = Decision::Undecided;
  bool graph_isomorphic = false;
  ConditionTable generations;  ///< (iv)
  ConditionTable surpluses;    ///< (iii)
  BlockSumTable block_sums;    ///< (ii)
  /// (ii), (iii), (iv) agree
  bool conditions_agree = false;
};

/// Decision by generation counts up to stabilization; ad = 1 is refused.
inline ClassificationReport modules_isomorphic(const TreeSet& a, const TreeSet& b, long param_a) {
  detail::require_same_count(a, b);
  if (param_a < 1) fail(ErrorKind::InvalidParameter, "a must be a positive integer");
  ClassificationReport r;
  const int n_max = detail::max_branching(a, b);
  r.generations = condition_iv(a, b, n_max);
  r.surpluses = condition_iii(a, b, n_max);
  r.block_sums = condition_ii(a, b, block_alpha_bound(a, b));
  r.graph_isomorphic = products_graph_isomorphic(a, b);
  r.conditions_agree = r.generations.equal == r.surpluses.equal && r.surpluses.equal == r.block_sums.equal;
  if (param_a * static_cast<long>(a.size()) == 1) {
    r.decision = Decision::Undecided;
  } else {
    r.decision = r.generations.equal ? Decision::Isomorphic : Decision::NotIsomorphic;
  }
  return r;
}

/// Isomorphic to the module over the branchless product iff no factor branches.
inline bool classical_module_check(const TreeSet& trees, long param_a) {
  if (param_a * static_cast<long>(trees.size()) == 1)
    fail(ErrorKind::InvalidParameter, "the criterion does not apply when ad = 1");
  return std::all_of(trees.begin(), trees.end(), [](const RootedTreePrefix& t) { return t.branching_index() == 0; });
}

// ---- intertwiner ------------------------------------------------------------

struct BlockPairing {
  Subset F = 0;
  MultiIndex alpha;
  std::size_t dim = 0;
};

struct IntertwinerCertificate {
  int depth = 0;
  std::vector<BlockPairing> pairings;
  std::size_t card_V = 0;
  std::size_t spanned_first = 0, spanned_second = 0;
  double unitarity_residual = 0;
  double intertwining_residual = 0;
  double norm_mismatch = 0;
  bool complete = false;
  bool certified = false;
  /// U as a dense matrix (rows: second product, columns: first product)
  std::vector<DVector> matrix;
};

namespace detail {

using BlockKey = std::pair<Subset, MultiIndex>;

/// Orthonormal vectors of every block, grouped by (F, d_u) in block order.
inline std::map<BlockKey, std::vector<DVector>> orthonormal_groups(const ProductTree& p) {
  std::map<BlockKey, std::vector<DVector>> groups;
  for (const auto& b : enumerate_blocks(p)) {
    std::vector<DVector> vs;
    for (const auto& row : b.basis) {
      DVector v(p.size(), 0.0);
      for (std::size_t c = 0; c < row.size(); ++c) v[p.index(b.support[c])] = row[c].get_d();
      vs.push_back(std::move(v));
    }
    auto on = gram_schmidt(vs);
    auto& g = groups[{b.F, b.depth}];
    g.insert(g.end(), on.begin(), on.end());
  }
  return groups;
}

inline DVector matvec(const std::vector<DVector>& m, const DVector& x) {
  DVector y(m.size(), 0.0);
  for (std::size_t r = 0; r < m.size(); ++r) y[r] = dot(m[r], x);
  return y;
}

}  // namespace detail

/// Pairs orthonormal block bases across the two products by (F, d_u) and
/// extends along S^beta: U (S1^beta g_i) = S2^beta g'_i after normalization.
inline IntertwinerCertificate build_intertwiner(const ProductPtr& p1, const ProductPtr& p2, long param_a,
                                                double tol = 1e-9) {
  const TreeSet& t1 = p1->original_factors();
  const TreeSet& t2 = p2->original_factors();
  detail::require_same_count(t1, t2);
  if (p1->total_depth_bound() != p2->total_depth_bound())
    fail(ErrorKind::InvalidParameter, "both products need the same depth bound");
  const auto report = modules_isomorphic(t1, t2, param_a);
  if (report.decision != Decision::Isomorphic)
    fail(ErrorKind::NotIsomorphic, "generation counts differ; no intertwining unitary exists");
  const int need = std::max(total_branching_bound(*p1), total_branching_bound(*p2)) + 2;
  const int depth = p1->total_depth_bound();
  if (depth < need)
    fail(ErrorKind::TruncationTooShallow, "depth bound " + std::to_string(depth) + " < " + std::to_string(need));

  const auto c = WeightSequence::c_a(Rational(param_a));
  const auto m1 = Multishift::family(p1, c);
  const auto m2 = Multishift::family(p2, c);
  const auto g1 = detail::orthonormal_groups(*p1);
  const auto g2 = detail::orthonormal_groups(*p2);

  IntertwinerCertificate cert;
  cert.depth = depth;
  cert.card_V = p1->size();
  const std::size_t n1 = p1->size(), n2 = p2->size();
  cert.matrix.assign(n2, DVector(n1, 0.0));
  std::vector<DVector> images1, images2;
  const std::size_t d = p1->dim();

  auto ga = g1.begin();
  auto gb = g2.begin();
  for (; ga != g1.end() || gb != g2.end();) {
    if (ga == g1.end() || gb == g2.end() || ga->first != gb->first || ga->second.size() != gb->second.size())
      fail(ErrorKind::NotIsomorphic, "block dimension sums differ between the products");
    const auto& [F, alpha] = ga->first;
    cert.pairings.push_back({F, alpha, ga->second.size()});
    for (std::size_t i = 0; i < ga->second.size(); ++i) {
      for (const auto& beta : multiindices_upto(d, depth - total(alpha))) {
        DVector x1 = apply_S_alpha(m1, beta, ga->second[i]);
        DVector x2 = apply_S_alpha(m2, beta, gb->second[i]);
        const double a1 = norm(x1), a2 = norm(x2);
        cert.norm_mismatch = std::max(cert.norm_mismatch, std::abs(a1 - a2));
        for (auto& v : x1) v /= a1;
        for (auto& v : x2) v /= a2;
        for (std::size_t r = 0; r < n2; ++r) {
          if (x2[r] == 0) continue;
          for (std::size_t col = 0; col < n1; ++col) cert.matrix[r][col] += x2[r] * x1[col];
        }
        images1.push_back(std::move(x1));
        images2.push_back(std::move(x2));
      }
    }
    ++ga;
    ++gb;
  }
  cert.spanned_first = gram_schmidt(images1, 1e-8).size();
  cert.spanned_second = gram_schmidt(images2, 1e-8).size();
  cert.complete = cert.spanned_first == n1 && cert.spanned_second == n2 && n1 == n2;

  // ||U^T U - I||_max
  for (std::size_t i = 0; i < n1; ++i)
    for (std::size_t k = 0; k < n1; ++k) {
      double s = 0;
      for (std::size_t r = 0; r < n2; ++r) s += cert.matrix[r][i] * cert.matrix[r][k];
      cert.unitarity_residual = std::max(cert.unitarity_residual, std::abs(s - (i == k ? 1.0 : 0.0)));
    }
  // max_j,v ||U S1_j e_v - S2_j U e_v|| over |d_v| <= depth - 1
  for (std::size_t v = 0; v < p1->count_upto(depth - 1); ++v) {
    const DVector ev = basis_vector<double>(*p1, v);
    DVector uev(n2);
    for (std::size_t r = 0; r < n2; ++r) uev[r] = cert.matrix[r][v];
    for (std::size_t j = 0; j < d; ++j) {
      const DVector lhs = detail::matvec(cert.matrix, apply_Sj(m1, j, ev));
      const DVector rhs = apply_Sj(m2, j, uev);
      double s = 0;
      for (std::size_t r = 0; r < n2; ++r) s += (lhs[r] - rhs[r]) * (lhs[r] - rhs[r]);
      cert.intertwining_residual = std::max(cert.intertwining_residual, std::sqrt(s));
    }
  }
  cert.certified = cert.complete && cert.unitarity_residual < tol && cert.intertwining_residual < tol;
  return cert;
}

}  // namespace dartree

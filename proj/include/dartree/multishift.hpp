#pragma once

/**
 * @file multishift.hpp
 * @brief Weighted multishifts on a truncated product tree.
 *
 * Weights are stored squared, as exact rationals, indexed by (coordinate j,
 * basis index of the target vertex w). Structural checks (commutation,
 * balance, duals) only ever touch squares. Operator application is templated
 * on the scalar type: `Radical` gives exact results, `double` is the fast path.
 */

#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <type_traits>
#include <vector>

#include <boost/pending/disjoint_sets.hpp>

#include "dartree/error.hpp"
#include "dartree/multiindex.hpp"
#include "dartree/product.hpp"
#include "dartree/radical.hpp"
#include "dartree/rational.hpp"
#include "dartree/weights.hpp"

namespace dartree {

/// Dense vector over the enumerated basis of a product.
template <class T>
using Vec2 = std::vector<T>;

using SquaredWeights = std::vector<std::vector<Rational>>;

class Multishift {
 public:
  /// Spherically balanced family driven by the sequence c.
  static Multishift family(ProductPtr p, const WeightSequence& c) {
    const auto& pt = *p;
    const std::size_t d = pt.dim();
    SquaredWeights sq(d, std::vector<Rational>(pt.size(), Rational(0)));
    for (std::size_t i = 0; i < pt.size(); ++i) {
      const VertexRef& w = pt.vertex(i);
      for (std::size_t j = 0; j < d; ++j) {
        if (w[j] == RootedTreePrefix::root()) continue;
        const VertexRef v = pt.par(w, j);
        const auto dv = pt.depth(v);
        const long tot = total(dv);
        const Rational card(static_cast<long>(pt.factor(j).children(v[j]).size()));
        sq[j][i] = c.at(tot, d) / card * Rational(dv[j] + 1) / Rational(tot + static_cast<long>(d));
      }
    }
    Multishift m(std::move(p), std::move(sq));
    m.family_ = c;
    return m;
  }

  /// Arbitrary positive squared weights; sq[j][i] is ignored where the j-th
  /// coordinate of vertex i is a root.
  static Multishift from_table(ProductPtr p, SquaredWeights sq) {
    if (sq.size() != p->dim()) fail(ErrorKind::InvalidParameter, "weight table needs one row per coordinate");
    for (std::size_t j = 0; j < sq.size(); ++j) {
      if (sq[j].size() != p->size()) fail(ErrorKind::InvalidParameter, "weight row has wrong length");
      for (std::size_t i = 0; i < p->size(); ++i) {
        if (p->vertex(i)[j] == RootedTreePrefix::root()) {
          sq[j][i] = 0;
        } else if (sq[j][i] <= 0) {
          fail(ErrorKind::InvalidParameter, "squared weights must be positive");
        }
      }
    }
    return Multishift(std::move(p), std::move(sq));
  }

  const ProductTree& product() const { return *product_; }
  const ProductPtr& product_ptr() const { return product_; }
  std::size_t dim() const { return product_->dim(); }
  const SquaredWeights& squared_weights() const { return sq_; }
  const Rational& sq_weight(std::size_t j, std::size_t i) const { return sq_[j][i]; }
  const std::optional<WeightSequence>& family_sequence() const { return family_; }

  /// Weights themselves (square roots), computed once per scalar type.
  template <class T>
  const std::vector<std::vector<T>>& weights() const {
    auto& slot = cache_->slot<T>();
    std::call_once(slot.once, [&] {
      slot.value.assign(sq_.size(), std::vector<T>(product_->size(), ScalarTraits<T>::from_rational(0)));
      for (std::size_t j = 0; j < sq_.size(); ++j)
        for (std::size_t i = 0; i < sq_[j].size(); ++i)
          if (sq_[j][i] != 0) slot.value[j][i] = ScalarTraits<T>::sqrt_of(sq_[j][i]);
    });
    return slot.value;
  }

 private:
  template <class T>
  struct Slot {
    std::once_flag once;
    std::vector<std::vector<T>> value;
  };
  struct Cache {
    Slot<double> dbl;
    Slot<Radical> rad;
    template <class T>
    Slot<T>& slot() {
      if constexpr (std::is_same_v<T, double>) {
        return dbl;
      } else {
        return rad;
      }
    }
  };

  friend Multishift cauchy_dual(const Multishift& m);

  Multishift(ProductPtr p, SquaredWeights sq)
      : product_(std::move(p)), sq_(std::move(sq)), cache_(std::make_shared<Cache>()) {}

  ProductPtr product_;
  SquaredWeights sq_;
  std::optional<WeightSequence> family_;
  std::shared_ptr<Cache> cache_;
};

inline Multishift family_weights(ProductPtr p, const WeightSequence& c) { return Multishift::family(std::move(p), c); }

template <class T>
Vec2<T> basis_vector(const ProductTree& p, std::size_t i) {
  Vec2<T> e(p.size(), ScalarTraits<T>::from_rational(0));
  e[i] = ScalarTraits<T>::from_rational(1);
  return e;
}

/// S_j f. Mass on the top generation has nowhere to go inside the truncation.
template <class T>
Vec2<T> apply_Sj(const Multishift& m, std::size_t j, const Vec2<T>& f) {
  const auto& p = m.product();
  const auto& wt = m.weights<T>();
  Vec2<T> out(p.size(), ScalarTraits<T>::from_rational(0));
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (ScalarTraits<T>::is_zero(f[i])) continue;
    if (p.total_depth(i) >= p.total_depth_bound())
      fail(ErrorKind::TruncationOverflow, "S_" + std::to_string(j + 1) + " applied to " +
                                              p.describe(p.vertex(i)) + " leaves the truncation");
    for (const auto& w : p.chi(p.vertex(i), j)) {
      const std::size_t k = p.index(w);
      out[k] += wt[j][k] * f[i];
    }
  }
  return out;
}

template <class T>
Vec2<T> apply_Sj_adjoint(const Multishift& m, std::size_t j, const Vec2<T>& f) {
  const auto& p = m.product();
  const auto& wt = m.weights<T>();
  Vec2<T> out(p.size(), ScalarTraits<T>::from_rational(0));
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (ScalarTraits<T>::is_zero(f[i]) || p.vertex(i)[j] == RootedTreePrefix::root()) continue;
    out[p.index(p.par(p.vertex(i), j))] += wt[j][i] * f[i];
  }
  return out;
}

/// S^alpha f, applying coordinate 1 first.
template <class T>
Vec2<T> apply_S_alpha(const Multishift& m, const MultiIndex& alpha, Vec2<T> f) {
  for (std::size_t j = 0; j < alpha.size(); ++j)
    for (int r = 0; r < alpha[j]; ++r) f = apply_Sj(m, j, f);
  return f;
}

template <class T>
Vec2<T> apply_S_alpha_adjoint(const Multishift& m, const MultiIndex& alpha, Vec2<T> f) {
  for (std::size_t j = alpha.size(); j-- > 0;)
    for (int r = 0; r < alpha[j]; ++r) f = apply_Sj_adjoint(m, j, f);
  return f;
}

template <class T>
T inner(const Vec2<T>& a, const Vec2<T>& b) {
  T s = ScalarTraits<T>::from_rational(0);
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!ScalarTraits<T>::is_zero(a[i]) && !ScalarTraits<T>::is_zero(b[i])) s += a[i] * b[i];
  return s;
}

// ---- structural checks ------------------------------------------------------

struct CommutingCheck {
  bool ok = true;
  std::size_t i = 0, j = 0;  ///< offending coordinate pair
  std::optional<VertexRef> vertex;
};

/// lambda_j(u)^2 lambda_i(par_j u)^2 == lambda_i(u)^2 lambda_j(par_i u)^2 for
/// every u two steps (one in i, one in j) below a vertex of V_{<= D-2}.
inline CommutingCheck check_commuting(const Multishift& m) {
  const auto& p = m.product();
  CommutingCheck res;
  const std::size_t d = p.dim();
  const std::size_t limit = p.total_depth_bound() >= 2 ? p.count_upto(p.total_depth_bound() - 2) : 0;
  for (std::size_t vi = 0; vi < limit; ++vi) {
    const VertexRef& v = p.vertex(vi);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = i + 1; j < d; ++j)
        for (const auto& x : p.chi(v, i))
          for (const auto& u : p.chi(x, j)) {
            const std::size_t ui = p.index(u);
            const Rational lhs = m.sq_weight(j, ui) * m.sq_weight(i, p.index(p.par(u, j)));
            const Rational rhs = m.sq_weight(i, ui) * m.sq_weight(j, p.index(p.par(u, i)));
            if (lhs != rhs) {
              res.ok = false;
              res.i = i;
              res.j = j;
              res.vertex = u;
              return res;
            }
          }
  }
  return res;
}

/// C(v) = sum_j ||S_j e_v||^2, for |d_v| <= D-1.
inline Rational spherical_C(const Multishift& m, std::size_t vi) {
  const auto& p = m.product();
  if (p.total_depth(vi) >= p.total_depth_bound())
    fail(ErrorKind::TruncationOverflow, "children of " + p.describe(p.vertex(vi)) + " are outside the truncation");
  Rational s = 0;
  for (std::size_t j = 0; j < p.dim(); ++j)
    for (const auto& w : p.chi(p.vertex(vi), j)) s += m.sq_weight(j, p.index(w));
  return s;
}

struct BalanceCheck {
  bool ok = true;
  int generation = -1;
  std::size_t first = 0, second = 0;  ///< basis indices with different C
};

inline BalanceCheck check_balanced(const Multishift& m) {
  const auto& p = m.product();
  BalanceCheck res;
  for (int t = 0; t + 1 <= p.total_depth_bound(); ++t) {
    const auto gen = p.generation(t);
    const Rational c0 = spherical_C(m, gen.front());
    for (std::size_t k = 1; k < gen.size(); ++k) {
      if (spherical_C(m, gen[k]) != c0) {
        res = {false, t, gen.front(), gen[k]};
        return res;
      }
    }
  }
  return res;
}

/// Spherical Cauchy dual: weights divided by C(parent). Squared weights on
/// the top generation use C of their (enumerated) parents.
inline Multishift cauchy_dual(const Multishift& m) {
  const auto& p = m.product();
  std::vector<std::optional<Rational>> cval(p.size());
  auto C = [&](std::size_t vi) -> const Rational& {
    if (!cval[vi]) {
      Rational c = spherical_C(m, vi);
      if (c <= 0) fail(ErrorKind::NotLeftInvertible, "C vanishes at " + p.describe(p.vertex(vi)));
      cval[vi] = c;
    }
    return *cval[vi];
  };
  SquaredWeights sq = m.squared_weights();
  for (std::size_t j = 0; j < p.dim(); ++j)
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (p.vertex(i)[j] == RootedTreePrefix::root()) continue;
      const Rational& c = C(p.index(p.par(p.vertex(i), j)));
      sq[j][i] /= c * c;
    }
  Multishift out = Multishift::from_table(m.product_ptr(), std::move(sq));
  // C(v) = c(|d_v|) for the family, so the dual is the family for 1/c.
  if (m.family_sequence()) out.family_ = m.family_sequence()->reciprocal();
  return out;
}

// ---- moments ----------------------------------------------------------------

/// ||S^alpha e_u||^2 for the family with sequence c, from the depth of u alone:
/// (d_u+alpha)!/d_u! * prod_{j<|alpha|} c(|d_u|+j)/(|d_u|+d+j).
inline Rational moment_norm_sq_closed(const WeightSequence& c, std::size_t d, const MultiIndex& du,
                                      const MultiIndex& alpha) {
  Rational r(multi_factorial(add(du, alpha)), multi_factorial(du));
  r.canonicalize();
  const long base = total(du);
  for (int j = 0; j < total(alpha); ++j)
    r *= c.at(base + j, d) / Rational(base + static_cast<long>(d) + j);
  return r;
}

inline Rational moment_norm_sq(const Multishift& m, const MultiIndex& alpha, std::size_t vi) {
  if (!m.family_sequence()) fail(ErrorKind::InvalidParameter, "closed-form moments need family weights");
  return moment_norm_sq_closed(*m.family_sequence(), m.dim(), m.product().depth(m.product().vertex(vi)), alpha);
}

/// ||S^alpha e_v||^2 by applying the operators with exact square-root weights.
inline Rational moment_norm_sq_oracle(const Multishift& m, const MultiIndex& alpha, std::size_t vi) {
  const auto x = apply_S_alpha(m, alpha, basis_vector<Radical>(m.product(), vi));
  return inner(x, x).rational_value();
}

// ---- constancy predicates ---------------------------------------------------

/// A function on the enumerated vertices, by basis index.
using VertexFunction = std::vector<Rational>;

struct ConstancyCheck {
  bool ok = true;
  std::size_t first = 0, second = 0;
};

namespace detail {

inline ConstancyCheck constant_on(const ProductTree& p, const VertexFunction& f, const std::vector<VertexRef>& set) {
  for (std::size_t k = 1; k < set.size(); ++k) {
    const std::size_t a = p.index(set.front()), b = p.index(set[k]);
    if (f[a] != f[b]) return {false, a, b};
  }
  return {};
}

inline std::vector<VertexRef> refs(const ProductTree& p, const std::vector<std::size_t>& idx) {
  std::vector<VertexRef> out;
  for (auto i : idx) out.push_back(p.vertex(i));
  return out;
}

}  // namespace detail

/// f constant on Par(v) for every non-root enumerated v.
inline ConstancyCheck check_constant_on_parents(const ProductTree& p, const VertexFunction& f) {
  for (std::size_t i = 1; i < p.size(); ++i) {
    auto c = detail::constant_on(p, f, p.Par(p.vertex(i)));
    if (!c.ok) return c;
  }
  return {};
}

/// f constant on Chi(v) for |d_v| <= max_depth (< D).
inline ConstancyCheck check_constant_on_children(const ProductTree& p, const VertexFunction& f, int max_depth) {
  for (std::size_t i = 0; i < p.count_upto(std::min(max_depth, p.total_depth_bound() - 1)); ++i) {
    auto c = detail::constant_on(p, f, p.Chi(p.vertex(i)));
    if (!c.ok) return c;
  }
  return {};
}

/// f constant on each generation G_t, t <= max_generation.
inline ConstancyCheck check_constant_on_generations(const ProductTree& p, const VertexFunction& f,
                                                    int max_generation) {
  for (int t = 0; t <= std::min(max_generation, p.total_depth_bound()); ++t) {
    auto c = detail::constant_on(p, f, detail::refs(p, p.generation(t)));
    if (!c.ok) return c;
  }
  return {};
}

/// f constant on each depth slice V_beta, |beta| <= max_generation.
inline ConstancyCheck check_constant_on_slices(const ProductTree& p, const VertexFunction& f, int max_generation) {
  std::map<MultiIndex, std::vector<VertexRef>> slices;
  for (std::size_t i = 0; i < p.count_upto(max_generation); ++i) slices[p.depth(p.vertex(i))].push_back(p.vertex(i));
  for (const auto& [beta, set] : slices) {
    auto c = detail::constant_on(p, f, set);
    if (!c.ok) return c;
  }
  return {};
}

/// Parents-versus-generations report on a truncation. A vertex of G_t appears
/// in some Par set only through G_{t+1}, so generation constancy is inferred
/// for t <= D-1; child constancy needs two further levels (|d_v| <= D-2).
struct ParentsGenerationsReport {
  std::size_t d = 0;
  int depth = 0;
  bool par_constant = false;
  bool chi_constant = false;
  bool slice_constant = false;
  bool generation_constant = false;
  /// par_constant implies generation_constant on this truncation
  bool implication_holds = false;
  ConstancyCheck generation_witness;
};

inline ParentsGenerationsReport verify_parents_generations(const ProductTree& p, const VertexFunction& f) {
  ParentsGenerationsReport r;
  r.d = p.dim();
  r.depth = p.total_depth_bound();
  r.par_constant = check_constant_on_parents(p, f).ok;
  r.chi_constant = check_constant_on_children(p, f, r.depth - 2).ok;
  r.slice_constant = check_constant_on_slices(p, f, r.depth - 1).ok;
  r.generation_witness = check_constant_on_generations(p, f, r.depth - 1);
  r.generation_constant = r.generation_witness.ok;
  r.implication_holds = !r.par_constant || r.generation_constant;
  return r;
}

/// Classes of the finest partition on which "constant on every Par(v)"
/// holds: the equivalence closure of the Par sets. Returns a class id per
/// basis index (ids are the smallest member index).
inline std::vector<std::size_t> parent_closure_classes(const ProductTree& p) {
  std::vector<std::size_t> rank(p.size()), parent(p.size());
  boost::disjoint_sets<std::size_t*, std::size_t*> ds(rank.data(), parent.data());
  for (std::size_t i = 0; i < p.size(); ++i) ds.make_set(i);
  for (std::size_t i = 1; i < p.size(); ++i) {
    const auto par = p.Par(p.vertex(i));
    for (std::size_t k = 1; k < par.size(); ++k) ds.union_set(p.index(par.front()), p.index(par[k]));
  }
  std::vector<std::size_t> smallest(p.size(), p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    auto r = ds.find_set(i);
    if (smallest[r] == p.size()) smallest[r] = i;
  }
  std::vector<std::size_t> cls(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) cls[i] = smallest[ds.find_set(i)];
  return cls;
}

}  // namespace dartree

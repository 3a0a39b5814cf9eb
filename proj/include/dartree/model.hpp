#pragma once

/**
 * @file model.hpp
 * @brief Reproducing-kernel coefficients, sphere moment constants, moment
 *        sequences and the densities of their representing measures.
 */

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "dartree/cokernel.hpp"
#include "dartree/error.hpp"
#include "dartree/linalg.hpp"
#include "dartree/multiindex.hpp"
#include "dartree/multishift.hpp"
#include "dartree/radical.hpp"
#include "dartree/rational.hpp"
#include "dartree/weights.hpp"

namespace dartree {

// ---- kernel coefficients ----------------------------------------------------

/// d_u!/(d_u+alpha)! * prod_{j<|alpha|} (|d_u|+d+j)/c(|d_u|+j).
inline Rational kernel_coeff_closed(const WeightSequence& c, std::size_t d, const MultiIndex& du,
                                    const MultiIndex& alpha) {
  return 1 / moment_norm_sq_closed(c, d, du, alpha);
}

namespace detail {

inline Vec2<Radical> embed(const ProductTree& p, const KernelBlock& b, const RatVector& row) {
  Vec2<Radical> f(p.size());
  for (std::size_t c = 0; c < row.size(); ++c)
    if (row[c] != 0) f[p.index(b.support[c])] = Radical(row[c]);
  return f;
}

}  // namespace detail

/// Inverts S*^alpha S^alpha on the block: applies it to every basis vector,
/// checks the result is one common multiple of the input, returns 1/multiple.
inline Rational kernel_coeff_oracle(const Multishift& m, const KernelBlock& b, const MultiIndex& alpha) {
  if (b.basis.empty()) fail(ErrorKind::EmptyBlock, "block has no basis vectors");
  const auto& p = m.product();
  std::optional<Rational> scalar;
  for (const auto& row : b.basis) {
    const auto f = detail::embed(p, b, row);
    const auto g = apply_S_alpha_adjoint(m, alpha, apply_S_alpha(m, alpha, f));
    std::size_t pivot = 0;
    while (f[pivot].is_zero()) ++pivot;
    const Rational s = g[pivot].rational_value() / f[pivot].rational_value();
    for (std::size_t i = 0; i < p.size(); ++i)
      if (g[i] != Radical(s) * f[i])
        fail(ErrorKind::InvalidParameter, "S*^a S^a is not scalar on the block at " + p.describe(p.vertex(i)));
    if (scalar && *scalar != s) fail(ErrorKind::InvalidParameter, "S*^a S^a has two eigenvalues on one block");
    scalar = s;
  }
  return 1 / *scalar;
}

// ---- kernel evaluation ------------------------------------------------------

using Point = std::vector<std::complex<double>>;

struct KernelEvaluation {
  /// kappa(z, w) is diagonal in an orthonormal basis adapted to the blocks;
  /// entry i belongs to block block_of[i].
  std::vector<std::complex<double>> diagonal;
  std::vector<std::size_t> block_of;
  double radius = 0;
  int max_order = 0;
  /// Bound on the omitted terms |alpha| > max_order of every entry.
  double tail_bound = 0;
};

inline double point_norm(const Point& z) {
  double s = 0;
  for (const auto& x : z) s += std::norm(x);
  return std::sqrt(s);
}

/// Partial sum of sum_alpha coeff(u, alpha) z^alpha conj(w)^alpha per block.
inline KernelEvaluation kernel_eval(const ProductTree& p, const std::vector<KernelBlock>& blocks,
                                    const WeightSequence& c, const Point& z, const Point& w, int max_order) {
  const std::size_t d = p.dim();
  if (z.size() != d || w.size() != d) fail(ErrorKind::InvalidParameter, "points must have d coordinates");
  const double inf_c = to_double(c.inf(d));
  KernelEvaluation ev;
  ev.radius = std::min(inf_c, 1.0);
  ev.max_order = max_order;
  if (point_norm(z) >= ev.radius || point_norm(w) >= ev.radius)
    fail(ErrorKind::PointOutsideDomain, "points must lie in the open ball of radius " + std::to_string(ev.radius));

  const auto alphas = multiindices_upto(d, max_order);
  int deepest = 0;
  for (std::size_t bi = 0; bi < blocks.size(); ++bi) {
    const auto& b = blocks[bi];
    if (b.dim_closed == 0) continue;
    deepest = std::max(deepest, total(b.depth));
    std::complex<double> val = 0;
    for (const auto& a : alphas) {
      std::complex<double> mono = 1;
      for (std::size_t j = 0; j < d; ++j)
        for (int r = 0; r < a[j]; ++r) mono *= z[j] * std::conj(w[j]);
      val += to_double(kernel_coeff_closed(c, d, b.depth, a)) * mono;
    }
    for (std::size_t k = 0; k < b.dim_closed; ++k) {
      ev.diagonal.push_back(val);
      ev.block_of.push_back(bi);
    }
  }
  // Level n is dominated by (m)_n/n! t^n with m = |d_u|+d and
  // t = sum_i |z_i w_i| / inf c; successive ratios (m+n)/(n+1) t decrease.
  double t = 0;
  for (std::size_t j = 0; j < d; ++j) t += std::abs(z[j] * w[j]);
  t /= inf_c;
  const double mm = deepest + static_cast<double>(d);
  const int n1 = max_order + 1;
  double term = 1;
  for (int n = 0; n < n1; ++n) term *= (mm + n) / (n + 1) * t;
  const double rho = (mm + n1) / (n1 + 1) * t;
  ev.tail_bound = rho < 1 ? term / (1 - rho) : std::numeric_limits<double>::infinity();
  return ev;
}

// ---- sphere moments ---------------------------------------------------------

/// (alpha+beta)!/beta! * prod_{j<|alpha|} 1/(|beta|+d+j).
inline Rational spherical_Q(const MultiIndex& beta, const MultiIndex& alpha, std::size_t d) {
  Rational q(multi_factorial(add(alpha, beta)), multi_factorial(beta));
  q.canonicalize();
  const long b = total(beta);
  for (int j = 0; j < total(alpha); ++j) q /= Rational(b + static_cast<long>(d) + j);
  return q;
}

// ---- moment sequences -------------------------------------------------------

struct MomentSequence {
  WeightSequence c;
  std::size_t d = 1;
  /// a_0 .. a_N with a_n = prod_{j<n} c(j)
  std::vector<Rational> values;
  Rational bound;

  static MomentSequence make(const WeightSequence& c, std::size_t d, std::size_t n_max) {
    MomentSequence s{c, d, {Rational(1)}, c.sup(d)};
    for (std::size_t n = 1; n <= n_max; ++n) s.values.push_back(s.values.back() * c.at(static_cast<long>(n) - 1, d));
    return s;
  }
};

struct HausdorffResult {
  bool pass = true;
  int order = 0;  ///< K used
  int k = -1;     ///< first failing difference order
  int n = -1;     ///< and position
  Rational value; ///< the negative value found
};

/// Finite-order complete monotonicity of a_n / b^n with b = sup c:
/// (-1)^k Delta^k at n >= 0 for k <= K and n + k <= N.
inline HausdorffResult hausdorff_check(const MomentSequence& seq, int order) {
  HausdorffResult r;
  r.order = order;
  std::vector<Rational> row;
  Rational scale = 1;
  for (const auto& a : seq.values) {
    row.push_back(a / scale);
    scale *= seq.bound;
  }
  for (int k = 0; k <= order && !row.empty(); ++k) {
    for (std::size_t n = 0; n < row.size(); ++n) {
      const Rational signed_diff = (k % 2 == 0) ? row[n] : Rational(-row[n]);
      if (signed_diff < 0) {
        r.pass = false;
        r.k = k;
        r.n = static_cast<int>(n);
        r.value = signed_diff;
        return r;
      }
    }
    std::vector<Rational> next;
    for (std::size_t n = 0; n + 1 < row.size(); ++n) next.push_back(row[n + 1] - row[n]);
    row = std::move(next);
  }
  return r;
}

// ---- representing densities -------------------------------------------------

enum class DensityKind { W, Omega, Delta1 };

inline std::string to_string(DensityKind k) {
  switch (k) {
    case DensityKind::W: return "w";
    case DensityKind::Omega: return "omega";
    case DensityKind::Delta1: return "delta_1";
  }
  return "?";
}

struct DensityPolynomial {
  DensityKind kind = DensityKind::Delta1;
  long a = 1, d = 1, l = 0;
  /// coefficients[i] multiplies s^i; empty for the point mass at 1.
  std::vector<Rational> coefficients;
};

/// The sequence whose shifted moments the density reproduces: c_a when
/// a >= d, its reciprocal when a < d.
inline WeightSequence regime_sequence(long a, long d) {
  return a >= d ? WeightSequence::c_a(Rational(a)) : WeightSequence::recip_c_a(Rational(a));
}

/// Density on [0,1] of the measure with moments a_{n+l}/a_l. With p < q the
/// integer pair (min, max) of (a, d):
///   prod_{m=l+p}^{l+q-1} m * sum_{i=p}^{q-1} s^{i+l-1} / prod_{p<=j<=q-1, j!=i} (j-i).
inline DensityPolynomial density(long a, long d, long l, std::optional<DensityKind> requested = std::nullopt) {
  if (a < 1 || d < 1 || l < 0) fail(ErrorKind::InvalidParameter, "need integers a, d >= 1 and l >= 0");
  DensityPolynomial poly;
  poly.a = a;
  poly.d = d;
  poly.l = l;
  if (requested == DensityKind::W && a < d) fail(ErrorKind::WrongRegime, "the w density needs a >= d");
  if (requested == DensityKind::Omega && a > d) fail(ErrorKind::WrongRegime, "the omega density needs a < d");
  if (requested == DensityKind::Delta1 && a != d) fail(ErrorKind::WrongRegime, "the point mass at 1 needs a = d");
  if (a == d) return poly;
  poly.kind = a > d ? DensityKind::W : DensityKind::Omega;
  const long lo = std::min(a, d), hi = std::max(a, d);
  Rational lead = 1;
  for (long m = l + lo; m <= l + hi - 1; ++m) lead *= Rational(m);
  poly.coefficients.assign(static_cast<std::size_t>(hi + l - 1), Rational(0));
  for (long i = lo; i <= hi - 1; ++i) {
    Rational den = 1;
    for (long j = lo; j <= hi - 1; ++j)
      if (j != i) den *= Rational(j - i);
    poly.coefficients[static_cast<std::size_t>(i + l - 1)] += lead / den;
  }
  return poly;
}

/// int_0^1 s^n dmu for the density (exact).
inline Rational density_moment(const DensityPolynomial& poly, long n) {
  if (poly.kind == DensityKind::Delta1) return 1;
  Rational s = 0;
  for (std::size_t i = 0; i < poly.coefficients.size(); ++i)
    if (poly.coefficients[i] != 0) s += poly.coefficients[i] / Rational(n + static_cast<long>(i) + 1);
  return s;
}

inline double density_value(const DensityPolynomial& poly, double s) {
  double v = 0, pw = 1;
  for (const auto& c : poly.coefficients) {
    v += c.get_d() * pw;
    pw *= s;
  }
  return v;
}

/// a_{n+l}/a_l for the regime sequence.
inline Rational shifted_moment_target(long a, long d, long l, long n) {
  const auto c = regime_sequence(a, d);
  Rational r = 1;
  for (long j = l; j < n + l; ++j) r *= c.at(j, static_cast<std::size_t>(d));
  return r;
}

struct MomentCheckEntry {
  long n = 0;
  Rational lhs, rhs;
  bool ok = false;
};

struct DensityMomentReport {
  DensityPolynomial density;
  std::vector<MomentCheckEntry> entries;
  bool all_ok = true;
};

inline DensityMomentReport verify_density_moments(long a, long d, long l, long max_n) {
  DensityMomentReport r;
  r.density = density(a, d, l);
  for (long n = 0; n <= max_n; ++n) {
    MomentCheckEntry e{n, density_moment(r.density, n), shifted_moment_target(a, d, l, n), false};
    e.ok = e.lhs == e.rhs;
    r.all_ok = r.all_ok && e.ok;
    r.entries.push_back(std::move(e));
  }
  return r;
}

// ---- integral representation ------------------------------------------------

struct IntegralRepresentation {
  Rational norm_ratio;  ///< ||S^alpha f||^2 / ||f||^2 from the operators
  Rational a_ratio;     ///< a_{|alpha|+|d_u|} / a_{|d_u|}
  Rational rho_moment;  ///< int s^{|alpha|} d rho_u from the density
  Rational nu_moment;   ///< Q(d_u, alpha)
  bool ok = false;
};

/// For the family with sequence c_a (a >= d) or 1/c_a (a < d): the norm ratio
/// of S^alpha on the block equals (a-ratio) Q(d_u, alpha), and the a-ratio is
/// the |alpha|-th moment of the density with shift l = |d_u|.
inline IntegralRepresentation integral_representation_check(const Multishift& m, long a, const KernelBlock& b,
                                                            const MultiIndex& alpha) {
  const long d = static_cast<long>(m.dim());
  if (!m.family_sequence() || !(*m.family_sequence() == regime_sequence(a, d)))
    fail(ErrorKind::WrongRegime, "multishift is not the family for " + regime_sequence(a, d).str());
  if (b.basis.empty()) fail(ErrorKind::EmptyBlock, "block has no basis vectors");
  const auto& p = m.product();
  const auto f = detail::embed(p, b, b.basis.front());
  const auto g = apply_S_alpha(m, alpha, f);
  IntegralRepresentation r;
  r.norm_ratio = inner(g, g).rational_value() / inner(f, f).rational_value();
  const long l = total(b.depth);
  const long n = total(alpha);
  const auto seq = MomentSequence::make(*m.family_sequence(), m.dim(), static_cast<std::size_t>(n + l));
  r.a_ratio = seq.values[static_cast<std::size_t>(n + l)] / seq.values[static_cast<std::size_t>(l)];
  r.rho_moment = density_moment(density(a, d, l), n);
  r.nu_moment = spherical_Q(b.depth, alpha, m.dim());
  r.ok = r.norm_ratio == r.a_ratio * r.nu_moment && r.a_ratio == r.rho_moment;
  return r;
}

}  // namespace dartree

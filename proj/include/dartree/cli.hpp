#pragma once

/**
 * @file cli.hpp
 * @brief Command-line front end: validate, report, classify, verify, measure.
 *
 * Every command writes one JSON document to `out`. Rationals are strings
 * ("p/q"); floats appear only in intertwiner residuals.
 * Exit codes: 0 success / isomorphic, 1 negative result, 2 undecided,
 * 3 input error.
 */

#include <cstddef>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "dartree/classify.hpp"
#include "dartree/cokernel.hpp"
#include "dartree/error.hpp"
#include "dartree/model.hpp"
#include "dartree/multishift.hpp"
#include "dartree/product.hpp"
#include "dartree/trees.hpp"
#include "dartree/weights.hpp"

namespace dartree::cli {

enum ExitCode : int { kOk = 0, kNegative = 1, kUndecided = 2, kInputError = 3 };

namespace detail {

inline Json ids_json(const std::vector<long>& ids) {
  Json a = Json::array();
  for (long x : ids) a.push_back(x);
  return a;
}

inline Json ints_json(const std::vector<int>& v) {
  Json a = Json::array();
  for (int x : v) a.push_back(x);
  return a;
}

inline Json subset_json(Subset f, std::size_t d) {
  Json a = Json::array();
  for (auto j : members(f, d)) a.push_back(j + 1);
  return a;
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep))
    if (!item.empty()) out.push_back(item);
  return out;
}

inline TreeSet load_set(const std::string& list) {
  TreeSet out;
  for (const auto& path : split(list, ',')) out.push_back(load_tree(path));
  if (out.empty()) fail(ErrorKind::MalformedInput, "empty tree list");
  return out;
}

inline int branching_sum(const TreeSet& ts) {
  int s = 0;
  for (const auto& t : ts) s += t.branching_index();
  return s;
}

inline std::string fmt_double(double x) {
  std::ostringstream os;
  os << std::setprecision(6) << std::scientific << x;
  return os.str();
}

/// The weight sequence from --c, or c_a from --a.
inline WeightSequence weight_option(const std::string& c_text, const std::string& a_text) {
  if (!c_text.empty()) return parse_weight_sequence(c_text);
  if (a_text.empty()) fail(ErrorKind::MalformedInput, "either --c or --a is required");
  return WeightSequence::c_a(parse_rational(a_text));
}

/// Factors truncated above `depth` get their implied rays appended.
inline ProductPtr product_for(const TreeSet& ts, int depth) {
  TreeSet ext;
  for (const auto& t : ts) ext.push_back(extend_rays(t, depth));
  return build_product(ext, depth);
}

inline Json validate_cmd(const std::string& path) {
  const auto t = load_tree(path);
  Json j;
  j["name"] = t.name();
  j["truncation_depth"] = t.truncation_depth();
  j["vertices"] = t.size();
  j["branching_index"] = t.branching_index();
  Json g = Json::array();
  for (long x : generation_table(t, t.truncation_depth())) g.push_back(x);
  j["generations"] = g;
  j["canonical_form"] = canonical_form(t);
  return j;
}

struct ReportOptions {
  std::string trees, c, a;
  int depth = -1;
  int max_alpha = 4;
};

inline Json report_cmd(const ReportOptions& o) {
  const TreeSet ts = load_set(o.trees);
  const int depth = o.depth >= 0 ? o.depth : branching_sum(ts) + 2;
  const auto c = weight_option(o.c, o.a);
  const auto p = product_for(ts, depth);
  const auto m = Multishift::family(p, c);
  const std::size_t d = p->dim();

  Json j;
  Json names = Json::array();
  for (const auto& t : ts) names.push_back(t.name());
  j["factors"] = names;
  j["d"] = d;
  j["depth"] = depth;
  j["c"] = c.str();
  j["vertices"] = p->size();

  const auto blocks = enumerate_blocks(*p);
  Json bl = Json::array();
  std::size_t dimE = 0;
  for (const auto& b : blocks) {
    Json e;
    e["F"] = subset_json(b.F, d);
    e["u"] = ids_json(p->external_ids(b.u));
    e["depth"] = ints_json(b.depth);
    e["M"] = b.M;
    e["N"] = b.N;
    e["dim"] = b.dim_closed;
    dimE += b.dim_closed;
    bl.push_back(e);
  }
  j["dim_E"] = dimE;
  j["blocks"] = bl;
  if (depth >= 1 + branching_sum(ts)) {
    j["joint_kernel_dim"] = joint_kernel_bruteforce(m).size();
  } else {
    j["joint_kernel_dim"] = nullptr;
  }

  std::size_t checked = 0, agree = 0;
  for (std::size_t vi = 0; vi < p->size(); ++vi)
    for (const auto& alpha : multiindices_upto(d, std::min(o.max_alpha, depth - p->total_depth(vi)))) {
      ++checked;
      if (moment_norm_sq(m, alpha, vi) == moment_norm_sq_oracle(m, alpha, vi)) ++agree;
    }
  Json mc;
  mc["checked"] = checked;
  mc["agree"] = agree;
  mc["ok"] = checked == agree;
  j["moment_check"] = mc;

  Json kc = Json::array();
  for (std::size_t bi = 0; bi < blocks.size(); ++bi) {
    const auto& b = blocks[bi];
    for (const auto& alpha : multiindices_upto(d, o.max_alpha)) {
      Json e;
      e["block"] = bi;
      e["alpha"] = ints_json(alpha);
      const Rational closed = kernel_coeff_closed(c, d, b.depth, alpha);
      e["value"] = to_string(closed);
      if (total(b.depth) + total(alpha) <= depth) {
        e["oracle_agrees"] = kernel_coeff_oracle(m, b, alpha) == closed;
      } else {
        e["oracle_agrees"] = nullptr;
      }
      kc.push_back(e);
    }
  }
  j["kernel_coefficients"] = kc;
  return j;
}

struct ClassifyOptions {
  std::string first, second;
  long a = 0;
  bool intertwiner = false;
  int depth = -1;
  double tol = 1e-9;
};

inline Json table_json(const std::vector<std::vector<long>>& t) {
  Json a = Json::array();
  for (const auto& row : t) {
    Json r = Json::array();
    for (long x : row) r.push_back(x);
    a.push_back(r);
  }
  return a;
}

inline Json condition_json(const ConditionTable& t) {
  Json j;
  j["equal"] = t.equal;
  j["n_max"] = t.n_max;
  j["complete"] = t.complete;
  j["first"] = table_json(t.first);
  j["second"] = table_json(t.second);
  if (t.witness) {
    Json w;
    w["factor"] = t.witness->factor + 1;
    w["n"] = t.witness->n;
    j["witness"] = w;
  } else {
    j["witness"] = nullptr;
  }
  return j;
}

inline Json classify_cmd(const ClassifyOptions& o, int& code) {
  const TreeSet a = load_set(o.first);
  const TreeSet b = load_set(o.second);
  const auto r = modules_isomorphic(a, b, o.a);
  const std::size_t d = a.size();
  Json j;
  j["d"] = d;
  j["a"] = o.a;
  j["decision"] = to_string(r.decision);
  j["graph_isomorphic"] = r.graph_isomorphic;
  j["conditions_agree"] = r.conditions_agree;
  j["condition_iv"] = condition_json(r.generations);
  j["condition_iii"] = condition_json(r.surpluses);
  Json ii;
  ii["equal"] = r.block_sums.equal;
  ii["factorization_ok"] = r.block_sums.factorization_ok;
  Json entries = Json::array();
  for (const auto& e : r.block_sums.entries) {
    if (e.first == 0 && e.second == 0) continue;
    Json x;
    x["F"] = subset_json(e.F, d);
    x["alpha"] = ints_json(e.alpha);
    x["first"] = e.first;
    x["second"] = e.second;
    entries.push_back(x);
  }
  ii["nonzero_entries"] = entries;
  j["condition_ii"] = ii;

  code = r.decision == Decision::Isomorphic ? kOk : r.decision == Decision::NotIsomorphic ? kNegative : kUndecided;
  if (o.intertwiner && r.decision == Decision::Isomorphic) {
    const int depth = o.depth >= 0 ? o.depth : std::max(branching_sum(a), branching_sum(b)) + 2;
    const auto cert = build_intertwiner(product_for(a, depth), product_for(b, depth), o.a, o.tol);
    Json c;
    c["depth"] = cert.depth;
    c["card_V"] = cert.card_V;
    c["spanned_first"] = cert.spanned_first;
    c["spanned_second"] = cert.spanned_second;
    c["complete"] = cert.complete;
    c["unitarity_residual"] = fmt_double(cert.unitarity_residual);
    c["intertwining_residual"] = fmt_double(cert.intertwining_residual);
    c["norm_mismatch"] = fmt_double(cert.norm_mismatch);
    c["certified"] = cert.certified;
    Json pr = Json::array();
    for (const auto& x : cert.pairings) {
      Json e;
      e["F"] = subset_json(x.F, d);
      e["alpha"] = ints_json(x.alpha);
      e["dim"] = x.dim;
      pr.push_back(e);
    }
    c["pairings"] = pr;
    j["intertwiner"] = c;
  }
  return j;
}

struct Tally {
  std::string name;
  std::size_t passed = 0, failed = 0;
  void add(bool ok) { ok ? ++passed : ++failed; }
};

inline Json verify_cmd(const ReportOptions& o, int& code) {
  const TreeSet ts = load_set(o.trees);
  const int bound = branching_sum(ts);
  const int depth = o.depth >= 0 ? o.depth : bound + 2;
  const auto c = weight_option(o.c, o.a);
  const auto p = product_for(ts, depth);
  const auto m = Multishift::family(p, c);
  const std::size_t d = p->dim();
  std::vector<Tally> tallies;

  Tally commuting{"commuting"};
  commuting.add(check_commuting(m).ok);
  tallies.push_back(commuting);

  Tally balanced{"balanced"};
  balanced.add(check_balanced(m).ok);
  for (std::size_t vi = 0; vi < p->count_upto(depth - 1); ++vi)
    balanced.add(spherical_C(m, vi) == c.at(p->total_depth(vi), d));
  tallies.push_back(balanced);

  Tally dual{"cauchy_dual"};
  {
    const auto md = cauchy_dual(m);
    dual.add(md.squared_weights() == Multishift::family(p, c.reciprocal()).squared_weights());
    dual.add(cauchy_dual(md).squared_weights() == m.squared_weights());
  }
  tallies.push_back(dual);

  Tally dims{"block_dimensions"};
  const auto blocks = enumerate_blocks(*p, true);
  std::size_t dimE = 0;
  for (const auto& b : blocks) {
    dimE += b.dim_closed;
    if (b.F == 0) continue;
    const auto brute = block_basis_bruteforce(b.system, b.support.size());
    dims.add(brute.size() == b.dim_closed && rank(b.basis) == b.dim_closed && (b.dim_closed == 0 || same_span(brute, b.basis)));
    dims.add(b.system.size() == b.N && b.support.size() == b.M);
  }
  if (depth >= 1 + bound) dims.add(joint_kernel_bruteforce(m).size() == dimE);
  tallies.push_back(dims);

  Tally moments{"moments"};
  Tally spgen{"spherical_sums"};
  for (std::size_t vi = 0; vi < p->size(); ++vi) {
    const int room = std::min(o.max_alpha, depth - p->total_depth(vi));
    for (const auto& alpha : multiindices_upto(d, room))
      moments.add(moment_norm_sq(m, alpha, vi) == moment_norm_sq_oracle(m, alpha, vi));
    for (int n = 0; n <= room; ++n) {
      Rational lhs = 0;
      for (const auto& alpha : multiindices(d, n))
        lhs += make_rational(factorial(static_cast<unsigned long>(n)), multi_factorial(alpha)) * moment_norm_sq_oracle(m, alpha, vi);
      Rational rhs = 1;
      for (int q = 0; q < n; ++q) rhs *= c.at(p->total_depth(vi) + q, d);
      spgen.add(lhs == rhs);
    }
  }
  tallies.push_back(moments);
  tallies.push_back(spgen);

  Tally kernel{"kernel_coefficients"};
  for (const auto& b : blocks) {
    if (b.dim_closed == 0) continue;
    for (const auto& alpha : multiindices_upto(d, std::min(o.max_alpha, depth - total(b.depth))))
      kernel.add(kernel_coeff_oracle(m, b, alpha) == kernel_coeff_closed(c, d, b.depth, alpha));
  }
  tallies.push_back(kernel);

  const bool integer_family = (c.kind() == WeightSequence::Kind::RationalFamily ||
                               c.kind() == WeightSequence::Kind::ReciprocalFamily) &&
                              c.parameter().get_den() == 1;
  if (integer_family) {
    const long a = c.parameter().get_num().get_si();
    Tally dens{"density_moments"};
    if (regime_sequence(a, static_cast<long>(d)) == c) {
      for (long l = 0; l <= 4; ++l) dens.add(verify_density_moments(a, static_cast<long>(d), l, 20).all_ok);
      for (const auto& b : blocks) {
        if (b.dim_closed == 0) continue;
        for (const auto& alpha : multiindices_upto(d, std::min(o.max_alpha, depth - total(b.depth))))
          dens.add(integral_representation_check(m, a, b, alpha).ok);
      }
    }
    tallies.push_back(dens);
  }

  Json j;
  j["depth"] = depth;
  j["c"] = c.str();
  Json arr = Json::array();
  std::size_t passed = 0, failed = 0;
  for (const auto& t : tallies) {
    Json e;
    e["name"] = t.name;
    e["passed"] = t.passed;
    e["failed"] = t.failed;
    arr.push_back(e);
    passed += t.passed;
    failed += t.failed;
  }
  j["checks"] = arr;
  j["passed"] = passed;
  j["failed"] = failed;
  code = failed == 0 ? kOk : kNegative;
  return j;
}

struct MeasureOptions {
  long a = 0, d = 0, l = 0, max_n = 20;
};

inline Json measure_cmd(const MeasureOptions& o, int& code) {
  const auto rep = verify_density_moments(o.a, o.d, o.l, o.max_n);
  Json j;
  j["kind"] = to_string(rep.density.kind);
  j["a"] = o.a;
  j["d"] = o.d;
  j["l"] = o.l;
  Json coeffs = Json::array();
  for (const auto& q : rep.density.coefficients) coeffs.push_back(to_string(q));
  j["coefficients"] = coeffs;
  Json mc = Json::array();
  for (const auto& e : rep.entries) {
    Json x;
    x["n"] = e.n;
    x["lhs"] = to_string(e.lhs);
    x["rhs"] = to_string(e.rhs);
    x["ok"] = e.ok;
    mc.push_back(x);
  }
  j["moment_check"] = mc;
  j["all_ok"] = rep.all_ok;
  const auto hc = hausdorff_check(MomentSequence::make(regime_sequence(o.a, o.d), static_cast<std::size_t>(o.d), 40), 20);
  Json h;
  h["order"] = hc.order;
  h["pass"] = hc.pass;
  j["hausdorff"] = h;
  code = rep.all_ok ? kOk : kNegative;
  return j;
}

inline Json error_json(const std::string& kind, const std::string& message) {
  Json e;
  e["kind"] = kind;
  e["message"] = message;
  Json j;
  j["error"] = e;
  return j;
}

}  // namespace detail

/// Runs one command; args exclude the program name.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"multishift, kernel and classification tool for products of rooted trees", "dartree"};
  app.require_subcommand(1);

  std::string validate_path;
  auto* validate = app.add_subcommand("validate", "check a tree spec and summarize it");
  validate->add_option("tree", validate_path, "tree-spec JSON file")->required();

  detail::ReportOptions ro;
  auto* report = app.add_subcommand("report", "kernel blocks, dim E and kernel coefficients");
  report->add_option("trees", ro.trees, "comma-separated tree-spec files, one per factor")->required();
  report->add_option("--c", ro.c, "weight sequence, e.g. c_a:3 or table:2,1,1;eventual=1");
  report->add_option("--a", ro.a, "parameter a of c_a (used when --c is absent)");
  report->add_option("--depth", ro.depth, "total depth bound (default: branching bound + 2)");
  report->add_option("--max-alpha", ro.max_alpha, "largest |alpha|")->check(CLI::NonNegativeNumber);

  detail::ReportOptions vo;
  auto* verify = app.add_subcommand("verify", "run every closed-form versus oracle check");
  verify->add_option("trees", vo.trees, "comma-separated tree-spec files")->required();
  verify->add_option("--c", vo.c, "weight sequence");
  verify->add_option("--a", vo.a, "parameter a of c_a");
  verify->add_option("--depth", vo.depth, "total depth bound");
  verify->add_option("--max-alpha", vo.max_alpha, "largest |alpha|")->check(CLI::NonNegativeNumber);

  detail::ClassifyOptions co;
  auto* classify = app.add_subcommand("classify", "decide module isomorphism of two tree products");
  classify->add_option("first", co.first, "comma-separated tree-spec files")->required();
  classify->add_option("second", co.second, "comma-separated tree-spec files")->required();
  classify->add_option("--a", co.a, "positive integer a")->required()->check(CLI::PositiveNumber);
  classify->add_flag("--intertwiner", co.intertwiner, "also build and check an intertwining unitary");
  classify->add_option("--depth", co.depth, "depth bound for the intertwiner");
  classify->add_option("--tol", co.tol, "residual tolerance");

  detail::MeasureOptions mo;
  auto* measure = app.add_subcommand("measure", "density of the representing measure and its moments");
  measure->add_option("--a", mo.a, "positive integer a")->required()->check(CLI::PositiveNumber);
  measure->add_option("--d", mo.d, "positive integer d")->required()->check(CLI::PositiveNumber);
  measure->add_option("--l", mo.l, "shift l >= 0")->check(CLI::NonNegativeNumber);
  measure->add_option("--max-n", mo.max_n, "largest moment index")->check(CLI::NonNegativeNumber);

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    out << detail::error_json("MalformedInput", e.what()).dump(2) << "\n";
    err << "error: " << e.what() << "\n";
    return kInputError;
  }

  int code = kOk;
  try {
    Json result;
    if (*validate) result = detail::validate_cmd(validate_path);
    if (*report) result = detail::report_cmd(ro);
    if (*verify) result = detail::verify_cmd(vo, code);
    if (*classify) result = detail::classify_cmd(co, code);
    if (*measure) result = detail::measure_cmd(mo, code);
    out << result.dump(2) << "\n";
  } catch (const Error& e) {
    out << detail::error_json(std::string(to_string(e.kind())), e.what()).dump(2) << "\n";
    err << "error: " << e.what() << "\n";
    return kInputError;
  }
  return code;
}

}  // namespace dartree::cli

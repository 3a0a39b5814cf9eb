#pragma once

/**
 * @file trees.hpp
 * @brief Rooted leafless trees of finite branching index, stored as a finite
 *        prefix with implied single-child rays beyond the truncation depth.
 *
 * Internally vertices are renumbered densely in breadth-first order (depth,
 * then input position); the caller's ids are kept for I/O and for choosing
 * sibling-class representatives.
 */

#include <algorithm>
#include <cstddef>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "dartree/error.hpp"

namespace dartree {

using Json = nlohmann::ordered_json;

struct RawVertex {
  long id = 0;
  std::optional<long> parent;
};

class RootedTreePrefix {
 public:
  RootedTreePrefix() = default;

  const std::string& name() const { return name_; }
  int truncation_depth() const { return depth_bound_; }
  std::size_t size() const { return ids_.size(); }

  /// Vertex list exactly as supplied (for round-tripping).
  const std::vector<RawVertex>& raw() const { return raw_; }

  long id(int v) const { return ids_[v]; }
  int index_of(long id) const {
    auto it = index_.find(id);
    if (it == index_.end()) fail(ErrorKind::InvalidParameter, "unknown vertex id " + std::to_string(id));
    return it->second;
  }
  static constexpr int root() { return 0; }
  int parent(int v) const { return parent_[v]; }
  int depth(int v) const { return depth_[v]; }
  const std::vector<int>& children(int v) const { return children_[v]; }
  /// Indices of the vertices at depth n (n <= truncation depth).
  const std::vector<int>& level(int n) const { return levels_.at(static_cast<std::size_t>(n)); }
  int branching_index() const { return branching_index_; }

  /// Siblings of v (children of its parent, v included); {v} for the root.
  std::vector<int> siblings(int v) const {
    if (v == root()) return {v};
    return children_[parent_[v]];
  }

  friend RootedTreePrefix validate_tree(std::string name, std::vector<RawVertex> raw, int truncation_depth);

 private:
  std::string name_;
  int depth_bound_ = 0;
  std::vector<RawVertex> raw_;
  std::vector<long> ids_;
  std::map<long, int> index_;
  std::vector<int> parent_;
  std::vector<int> depth_;
  std::vector<std::vector<int>> children_;
  std::vector<std::vector<int>> levels_;
  int branching_index_ = 0;
};

/// Checks every structural invariant and builds the cached navigation data.
inline RootedTreePrefix validate_tree(std::string name, std::vector<RawVertex> raw, int truncation_depth) {
  if (truncation_depth < 0) fail(ErrorKind::InvalidParameter, "negative truncation depth");
  if (raw.empty()) fail(ErrorKind::MalformedInput, "tree has no vertices");

  std::map<long, std::size_t> pos;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (!pos.emplace(raw[i].id, i).second)
      fail(ErrorKind::DuplicateVertexId, "vertex id " + std::to_string(raw[i].id) + " appears twice");
  }
  std::size_t roots = 0;
  for (const auto& v : raw)
    if (!v.parent) ++roots;
  if (roots > 1) fail(ErrorKind::MultipleRoots, std::to_string(roots) + " vertices have no parent");
  for (const auto& v : raw)
    if (v.parent && !pos.count(*v.parent))
      fail(ErrorKind::OrphanVertex,
           "vertex " + std::to_string(v.id) + " has unknown parent " + std::to_string(*v.parent));
  // With a single root and all parents present, a vertex that cannot reach the
  // root lies on a cycle.
  for (std::size_t i = 0; i < raw.size(); ++i) {
    std::size_t cur = i;
    for (std::size_t steps = 0; raw[cur].parent; ++steps) {
      if (steps > raw.size())
        fail(ErrorKind::CycleDetected, "vertex " + std::to_string(raw[i].id) + " does not reach a root");
      cur = pos.at(*raw[cur].parent);
    }
  }
  if (roots == 0) fail(ErrorKind::CycleDetected, "no parentless vertex");
  for (std::size_t i = 0; i < raw.size(); ++i)
    if (raw[i].parent && pos.at(*raw[i].parent) > i)
      fail(ErrorKind::OrphanVertex,
           "vertex " + std::to_string(raw[i].id) + " listed before its parent " + std::to_string(*raw[i].parent));

  std::vector<int> raw_depth(raw.size(), 0);
  for (std::size_t i = 0; i < raw.size(); ++i)
    if (raw[i].parent) raw_depth[i] = raw_depth[pos.at(*raw[i].parent)] + 1;

  // Dense BFS order: by depth, then input position.
  std::vector<std::size_t> order(raw.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return raw_depth[a] < raw_depth[b]; });

  RootedTreePrefix t;
  t.name_ = std::move(name);
  t.depth_bound_ = truncation_depth;
  const std::size_t n = raw.size();
  t.ids_.resize(n);
  t.parent_.assign(n, -1);
  t.depth_.resize(n);
  t.children_.assign(n, {});
  for (std::size_t k = 0; k < n; ++k) {
    t.ids_[k] = raw[order[k]].id;
    t.index_[t.ids_[k]] = static_cast<int>(k);
    t.depth_[k] = raw_depth[order[k]];
  }
  for (std::size_t k = 1; k < n; ++k) {
    const int p = t.index_.at(*raw[order[k]].parent);
    t.parent_[k] = p;
    t.children_[p].push_back(static_cast<int>(k));
  }
  t.levels_.assign(static_cast<std::size_t>(truncation_depth) + 1, {});
  int deepest_branch = -1;
  for (std::size_t k = 0; k < n; ++k) {
    const int dv = t.depth_[k];
    if (dv > truncation_depth)
      fail(ErrorKind::VertexBeyondTruncation,
           "vertex " + std::to_string(t.ids_[k]) + " has depth " + std::to_string(dv) + " > " +
               std::to_string(truncation_depth));
    t.levels_[dv].push_back(static_cast<int>(k));
    const std::size_t nc = t.children_[k].size();
    if (dv < truncation_depth && nc == 0)
      fail(ErrorKind::LeafBeforeTruncation,
           "vertex " + std::to_string(t.ids_[k]) + " at depth " + std::to_string(dv) + " has no child");
    if (nc >= 2) {
      if (dv >= truncation_depth - 1)
        fail(ErrorKind::BranchingBeyondIndexBound,
             "vertex " + std::to_string(t.ids_[k]) + " branches at depth " + std::to_string(dv) +
                 "; the prefix must extend at least two levels past the last branching");
      deepest_branch = std::max(deepest_branch, dv);
    }
  }
  t.branching_index_ = deepest_branch < 0 ? 0 : deepest_branch + 1;
  t.raw_ = std::move(raw);
  return t;
}

/// card(G_n) of the infinite tree; constant beyond the prefix.
inline long generation_count(const RootedTreePrefix& t, int n) {
  if (n < 0) fail(ErrorKind::InvalidParameter, "negative generation");
  return static_cast<long>(t.level(std::min(n, t.truncation_depth())).size());
}

inline std::vector<long> generation_table(const RootedTreePrefix& t, int upto) {
  std::vector<long> g;
  for (int n = 0; n <= upto; ++n) g.push_back(generation_count(t, n));
  return g;
}

inline int branching_index(const RootedTreePrefix& t) { return t.branching_index(); }

/// Nested-parenthesis code: "(" + sorted child codes + ")".
inline std::string canonical_form(const RootedTreePrefix& t) {
  std::vector<std::string> code(t.size());
  for (int v = static_cast<int>(t.size()) - 1; v >= 0; --v) {
    std::vector<std::string> parts;
    for (int c : t.children(v)) parts.push_back(std::move(code[c]));
    std::sort(parts.begin(), parts.end());
    std::string s = "(";
    for (auto& p : parts) s += p;
    s += ")";
    code[v] = std::move(s);
  }
  return code[0];
}

/// Keeps the vertices of depth <= depth.
inline RootedTreePrefix retruncate(const RootedTreePrefix& t, int depth) {
  if (depth > t.truncation_depth())
    fail(ErrorKind::InvalidParameter, "retruncation cannot extend a prefix; use extend_rays");
  std::vector<RawVertex> raw;
  for (const auto& rv : t.raw())
    if (t.depth(t.index_of(rv.id)) <= depth) raw.push_back(rv);
  return validate_tree(t.name(), std::move(raw), depth);
}

/// Appends the implied rays so the prefix reaches `depth`. Exact, since every
/// vertex at the old truncation depth has exactly one child in the full tree.
inline RootedTreePrefix extend_rays(const RootedTreePrefix& t, int depth) {
  if (depth <= t.truncation_depth()) return t;
  std::vector<RawVertex> raw = t.raw();
  long next = 0;
  for (const auto& rv : raw) next = std::max(next, rv.id + 1);
  std::vector<long> frontier;
  for (int v : t.level(t.truncation_depth())) frontier.push_back(t.id(v));
  for (int k = t.truncation_depth(); k < depth; ++k) {
    for (auto& f : frontier) {
      raw.push_back({next, f});
      f = next++;
    }
  }
  return validate_tree(t.name(), std::move(raw), depth);
}

/// Rooted graph isomorphism of the underlying infinite trees.
inline bool graph_isomorphic(const RootedTreePrefix& a, const RootedTreePrefix& b) {
  // Equal branching indices k leave both prefixes faithful at min(D) >= k+1;
  // different indices already rule out an isomorphism.
  if (a.branching_index() != b.branching_index()) return false;
  const int depth = std::min(a.truncation_depth(), b.truncation_depth());
  const auto& ta = a.truncation_depth() == depth ? a : retruncate(a, depth);
  const auto& tb = b.truncation_depth() == depth ? b : retruncate(b, depth);
  return canonical_form(ta) == canonical_form(tb);
}

// ---- standard trees -------------------------------------------------------

namespace detail {

/// Builds a prefix from the child counts of each BFS level; vertices beyond
/// the listed levels get a single child.
inline RootedTreePrefix from_level_fanouts(std::string name, const std::vector<std::vector<int>>& fanouts, int depth) {
  std::vector<RawVertex> raw{{0, std::nullopt}};
  std::vector<long> frontier{0};
  long next = 1;
  for (int k = 0; k < depth; ++k) {
    std::vector<long> nf;
    for (std::size_t i = 0; i < frontier.size(); ++i) {
      int kids = 1;
      if (static_cast<std::size_t>(k) < fanouts.size()) kids = fanouts[k][i];
      for (int c = 0; c < kids; ++c) {
        raw.push_back({next, frontier[i]});
        nf.push_back(next++);
      }
    }
    frontier = std::move(nf);
  }
  return validate_tree(std::move(name), std::move(raw), depth);
}

inline void require_depth(int depth, int k) {
  if (depth < k + 1)
    fail(ErrorKind::InvalidParameter,
         "truncation depth " + std::to_string(depth) + " below branching index + 1 = " + std::to_string(k + 1));
}

}  // namespace detail

inline RootedTreePrefix make_ray(int depth) {
  if (depth < 0) fail(ErrorKind::InvalidParameter, "negative depth");
  return detail::from_level_fanouts("ray", {}, depth);
}

/// Root with n0 children, rays afterwards.
inline RootedTreePrefix make_star(int n0, int depth) {
  if (n0 < 1) fail(ErrorKind::InvalidParameter, "root needs at least one child");
  detail::require_depth(depth, n0 >= 2 ? 1 : 0);
  return detail::from_level_fanouts("star_" + std::to_string(n0), {{n0}}, depth);
}

/// Root with two children u, v; u has 2k-j children and v has j.
inline RootedTreePrefix make_split(int k, int j, int depth) {
  if (k < 1 || j < 1 || j > k) fail(ErrorKind::InvalidParameter, "need 1 <= j <= k");
  const int bi = (2 * k - j >= 2 || j >= 2) ? 2 : 1;
  detail::require_depth(depth, bi);
  return detail::from_level_fanouts("split_" + std::to_string(k) + "_" + std::to_string(j), {{2}, {2 * k - j, j}},
                                    depth);
}

/// Full binary tree down to generation `levels`, rays afterwards.
inline RootedTreePrefix make_binary(int levels, int depth) {
  if (levels < 0) fail(ErrorKind::InvalidParameter, "negative binary depth");
  detail::require_depth(depth, levels);
  std::vector<std::vector<int>> fan;
  for (int k = 0; k < levels; ++k) fan.push_back(std::vector<int>(std::size_t{1} << k, 2));
  return detail::from_level_fanouts("binary_" + std::to_string(levels), fan, depth);
}

// ---- JSON -----------------------------------------------------------------

inline Json tree_to_json(const RootedTreePrefix& t) {
  Json j;
  j["name"] = t.name();
  j["truncation_depth"] = t.truncation_depth();
  Json vs = Json::array();
  for (const auto& v : t.raw()) {
    Json e;
    e["id"] = v.id;
    e["parent"] = v.parent ? Json(*v.parent) : Json(nullptr);
    vs.push_back(std::move(e));
  }
  j["vertices"] = std::move(vs);
  return j;
}

inline RootedTreePrefix tree_from_json(const Json& j) {
  try {
    if (!j.is_object()) fail(ErrorKind::MalformedInput, "tree spec must be a JSON object");
    const std::string name = j.contains("name") ? j.at("name").get<std::string>() : std::string("tree");
    const Json& depth = j.at("truncation_depth");
    if (!depth.is_number_integer()) fail(ErrorKind::MalformedInput, "truncation_depth must be an integer");
    std::vector<RawVertex> raw;
    for (const auto& e : j.at("vertices")) {
      RawVertex v;
      if (!e.at("id").is_number_integer()) fail(ErrorKind::MalformedInput, "vertex id must be an integer");
      v.id = e.at("id").get<long>();
      if (e.contains("parent") && !e.at("parent").is_null()) {
        if (!e.at("parent").is_number_integer()) fail(ErrorKind::MalformedInput, "parent must be an integer or null");
        v.parent = e.at("parent").get<long>();
      }
      raw.push_back(v);
    }
    return validate_tree(name, std::move(raw), depth.get<int>());
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::MalformedInput, e.what());
  }
}

inline RootedTreePrefix load_tree(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::MalformedInput, "cannot open " + path);
  Json j;
  try {
    j = Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::MalformedInput, path + ": " + e.what());
  }
  return tree_from_json(j);
}

}  // namespace dartree

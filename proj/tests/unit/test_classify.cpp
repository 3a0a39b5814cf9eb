#include <gtest/gtest.h>

#include "dartree/classify.hpp"
#include "oracles/corpus.hpp"
#include "oracles/oracle.hpp"

using namespace dartree;

namespace {

TreeSet with_ray(const RootedTreePrefix& t, std::size_t d = 2) {
  TreeSet s{t};
  for (std::size_t j = 1; j < d; ++j) s.push_back(make_ray(t.truncation_depth()));
  return s;
}

}  // namespace

TEST(ConditionIV, SplitFamilyIsEqual) {
  const auto r = condition_iv(with_ray(make_split(2, 1, 5)), with_ray(make_split(2, 2, 5)), 2);
  EXPECT_TRUE(r.equal);
  EXPECT_TRUE(r.complete);
  EXPECT_EQ(r.first[0], (std::vector<long>{1, 2, 4}));
}

TEST(ConditionIV, StarsDifferAtDepthOne) {
  const auto r = condition_iv(with_ray(make_star(2, 3)), with_ray(make_star(3, 3)), 1);
  EXPECT_FALSE(r.equal);
  ASSERT_TRUE(r.witness.has_value());
  EXPECT_EQ(r.witness->factor, 0u);
  EXPECT_EQ(r.witness->n, 1);
  EXPECT_EQ(r.first[0][1], 2);
  EXPECT_EQ(r.second[0][1], 3);
}

TEST(ConditionIV, Reflexive) {
  const auto s = TreeSet{make_binary(2, 4), make_star(3, 4)};
  EXPECT_TRUE(condition_iv(s, s, 2).equal);
}

TEST(ConditionIII, Surpluses) {
  const auto t = make_star(2, 4);
  EXPECT_EQ(sibling_surplus(t, 1), 1);
  for (int n = 2; n <= 6; ++n) EXPECT_EQ(sibling_surplus(t, n), 0);
  const auto r = condition_iii({make_split(2, 1, 5)}, {make_split(2, 2, 5)}, 2);
  EXPECT_TRUE(r.equal);
  EXPECT_EQ(r.first[0], (std::vector<long>{0, 1, 2}));
}

TEST(ConditionIII, SingleFactorMatchesBranchingDegreeSums) {
  // d = 1: the surplus at n is sum over depth n-1 vertices of (children - 1)
  corpus::Rng rng(43);
  for (int trial = 0; trial < 20; ++trial) {
    const auto t = corpus::random_tree(rng, 2, 4, 4, "t");
    for (int n = 1; n <= 4; ++n) {
      long s = 0;
      for (int v : t.level(n - 1)) s += static_cast<long>(t.children(v).size()) - 1;
      EXPECT_EQ(sibling_surplus(t, n), s);
    }
  }
}

TEST(ConditionII, SplitFamilyEntry) {
  const auto r = condition_ii(with_ray(make_split(2, 1, 5)), with_ray(make_split(2, 2, 5)), 2);
  EXPECT_TRUE(r.equal);
  EXPECT_TRUE(r.factorization_ok);
  bool seen = false;
  for (const auto& e : r.entries)
    if (e.F == 0b01 && e.alpha == MultiIndex{2, 0}) {
      EXPECT_EQ(e.first, 2);
      EXPECT_EQ(e.second, 2);
      seen = true;
    }
  EXPECT_TRUE(seen);
  for (const auto& e : r.entries)
    if (e.F == 0) EXPECT_EQ(e.first, 1);
}

TEST(ConditionII, ProductAndTreeComputationsAgree) {
  const TreeSet a{make_binary(2, 5), make_star(2, 5)};
  const TreeSet b{make_star(2, 5), make_binary(2, 5)};
  const auto on_trees = condition_ii(a, b, 3);
  const auto on_products = condition_ii(*build_product(a, 5), *build_product(b, 5), 3);
  ASSERT_EQ(on_trees.entries.size(), on_products.entries.size());
  for (std::size_t k = 0; k < on_trees.entries.size(); ++k) {
    EXPECT_EQ(on_trees.entries[k].first, on_products.entries[k].first);
    EXPECT_EQ(on_trees.entries[k].second, on_products.entries[k].second);
  }
  EXPECT_TRUE(on_trees.factorization_ok);
  EXPECT_TRUE(on_products.factorization_ok);
  EXPECT_FALSE(on_trees.equal);
}

TEST(Classification, SplitAndStarFamilies) {
  const int k = 3;
  for (int i = 1; i <= k; ++i)
    for (int j = i + 1; j <= k; ++j) {
      const auto r = modules_isomorphic(with_ray(make_split(k, i, 5)), with_ray(make_split(k, j, 5)), 2);
      EXPECT_EQ(r.decision, Decision::Isomorphic);
      EXPECT_FALSE(r.graph_isomorphic);
      EXPECT_TRUE(r.conditions_agree);
    }
  for (int i = 1; i <= 4; ++i)
    for (int j = i + 1; j <= 4; ++j) {
      const auto r = modules_isomorphic(with_ray(make_star(i, 3)), with_ray(make_star(j, 3)), 2);
      EXPECT_EQ(r.decision, Decision::NotIsomorphic);
      EXPECT_TRUE(r.conditions_agree);
    }
}

TEST(Classification, UndecidedWhenAdIsOne) {
  const auto r = modules_isomorphic({make_star(2, 3)}, {make_star(3, 3)}, 1);
  EXPECT_EQ(r.decision, Decision::Undecided);
  EXPECT_EQ(to_string(r.decision), "undecided_ad_eq_1");
  EXPECT_EQ(modules_isomorphic({make_star(2, 3)}, {make_star(3, 3)}, 2).decision, Decision::NotIsomorphic);
}

TEST(Classification, FactorCountMismatch) {
  EXPECT_THROW(modules_isomorphic({make_ray(3)}, {make_ray(3), make_ray(3)}, 2), Error);
}

TEST(Classification, ClassicalModule) {
  EXPECT_TRUE(classical_module_check({make_ray(3), make_ray(3)}, 1));
  EXPECT_FALSE(classical_module_check(with_ray(make_star(2, 3)), 1));
  // branching only at depth 5
  std::vector<RawVertex> raw{{0, std::nullopt}};
  for (long i = 1; i <= 5; ++i) raw.push_back({i, i - 1});
  raw.push_back({6, 5});
  raw.push_back({7, 5});
  raw.push_back({8, 6});
  raw.push_back({9, 7});
  const auto late = validate_tree("late", raw, 7);
  EXPECT_FALSE(classical_module_check({late, make_ray(7)}, 1));
  EXPECT_THROW(classical_module_check({make_ray(3)}, 1), Error);
}

TEST(Classification, ConditionsAgreeOnRandomPairs) {
  corpus::Rng rng(47);
  int iso = 0;
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t d = static_cast<std::size_t>(corpus::uniform(rng, 1, 3));
    TreeSet a, b;
    for (std::size_t j = 0; j < d; ++j) {
      const auto t = corpus::random_tree(rng, 2, 3, 4, "a");
      a.push_back(t);
      b.push_back(trial % 2 ? corpus::reshuffle(rng, t, "b") : corpus::random_tree(rng, 2, 3, 4, "b"));
    }
    const auto r = modules_isomorphic(a, b, 2);
    EXPECT_TRUE(r.conditions_agree);
    EXPECT_TRUE(r.block_sums.factorization_ok);
    // generation counts straight from the oracle trees
    std::vector<oracle::Tree> oa, ob;
    for (const auto& t : a) oa.push_back(oracle::from_prefix(t, 4));
    for (const auto& t : b) ob.push_back(oracle::from_prefix(t, 4));
    const bool same = oracle::generation_table(oa, 4) == oracle::generation_table(ob, 4);
    EXPECT_EQ(r.decision == Decision::Isomorphic, same);
    iso += same;
  }
  EXPECT_GT(iso, 5);
}

TEST(Intertwiner, IdenticalProducts) {
  const auto p = build_product(with_ray(make_star(2, 4)), 4);
  const auto cert = build_intertwiner(p, p, 2);
  EXPECT_TRUE(cert.certified);
  EXPECT_LT(cert.unitarity_residual, 1e-12);
  EXPECT_LT(cert.intertwining_residual, 1e-12);
}

TEST(Intertwiner, SplitPair) {
  const auto p1 = build_product(with_ray(make_split(2, 1, 5)), 5);
  const auto p2 = build_product(with_ray(make_split(2, 2, 5)), 5);
  const auto cert = build_intertwiner(p1, p2, 2);
  EXPECT_TRUE(cert.certified);
  EXPECT_TRUE(cert.complete);
  EXPECT_EQ(cert.card_V, p1->size());
  EXPECT_EQ(cert.spanned_first, p1->size());
  EXPECT_EQ(cert.spanned_second, p2->size());
  EXPECT_LT(cert.unitarity_residual, 1e-9);
  EXPECT_LT(cert.intertwining_residual, 1e-9);
}

TEST(Intertwiner, Refusals) {
  const auto a = build_product(with_ray(make_star(2, 4)), 4);
  const auto b = build_product(with_ray(make_star(3, 4)), 4);
  EXPECT_THROW(build_intertwiner(a, b, 2), Error);
  const auto s1 = build_product(with_ray(make_split(2, 1, 5)), 3);
  const auto s2 = build_product(with_ray(make_split(2, 2, 5)), 3);
  EXPECT_THROW(build_intertwiner(s1, s2, 2), Error);
}

#include <gtest/gtest.h>

#include <set>

#include "dartree/product.hpp"
#include "oracles/corpus.hpp"
#include "oracles/oracle.hpp"

using namespace dartree;

namespace {

VertexRef at(const ProductTree& p, std::vector<long> ids) {
  VertexRef v;
  for (std::size_t j = 0; j < ids.size(); ++j) v.push_back(p.factor(j).index_of(ids[j]));
  return v;
}

}  // namespace

TEST(Product, GenerationSizesAreConvolutions) {
  const ProductTree a({make_star(2, 3), make_ray(3)}, 3);
  EXPECT_EQ(a.generation_size(0), 1u);
  EXPECT_EQ(a.generation_size(1), 3u);
  EXPECT_EQ(a.generation_size(2), 5u);
  EXPECT_EQ(a.generation_size(3), 7u);
  EXPECT_EQ(ProductTree({make_ray(2), make_ray(2)}, 2).generation_size(2), 3u);
  EXPECT_EQ(ProductTree({make_binary(2, 3), make_star(2, 3)}, 2).generation_size(2), 10u);
}

TEST(Product, EnumerationOrder) {
  const ProductTree p({make_star(2, 3), make_ray(3)}, 3);
  for (std::size_t i = 1; i < p.size(); ++i) EXPECT_LE(p.total_depth(i - 1), p.total_depth(i));
  EXPECT_EQ(p.vertex(0), p.root());
  EXPECT_EQ(p.count_upto(1), 4u);
}

TEST(Product, Navigation) {
  const ProductTree p({make_star(2, 3), make_ray(3)}, 3);
  const auto kids = p.chi(p.root(), 0);
  ASSERT_EQ(kids.size(), 2u);
  EXPECT_EQ(p.sib(kids[0], 0), kids);
  const VertexRef u1{kids[0][0], p.factor(1).children(0)[0]};
  const auto par = p.Par(u1);
  EXPECT_EQ(par.size(), 2u);
  EXPECT_EQ(std::set<VertexRef>(par.begin(), par.end()),
            (std::set<VertexRef>{kids[0], VertexRef{0, u1[1]}}));
  EXPECT_THROW(p.par(p.root(), 0), Error);
  EXPECT_EQ(p.Chi(p.root()).size(), 3u);
}

TEST(Product, NavigationMatchesOracle) {
  corpus::Rng rng(17);
  for (int trial = 0; trial < 15; ++trial) {
    const auto in = corpus::random_instance(rng, 1, 3, 250);
    const ProductTree p(in.factors, in.depth);
    const oracle::Product o(in.factors, in.depth);
    ASSERT_EQ(p.size(), o.verts.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
      const auto& v = p.vertex(i);
      const auto ids = p.external_ids(v);
      std::vector<int> ov;
      for (std::size_t j = 0; j < ids.size(); ++j) {
        const auto& ot = o.f[j];
        ov.push_back(static_cast<int>(std::find(ot.id.begin(), ot.id.end(), ids[j]) - ot.id.begin()));
      }
      ASSERT_TRUE(o.idx.count(ov));
      EXPECT_EQ(p.total_depth(i), o.total(ov));
      for (std::size_t j = 0; j < p.dim(); ++j) EXPECT_EQ(p.chi(v, j).size(), o.children(ov, j).size());
    }
  }
}

TEST(Product, PhiFPartitionsTheVertices) {
  const ProductTree p({make_binary(2, 3), make_star(2, 3)}, 3);
  std::vector<int> hits(p.size(), 0);
  for (Subset f = 0; f < 4; ++f)
    for (auto i : phi_F(p, f)) {
      hits[i]++;
      EXPECT_EQ(p.nonroot_set(p.vertex(i)), f);
    }
  for (int h : hits) EXPECT_EQ(h, 1);
  EXPECT_EQ(phi_F(p, 0), (std::vector<std::size_t>{0}));
}

TEST(Product, PhiFOnStarTimesRay) {
  const ProductTree p({make_star(2, 3), make_ray(3)}, 2);
  EXPECT_EQ(phi_F(p, 0b01).size(), 4u);
}

TEST(Product, OmegaFRepresentatives) {
  const ProductTree p({make_star(2, 3), make_ray(3)}, 3);
  const auto reps = omega_F(p, 0b01, 3);
  // one class of two at depth 1, then two singleton classes per depth
  ASSERT_EQ(reps.size(), 5u);
  EXPECT_EQ(p.sibling_count(0, reps[0][0]), 2u);
  for (std::size_t k = 1; k < reps.size(); ++k) EXPECT_EQ(p.sibling_count(0, reps[k][0]), 1u);
  EXPECT_EQ(omega_F(p, 0, 3), (std::vector<VertexRef>{p.root()}));
}

TEST(Product, SiblingClassesCoverGenerations) {
  // the sibling classes of the representatives at depth n partition G_n
  const auto t = make_split(2, 1, 4);
  const ProductTree p({t, make_ray(4)}, 4);
  for (int n = 1; n <= 4; ++n) {
    std::size_t covered = 0;
    for (const auto& u : omega_F(p, 0b01, 4))
      if (p.factor(0).depth(u[0]) == n) covered += p.sibling_count(0, u[0]);
    EXPECT_EQ(covered, static_cast<std::size_t>(generation_count(t, n)));
  }
}

TEST(Product, SibFAndCounts) {
  const ProductTree p({make_binary(2, 3), make_star(2, 3)}, 3);
  const VertexRef u = at(p, {1, 1});
  EXPECT_EQ(sib_F(p, u, 0b11).size(), 4u);
  EXPECT_EQ(sib_F(p, u, 0), (std::vector<VertexRef>{u}));
  EXPECT_EQ(count_M(p, u, 0b11), 4u);
  EXPECT_EQ(count_N(p, u, 0b11), 4u);
}

TEST(Product, SibFGVariesOnlyG) {
  const ProductTree p({make_binary(2, 3), make_star(2, 3)}, 3);
  const VertexRef u = at(p, {1, 1});
  const auto all = sib_F(p, u, 0b11);
  const std::set<VertexRef> full(all.begin(), all.end());
  for (Subset g = 0; g < 4; ++g) {
    const auto part = sib_FG(p, u, 0b11, g);
    EXPECT_EQ(part.size(), count_M(p, u, g));
    for (const auto& w : part) {
      EXPECT_TRUE(full.count(w));
      for (std::size_t j = 0; j < 2; ++j)
        if (!contains(g, j)) EXPECT_EQ(w[j], u[j]);
    }
  }
}

TEST(Product, Errors) {
  EXPECT_THROW(ProductTree({make_star(2, 2)}, 3), Error);
  const ProductTree p({make_star(2, 3), make_ray(3)}, 2);
  EXPECT_THROW(p.index(VertexRef{3, 3}), Error);
}

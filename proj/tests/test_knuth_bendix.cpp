#include <gtest/gtest.h>

#include "depthwork/enumerate.hpp"
#include "depthwork/knuth_bendix.hpp"

using namespace depthwork;

namespace {

Presentation one_letter(std::vector<Relation> rels) {
  Presentation p;
  p.generators.push_back({"a", PartialMap::identity(1)});
  p.relations = std::move(rels);
  return p;
}

}  // namespace

TEST(KnuthBendix, IdempotentSingleton) {
  auto rs = knuth_bendix(one_letter({{{0, 0}, {0}}}));
  ASSERT_TRUE(rs.confluent());
  auto nf = rs.normal_forms();
  ASSERT_EQ(nf.kind, NormalFormCount::Kind::Finite);
  EXPECT_EQ(nf.count, 1u);
}

TEST(KnuthBendix, FreeMonogenicIsInfinite) {
  auto rs = knuth_bendix(one_letter({}));
  ASSERT_TRUE(rs.confluent());
  EXPECT_EQ(rs.normal_forms().kind, NormalFormCount::Kind::Infinite);
}

TEST(KnuthBendix, CayleyOfT2) {
  auto rs = knuth_bendix(cayley({Family::T, 2, 2}));
  ASSERT_TRUE(rs.confluent());
  auto nf = rs.normal_forms();
  ASSERT_EQ(nf.kind, NormalFormCount::Kind::Finite);
  EXPECT_EQ(nf.count, 4u);
}

TEST(KnuthBendix, CriticalPairsResolve) {
  // a^3 = a, b^2 = b, ab = ba: elements a, aa, b, ab, aab
  Presentation p;
  p.generators.push_back({"a", PartialMap::identity(1)});
  p.generators.push_back({"b", PartialMap::identity(1)});
  p.relations = {{{0, 0, 0}, {0}}, {{1, 1}, {1}}, {{0, 1}, {1, 0}}};
  auto rs = knuth_bendix(p);
  ASSERT_TRUE(rs.confluent());
  auto t = enumerate(p);
  ASSERT_TRUE(t.closed());
  auto nf = rs.normal_forms();
  ASSERT_EQ(nf.kind, NormalFormCount::Kind::Finite);
  EXPECT_EQ(nf.count, 5u);
  EXPECT_EQ(t.classes, 5u);
  EXPECT_TRUE(rs.equal({0, 1, 0}, {0, 0, 1}).value());
  EXPECT_FALSE(rs.equal({0, 1}, {1}).value());
}

TEST(KnuthBendix, RestrictionRewritingMatchesEvaluation) {
  IdealSpec spec{Family::I, 3, 2};
  auto p = restriction(spec, 1);
  auto rs = knuth_bendix(p);
  ASSERT_TRUE(rs.confluent());
  auto nf = rs.normal_forms();
  ASSERT_EQ(nf.kind, NormalFormCount::Kind::Finite);
  EXPECT_EQ(nf.count, 28u);
  Word w{20, 5, 7, 13, 2};
  EXPECT_EQ(p.evaluate(w), p.evaluate(rs.reduce(w)));
}

TEST(KnuthBendix, NonDefiningRestriction) {
  auto p = restriction({Family::I, 3, 2}, 2);
  auto rs = knuth_bendix(p, {100000, 5'000'000});
  if (rs.confluent()) EXPECT_EQ(rs.normal_forms().kind, NormalFormCount::Kind::Infinite);
}

#include <gtest/gtest.h>

#include <set>

#include "depthwork/ideal.hpp"

using namespace depthwork;

namespace {

std::set<PartialMap> left_principal(const PartialMap& a, Family fam) {
  std::set<PartialMap> out{a};
  for (const auto& s : family_elements(fam, a.n())) out.insert(s * a);
  return out;
}

std::set<PartialMap> right_principal(const PartialMap& a, Family fam) {
  std::set<PartialMap> out{a};
  for (const auto& s : family_elements(fam, a.n())) out.insert(a * s);
  return out;
}

std::set<PartialMap> two_sided(const PartialMap& a, Family fam) {
  std::set<PartialMap> out;
  for (const auto& x : left_principal(a, fam))
    for (const auto& y : right_principal(x, fam)) out.insert(y);
  return out;
}

}  // namespace

TEST(Ideal, ElementCounts) {
  auto count = [](const JChain& c) {
    std::size_t t = 0;
    for (const auto& j : c) t += j.elements.size();
    return t;
  };
  auto i32 = ideal_elements({Family::I, 3, 2});
  ASSERT_EQ(i32.size(), 3u);
  EXPECT_EQ(i32[0].elements.size(), 1u);
  EXPECT_EQ(i32[1].elements.size(), 9u);
  EXPECT_EQ(i32[2].elements.size(), 18u);
  EXPECT_EQ(count(i32), 28u);
  EXPECT_EQ(count(ideal_elements({Family::T, 3, 2})), 21u);
  auto pt = ideal_elements({Family::PT, 3, 2});
  EXPECT_EQ(pt[0].elements.size(), 1u);
  EXPECT_EQ(pt[1].elements.size(), 21u);
  EXPECT_EQ(pt[2].elements.size(), 36u);
  EXPECT_EQ(Ideal({Family::I, 4, 3}).size(), 185);
  EXPECT_EQ(Ideal({Family::T, 4, 3}).size(), 232);
  EXPECT_EQ(Ideal({Family::PT, 4, 3}).size(), 601);
}

TEST(Ideal, SpecValidation) {
  EXPECT_THROW(ideal_elements({Family::T, 3, 0}), UsageError);
  EXPECT_THROW(ideal_elements({Family::I, 3, 4}), UsageError);
  EXPECT_NO_THROW(ideal_elements({Family::I, 3, 0}));
}

TEST(Ideal, DepthOfClass) {
  EXPECT_EQ(depth_of_class({Family::T, 5, 4}, 4), 1);
  EXPECT_EQ(depth_of_class({Family::I, 4, 3}, 1), 3);
  EXPECT_EQ(depth_of_class({Family::PT, 4, 4}, 0), 5);
  EXPECT_THROW(depth_of_class({Family::T, 4, 3}, 0), UsageError);
  EXPECT_THROW(depth_of_class({Family::I, 4, 3}, 4), UsageError);
}

TEST(Ideal, GeneratorOrderIsRankDescending) {
  Ideal id({Family::PT, 3, 3});
  for (int k = 1; k < id.size(); ++k) {
    ASSERT_GE(id.rank_of(k - 1), id.rank_of(k));
    if (id.rank_of(k - 1) == id.rank_of(k)) ASSERT_LT(id.element(k - 1), id.element(k));
  }
  EXPECT_EQ(id.count_rank_at_least(3), 6);
  EXPECT_EQ(id.count_rank_at_least(0), 64);
  for (int k = 0; k < id.size(); ++k) ASSERT_EQ(id.id_of(id.element(k)), k);
}

TEST(Ideal, MultiplicationMatchesCompose) {
  Ideal id({Family::T, 4, 2});
  for (int a = 0; a < id.size(); ++a)
    for (int b = 0; b < id.size(); ++b)
      ASSERT_EQ(id.element(id.mul(a, b)), id.element(a) * id.element(b));
}

TEST(Green, SimpleCases) {
  auto a = PartialMap::from_one_based(2, {1, 0});
  auto b = PartialMap::from_one_based(2, {0, 1});
  EXPECT_TRUE(l_related(a, a));
  EXPECT_TRUE(r_related(a, a));
  EXPECT_TRUE(l_related(a, b));
  EXPECT_FALSE(r_related(a, b));
}

TEST(Green, MatchesPrincipalIdealDefinition) {
  for (int n = 1; n <= 3; ++n)
    for (auto fam : {Family::PT, Family::T, Family::I}) {
      const auto& all = family_elements(fam, n);
      std::vector<std::set<PartialMap>> L, R, J;
      for (const auto& a : all) {
        L.push_back(left_principal(a, fam));
        R.push_back(right_principal(a, fam));
        J.push_back(two_sided(a, fam));
      }
      for (std::size_t i = 0; i < all.size(); ++i)
        for (std::size_t j = 0; j < all.size(); ++j) {
          ASSERT_EQ(l_related(all[i], all[j]), L[i] == L[j]);
          ASSERT_EQ(r_related(all[i], all[j]), R[i] == R[j]);
          ASSERT_EQ(all[i].rank() == all[j].rank(), J[i] == J[j]);
        }
    }
}

TEST(Ideal, GeneratedByTopClass) {
  for (int n = 2; n <= 4; ++n)
    for (auto fam : {Family::PT, Family::T, Family::I})
      for (int m = epsilon(fam); m < n; ++m) {
        Ideal id({fam, n, m});
        auto top = id.ids_of_rank(m);
        std::vector<char> seen(id.size(), 0);
        std::vector<int> frontier = top;
        for (int t : top) seen[t] = 1;
        while (!frontier.empty()) {
          std::vector<int> next;
          for (int x : frontier)
            for (int g : top) {
              int y = id.mul(x, g);
              if (!seen[y]) {
                seen[y] = 1;
                next.push_back(y);
              }
            }
          frontier.swap(next);
        }
        ASSERT_EQ(std::count(seen.begin(), seen.end(), 1), id.size()) << id.spec().str();
      }
}

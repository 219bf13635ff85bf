#include <gtest/gtest.h>

#include <random>

#include "depthwork/reduction.hpp"
#include "depthwork/rules.hpp"
#include "oracle.hpp"
#include "sampling.hpp"

namespace depthwork {
namespace {

using testing::WindowGraph;

PartialMap pm(int n, std::initializer_list<int> v) { return PartialMap::from_one_based(n, v); }

void expect_sound(const Derivation& d, const std::string& what) {
  auto ok = check(d);
  ASSERT_TRUE(ok) << what << " step " << ok.step << ": " << ok.reason;
  EXPECT_EQ(evaluate(d.start), evaluate(d.end)) << what;
  for (const auto& s : d.steps)
    for (const auto* f : {&s.pair[0], &s.pair[1], &s.product}) {
      EXPECT_GE(f->rank(), d.lo) << what;
      EXPECT_LE(f->rank(), d.hi) << what;
    }
}

struct Cell {
  int n, m, r;
};

// cells with r+2 <= m < n <= nmax, optionally r <= 2m-n-1
std::vector<Cell> cells(Family fam, int nmax, bool low_r) {
  std::vector<Cell> out;
  for (int n = 3; n <= nmax; ++n)
    for (int m = 2; m < n; ++m)
      for (int r = epsilon(fam); r + 2 <= m; ++r)
        if (!low_r || r <= 2 * m - n - 1) out.push_back({n, m, r});
  return out;
}

TEST(Equalize, IdenticalPairsGiveEmptyDerivation) {
  IdealSpec spec{Family::I, 4, 3};
  auto a = pm(4, {1, 2, 0, 0}), b = pm(4, {1, 0, 2, 0});
  auto d = equalize_pairs(spec, a, b, a, b);
  EXPECT_TRUE(d.steps.empty());
  EXPECT_TRUE(check(d));
}

TEST(Equalize, DocumentedIQuadruple) {
  IdealSpec spec{Family::I, 4, 3};
  auto a = pm(4, {1, 2, 0, 0}), b = pm(4, {1, 0, 2, 0});
  auto g = pm(4, {1, 3, 0, 0}), d = pm(4, {1, 2, 0, 0});
  auto der = equalize_pairs(spec, a, b, g, d);
  expect_sound(der, "I4 quadruple");
  EXPECT_EQ(der.start, (MapWord{g, d}));
  EXPECT_EQ(der.end, (MapWord{a, b}));
  WindowGraph oracle(Family::I, 4, 2, 3);
  EXPECT_TRUE(oracle.connected_via_pairs({g, d}, {a, b}));
}

TEST(Equalize, RejectsDifferentProducts) {
  IdealSpec spec{Family::I, 4, 3};
  auto a = pm(4, {1, 2, 0, 0}), b = pm(4, {1, 0, 2, 0});
  auto g = pm(4, {2, 3, 0, 0}), d = pm(4, {0, 1, 0, 0});
  EXPECT_THROW(equalize_pairs(spec, a, b, g, d), PreconditionError);
  IdealSpec tight{Family::I, 4, 2};
  EXPECT_THROW(equalize_pairs(tight, a, b, a, b), PreconditionError);
}

TEST(Equalize, RandomizedPerFamily) {
  std::mt19937 rng(99);
  for (Family fam : {Family::I, Family::T, Family::PT}) {
    auto cs = cells(fam, 6, false);
    int done = 0, cross = 0;
    for (int trial = 0; done < 100 && trial < 2000; ++trial) {
      auto c = cs[trial % cs.size()];
      IdealSpec spec{fam, c.n, c.m};
      auto [a, b] = testing::random_pair(fam, c.n, c.r, rng);
      auto other = testing::random_factor_pair(fam, a * b, rng);
      if (!other) continue;
      auto [g, d] = *other;
      auto der = equalize_pairs(spec, a, b, g, d);
      expect_sound(der, std::string(family_name(fam)) + " " + g.str() + " " + d.str() + " -> " + a.str() + " " +
                            b.str());
      EXPECT_EQ(der.start, (MapWord{g, d}));
      EXPECT_EQ(der.end, (MapWord{a, b}));
      ++done;
      if (c.n == 4 && cross < 10) {
        WindowGraph oracle(fam, 4, c.r + 1, c.r + 2);
        EXPECT_TRUE(oracle.connected_via_pairs({g, d}, {a, b})) << "oracle disagrees";
        ++cross;
      }
    }
    EXPECT_EQ(done, 100) << family_name(fam);
    EXPECT_EQ(cross, 10) << family_name(fam);
  }
}

TEST(Equalize, TFiveIdealFourRankTwo) {
  std::mt19937 rng(5);
  IdealSpec spec{Family::T, 5, 4};
  int done = 0;
  while (done < 100) {
    auto [a, b] = testing::random_pair(Family::T, 5, 2, rng);
    auto other = testing::random_factor_pair(Family::T, a * b, rng);
    if (!other) continue;
    auto der = equalize_pairs(spec, a, b, other->first, other->second);
    expect_sound(der, "T5");
    ++done;
  }
}

TEST(ReduceTriple, DocumentedIInstance) {
  IdealSpec spec{Family::I, 4, 3};
  auto a = pm(4, {1, 2, 0, 0}), b = pm(4, {1, 0, 2, 0}), g = pm(4, {1, 0, 0, 2});
  auto res = reduce_triple(spec, a, b, g);
  expect_sound(res.derivation, "I4 triple");
  EXPECT_EQ(res.alpha.rank(), 2);
  EXPECT_EQ(res.alpha * g, pm(4, {1, 0, 0, 0}));
  EXPECT_EQ(res.derivation.end, (MapWord{res.alpha, g}));
  WindowGraph oracle(Family::I, 4, 2, 3);
  EXPECT_TRUE(oracle.connected_via_pairs({a, b, g}, {res.alpha, g}));
}

// no rank 3 map a' in T_5 has a' g = a b g here, so the reduction ends on x_a x_(b' g)
TEST(ReduceTriple, KeepsAlphaWhenGammaHasNoPartner) {
  IdealSpec spec{Family::T, 5, 4};
  auto a = pm(5, {3, 1, 3, 3, 5}), b = pm(5, {3, 1, 3, 3, 2}), g = pm(5, {4, 4, 3, 2, 2});
  const auto target = a * b * g;
  int partners = 0;
  for (const auto& f : testing::rank_pool(Family::T, 5, 3))
    if (f * g == target) ++partners;
  EXPECT_EQ(partners, 0);
  auto res = reduce_triple(spec, a, b, g);
  expect_sound(res.derivation, "T5 triple");
  EXPECT_EQ(res.alpha, a);
  EXPECT_EQ(res.gamma.rank(), 3);
  EXPECT_EQ(res.alpha * res.gamma, target);
}

TEST(ReduceTriple, RejectsTopRank) {
  // r = 2m-n lies outside the range of the construction
  IdealSpec spec{Family::I, 4, 3};
  auto a = pm(4, {1, 2, 3, 0}), b = pm(4, {1, 2, 0, 4}), g = pm(4, {1, 2, 0, 0});
  EXPECT_THROW(reduce_triple(spec, a, b, g), PreconditionError);
}

TEST(ReduceTriple, RandomizedPerFamily) {
  std::mt19937 rng(17);
  for (Family fam : {Family::I, Family::T, Family::PT}) {
    auto cs = cells(fam, 6, true);
    ASSERT_FALSE(cs.empty());
    int done = 0, cross = 0;
    for (int trial = 0; done < 100 && trial < 100000; ++trial) {
      auto c = cs[trial % cs.size()];
      IdealSpec spec{fam, c.n, c.m};
      auto [a, b] = testing::random_pair(fam, c.n, c.r, rng);
      auto g = testing::pick(testing::rank_pool(fam, c.n, c.r + 1), rng);
      if ((b * g).rank() != c.r || (a * b * g).rank() != c.r) continue;
      auto res = reduce_triple(spec, a, b, g);
      expect_sound(res.derivation, std::string(family_name(fam)) + " triple");
      EXPECT_EQ(res.alpha * res.gamma, a * b * g);
      EXPECT_EQ(res.alpha.rank(), c.r + 1);
      EXPECT_EQ(res.gamma.rank(), c.r + 1);
      if (fam == Family::I) EXPECT_EQ(res.gamma, g);
      EXPECT_EQ(res.derivation.lo, c.r + 1);
      EXPECT_EQ(res.derivation.hi, c.r + 2);
      ++done;
      if (c.n == 4 && cross < 10) {
        WindowGraph oracle(fam, 4, c.r + 1, c.r + 2);
        EXPECT_TRUE(oracle.connected_via_pairs({a, b, g}, {res.alpha, res.gamma})) << "oracle disagrees";
        ++cross;
      }
    }
    EXPECT_EQ(done, 100) << family_name(fam);
    EXPECT_EQ(cross, 10) << family_name(fam);
  }
}

TEST(SplitHighRank, DocumentedIInstance) {
  IdealSpec spec{Family::I, 4, 3};
  auto g = pm(4, {1, 2, 3, 0}), d = pm(4, {1, 0, 0, 2});
  auto res = split_high_rank(spec, g, d);
  expect_sound(res.derivation, "I4 split");
  EXPECT_EQ(res.alpha.rank(), 2);
  EXPECT_EQ(res.beta.rank(), 2);
  EXPECT_EQ(res.alpha * res.beta, pm(4, {1, 0, 0, 0}));
  WindowGraph oracle(Family::I, 4, 2, 3);
  EXPECT_TRUE(oracle.connected_via_pairs({g, d}, {res.alpha, res.beta}));
}

TEST(SplitHighRank, AlreadyLowGivesEmptyDerivation) {
  IdealSpec spec{Family::I, 4, 3};
  auto a = pm(4, {1, 2, 0, 0}), b = pm(4, {1, 0, 2, 0});
  auto res = split_high_rank(spec, a, b);
  EXPECT_TRUE(res.derivation.steps.empty());
  EXPECT_EQ(res.alpha, a);
  EXPECT_EQ(res.beta, b);
}

TEST(SplitHighRank, RejectsBothTopRank) {
  IdealSpec spec{Family::T, 5, 4};
  // rank 4 letters with rank 3 product, r = 2m-n
  auto g = pm(5, {1, 2, 3, 4, 4}), d = pm(5, {1, 2, 3, 3, 4});
  ASSERT_EQ((g * d).rank(), 3);
  EXPECT_THROW(split_high_rank(spec, g, d), PreconditionError);
}

TEST(SplitHighRank, RandomizedPerFamily) {
  std::mt19937 rng(23);
  for (Family fam : {Family::I, Family::T, Family::PT}) {
    auto cs = cells(fam, 6, true);
    int done = 0, cross = 0;
    for (int trial = 0; done < 100 && trial < 200000; ++trial) {
      auto c = cs[trial % cs.size()];
      IdealSpec spec{fam, c.n, c.m};
      std::uniform_int_distribution<int> rk(c.r + 1, c.m);
      int i = rk(rng), j = rk(rng);
      if (i == c.m && j == c.m) continue;
      auto g = testing::pick(testing::rank_pool(fam, c.n, i), rng);
      auto d = testing::pick(testing::rank_pool(fam, c.n, j), rng);
      if ((g * d).rank() != c.r) continue;
      auto res = split_high_rank(spec, g, d);
      expect_sound(res.derivation, std::string(family_name(fam)) + " split " + g.str() + " " + d.str());
      EXPECT_EQ(res.alpha * res.beta, g * d);
      EXPECT_EQ(res.alpha.rank(), c.r + 1);
      EXPECT_EQ(res.beta.rank(), c.r + 1);
      EXPECT_EQ(res.derivation.hi, c.m);
      ++done;
      if (c.n == 4 && cross < 10) {
        WindowGraph oracle(fam, 4, c.r + 1, c.m);
        EXPECT_TRUE(oracle.connected_via_pairs({g, d}, {res.alpha, res.beta})) << "oracle disagrees";
        ++cross;
      }
    }
    EXPECT_EQ(done, 100) << family_name(fam);
    EXPECT_EQ(cross, 10) << family_name(fam);
  }
}

TEST(ReduceWord, TwoLetterWordIsFixed) {
  IdealSpec spec{Family::I, 4, 3};
  auto a = pm(4, {1, 2, 0, 0}), b = pm(4, {1, 0, 2, 0});
  auto res = reduce_word(spec, {a, b});
  EXPECT_TRUE(res.derivation.steps.empty());
  EXPECT_EQ(res.rank_sums, (std::vector<int>{4}));
}

TEST(ReduceWord, ThreeRankTwoLettersInI4) {
  IdealSpec spec{Family::I, 4, 3};
  auto a = pm(4, {1, 2, 0, 0}), b = pm(4, {1, 0, 2, 0}), g = pm(4, {1, 0, 0, 2});
  auto res = reduce_word(spec, {a, b, g});
  expect_sound(res.derivation, "I4 word");
  EXPECT_EQ(res.rank_sums.front(), 6);
  EXPECT_EQ(res.rank_sums.back(), 4);
  EXPECT_EQ(res.alpha * res.beta, a * b * g);
}

TEST(ReduceWord, RandomizedPerFamily) {
  std::mt19937 rng(31);
  for (Family fam : {Family::I, Family::T, Family::PT}) {
    auto cs = cells(fam, 6, true);
    int done = 0, cross = 0;
    for (int trial = 0; (done < 100 || cross < 10) && trial < 5000; ++trial) {
      auto c = cs[trial % cs.size()];
      IdealSpec spec{fam, c.n, c.m};
      int len = 2 + trial % 4;
      if (done >= 100 && (c.n != 4 || len > 3)) continue;
      auto w = testing::random_word(fam, c.n, c.r + 1, c.m, c.r, len, rng, 2000);
      if (!w) continue;
      auto res = reduce_word(spec, *w);
      expect_sound(res.derivation, std::string(family_name(fam)) + " word");
      EXPECT_EQ(res.alpha * res.beta, evaluate(*w));
      EXPECT_EQ(res.alpha.rank(), c.r + 1);
      EXPECT_EQ(res.beta.rank(), c.r + 1);
      EXPECT_EQ(res.rank_sums.back(), 2 * c.r + 2);
      for (std::size_t k = 1; k < res.rank_sums.size(); ++k) EXPECT_LT(res.rank_sums[k], res.rank_sums[k - 1]);
      ++done;
      // longer starts need five-letter words in the search
      if (c.n == 4 && w->size() <= 3 && cross < 10) {
        WindowGraph oracle(fam, 4, c.r + 1, c.m);
        EXPECT_TRUE(oracle.connected_via_pairs(*w, {res.alpha, res.beta})) << "oracle disagrees " << word_str(*w);
        ++cross;
      }
    }
    EXPECT_GE(done, 100) << family_name(fam);
    EXPECT_EQ(cross, 10) << family_name(fam);
  }
}

// reduce_word then equalize_pairs joins any two words with the same value
TEST(ReduceWord, ConnectsAllWordsOfI3) {
  IdealSpec spec{Family::I, 3, 2};
  std::vector<PartialMap> letters;
  for (int k = 1; k <= 2; ++k)
    for (const auto& f : testing::rank_pool(Family::I, 3, k)) letters.push_back(f);
  const PartialMap empty(3);
  PartialMap ref_a, ref_b;
  bool have_ref = false;
  int words = 0;
  auto visit = [&](const MapWord& w) {
    if (evaluate(w) != empty) return;
    auto res = reduce_word(spec, w);
    if (!have_ref) {
      ref_a = res.alpha;
      ref_b = res.beta;
      have_ref = true;
    }
    auto eq = equalize_pairs(spec, ref_a, ref_b, res.alpha, res.beta);
    ASSERT_TRUE(check(res.derivation));
    ASSERT_TRUE(check(eq));
    ++words;
  };
  for (const auto& x : letters)
    for (const auto& y : letters) {
      visit({x, y});
      for (const auto& z : letters) visit({x, y, z});
    }
  EXPECT_GT(words, 1000);
}

// the same composite property sampled in larger ideals
TEST(ReduceWord, ConnectsSampledWords) {
  std::mt19937 rng(77);
  for (auto [fam, n, m, r] : {std::tuple{Family::I, 4, 3, 1}, std::tuple{Family::T, 5, 4, 2},
                              std::tuple{Family::PT, 4, 3, 1}}) {
    IdealSpec spec{fam, n, m};
    for (int t = 0; t < 30; ++t) {
      auto w1 = testing::random_word(fam, n, r + 1, m, r, 3, rng);
      ASSERT_TRUE(w1.has_value());
      auto r1 = reduce_word(spec, *w1);
      auto other = testing::random_factor_pair(fam, evaluate(*w1), rng);
      ASSERT_TRUE(other.has_value());
      auto r2 = reduce_word(spec, {other->first, other->second});
      auto eq = equalize_pairs(spec, r1.alpha, r1.beta, r2.alpha, r2.beta);
      EXPECT_TRUE(check(r1.derivation));
      EXPECT_TRUE(check(eq));
    }
  }
}

}  // namespace
}  // namespace depthwork

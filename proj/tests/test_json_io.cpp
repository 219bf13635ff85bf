#include <gtest/gtest.h>

#include <random>

#include "depthwork/json_io.hpp"
#include "depthwork/reduction.hpp"
#include "sampling.hpp"

namespace depthwork {
namespace {

PartialMap pm(int n, std::initializer_list<int> v) { return PartialMap::from_one_based(n, v); }

void expect_same(const Derivation& a, const Derivation& b) {
  EXPECT_EQ(a.spec, b.spec);
  EXPECT_EQ(a.lo, b.lo);
  EXPECT_EQ(a.hi, b.hi);
  EXPECT_EQ(a.start, b.start);
  EXPECT_EQ(a.end, b.end);
  ASSERT_EQ(a.steps.size(), b.steps.size());
  for (std::size_t k = 0; k < a.steps.size(); ++k) {
    EXPECT_EQ(a.steps[k].pos, b.steps[k].pos);
    EXPECT_EQ(a.steps[k].pair, b.steps[k].pair);
    EXPECT_EQ(a.steps[k].product, b.steps[k].product);
    EXPECT_EQ(a.steps[k].forward, b.steps[k].forward);
  }
  EXPECT_EQ(a.tags, b.tags);
}

TEST(DerivationJson, DocumentedQuadrupleRoundTrips) {
  IdealSpec spec{Family::I, 4, 3};
  auto d = equalize_pairs(spec, pm(4, {1, 2, 0, 0}), pm(4, {1, 0, 2, 0}), pm(4, {1, 3, 0, 0}),
                          pm(4, {1, 2, 0, 0}));
  const std::string text = derivation_to_json(d).dump();
  auto j = json::parse(text);
  EXPECT_EQ(j.at("window"), json({2, 3}));
  EXPECT_EQ(j.at("steps").at(0).at("rel").size(), 2u);
  auto back = derivation_from_json(j);
  expect_same(d, back);
  EXPECT_TRUE(check(back));
}

TEST(DerivationJson, RandomDerivationsRecheck) {
  std::mt19937 rng(3);
  for (auto [fam, n, m, r] : {std::tuple{Family::I, 5, 4, 1}, std::tuple{Family::T, 5, 4, 2},
                              std::tuple{Family::PT, 4, 3, 1}}) {
    IdealSpec spec{fam, n, m};
    for (int t = 0; t < 10; ++t) {
      auto [a, b] = testing::random_pair(fam, n, r, rng);
      auto other = testing::random_factor_pair(fam, a * b, rng);
      if (!other) continue;
      auto d = equalize_pairs(spec, a, b, other->first, other->second);
      auto back = derivation_from_json(json::parse(derivation_to_json(d).dump()));
      expect_same(d, back);
      EXPECT_TRUE(check(back));
    }
  }
}

TEST(DerivationJson, LettersAsImageArrays) {
  auto ideal = make_ideal({Family::PT, 3, 2});
  EXPECT_EQ(map_from_json(json::parse("[2,0,2]"), *ideal), pm(3, {2, 0, 2}));
  EXPECT_EQ(map_from_json(json(symbol_of(pm(3, {2, 0, 2}), *ideal)), *ideal), pm(3, {2, 0, 2}));
  EXPECT_THROW(map_from_json(json::parse("[1,2,3]"), *ideal), UsageError);
  EXPECT_THROW(map_from_json(json("g99999"), *ideal), UsageError);
  EXPECT_THROW(map_from_json(json("x1"), *ideal), UsageError);
}

TEST(DerivationJson, MalformedInputIsUsageError) {
  EXPECT_THROW(derivation_from_json(json::parse(R"({"family":"I"})")), UsageError);
  EXPECT_THROW(derivation_from_json(json::parse(
                   R"({"family":"I","n":3,"m":2,"window":[1,2],"start":["g0"],"end":["g0"],
                       "steps":[{"pos":0,"rel":[["g0"],["g0"]],"dir":"fwd"}]})")),
               UsageError);
}

TEST(DerivationJson, TamperedStepFailsCheck) {
  IdealSpec spec{Family::I, 4, 3};
  auto d = equalize_pairs(spec, pm(4, {1, 2, 0, 0}), pm(4, {1, 0, 2, 0}), pm(4, {1, 3, 0, 0}),
                          pm(4, {1, 2, 0, 0}));
  auto j = derivation_to_json(d);
  j["steps"][0]["pos"] = 1;
  EXPECT_FALSE(check(derivation_from_json(j)));
}

}  // namespace
}  // namespace depthwork

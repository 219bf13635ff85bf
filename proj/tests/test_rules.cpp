#include <gtest/gtest.h>

#include <random>

#include "depthwork/rules.hpp"
#include "sampling.hpp"

namespace depthwork {
namespace {

using testing::pair_cells;
using testing::random_pair;

PartialMap pm(int n, std::initializer_list<int> v) { return PartialMap::from_one_based(n, v); }

TEST(PairShape, LabelsTypeOnePair) {
  // alpha = {1,2}->1, {3}->2, {4,5}->3 ; beta sends 1 and 2 together
  auto a = pm(5, {1, 1, 2, 3, 3});
  auto b = pm(5, {1, 1, 2, 2, 3});
  auto s = shape_of(a, b);
  EXPECT_EQ(s.r, 2);
  EXPECT_EQ(s.type, 1);
  EXPECT_EQ(s.a, (std::vector<int>{2, 0, 1}));
  EXPECT_EQ(s.B[0], (std::vector<int>{2, 3}));
  EXPECT_EQ(s.B[1], (std::vector<int>{0, 1}));
  EXPECT_EQ(s.B[2], (std::vector<int>{4}));
}

TEST(Rules, DocumentedIChangeImAlpha) {
  IdealSpec spec{Family::I, 4, 3};
  auto a = pm(4, {1, 2, 0, 0});
  auto b = pm(4, {1, 0, 2, 0});
  RuleParams p;
  p.point = 3;
  auto res = apply_rule(RuleKind::IChangeImAlpha, spec, a, b, p);
  EXPECT_EQ(res.alpha, pm(4, {1, 4, 0, 0}));
  EXPECT_EQ(res.beta, b);
  auto ok = check(res.derivation);
  EXPECT_TRUE(ok) << ok.reason;
  EXPECT_EQ(res.derivation.lo, 2);
  EXPECT_EQ(res.derivation.hi, 3);
}

TEST(Rules, TChangeImBetaTouchesOnlyUnmetClass) {
  IdealSpec spec{Family::T, 5, 4};
  std::mt19937 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    auto [a, b] = random_pair(Family::T, 5, 2, rng);
    auto s = shape_of(a, b);
    for (int t = 0; t < 5; ++t) {
      if (b.in_image(t)) continue;
      RuleParams p;
      p.point = t;
      auto res = apply_rule(RuleKind::TChangeImBeta, spec, a, b, p);
      ASSERT_TRUE(check(res.derivation)) << check(res.derivation).reason;
      for (int x = 0; x < 5; ++x) {
        if (s.beta_class_of(x) == s.r)
          EXPECT_EQ(res.beta.at(x), t);
        else
          EXPECT_EQ(res.beta.at(x), b.at(x));
      }
      EXPECT_EQ(a * b, res.alpha * res.beta);
    }
  }
}

TEST(Rules, IdentityChoiceGivesEmptyDerivation) {
  IdealSpec spec{Family::I, 4, 3};
  auto a = pm(4, {1, 2, 0, 0});
  auto b = pm(4, {1, 0, 2, 0});
  RuleParams p;
  p.point = 1;  // current free image of alpha
  auto res = apply_rule(RuleKind::IChangeImAlpha, spec, a, b, p);
  EXPECT_TRUE(res.derivation.steps.empty());
  EXPECT_TRUE(check(res.derivation));
}

TEST(Rules, RejectsUnmetSideCondition) {
  IdealSpec spec{Family::I, 4, 3};
  auto a = pm(4, {1, 2, 0, 0});
  auto b = pm(4, {1, 0, 2, 0});
  RuleParams p;
  p.point = 0;  // inside dom beta
  EXPECT_THROW(apply_rule(RuleKind::IChangeImAlpha, spec, a, b, p), PreconditionError);
  EXPECT_THROW(apply_rule(RuleKind::TChangeImBeta, spec, a, b, p), PreconditionError);
  IdealSpec tight{Family::I, 4, 2};
  p.point = 3;
  EXPECT_THROW(apply_rule(RuleKind::IChangeImAlpha, tight, a, b, p), PreconditionError);
}

// Every admissible choice of every rule yields a checked derivation on random pairs.
TEST(Rules, RandomizedSoundness) {
  std::mt19937 rng(2024);
  for (RuleKind k : all_rules()) {
    const Family fam = rule_family(k);
    auto cells = pair_cells(fam, 6);
    int applied = 0;
    for (int trial = 0; trial < 50000 && applied < 100; ++trial) {
      auto [n, m, r] = cells[trial % cells.size()];
      IdealSpec spec{fam, n, m};
      auto [a, b] = random_pair(fam, n, r, rng);
      auto params = admissible_params(k, spec, a, b);
      if (params.empty()) continue;
      const auto& p = params[std::uniform_int_distribution<std::size_t>(0, params.size() - 1)(rng)];
      auto res = apply_rule(k, spec, a, b, p);
      auto ok = check(res.derivation);
      ASSERT_TRUE(ok) << rule_name(k) << " on " << a.str() << " " << b.str() << " step " << ok.step
                      << ": " << ok.reason;
      EXPECT_EQ(res.alpha * res.beta, a * b);
      EXPECT_EQ(res.derivation.lo, r + 1);
      EXPECT_EQ(res.derivation.hi, r + 2);
      EXPECT_EQ(res.alpha.rank(), r + 1);
      EXPECT_EQ(res.beta.rank(), r + 1);
      EXPECT_NE(std::make_pair(res.alpha, res.beta), std::make_pair(a, b));
      ++applied;
    }
    EXPECT_GE(applied, 100) << rule_name(k);
  }
}

// The two readings of the local kernel change for beta in I_n.
TEST(Rules, LocalKerBetaReadings) {
  int printed_fail = 0, printed_ok = 0, excluded_fail = 0;
  for (int n = 4; n <= 5; ++n)
    for (int m = 3; m < n; ++m)
      for (int r = 0; r + 2 <= m; ++r) {
        IdealSpec spec{Family::I, n, m};
        const auto& pool = testing::rank_pool(Family::I, n, r + 1);
        for (const auto& a : pool)
          for (const auto& b : pool) {
            if ((a * b).rank() != r) continue;
            auto s = shape_of(a, b);
            for (int x : s.undef_b) {
              for (auto reading : {KerBetaReading::AsPrinted, KerBetaReading::ImageExcluded}) {
                RuleParams p;
                p.point = x;
                p.reading = reading;
                RuleResult res;
                try {
                  res = apply_rule(RuleKind::ILocalKerBeta, spec, a, b, p);
                } catch (const PreconditionError&) {
                  continue;
                }
                bool ok = static_cast<bool>(check(res.derivation)) && res.alpha * res.beta == a * b;
                if (reading == KerBetaReading::AsPrinted)
                  (ok ? printed_ok : printed_fail)++;
                else if (!ok)
                  ++excluded_fail;
              }
            }
          }
      }
  EXPECT_EQ(excluded_fail, 0);
  EXPECT_GT(printed_ok, 0);
  EXPECT_GT(printed_fail, 0);
  RecordProperty("as_printed_checked", printed_ok);
  RecordProperty("as_printed_broken", printed_fail);
}

}  // namespace
}  // namespace depthwork

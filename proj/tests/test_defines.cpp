#include <gtest/gtest.h>

#include "depthwork/defines.hpp"
#include "depthwork/enumerate.hpp"
#include "depthwork/knuth_bendix.hpp"

using namespace depthwork;

namespace {

std::vector<IdealSpec> small_specs(int n_max) {
  std::vector<IdealSpec> out;
  for (Family f : {Family::I, Family::T, Family::PT})
    for (int n = 1; n <= n_max; ++n)
      for (int m = epsilon(f); m <= n; ++m) out.push_back({f, n, m});
  return out;
}

Presentation single_idempotent() {
  Presentation p;
  p.generators.push_back({"a", PartialMap::identity(1)});
  p.relations.push_back({{0, 0}, {0}});
  return p;
}

}  // namespace

TEST(SplitInvariant, CertifiesNonDefiningRestriction) {
  IdealSpec spec{Family::I, 3, 2};
  auto p = restriction(spec, 2);
  auto triples = candidate_triples(p, spec, 3);
  ASSERT_FALSE(triples.empty());
  auto chk = certify_split_invariant(p, spec, triples.front());
  ASSERT_TRUE(chk.certified) << chk.reason;
  EXPECT_EQ(p.evaluate(chk.inside), p.evaluate(chk.outside));
  auto rs = knuth_bendix(p);
  ASSERT_TRUE(rs.confluent());
  EXPECT_EQ(rs.equal(chk.inside, chk.outside), std::optional<bool>(false));
}

TEST(SplitInvariant, NeverCertifiesOnCayleyPresentation) {
  // in the full table every true equality is a consequence
  for (auto spec : {IdealSpec{Family::I, 3, 2}, IdealSpec{Family::T, 3, 2}, IdealSpec{Family::PT, 3, 3}}) {
    auto p = cayley(spec);
    auto ideal = make_ideal(spec);
    int tried = 0;
    for (int a = 0; a < ideal->size() && tried < 40; a += 3)
      for (int b = 0; b < ideal->size() && tried < 40; b += 5)
        for (int c = 0; c < ideal->size() && tried < 40; c += 7) {
          if (ideal->mul(ideal->mul(a, b), c) != ideal->mul(b, c)) continue;
          ++tried;
          Triple t{ideal->element(a), ideal->element(b), ideal->element(c)};
          EXPECT_FALSE(certify_split_invariant(p, spec, t).certified) << spec.str();
        }
    EXPECT_GT(tried, 0);
  }
}

TEST(SplitInvariant, RejectsTripleOutsideAlphabet) {
  IdealSpec spec{Family::I, 3, 2};
  auto p = restriction(spec, 2);
  auto rank1 = all_of_rank(Family::I, 3, 1).front();
  auto chk = certify_split_invariant(p, spec, {rank1, rank1, rank1});
  EXPECT_FALSE(chk.certified);
  EXPECT_FALSE(chk.reason.empty());
}

TEST(SplitInvariant, RightDivides) {
  auto s = PartialMap::from_one_based(3, {1, 1, 2});
  EXPECT_TRUE(right_divides(s, PartialMap::from_one_based(3, {3, 3, 1})));
  EXPECT_FALSE(right_divides(s, PartialMap::from_one_based(3, {1, 2, 3})));
  EXPECT_TRUE(right_divides(s, PartialMap::from_one_based(3, {0, 0, 0})));
}

TEST(Defines, CayleyAlwaysDefines) {
  for (const auto& spec : small_specs(3)) {
    auto v = defines(cayley(spec), spec, {});
    EXPECT_EQ(v.kind, VerdictKind::Defines) << spec.str() << " " << v.detail;
    ASSERT_TRUE(v.presented.has_value());
    EXPECT_EQ(*v.presented, static_cast<std::uint64_t>(make_ideal(spec)->size()));
  }
}

TEST(Defines, KnownCells) {
  EXPECT_EQ(defines(restriction({Family::T, 3, 2}, 1), {Family::T, 3, 2}, {}).kind, VerdictKind::Defines);
  EXPECT_EQ(defines(restriction({Family::I, 4, 3}, 2), {Family::I, 4, 3}, {}).kind, VerdictKind::Defines);
  auto v = defines(restriction({Family::I, 3, 2}, 2), {Family::I, 3, 2}, {});
  EXPECT_EQ(v.kind, VerdictKind::NotDefines);
  ASSERT_TRUE(v.witness.has_value());
}

TEST(Defines, WitnessIsCheckable) {
  for (const auto& spec : small_specs(3)) {
    for (int i = spec.eps(); i <= spec.m; ++i) {
      auto p = restriction(spec, i);
      auto v = defines(p, spec, {});
      ASSERT_NE(v.kind, VerdictKind::Inconclusive) << spec.str() << " i=" << i;
      if (v.kind != VerdictKind::NotDefines) continue;
      if (v.witness) {
        EXPECT_EQ(p.evaluate(v.witness->first), p.evaluate(v.witness->second));
        auto rs = knuth_bendix(p);
        if (rs.confluent()) EXPECT_EQ(rs.equal(v.witness->first, v.witness->second), std::optional<bool>(false));
      } else {
        EXPECT_NE(v.detail.find("size mismatch"), std::string::npos);
      }
    }
  }
}

TEST(Defines, MonotoneInRestrictionIndex) {
  for (const auto& spec : small_specs(3)) {
    bool below_defines = true;
    for (int i = spec.eps(); i <= spec.m; ++i) {
      auto v = defines(restriction(spec, i), spec, {});
      bool d = v.kind == VerdictKind::Defines;
      if (d) EXPECT_TRUE(below_defines) << spec.str() << " i=" << i;
      below_defines = below_defines && d;
    }
  }
}

TEST(Defines, EnginesAgreeOnSmallRestrictions) {
  for (const auto& spec : small_specs(3)) {
    for (int i = spec.eps(); i <= spec.m; ++i) {
      auto p = restriction(spec, i);
      auto t = enumerate(p, {20000, 0});
      auto rs = knuth_bendix(p);
      ASSERT_TRUE(rs.confluent()) << spec.str() << " i=" << i;
      auto nf = rs.normal_forms();
      if (t.closed()) {
        ASSERT_EQ(nf.kind, NormalFormCount::Kind::Finite);
        EXPECT_EQ(nf.count, t.classes) << spec.str() << " i=" << i;
      } else {
        EXPECT_EQ(nf.kind, NormalFormCount::Kind::Infinite) << spec.str() << " i=" << i;
      }
    }
  }
}

TEST(Defines, RejectsInvalidRelation) {
  IdealSpec spec{Family::T, 2, 2};
  auto p = cayley(spec);
  p.relations.push_back({{0}, {1}});
  EXPECT_THROW(defines(p, spec, {}), UsageError);
}

TEST(Defines, RejectsForeignGenerator) {
  IdealSpec spec{Family::I, 3, 1};
  auto p = cayley(spec);
  p.generators.push_back({"z", PartialMap::identity(3)});
  EXPECT_THROW(defines(p, spec, {}), UsageError);
}

TEST(Defines, InconclusiveOnlyWhenBudgetsExhausted) {
  IdealSpec spec{Family::I, 3, 2};
  Budgets b;
  b.size_budget = 5;
  b.witness_attempts = 0;
  b.use_kb = false;
  auto v = defines(restriction(spec, 1), spec, b);
  EXPECT_EQ(v.kind, VerdictKind::Inconclusive);
  EXPECT_FALSE(v.detail.empty());
}

TEST(Tietze, AddConsequenceAccepted) {
  IdealSpec spec{Family::I, 3, 2};
  auto p = restriction(spec, 1);
  auto ideal = make_ideal(spec);
  // a product that lands in rank 0 is not among the restriction's relations
  int s = -1, t = -1;
  for (int a = 0; a < ideal->count_rank_at_least(1) && s < 0; ++a)
    for (int b = 0; b < ideal->count_rank_at_least(1); ++b)
      if (ideal->rank_of(ideal->mul(a, b)) == 0) {
        s = a;
        t = b;
        break;
      }
  ASSERT_GE(s, 0);
  // the empty map is not a letter, so relate st to a longer word with the same value
  Word lhs{s, t};
  Word rhs{s, t, t};
  auto r = tietze(p, TietzeMove::T1, {{lhs, rhs}, "", {}});
  EXPECT_TRUE(r.accepted) << r.reason;
  EXPECT_EQ(r.result.relations.size(), p.relations.size() + 1);

  auto full = cayley(spec);
  int st = ideal->mul(s, t);
  auto removed = full;
  auto rel = Relation{{s, t}, {st}};
  auto it = std::find(removed.relations.begin(), removed.relations.end(), rel);
  ASSERT_NE(it, removed.relations.end());
  removed.relations.erase(it);
  auto back = tietze(removed, TietzeMove::T1, {rel, "", {}});
  EXPECT_TRUE(back.accepted) << back.reason;
}

TEST(Tietze, AddNonConsequenceRejected) {
  Presentation p;
  p.generators.push_back({"a", PartialMap::identity(1)});
  p.relations.push_back({{0, 0, 0}, {0}});
  auto r = tietze(p, TietzeMove::T1, {{{0, 0}, {0}}, "", {}});
  EXPECT_FALSE(r.accepted);
  EXPECT_NE(r.reason.find("not a consequence"), std::string::npos);
}

TEST(Tietze, RemoveOnlyRelationRejected) {
  auto p = single_idempotent();
  Budgets b;
  b.size_budget = 50;
  auto r = tietze(p, TietzeMove::T2, {{{0, 0}, {0}}, "", {}}, b);
  EXPECT_FALSE(r.accepted);
  EXPECT_EQ(r.result.relations.size(), 1u);
}

TEST(Tietze, RemoveRedundantRelationAccepted) {
  auto p = single_idempotent();
  p.relations.push_back({{0, 0, 0}, {0}});
  auto r = tietze(p, TietzeMove::T2, {{{0, 0, 0}, {0}}, "", {}});
  EXPECT_TRUE(r.accepted) << r.reason;
  EXPECT_EQ(r.result.relations.size(), 1u);
}

TEST(Tietze, AddThenRemoveGeneratorRoundTrips) {
  IdealSpec spec{Family::T, 2, 2};
  auto p = cayley(spec);
  Word w{0, 1};
  auto added = tietze(p, TietzeMove::T3, {{}, "fresh", w});
  ASSERT_TRUE(added.accepted) << added.reason;
  EXPECT_EQ(added.result.size(), p.size() + 1);
  EXPECT_EQ(added.result.generators.back().map, p.evaluate(w));
  Relation def{{p.size()}, w};
  auto removed = tietze(added.result, TietzeMove::T4, {def, "", {}});
  ASSERT_TRUE(removed.accepted) << removed.reason;
  EXPECT_EQ(removed.result.size(), p.size());
  EXPECT_EQ(removed.result.relations, p.relations);
  for (int g = 0; g < p.size(); ++g) EXPECT_EQ(removed.result.generators[g].map, p.generators[g].map);
  EXPECT_EQ(defines(removed.result, spec, {}).kind, VerdictKind::Defines);
}

TEST(Tietze, T3RequiresFreshSymbol) {
  auto p = cayley({Family::T, 2, 2});
  auto r = tietze(p, TietzeMove::T3, {{}, p.generators[0].symbol, {0}});
  EXPECT_FALSE(r.accepted);
}

TEST(Tietze, T4RequiresGeneratorAbsentFromWord) {
  auto p = single_idempotent();
  auto r = tietze(p, TietzeMove::T4, {{{0}, {0, 0}}, "", {}});
  EXPECT_FALSE(r.accepted);
}

#include "depthwork/rules.hpp"

#include <algorithm>
#include <array>
#include <map>

namespace depthwork {

namespace {

using Pts = std::vector<int>;

bool has(const Pts& v, int x) { return std::find(v.begin(), v.end(), x) != v.end(); }

Pts without(Pts v, std::initializer_list<int> xs) {
  for (int x : xs) v.erase(std::remove(v.begin(), v.end(), x), v.end());
  return v;
}

Pts points_outside(int n, const Pts& used) {
  Pts out;
  for (int x = 0; x < n; ++x)
    if (!has(used, x)) out.push_back(x);
  return out;
}

void put(PartialMap& f, const Pts& dom, int y) {
  for (int x : dom) f.set(x, y);
}

int least(const Pts& v, const char* what) {
  if (v.empty()) throw PreconditionError(std::string("no admissible ") + what);
  return *std::min_element(v.begin(), v.end());
}

void require(bool ok, const std::string& condition) {
  if (!ok) throw PreconditionError("side condition fails: " + condition);
}

PartialMap pid(int n, const Pts& pts) { return PartialMap::partial_identity(n, pts); }

}  // namespace

int PairShape::beta_class_of(int x) const {
  for (int k = 0; k <= r; ++k)
    if (has(B[k], x)) return k;
  return r + 1;
}

int PairShape::alpha_class_of(int x) const {
  for (int k = 0; k <= r; ++k)
    if (has(A[k], x)) return k;
  return r + 1;
}

Pts PairShape::image_a() const { return a; }
Pts PairShape::image_b() const { return b; }

PairShape shape_of(const PartialMap& alpha, const PartialMap& beta) {
  const int rk = alpha.rank();
  if (rk < 1 || beta.rank() != rk || (alpha * beta).rank() != rk - 1)
    throw PreconditionError("pair is not two letters of rank r+1 with product of rank r");
  PairShape s;
  s.n = alpha.n();
  s.r = rk - 1;
  const int r = s.r;
  auto aclasses = alpha.kernel_classes();
  auto bclasses = beta.kernel_classes();
  auto bclass = [&](int y) {
    for (std::size_t k = 0; k < bclasses.size(); ++k)
      if (has(bclasses[k], y)) return static_cast<int>(k);
    return -1;
  };
  std::map<int, std::vector<int>> hits;  // beta class -> alpha classes landing there
  int free_cls = -1;
  for (std::size_t k = 0; k < aclasses.size(); ++k) {
    int c = bclass(alpha.at(aclasses[k][0]));
    if (c < 0)
      free_cls = static_cast<int>(k);
    else
      hits[c].push_back(static_cast<int>(k));
  }
  std::vector<int> order;
  std::vector<int> border;
  int doubled = -1;
  for (auto& [c, ks] : hits)
    if (ks.size() == 2) doubled = c;
  // singly hit classes ordered by least element of the alpha class
  std::vector<std::pair<int, int>> singles;
  for (auto& [c, ks] : hits)
    if (ks.size() == 1) singles.push_back({ks[0], c});
  std::sort(singles.begin(), singles.end());
  for (auto [k, c] : singles) {
    order.push_back(k);
    border.push_back(c);
  }
  if (doubled >= 0) {
    s.type = 1;
    auto ks = hits[doubled];
    order.push_back(ks[0]);
    order.push_back(ks[1]);
    border.push_back(doubled);
  } else {
    s.type = 2;
    order.push_back(free_cls);
  }
  for (std::size_t c = 0; c < bclasses.size(); ++c)
    if (!hits.count(static_cast<int>(c))) border.push_back(static_cast<int>(c));
  if (order.size() != static_cast<std::size_t>(r + 1) || border.size() != static_cast<std::size_t>(r + 1))
    throw std::logic_error("pair labeling failed");
  for (int k : order) {
    s.A.push_back(aclasses[k]);
    s.a.push_back(alpha.at(aclasses[k][0]));
  }
  for (int c : border) {
    s.B.push_back(bclasses[c]);
    s.b.push_back(beta.at(bclasses[c][0]));
  }
  s.undef_a = alpha.complement_of_domain();
  s.undef_b = beta.complement_of_domain();
  return s;
}

namespace {

constexpr std::array<std::pair<RuleKind, std::string_view>, 21> kNames{{
    {RuleKind::IChangeImAlpha, "I.i"},
    {RuleKind::IChangeKerAlpha, "I.ii"},
    {RuleKind::IChangeImBeta, "I.iii"},
    {RuleKind::ILocalKerBeta, "I.iv"},
    {RuleKind::IGlobalKerBeta, "I.v"},
    {RuleKind::TChangeImBeta, "T.i"},
    {RuleKind::TChangeImAlpha, "T.ii"},
    {RuleKind::TMoveKerBeta, "T.iii"},
    {RuleKind::TSplitKerAlpha, "T.iv"},
    {RuleKind::TMoveKerAlpha, "T.move-ker-alpha"},
    {RuleKind::PT1ChangeImBeta, "PT1.im-beta"},
    {RuleKind::PT1ChangeImAlpha, "PT1.im-alpha"},
    {RuleKind::PT1MoveKerBeta, "PT1.ker-beta"},
    {RuleKind::PT1SplitKerAlpha, "PT1.split-ker-alpha"},
    {RuleKind::PT1MoveKerAlpha, "PT1.move-ker-alpha"},
    {RuleKind::PT2DropKerAlpha, "PT2.i"},
    {RuleKind::PT2ChangeFreeImAlpha, "PT2.ii"},
    {RuleKind::PT2ChangeImAlpha, "PT2.iii"},
    {RuleKind::PT2MoveKerBeta, "PT2.iv"},
    {RuleKind::PT2ChangeImBeta, "PT2.v"},
    {RuleKind::PTSwitch, "PT.switch"},
}};

}  // namespace

std::string_view rule_name(RuleKind k) {
  for (auto& [kind, name] : kNames)
    if (kind == k) return name;
  return "?";
}

std::optional<RuleKind> parse_rule(std::string_view s) {
  for (auto& [kind, name] : kNames)
    if (name == s) return kind;
  return std::nullopt;
}

Family rule_family(RuleKind k) {
  auto name = rule_name(k);
  if (name.substr(0, 2) == "PT") return Family::PT;
  if (name[0] == 'T') return Family::T;
  return Family::I;
}

const std::vector<RuleKind>& all_rules() {
  static const std::vector<RuleKind> v = [] {
    std::vector<RuleKind> out;
    for (auto& [kind, name] : kNames) out.push_back(kind);
    return out;
  }();
  return v;
}

namespace {

struct Ctx {
  IdealSpec spec;
  int n;
  int r;
  PartialMap alpha, beta;
  PairShape s;
};

RuleResult identity_result(const Ctx& c) {
  Builder bld(c.spec, c.r + 1, c.r + 2, {c.alpha, c.beta});
  return {c.alpha, c.beta, bld.finish()};
}

RuleResult finish(const Builder& bld) {
  Derivation d = bld.finish();
  return {d.end.at(0), d.end.at(1), d};
}

RuleResult dispatch(RuleKind kind, const Ctx& c, const RuleParams& p, bool dry);

RuleResult run(RuleKind kind, const IdealSpec& spec, const PartialMap& alpha, const PartialMap& beta,
               const RuleParams& p, bool dry) {
  if (rule_family(kind) != spec.fam)
    throw PreconditionError(std::string("rule ") + std::string(rule_name(kind)) +
                            " does not belong to family " + std::string(family_name(spec.fam)));
  if (alpha.n() != spec.n || beta.n() != spec.n || !member(alpha, spec.fam) || !member(beta, spec.fam))
    throw PreconditionError("letters are not in the family");
  Ctx c{spec, spec.n, alpha.rank() - 1, alpha, beta, shape_of(alpha, beta)};
  require(c.r + 2 <= spec.m, "r+2 <= m");
  return dispatch(kind, c, p, dry);
}

// ---------- I_n ----------

RuleResult i_change_im_alpha(const Ctx& c, const RuleParams& p, bool dry) {
  const auto& s = c.s;
  const int r = c.r;
  if (p.point == s.a[r]) return identity_result(c);
  require(has(s.undef_b, p.point), "a lies outside dom beta");
  if (dry) return {};
  int b = least(points_outside(c.n, s.b), "point outside im beta");
  PartialMap b1 = c.beta, b1p = c.beta;
  b1.set(s.a[r], b);
  b1p.set(p.point, b);
  PartialMap b2 = pid(c.n, s.b);
  PartialMap a2 = c.alpha;
  a2.set(s.A[r][0], p.point);
  Builder bld(c.spec, r + 1, r + 2, {c.alpha, c.beta});
  bld.expand(1, b1, b2);
  bld.pivot(0, a2, b1p);
  bld.contract(1);
  return finish(bld);
}

RuleResult i_change_ker_alpha(const Ctx& c, const RuleParams& p, bool dry) {
  const auto& s = c.s;
  const int r = c.r;
  if (p.point == s.A[r][0]) return identity_result(c);
  require(has(s.undef_a, p.point), "a lies outside dom alpha");
  Pts a_rest = without(s.undef_a, {p.point});
  Pts b_rest = without(s.undef_b, {s.a[r]});
  require(!a_rest.empty(), "|A| >= 2");
  require(!b_rest.empty(), "|B| >= 2");
  if (dry) return {};
  int ap = least(a_rest, "second point outside dom alpha");
  int bb = least(b_rest, "point of B");
  Pts dom = c.alpha.domain();
  dom.push_back(p.point);
  PartialMap a1 = pid(c.n, dom);
  PartialMap a2 = c.alpha;
  a2.set(ap, bb);
  PartialMap a2p = a2;
  a2p.unset(s.A[r][0]);
  a2p.set(p.point, s.a[r]);
  Pts bdom = c.beta.domain();
  bdom.push_back(bb);
  PartialMap b1 = pid(c.n, bdom);
  Builder bld(c.spec, r + 1, r + 2, {c.alpha, c.beta});
  bld.expand(0, a1, a2);
  bld.expand(2, b1, c.beta);
  bld.pivot(1, a2p, b1);
  bld.contract(0);
  bld.contract(1);
  return finish(bld);
}

RuleResult i_change_im_beta(const Ctx& c, const RuleParams& p, bool dry) {
  const auto& s = c.s;
  const int r = c.r;
  if (p.point == s.b[r]) return identity_result(c);
  require(p.point >= 0 && p.point < c.n && !has(s.b, p.point), "b lies outside im beta");
  Pts b_rest = without(s.undef_b, {s.a[r]});
  require(!b_rest.empty(), "|B| >= 2");
  if (dry) return {};
  int a = least(b_rest, "point of B");
  Pts used = s.b;
  used.push_back(p.point);
  int bp = least(points_outside(c.n, used), "second point outside im beta");
  Pts im = s.a;
  im.push_back(a);
  PartialMap a2 = pid(c.n, im);
  PartialMap b1 = c.beta, b1p = c.beta;
  b1.set(a, bp);
  b1p.set(s.B[r][0], p.point);
  b1p.set(a, bp);
  PartialMap b2 = pid(c.n, used);
  Builder bld(c.spec, r + 1, r + 2, {c.alpha, c.beta});
  bld.expand(0, c.alpha, a2);
  bld.expand(2, b1, b2);
  bld.pivot(1, a2, b1p);
  bld.contract(2);
  bld.contract(0);
  return finish(bld);
}

RuleResult i_local_ker_beta(const Ctx& c, const RuleParams& p, bool dry) {
  const auto& s = c.s;
  const int r = c.r;
  if (p.point == s.B[r][0]) return identity_result(c);
  require(has(s.undef_b, p.point), "b lies outside dom beta");
  if (p.reading == KerBetaReading::ImageExcluded)
    require(p.point != s.a[r], "b differs from the image of the free point of alpha");
  else
    require(p.point != s.A[r][0], "b differs from the free point of alpha");
  require(!s.undef_a.empty(), "A is nonempty");
  if (dry) return {};
  int a = least(s.undef_a, "point outside dom alpha");
  int bp = least(points_outside(c.n, s.b), "point outside im beta");
  PartialMap a1 = pid(c.n, c.alpha.domain());
  PartialMap a2 = c.alpha, a2p = c.alpha;
  a2.set(a, s.B[r][0]);
  a2p.set(a, p.point);
  PartialMap b1 = c.beta, b1p = c.beta;
  b1.set(p.point, bp);
  b1p.set(s.B[r][0], bp);
  b1p.set(p.point, s.b[r]);
  PartialMap b2 = pid(c.n, s.b);
  Builder bld(c.spec, r + 1, r + 2, {c.alpha, c.beta});
  bld.expand(0, a1, a2);
  bld.expand(2, b1, b2);
  bld.pivot(1, a2p, b1p);
  bld.contract(2);
  bld.contract(0);
  return finish(bld);
}

RuleResult i_global_ker_beta(const Ctx& c, const RuleParams& p, bool dry) {
  const auto& s = c.s;
  const int r = c.r;
  require(p.cls >= 0 && p.cls < r, "class index below r");
  const int i = p.cls;
  require(s.undef_b.size() >= 2, "|B| >= 2");
  require(has(s.undef_b, p.point) && p.point != s.a[r], "a' lies in B away from the free image of alpha");
  require(!s.undef_a.empty(), "A is nonempty");
  if (dry) return {};
  int a = least(s.undef_a, "point outside dom alpha");
  PartialMap a1 = pid(c.n, c.alpha.domain());
  PartialMap a2 = c.alpha;
  a2.set(a, s.B[r][0]);
  PartialMap a2p = a2;
  a2p.set(s.A[i][0], p.point);
  Pts bdom = c.beta.domain();
  bdom.push_back(p.point);
  PartialMap b1 = pid(c.n, bdom);
  PartialMap b1p = b1;
  b1p.set(s.a[i], p.point);
  b1p.set(p.point, s.a[i]);
  Builder bld(c.spec, r + 1, r + 2, {c.alpha, c.beta});
  bld.expand(0, a1, a2);
  bld.expand(2, b1, c.beta);
  bld.pivot(1, a2p, b1p);
  bld.contract(2);
  bld.contract(0);
  return finish(bld);
}

// ---------- T_n and PT_n type 1 ----------

void require_type(const Ctx& c, int type) {
  require(c.s.type == type, "pair is of type " + std::to_string(type));
}

RuleResult c1_change_im_beta(const Ctx& c, const RuleParams& p, bool dry) {
  require_type(c, 1);
  const auto& s = c.s;
  const int r = c.r;
  if (p.point == s.b[r]) return identity_result(c);
  require(p.point >= 0 && p.point < c.n && !has(s.b, p.point), "b' lies outside im beta");
  if (dry) return {};
  Pts used = s.b;
  used.push_back(p.point);
  int fresh = least(points_outside(c.n, used), "second point outside im beta");
  PartialMap a1(c.n);
  for (int x = 0; x < c.n; ++x) a1.set(x, s.a[r]);
  for (int k = 0; k < r; ++k) a1.set(s.a[k], s.a[k]);
  PartialMap b1(c.n);
  for (int k = 0; k < r - 1; ++k) put(b1, s.B[k], s.b[k]);
  put(b1, without(s.B[r - 1], {s.a[r - 1]}), fresh);
  b1.set(s.a[r - 1], s.b[r - 1]);
  put(b1, s.B[r], s.b[r]);
  PartialMap b1p = b1;
  put(b1p, s.B[r], p.point);
  Pts kept(s.b.begin(), s.b.begin() + (r - 1));
  kept.push_back(s.b[r]);
  kept.push_back(p.point);
  PartialMap b2(c.n);
  for (int x = 0; x < c.n; ++x) b2.set(x, has(kept, x) ? x : s.b[r - 1]);
  Builder bld(c.spec, r + 1, r + 2, {c.alpha, c.beta});
  bld.expand(0, c.alpha, a1);
  bld.expand(2, b1, b2);
  bld.pivot(1, a1, b1p);
  bld.contract(2);
  bld.contract(0);
  return finish(bld);
}

RuleResult c1_change_im_alpha(const Ctx& c, const RuleParams& p, bool dry) {
  require_type(c, 1);
  const auto& s = c.s;
  const int r = c.r;
  require(p.cls >= 0 && p.cls <= r, "class index at most r");
  const int i = p.cls;
  if (p.point == s.a[i]) return identity_result(c);
  const int j = s.beta_class_of(s.a[i]);
  require(has(s.B[j], p.point) && !has(s.a, p.point), "new image lies in the same beta class outside im alpha");
  if (dry) return {};
  int w = least(s.B[r], "point of the unmet beta class");
  PartialMap a2(c.n);
  for (int x = 0; x < c.n; ++x) a2.set(x, has(s.a, x) ? x : w);
  PartialMap a2p = a2;
  a2p.set(s.a[i], p.point);
  Builder bld(c.spec, r + 1, r + 2, {c.alpha, c.beta});
  bld.expand(0, c.alpha, a2);
  bld.pivot(1, a2p, c.beta);
  bld.contract(0);
  return finish(bld);
}

// move x from the unmet class B[r] (|B[r]| >= 2) to class t (t < r, or r+1 for undefined)
Derivation c1_move_from_unmet(const Ctx& c, int x, int t) {
  const auto& s = c.s;
  const int r = c.r;
  int keep = least(without(s.B[r], {x}), "second point of the unmet beta class");
  Pts fresh = points_outside(c.n, s.b);
  if (fresh.size() < 2) throw PreconditionError("no admissible pair of points outside im beta");
  int p1 = fresh[0], q1 = fresh[1];
  PartialMap a1(c.n);
  for (int y = 0; y < c.n; ++y) a1.set(y, has(s.a, y) ? y : keep);
  PartialMap b1 = c.beta, b1p = c.beta;
  b1.set(x, p1);
  b1p.set(x, q1);
  PartialMap b2(c.n);
  for (int y = 0; y < c.n; ++y) b2.set(y, s.b[r]);
  for (int k = 0; k < r; ++k) b2.set(s.b[k], s.b[k]);
  if (t <= r)
    b2.set(q1, s.b[t]);
  else
    b2.unset(q1);
  Builder bld(c.spec, r + 1, r + 2, {c.alpha, c.beta});
  bld.expand(0, c.alpha, a1);
  bld.expand(2, b1, b2);
  bld.pivot(1, a1, b1p);
  bld.contract(2);
  bld.contract(0);
  return bld.finish();
}

PartialMap moved_beta(const PairShape& s, const PartialMap& beta, int x, int t) {
  PartialMap out = beta;
  if (t <= s.r)
    out.set(x, s.b[t]);
  else
    out.unset(x);
  return out;
}

Ctx with_beta(const Ctx& c, const PartialMap& beta) {
  return Ctx{c.spec, c.n, c.r, c.alpha, beta, shape_of(c.alpha, beta)};
}

Derivation concat(Derivation a, const Derivation& b) {
  if (a.end != b.start) throw std::logic_error("concat: endpoints do not meet");
  a.end = b.end;
  a.steps.insert(a.steps.end(), b.steps.begin(), b.steps.end());
  a.tags.insert(a.tags.end(), b.tags.begin(), b.tags.end());
  return a;
}

RuleResult c1_move_ker_beta(const Ctx& c, const RuleParams& p, bool dry) {
  require_type(c, 1);
  const auto& s = c.s;
  const int r = c.r;
  const int x = p.point;
  require(x >= 0 && x < c.n && !has(s.a, x), "moved point lies outside im alpha");
  const int from = s.beta_class_of(x);
  const int to = p.target;
  const int top = c.spec.fam == Family::PT ? r + 1 : r;
  require(to >= 0 && to <= top, "target class index in range");
  if (from == to) return identity_result(c);
  if (from == r) require(s.B[r].size() >= 2, "|B_{r+1}| >= 2 when moving out of it");
  if (dry) return {};
  Derivation d;
  if (from == r) {
    d = c1_move_from_unmet(c, x, to);
  } else {
    PartialMap mid = moved_beta(s, c.beta, x, r);
    Ctx cm = with_beta(c, mid);
    d = reversed(c1_move_from_unmet(cm, x, from));
    if (to != r) d = concat(d, c1_move_from_unmet(cm, x, to));
  }
  return {d.end.at(0), d.end.at(1), d};
}

RuleResult c1_split_ker_alpha(const Ctx& c, const RuleParams& p, bool dry) {
  require_type(c, 1);
  const auto& s = c.s;
  const int r = c.r;
  require(p.cls >= 0 && p.cls < r - 1, "class index below r-1");
  const int i = p.cls;
  require(s.A[i].size() >= 2, "|A_i| >= 2");
  Pts rest = s.A[i];
  for (int x : p.part) {
    require(has(rest, x), "part lies inside A_i");
    rest = without(rest, {x});
  }
  require(!p.part.empty() && !rest.empty(), "part is a nonempty proper subset of A_i");
  require(p.point != p.point2 && has(s.B[i], p.point) && has(s.B[i], p.point2),
          "two distinct images inside B_i");
  if (dry) return {};
  int w = least(s.B[r], "point of the unmet beta class");
  PartialMap a1 = c.alpha;
  put(a1, p.part, p.point);
  put(a1, rest, p.point2);
  PartialMap a2(c.n), a2p(c.n);
  for (int x = 0; x < c.n; ++x) {
    a2.set(x, w);
    a2p.set(x, w);
  }
  for (int k = 0; k <= r; ++k)
    if (k != i) a2.set(s.a[k], s.a[k]);
  a2.set(p.point, s.a[i]);
  a2.set(p.point2, s.a[i]);
  for (int k = 0; k < r - 1; ++k)
    if (k != i) a2p.set(s.a[k], s.a[k]);
  a2p.set(p.point, p.point);
  a2p.set(p.point2, p.point2);
  a2p.set(s.a[r - 1], s.a[r - 1]);
  a2p.set(s.a[r], s.a[r - 1]);
  Builder bld(c.spec, r + 1, r + 2, {c.alpha, c.beta});
  bld.expand(0, a1, a2);
  bld.pivot(1, a2p, c.beta);
  bld.contract(0);
  return finish(bld);
}

RuleResult c1_move_ker_alpha_wide(const Ctx& c, int x) {
  const auto& s = c.s;
  const int r = c.r;
  const int xi = has(s.A[r - 1], x) ? r - 1 : r;
  const int yi = xi == r ? r - 1 : r;
  const int xv = s.a[xi], yv = s.a[yi];
  const Pts& dc = s.B[r - 1];
  int z = least(without(dc, {xv, yv}), "third point of the doubled beta class");
  int w = least(s.B[r], "point of the unmet beta class");
  PartialMap a1 = c.alpha;
  a1.set(x, yv);
  put(a1, s.A[yi], z);
  PartialMap a2(c.n), b1(c.n);
  for (int k = 0; k < r - 1; ++k) {
    put(a2, s.B[k], s.a[k]);
    put(b1, s.B[k], s.a[k]);
  }
  put(a2, dc, yv);
  a2.set(xv, xv);
  a2.set(yv, xv);
  put(a2, s.B[r], w);
  put(b1, dc, yv);
  b1.set(xv, xv);
  put(b1, s.B[r], w);
  Builder bld(c.spec, r + 1, r + 2, {c.alpha, c.beta});
  bld.tag("doubled class has at least three points");
  bld.expand(0, a1, a2);
  bld.contract(1);
  bld.expand(1, b1, c.beta);
  bld.contract(0);
  return finish(bld);
}

RuleResult c1_move_ker_alpha(const Ctx& c, const RuleParams& p, bool dry) {
  require_type(c, 1);
  const auto& s = c.s;
  const int r = c.r;
  const int x = p.point;
  require(has(s.A[r - 1], x) || has(s.A[r], x), "point lies in one of the two classes sharing a beta class");
  const int xi = has(s.A[r - 1], x) ? r - 1 : r;
  require(s.A[xi].size() >= 2, "the class of the point keeps another point");
  if (s.B[r - 1].size() >= 3) {
    if (dry) return {};
    return c1_move_ker_alpha_wide(c, x);
  }
  // borrow a point into the doubled class, move, and give it back
  int spare = -1, home = -1;
  for (int y = 0; y < c.n && spare < 0; ++y) {
    if (has(s.a, y)) continue;
    int k = s.beta_class_of(y);
    if (k < r - 1 || (k == r && s.B[r].size() >= 2)) spare = y, home = k;
  }
  if (spare < 0 && c.spec.fam == Family::PT && !s.undef_b.empty()) spare = s.undef_b[0], home = r + 1;
  require(spare >= 0, "a point outside im alpha can join the doubled class");
  if (dry) return {};
  RuleParams mv;
  mv.point = spare;
  mv.target = r - 1;
  auto step1 = c1_move_ker_beta(c, mv, false);
  Ctx c2 = with_beta(c, step1.beta);
  auto step2 = c1_move_ker_alpha_wide(c2, x);
  Ctx c3{c.spec, c.n, r, step2.alpha, step2.beta, shape_of(step2.alpha, step2.beta)};
  mv.target = home;
  auto step3 = c1_move_ker_beta(c3, mv, false);
  Derivation d = concat(concat(step1.derivation, step2.derivation), step3.derivation);
  d.tags.insert(d.tags.begin(), "doubled class has two points");
  return {d.end.at(0), d.end.at(1), d};
}

// ---------- PT_n type 2 ----------

RuleResult c2_drop_ker_alpha(const Ctx& c, const RuleParams& p, bool dry) {
  require_type(c, 2);
  const auto& s = c.s;
  const int r = c.r;
  require(has(s.A[r], p.point), "point lies in A_{r+1}");
  require(s.A[r].size() >= 2, "|A_{r+1}| >= 2");
  if (dry) return {};
  int aa = least(s.B[r], "point of the unmet beta class");
  Pts used = s.a;
  used.push_back(aa);
  int fresh = least(points_outside(c.n, used), "point outside im alpha");
  PartialMap a1 = c.alpha;
  a1.set(p.point, fresh);
  Pts keep(s.a.begin(), s.a.begin() + r);
  keep.push_back(aa);
  PartialMap a2 = pid(c.n, keep);
  a2.set(s.a[r], s.a[r]);
  a2.set(fresh, s.a[r]);
  keep.push_back(s.a[r]);
  PartialMap a2p = pid(c.n, keep);
  Builder bld(c.spec, r + 1, r + 2, {c.alpha, c.beta});
  bld.expand(0, a1, a2);
  bld.pivot(1, a2p, c.beta);
  bld.contract(0);
  return finish(bld);
}

RuleResult c2_change_free_im_alpha(const Ctx& c, const RuleParams& p, bool dry) {
  require_type(c, 2);
  const auto& s = c.s;
  const int r = c.r;
  if (p.point == s.a[r]) return identity_result(c);
  require(has(s.undef_b, p.point), "new image lies in B");
  if (dry) return {};
  int fresh = least(points_outside(c.n, s.b), "point outside im beta");
  PartialMap b1 = c.beta;
  b1.set(s.a[r], fresh);
  b1.set(p.point, fresh);
  PartialMap b2 = pid(c.n, s.b);
  PartialMap a2 = c.alpha;
  put(a2, s.A[r], p.point);
  Builder bld(c.spec, r + 1, r + 2, {c.alpha, c.beta});
  bld.expand(1, b1, b2);
  bld.pivot(0, a2, b1);
  bld.contract(1);
  return finish(bld);
}

RuleResult c2_change_im_alpha(const Ctx& c, const RuleParams& p, bool dry) {
  require_type(c, 2);
  const auto& s = c.s;
  const int r = c.r;
  require(p.cls >= 0 && p.cls < r, "class index below r");
  const int i = p.cls;
  if (p.point == s.a[i]) return identity_result(c);
  require(has(s.B[i], p.point), "new image lies in B_i");
  if (dry) return {};
  int w = least(s.B[r], "point of the unmet beta class");
  Pts im = s.a;
  im.push_back(w);
  PartialMap a1 = pid(c.n, im);
  PartialMap a1p = a1;
  a1p.set(s.a[i], p.point);
  Builder bld(c.spec, r + 1, r + 2, {c.alpha, c.beta});
  bld.expand(0, c.alpha, a1);
  bld.pivot(1, a1p, c.beta);
  bld.contract(0);
  return finish(bld);
}

RuleResult c2_move_ker_beta(const Ctx& c, const RuleParams& p, bool dry) {
  require_type(c, 2);
  const auto& s = c.s;
  const int r = c.r;
  const int x = p.point;
  require(has(s.undef_b, x) && x != s.a[r], "moved point lies in B away from the free image of alpha");
  require(p.target >= 0 && p.target <= r, "target class index in range");
  if (dry) return {};
  int w = least(s.B[r], "point of the unmet beta class");
  Pts im = s.a;
  im.push_back(w);
  PartialMap a1 = pid(c.n, im);
  PartialMap b1(c.n), b2(c.n);
  for (int k = 0; k < r; ++k) {
    put(b1, s.B[k], s.a[k]);
    b2.set(s.a[k], s.b[k]);
  }
  put(b1, s.B[r], w);
  b2.set(w, s.b[r]);
  PartialMap b1p = b1;
  b1.set(x, s.a[r]);
  b1p.set(x, x);
  b2.set(x, s.b[p.target]);
  Builder bld(c.spec, r + 1, r + 2, {c.alpha, c.beta});
  bld.expand(0, c.alpha, a1);
  bld.expand(2, b1, b2);
  bld.pivot(1, a1, b1p);
  bld.contract(2);
  bld.contract(0);
  return finish(bld);
}

RuleResult c2_change_im_beta(const Ctx& c, const RuleParams& p, bool dry) {
  require_type(c, 2);
  const auto& s = c.s;
  const int r = c.r;
  if (p.point == s.b[r]) return identity_result(c);
  require(p.point >= 0 && p.point < c.n && !has(s.b, p.point), "new image lies outside im beta");
  if (dry) return {};
  Pts used = s.b;
  used.push_back(p.point);
  int fresh = least(points_outside(c.n, used), "second point outside im beta");
  PartialMap a1 = pid(c.n, s.a);
  PartialMap b1 = c.beta;
  put(b1, s.undef_b, fresh);
  PartialMap b1p = b1;
  put(b1p, s.B[r], p.point);
  PartialMap b2 = pid(c.n, used);
  Builder bld(c.spec, r + 1, r + 2, {c.alpha, c.beta});
  bld.expand(0, c.alpha, a1);
  bld.expand(2, b1, b2);
  bld.pivot(1, a1, b1p);
  bld.contract(2);
  bld.contract(0);
  return finish(bld);
}

RuleResult pt_switch(const Ctx& c, const RuleParams& p, bool dry) {
  require_type(c, 2);
  const auto& s = c.s;
  const int r = c.r;
  require(p.cls >= 0 && p.cls < r, "class index below r");
  const int k = p.cls;
  require(s.B[k].size() >= 2, "|B_r| >= 2");
  Pts rest = s.A[k];
  for (int x : p.part) {
    require(has(rest, x), "part lies inside A_r");
    rest = without(rest, {x});
  }
  require(!p.part.empty() && !rest.empty(), "part is a nonempty proper subset of A_r");
  require(p.point != p.point2 && has(s.B[k], p.point) && has(s.B[k], p.point2),
          "two distinct images inside B_r");
  if (dry) return {};
  int w = least(s.B[r], "point of the unmet beta class");
  PartialMap a1 = c.alpha;
  put(a1, p.part, p.point);
  put(a1, rest, p.point2);
  int q = s.a[k];
  if (q == p.point || q == p.point2) q = least(points_outside(c.n, a1.image()), "point outside the split image");
  Pts others;
  for (int j = 0; j <= r; ++j)
    if (j != k) others.push_back(s.a[j]);
  PartialMap a2 = pid(c.n, others);
  a2.set(p.point, s.a[k]);
  a2.set(p.point2, s.a[k]);
  a2.set(q, w);
  others.pop_back();  // drop the free image a[r]
  others.push_back(p.point);
  others.push_back(p.point2);
  PartialMap a2p = pid(c.n, others);
  a2p.set(q, w);
  Builder bld(c.spec, r + 1, r + 2, {c.alpha, c.beta});
  bld.expand(0, a1, a2);
  bld.pivot(1, a2p, c.beta);
  bld.contract(0);
  return finish(bld);
}

RuleResult dispatch(RuleKind kind, const Ctx& c, const RuleParams& p, bool dry) {
  switch (kind) {
    case RuleKind::IChangeImAlpha: return i_change_im_alpha(c, p, dry);
    case RuleKind::IChangeKerAlpha: return i_change_ker_alpha(c, p, dry);
    case RuleKind::IChangeImBeta: return i_change_im_beta(c, p, dry);
    case RuleKind::ILocalKerBeta: return i_local_ker_beta(c, p, dry);
    case RuleKind::IGlobalKerBeta: return i_global_ker_beta(c, p, dry);
    case RuleKind::TChangeImBeta:
    case RuleKind::PT1ChangeImBeta: return c1_change_im_beta(c, p, dry);
    case RuleKind::TChangeImAlpha:
    case RuleKind::PT1ChangeImAlpha: return c1_change_im_alpha(c, p, dry);
    case RuleKind::TMoveKerBeta:
    case RuleKind::PT1MoveKerBeta: return c1_move_ker_beta(c, p, dry);
    case RuleKind::TSplitKerAlpha:
    case RuleKind::PT1SplitKerAlpha: return c1_split_ker_alpha(c, p, dry);
    case RuleKind::TMoveKerAlpha:
    case RuleKind::PT1MoveKerAlpha: return c1_move_ker_alpha(c, p, dry);
    case RuleKind::PT2DropKerAlpha: return c2_drop_ker_alpha(c, p, dry);
    case RuleKind::PT2ChangeFreeImAlpha: return c2_change_free_im_alpha(c, p, dry);
    case RuleKind::PT2ChangeImAlpha: return c2_change_im_alpha(c, p, dry);
    case RuleKind::PT2MoveKerBeta: return c2_move_ker_beta(c, p, dry);
    case RuleKind::PT2ChangeImBeta: return c2_change_im_beta(c, p, dry);
    case RuleKind::PTSwitch: return pt_switch(c, p, dry);
  }
  throw std::logic_error("unknown rule");
}

std::vector<Pts> proper_parts(const Pts& cls) {
  std::vector<Pts> out;
  const int k = static_cast<int>(cls.size());
  // parts holding the least element, so each split appears once
  for (int mask = 1; mask < (1 << k) - 1; ++mask) {
    if (!(mask & 1)) continue;
    Pts part;
    for (int t = 0; t < k; ++t)
      if (mask >> t & 1) part.push_back(cls[t]);
    out.push_back(part);
  }
  return out;
}

}  // namespace

RuleResult apply_rule(RuleKind kind, const IdealSpec& spec, const PartialMap& alpha,
                      const PartialMap& beta, const RuleParams& params) {
  return run(kind, spec, alpha, beta, params, false);
}

std::vector<RuleParams> admissible_params(RuleKind kind, const IdealSpec& spec,
                                          const PartialMap& alpha, const PartialMap& beta) {
  std::vector<RuleParams> out;
  PairShape s;
  try {
    s = shape_of(alpha, beta);
  } catch (const PreconditionError&) {
    return out;
  }
  const int n = spec.n, r = s.r;
  auto accept = [&](const RuleParams& p) {
    try {
      RuleResult res = run(kind, spec, alpha, beta, p, true);
      // dry runs return empty letters; identity choices return the pair itself
      if (res.alpha.n() == 0) out.push_back(p);
    } catch (const PreconditionError&) {
    }
  };
  auto name = rule_name(kind);
  const bool uses_cls = name == "I.v" || name == "T.ii" || name == "PT1.im-alpha" || name == "PT2.iii";
  const bool uses_target = name == "T.iii" || name == "PT1.ker-beta" || name == "PT2.iv";
  const bool uses_split = name == "T.iv" || name == "PT1.split-ker-alpha" || name == "PT.switch";
  if (uses_split) {
    for (int k = 0; k <= r; ++k)
      for (const auto& part : proper_parts(s.A[k]))
        for (int x = 0; x < n; ++x)
          for (int y = 0; y < n; ++y) {
            RuleParams p;
            p.cls = k;
            p.part = part;
            p.point = x;
            p.point2 = y;
            accept(p);
          }
    return out;
  }
  for (int x = 0; x < n; ++x) {
    if (uses_cls) {
      for (int k = 0; k <= r; ++k) {
        RuleParams p;
        p.cls = k;
        p.point = x;
        accept(p);
      }
    } else if (uses_target) {
      for (int t = 0; t <= r + 1; ++t) {
        RuleParams p;
        p.point = x;
        p.target = t;
        accept(p);
      }
    } else {
      RuleParams p;
      p.point = x;
      accept(p);
    }
  }
  return out;
}

}  // namespace depthwork

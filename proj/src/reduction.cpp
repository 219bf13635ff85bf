#include "depthwork/reduction.hpp"

#include <algorithm>
#include <numeric>

#include "depthwork/rules.hpp"

namespace depthwork {

namespace {

using Pts = std::vector<int>;

bool has(const Pts& v, int x) { return std::find(v.begin(), v.end(), x) != v.end(); }

Pts without(Pts v, std::initializer_list<int> xs) {
  for (int x : xs) v.erase(std::remove(v.begin(), v.end(), x), v.end());
  return v;
}

int least(const Pts& v) {
  if (v.empty()) throw std::logic_error("staged algorithm ran out of points");
  return *std::min_element(v.begin(), v.end());
}

void require(bool ok, const std::string& condition) {
  if (!ok) throw PreconditionError("precondition fails: " + condition);
}

void require_letter(const IdealSpec& spec, const PartialMap& f) {
  require(f.n() == spec.n && member(f, spec.fam) && f.rank() <= spec.m,
          "letter " + (f.n() ? f.str() : std::string("?")) + " lies in the ideal");
}

// Current pair of the staged algorithms with its growing derivation.
class Walk {
 public:
  Walk(const IdealSpec& spec, PartialMap g, PartialMap d)
      : spec_(spec), r_(g.rank() - 1), g_(g), d_(d), bld_(spec, r_ + 1, r_ + 2, {g, d}) {}

  const PartialMap& g() const { return g_; }
  const PartialMap& d() const { return d_; }
  int r() const { return r_; }
  PairShape shape() const { return shape_of(g_, d_); }

  void apply(RuleKind k, const RuleParams& p) {
    auto res = apply_rule(k, spec_, g_, d_, p);
    take(res.derivation);
  }

  // run rule k backwards: (g2, d2) is the pair it starts from and must land on the current pair
  void apply_back(RuleKind k, const PartialMap& g2, const PartialMap& d2, const RuleParams& p) {
    auto res = apply_rule(k, spec_, g2, d2, p);
    if (res.alpha != g_ || res.beta != d_) throw std::logic_error("backward rule misses the current pair");
    take(reversed(res.derivation));
  }

  void take(const Derivation& d) {
    bld_.splice(d, 0);
    g_ = bld_.at(0);
    d_ = bld_.at(1);
  }

  void tag(std::string t) { bld_.tag(std::move(t)); }
  Derivation finish() const { return bld_.finish(); }

 private:
  IdealSpec spec_;
  int r_;
  PartialMap g_, d_;
  Builder bld_;
};

// ---------- I_n ----------

void staged_i(Walk& w, const PartialMap& alpha, const PartialMap& beta) {
  const int r = w.r();
  const PairShape t = shape_of(alpha, beta);
  auto param = [](int point, int cls = -1) {
    RuleParams p;
    p.point = point;
    p.cls = cls;
    return p;
  };
  // step 1: agree with alpha on the points sent into dom beta
  for (int k = 0; k < r; ++k) {
    const int p = t.A[k][0], want = t.a[k];
    if (w.g().at(p) == want) continue;
    PairShape s = w.shape();
    if (w.d().defined(want)) {
      if (want == s.B[r][0]) {
        w.apply(RuleKind::ILocalKerBeta, param(least(without(s.undef_b, {s.a[r]}))));
      } else {
        const int q = w.g().preimage(want).at(0);
        w.apply(RuleKind::IGlobalKerBeta, param(least(without(s.undef_b, {s.a[r]})), s.alpha_class_of(q)));
      }
      s = w.shape();
    }
    if (want == s.a[r]) {
      w.apply(RuleKind::IChangeImAlpha, param(least(without(s.undef_b, {s.a[r]}))));
      s = w.shape();
    }
    w.apply(RuleKind::IGlobalKerBeta, param(want, s.alpha_class_of(p)));
  }
  // step 2: the free point of alpha, then its image
  PairShape s = w.shape();
  if (s.A[r][0] != t.A[r][0]) w.apply(RuleKind::IChangeKerAlpha, param(t.A[r][0]));
  s = w.shape();
  if (s.a[r] != t.a[r]) {
    if (w.d().defined(t.a[r])) {
      w.apply(RuleKind::ILocalKerBeta, param(least(without(s.undef_b, {s.a[r]}))));
      s = w.shape();
    }
    w.apply(RuleKind::IChangeImAlpha, param(t.a[r]));
  }
  // step 3: the free point of beta, image first
  s = w.shape();
  if (s.b[r] != t.b[r]) w.apply(RuleKind::IChangeImBeta, param(t.b[r]));
  s = w.shape();
  if (s.B[r][0] != t.B[r][0]) w.apply(RuleKind::ILocalKerBeta, param(t.B[r][0]));
}

// ---------- T_n and PT_n, type 1 ----------

struct Type1Rules {
  RuleKind im_beta, im_alpha, ker_beta, split_alpha, move_alpha;
};

Type1Rules type1_rules(Family fam) {
  if (fam == Family::T)
    return {RuleKind::TChangeImBeta, RuleKind::TChangeImAlpha, RuleKind::TMoveKerBeta,
            RuleKind::TSplitKerAlpha, RuleKind::TMoveKerAlpha};
  return {RuleKind::PT1ChangeImBeta, RuleKind::PT1ChangeImAlpha, RuleKind::PT1MoveKerBeta,
          RuleKind::PT1SplitKerAlpha, RuleKind::PT1MoveKerAlpha};
}

// a point outside im gamma that may leave its beta class, avoiding the listed points and class
int spare_point(const Walk& w, const PairShape& s, int avoid_cls, const Pts& avoid, bool undefined_ok) {
  const int r = s.r;
  for (int y = 0; y < s.n; ++y) {
    if (w.g().in_image(y) || has(avoid, y)) continue;
    const int k = s.beta_class_of(y);
    if (k == avoid_cls) continue;
    if (k < r || (k == r && s.B[r].size() >= 2) || (k == r + 1 && undefined_ok)) return y;
  }
  throw std::logic_error("no spare point available");
}

void move1(Walk& w, const Type1Rules& rk, int x, int to) {
  RuleParams p;
  p.point = x;
  p.target = to;
  w.apply(rk.ker_beta, p);
}

void staged_type1(Walk& w, Family fam, const PartialMap& alpha, const PartialMap& beta) {
  const int r = w.r();
  const Type1Rules rk = type1_rules(fam);
  const bool pt = fam == Family::PT;
  const PairShape t = shape_of(alpha, beta);
  // phase A: kernel of gamma equal to kernel of alpha
  Pts merged = t.A[r - 1];
  merged.insert(merged.end(), t.A[r].begin(), t.A[r].end());
  std::sort(merged.begin(), merged.end());
  {
    PairShape s = w.shape();
    Pts cur = s.A[r - 1];
    cur.insert(cur.end(), s.A[r].begin(), s.A[r].end());
    std::sort(cur.begin(), cur.end());
    if (cur != merged) {
      w.tag("split the class alpha doubles");
      int i = s.alpha_class_of(merged[0]);
      if (s.B[i].size() < 2) {
        move1(w, rk, spare_point(w, s, i, {}, pt), i);
        s = w.shape();
        i = s.alpha_class_of(merged[0]);
      }
      RuleParams p;
      p.cls = i;
      p.part = t.A[r - 1];
      p.point = s.a[i];
      p.point2 = least(without(s.B[i], {s.a[i]}));
      w.apply(rk.split_alpha, p);
    }
  }
  for (;;) {
    PairShape s = w.shape();
    auto wrong = [&](const Pts& y1, const Pts& x1, const Pts& y2, const Pts& x2) {
      Pts out;
      for (int v : y1)
        if (!has(x1, v)) out.push_back(v);
      for (int v : y2)
        if (!has(x2, v)) out.push_back(v);
      return out;
    };
    Pts w1 = wrong(s.A[r - 1], t.A[r - 1], s.A[r], t.A[r]);
    Pts w2 = wrong(s.A[r - 1], t.A[r], s.A[r], t.A[r - 1]);
    const Pts& bad = w1.size() <= w2.size() ? w1 : w2;
    if (bad.empty()) break;
    int pick = -1;
    for (int v : bad)
      if (s.A[s.alpha_class_of(v)].size() >= 2) {
        pick = v;
        break;
      }
    if (pick < 0) throw std::logic_error("kernel adjustment stuck");
    RuleParams p;
    p.point = pick;
    w.apply(rk.move_alpha, p);
  }
  // phase B: images of gamma equal to images of alpha
  for (int k = 0; k <= r; ++k) {
    const Pts& K = t.A[k];
    const int want = t.a[k];
    if (w.g().at(K[0]) == want) continue;
    if (w.g().in_image(want)) {
      PairShape s = w.shape();
      int cls = s.beta_class_of(want);
      Pts free_pts;
      for (int y : s.B[cls])
        if (!w.g().in_image(y)) free_pts.push_back(y);
      if (free_pts.empty()) {
        move1(w, rk, spare_point(w, s, cls, {}, pt), cls);
        s = w.shape();
        cls = s.beta_class_of(want);
        for (int y : s.B[cls])
          if (!w.g().in_image(y)) free_pts.push_back(y);
      }
      RuleParams p;
      p.cls = s.alpha_class_of(w.g().preimage(want).at(0));
      p.point = least(free_pts);
      w.apply(rk.im_alpha, p);
    }
    PairShape s = w.shape();
    const int have = w.g().at(K[0]);
    const int cc = s.beta_class_of(have);
    const int ct = s.beta_class_of(want);
    if (ct != cc) {
      if (ct == r && s.B[r].size() == 1) {
        move1(w, rk, spare_point(w, s, r, {want}, pt), r);
        s = w.shape();
      }
      move1(w, rk, want, s.beta_class_of(have));
      s = w.shape();
    }
    RuleParams p;
    p.cls = s.alpha_class_of(K[0]);
    p.point = want;
    w.apply(rk.im_alpha, p);
  }
  // phase C: beta, image of the unmet class first, then class membership
  PairShape s = w.shape();
  if (s.b[r] != t.b[r]) {
    RuleParams p;
    p.point = t.b[r];
    w.apply(rk.im_beta, p);
  }
  for (int pass = 0; pass < 2; ++pass)
    for (int x = 0; x < w.g().n(); ++x) {
      if (alpha.in_image(x)) continue;
      const bool into_unmet = beta.defined(x) && beta.at(x) == t.b[r];
      if ((pass == 0) != into_unmet) continue;
      s = w.shape();
      int to = r + 1;
      if (beta.defined(x))
        for (int k = 0; k <= r; ++k)
          if (s.b[k] == beta.at(x)) to = k;
      if (s.beta_class_of(x) != to) move1(w, rk, x, to);
    }
}

// ---------- PT_n, type 2 ----------

// move x (outside im gamma, not its free image) between beta classes, r+1 meaning undefined
void move2(Walk& w, int x, int to) {
  PairShape s = w.shape();
  const int r = s.r;
  const int from = s.beta_class_of(x);
  if (from == to) return;
  if (from != r + 1) {
    PartialMap d2 = w.d();
    d2.unset(x);
    RuleParams p;
    p.point = x;
    p.target = from;
    w.apply_back(RuleKind::PT2MoveKerBeta, w.g(), d2, p);
    if (to == r + 1) return;
    s = w.shape();
  }
  RuleParams p;
  p.point = x;
  p.target = to;
  w.apply(RuleKind::PT2MoveKerBeta, p);
}

int spare_point2(const Walk& w, const PairShape& s, int avoid_cls, const Pts& avoid) {
  const int r = s.r;
  for (int y = 0; y < s.n; ++y) {
    if (w.g().in_image(y) || has(avoid, y)) continue;
    const int k = s.beta_class_of(y);
    if (k == avoid_cls) continue;
    if (k < r || (k == r && s.B[r].size() >= 2) || k == r + 1) return y;
  }
  throw std::logic_error("no spare point available");
}

void staged_type2(Walk& w, const PartialMap& alpha, const PartialMap& beta) {
  const int r = w.r();
  const PairShape t = shape_of(alpha, beta);
  // step 1: the class sent outside dom beta
  {
    PairShape s = w.shape();
    for (int y : t.A[r]) {
      if (has(s.A[r], y)) continue;
      PartialMap g2 = w.g();
      g2.set(y, s.a[r]);
      RuleParams p;
      p.point = y;
      w.apply_back(RuleKind::PT2DropKerAlpha, g2, w.d(), p);
      s = w.shape();
    }
    for (int x : s.A[r])
      if (!has(t.A[r], x)) {
        RuleParams p;
        p.point = x;
        w.apply(RuleKind::PT2DropKerAlpha, p);
      }
  }
  // step 2: images of the other classes
  for (int k = 0; k < r; ++k) {
    const Pts& K = t.A[k];
    const int want = t.a[k];
    if (w.g().at(K[0]) == want) continue;
    PairShape s = w.shape();
    if (w.g().in_image(want)) {
      if (want == s.a[r]) {
        if (s.undef_b.size() < 2) {
          move2(w, spare_point2(w, s, r + 1, {}), r + 1);
          s = w.shape();
        }
        RuleParams p;
        p.point = least(without(s.undef_b, {s.a[r]}));
        w.apply(RuleKind::PT2ChangeFreeImAlpha, p);
      } else {
        int cls = s.beta_class_of(want);
        if (s.B[cls].size() < 2) {
          move2(w, spare_point2(w, s, cls, {}), cls);
          s = w.shape();
          cls = s.beta_class_of(want);
        }
        RuleParams p;
        p.cls = cls;
        p.point = least(without(s.B[cls], {want}));
        w.apply(RuleKind::PT2ChangeImAlpha, p);
      }
      s = w.shape();
    }
    const int have = w.g().at(K[0]);
    if (s.beta_class_of(want) != s.beta_class_of(have)) {
      if (s.beta_class_of(want) == r && s.B[r].size() == 1) {
        move2(w, spare_point2(w, s, r, {want}), r);
        s = w.shape();
      }
      move2(w, want, s.beta_class_of(have));
      s = w.shape();
    }
    RuleParams p;
    p.cls = s.beta_class_of(have);
    p.point = want;
    w.apply(RuleKind::PT2ChangeImAlpha, p);
  }
  // step 3: the free image of gamma
  PairShape s = w.shape();
  if (s.a[r] != t.a[r]) {
    if (w.d().defined(t.a[r])) {
      if (s.beta_class_of(t.a[r]) == r && s.B[r].size() == 1) {
        move2(w, spare_point2(w, s, r, {t.a[r]}), r);
        s = w.shape();
      }
      move2(w, t.a[r], r + 1);
    }
    RuleParams p;
    p.point = t.a[r];
    w.apply(RuleKind::PT2ChangeFreeImAlpha, p);
  }
  // step 4: beta
  s = w.shape();
  if (s.b[r] != t.b[r]) {
    RuleParams p;
    p.point = t.b[r];
    w.apply(RuleKind::PT2ChangeImBeta, p);
  }
  for (int pass = 0; pass < 2; ++pass)
    for (int x = 0; x < w.g().n(); ++x) {
      if (alpha.in_image(x)) continue;
      const bool into_unmet = beta.defined(x) && beta.at(x) == t.b[r];
      if ((pass == 0) != into_unmet) continue;
      s = w.shape();
      int to = r + 1;
      if (beta.defined(x))
        for (int k = 0; k <= r; ++k)
          if (s.b[k] == beta.at(x)) to = k;
      move2(w, x, to);
    }
}

// type 2 -> type 1 through the switch rule, splitting a class with two points
void switch_to_type1(Walk& w) {
  PairShape s = w.shape();
  const int r = s.r;
  int k = -1;
  for (int j = 0; j < r && k < 0; ++j)
    if (s.A[j].size() >= 2) k = j;
  if (k < 0) throw std::logic_error("no class to split for the switch");
  const int anchor = s.A[k][0];
  if (s.B[k].size() < 2) {
    move2(w, spare_point2(w, s, k, {}), k);
    s = w.shape();
    k = s.alpha_class_of(anchor);
  }
  RuleParams p;
  p.cls = k;
  p.part = {s.A[k][0]};
  p.point = s.a[k];
  p.point2 = least(without(s.B[k], {s.a[k]}));
  w.tag("switch from type 2 to type 1");
  w.apply(RuleKind::PTSwitch, p);
}

void check_pair(const IdealSpec& spec, const PartialMap& a, const PartialMap& b, int r) {
  require_letter(spec, a);
  require_letter(spec, b);
  require(a.rank() == r + 1 && b.rank() == r + 1, "both letters have rank r+1");
  require((a * b).rank() == r, "product has rank r");
}

}  // namespace

Derivation equalize_pairs(const IdealSpec& spec, const PartialMap& alpha, const PartialMap& beta,
                          const PartialMap& gamma, const PartialMap& delta) {
  const int r = alpha.rank() - 1;
  check_pair(spec, alpha, beta, r);
  check_pair(spec, gamma, delta, r);
  require(alpha * beta == gamma * delta, "both pairs have the same product");
  require(r >= epsilon(spec.fam), "r is at least the least rank of the family");
  require(r + 2 <= spec.m, "r+2 <= m");
  Walk w(spec, gamma, delta);
  if (gamma == alpha && delta == beta) return w.finish();
  if (spec.fam == Family::I) {
    staged_i(w, alpha, beta);
  } else if (spec.fam == Family::T) {
    staged_type1(w, Family::T, alpha, beta);
  } else {
    const int tt = shape_of(alpha, beta).type;
    const int ct = w.shape().type;
    if (tt == 2 && ct == 2) {
      w.tag("both pairs of type 2");
      staged_type2(w, alpha, beta);
    } else {
      if (ct == 2) switch_to_type1(w);
      if (tt == 1) {
        staged_type1(w, Family::PT, alpha, beta);
      } else {
        Walk back(spec, alpha, beta);
        switch_to_type1(back);
        staged_type1(w, Family::PT, back.g(), back.d());
        w.take(reversed(back.finish()));
      }
    }
  }
  if (w.g() != alpha || w.d() != beta) throw std::logic_error("staged algorithm missed the target pair");
  return w.finish();
}

TripleReduction reduce_triple(const IdealSpec& spec, const PartialMap& alpha, const PartialMap& beta,
                              const PartialMap& gamma) {
  const int r = alpha.rank() - 1;
  check_pair(spec, alpha, beta, r);
  check_pair(spec, beta, gamma, r);
  require((alpha * beta * gamma).rank() == r, "triple product has rank r");
  require(r >= epsilon(spec.fam), "r is at least the least rank of the family");
  require(r <= 2 * spec.m - spec.n - 1, "r <= 2m-n-1");
  require(r + 2 <= spec.m, "r+2 <= m");
  const int n = spec.n;
  const PartialMap target = alpha * beta * gamma;
  // send the class of beta that alpha misses to a point gamma keeps apart
  const PairShape s = shape_of(alpha, beta);
  const PartialMap ab = alpha * beta;
  Pts seen;
  for (int v : ab.image()) seen.push_back(gamma.at(v));
  int fresh = -1;
  for (int y = 0; y < n && fresh < 0; ++y)
    if (gamma.defined(y) && !has(seen, gamma.at(y))) fresh = y;
  if (fresh < 0) throw std::logic_error("gamma has no class outside the image of alpha*beta");
  RuleKind k = spec.fam == Family::I   ? RuleKind::IChangeImBeta
               : spec.fam == Family::T ? RuleKind::TChangeImBeta
               : s.type == 1           ? RuleKind::PT1ChangeImBeta
                                       : RuleKind::PT2ChangeImBeta;
  RuleParams p;
  p.point = fresh;
  auto step = apply_rule(k, spec, alpha, beta, p);
  Builder bld(spec, r + 1, r + 2, {alpha, beta, gamma});
  bld.splice(step.derivation, 0);
  bld.contract(1);
  // a rank r+1 partner of gamma with the same product
  PartialMap a2(n);
  for (int x = 0; x < n; ++x)
    if (target.defined(x)) a2.set(x, least(gamma.preimage(target.at(x))));
  bool done = false;
  Pts outside_g = gamma.complement_of_domain();
  Pts outside_t = target.complement_of_domain();
  if (spec.fam != Family::T && !outside_g.empty() && !outside_t.empty()) {
    a2.set(outside_t[0], outside_g[0]);
    done = true;
  }
  for (const auto& cls : target.kernel_classes()) {
    if (done || spec.fam == Family::I || cls.size() < 2) continue;
    Pts pre = gamma.preimage(target.at(cls[0]));
    if (pre.size() < 2) continue;
    a2.set(cls[0], pre[1]);
    done = true;
  }
  const PartialMap bg = step.beta * gamma;
  if (!done) {
    // stop at x_alpha x_(beta' gamma)
    bld.tag("no partner for gamma");
    return {alpha, bg, bld.finish()};
  }
  bld.splice(equalize_pairs(spec, a2, gamma, step.alpha, bg), 0);
  bld.tag(s.type == 1 ? "pair of type 1" : "pair of type 2");
  return {a2, gamma, bld.finish()};
}

PairReduction split_high_rank(const IdealSpec& spec, const PartialMap& gamma, const PartialMap& delta) {
  require_letter(spec, gamma);
  require_letter(spec, delta);
  const int r = (gamma * delta).rank();
  const int i = gamma.rank(), j = delta.rank();
  require(i >= r + 1 && j >= r + 1, "both letters have rank above the product");
  require(r >= epsilon(spec.fam), "r is at least the least rank of the family");
  require(r <= 2 * spec.m - spec.n - 1, "r <= 2m-n-1");
  require(!(i == spec.m && j == spec.m), "not both letters of rank m");
  const int n = spec.n;
  Builder bld(spec, r + 1, spec.m, {gamma, delta});
  // shrink the right letter: gamma -> gamma gamma1, then gamma1 delta has rank r+1
  auto shrink_right = [&]() {
    const PartialMap g = bld.at(0), d = bld.at(1);
    if (d.rank() == r + 1) return;
    Pts seen;
    for (int y : g.image())
      if (d.defined(y)) seen.push_back(d.at(y));
    int c = -1;
    for (int y = 0; y < n && c < 0; ++y)
      if (d.defined(y) && !has(seen, d.at(y))) c = y;
    PartialMap g1(n);
    if (spec.fam == Family::T) {
      for (int y = 0; y < n; ++y) g1.set(y, g.in_image(y) ? y : c);
    } else {
      Pts keep = g.image();
      keep.push_back(c);
      g1 = PartialMap::partial_identity(n, keep);
    }
    bld.tag("shrink right letter");
    bld.expand(0, g, g1);
    bld.contract(1);
  };
  // shrink the left letter: delta -> delta1 delta, then gamma delta1 has rank r+1
  auto shrink_left = [&]() {
    const PartialMap g = bld.at(0), d = bld.at(1);
    if (g.rank() == r + 1) return;
    PartialMap d1(n);
    Pts img = g.image();
    if (spec.fam == Family::I) {
      Pts keep = d.domain();
      for (int y : img)
        if (!d.defined(y)) {
          keep.push_back(y);
          break;
        }
      d1 = PartialMap::partial_identity(n, keep);
    } else {
      auto classes = d.kernel_classes();
      int doubled = -1;
      for (std::size_t k = 0; k < classes.size() && doubled < 0; ++k) {
        int hits = 0;
        for (int y : classes[k]) hits += g.in_image(y);
        if (hits >= 2) doubled = static_cast<int>(k);
      }
      for (std::size_t k = 0; k < classes.size(); ++k) {
        Pts in_img;
        for (int y : classes[k])
          if (g.in_image(y)) in_img.push_back(y);
        int rep = in_img.empty() ? classes[k][0] : in_img[0];
        for (int y : classes[k]) d1.set(y, rep);
        if (static_cast<int>(k) == doubled) {
          for (int y : classes[k])
            if (y != rep) d1.set(y, in_img[1]);
        }
      }
      if (doubled < 0) {
        Pts outside = d.complement_of_domain();
        int c = -1;
        for (int y : img)
          if (!d.defined(y)) {
            c = y;
            break;
          }
        d1.set(c, c);
        (void)outside;
      }
    }
    bld.tag("shrink left letter");
    bld.expand(1, d1, d);
    bld.contract(0);
  };
  if (i <= j) {
    shrink_right();
    shrink_left();
  } else {
    shrink_left();
    shrink_right();
  }
  Derivation d = bld.finish();
  return {d.end.at(0), d.end.at(1), d};
}

WordReduction reduce_word(const IdealSpec& spec, const MapWord& w) {
  require(!w.empty(), "word is nonempty");
  for (const auto& f : w) require_letter(spec, f);
  const PartialMap value = evaluate(w);
  const int r = value.rank();
  for (const auto& f : w) require(f.rank() >= r + 1, "every letter has rank at least r+1");
  require(w.size() >= 2, "word has at least two letters");
  require(r >= epsilon(spec.fam), "r is at least the least rank of the family");
  require(r <= 2 * spec.m - spec.n - 1, "r <= 2m-n-1");
  Builder bld(spec, r + 1, spec.m, w);
  auto rank_sum = [&]() {
    int t = 0;
    for (const auto& f : bld.word()) t += f.rank();
    return t;
  };
  WordReduction out;
  out.rank_sums.push_back(rank_sum());
  while (rank_sum() > 2 * r + 2) {
    const PartialMap a1 = bld.at(0), a2 = bld.at(1);
    const PartialMap p12 = a1 * a2;
    if (p12.rank() >= r + 1) {
      bld.contract(0);
    } else if (a1.rank() > r + 1 || a2.rank() > r + 1) {
      bld.splice(split_high_rank(spec, a1, a2).derivation, 0);
    } else {
      // both rank r+1 with product of rank r; the word goes on
      const PartialMap a3 = bld.at(2);
      if ((a2 * a3).rank() >= r + 1) {
        bld.contract(1);
      } else if (a3.rank() > r + 1) {
        bld.splice(split_high_rank(spec, a2, a3).derivation, 1);
      } else {
        bld.splice(reduce_triple(spec, a1, a2, a3).derivation, 0);
      }
    }
    const int now = rank_sum();
    if (now >= out.rank_sums.back()) throw std::logic_error("rank sum failed to drop");
    out.rank_sums.push_back(now);
  }
  if (bld.size() != 2) throw std::logic_error("descent ended on a word of length " + std::to_string(bld.size()));
  Derivation d = bld.finish();
  d.lo = r + 1;
  d.hi = spec.m;
  out.alpha = d.end[0];
  out.beta = d.end[1];
  out.derivation = d;
  return out;
}

}  // namespace depthwork

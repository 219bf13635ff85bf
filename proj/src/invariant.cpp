#include "depthwork/invariant.hpp"

#include <algorithm>
#include <deque>
#include <unordered_map>

namespace depthwork {

bool right_divides(const PartialMap& s, const PartialMap& t) {
  const int n = s.n();
  for (int x = 0; x < n; ++x) {
    if (t.defined(x) && !s.defined(x)) return false;
    for (int y = x + 1; y < n; ++y)
      if (s.defined(x) && s.at(x) == s.at(y) && t.at(x) != t.at(y)) return false;
  }
  return true;
}

namespace {

struct VecHash {
  std::size_t operator()(const std::vector<int>& v) const noexcept {
    std::size_t h = v.size();
    for (int x : v) h = h * 0x9E3779B97F4A7C15ULL + static_cast<std::size_t>(x) + 0x7F4A7C15;
    return h;
  }
};

constexpr int kEmpty = -2;
constexpr int kDead = -1;

// State: the prefix value (or empty / dead) and the set U of values u in
// S^1 such that some split already made is completed by a suffix of
// value u. Slot 0 of U stands for the empty suffix.
class SplitDfa {
 public:
  SplitDfa(const Presentation& p, const Ideal& ideal, const Triple& t) : ideal_(ideal) {
    N_ = p.size();
    for (const auto& g : p.generators) {
      int id = ideal.id_of(g.map);
      if (id < 0) throw UsageError("generator " + g.symbol + " lies outside the ideal");
      letter_.push_back(id);
    }
    const int b = ideal.id_of(t.beta), c = ideal.id_of(t.gamma);
    if (b < 0 || c < 0) throw UsageError("triple lies outside the ideal");
    const int n = ideal.n();
    std::vector<std::pair<int, int>> units;
    if (ideal.spec().m == n) {
      auto ids = ideal.ids_of_rank(n);
      for (int g : ids)
        for (int h : ids)
          if (ideal.element(ideal.mul(g, h)) == PartialMap::identity(n)) units.push_back({g, h});
    }
    if (units.empty()) {
      targets_[b].push_back(c);
    } else {
      for (auto [g, ginv] : units) targets_[ideal.mul(b, g)].push_back(ideal.mul(ginv, c));
    }
    for (auto& [k, v] : targets_) {
      std::sort(v.begin(), v.end());
      v.erase(std::unique(v.begin(), v.end()), v.end());
    }
    prefix_alive_.assign(ideal.size(), -1);
    W_ = (ideal.size() + 1 + 63) / 64;
  }

  bool build(std::size_t budget) {
    std::vector<std::uint64_t> start(W_ + 1, 0);
    start[0] = static_cast<std::uint64_t>(kEmpty);
    intern(start);
    for (std::size_t k = 0; k < states_.size(); ++k) {
      for (int x = 0; x < N_; ++x) {
        auto nxt = step(states_[k], letter_[x]);
        int id = intern(nxt);
        trans_.push_back(id);
        if (states_.size() > budget) return false;
      }
    }
    return true;
  }

  std::size_t size() const { return states_.size(); }
  int delta(int s, int x) const { return trans_[static_cast<std::size_t>(s) * N_ + x]; }
  bool accepting(int s) const { return states_[s][1] & 1ULL; }
  int run(int s, const Word& w) const {
    for (int x : w) s = delta(s, x);
    return s;
  }

  // Moore refinement; returns class per state
  std::vector<int> minimize(std::size_t& classes) const {
    const std::size_t S = states_.size();
    std::vector<int> cls(S);
    for (std::size_t s = 0; s < S; ++s) cls[s] = accepting(static_cast<int>(s)) ? 1 : 0;
    std::size_t count = 0;
    while (true) {
      std::unordered_map<std::vector<int>, int, VecHash> sig;
      std::vector<int> next(S);
      std::vector<int> key(N_ + 1);
      for (std::size_t s = 0; s < S; ++s) {
        key[0] = cls[s];
        for (int x = 0; x < N_; ++x) key[x + 1] = cls[delta(static_cast<int>(s), x)];
        auto it = sig.emplace(key, static_cast<int>(sig.size())).first;
        next[s] = it->second;
      }
      cls.swap(next);
      if (sig.size() == count) break;
      count = sig.size();
    }
    classes = count;
    return cls;
  }

 private:
  using Bits = std::vector<std::uint64_t>;

  static bool test(const Bits& st, int slot) { return st[1 + slot / 64] >> (slot % 64) & 1ULL; }
  static void put(Bits& st, int slot) { st[1 + slot / 64] |= 1ULL << (slot % 64); }

  bool prefix_alive(int v) {
    if (prefix_alive_[v] < 0) {
      prefix_alive_[v] = 0;
      for (const auto& [a, _] : targets_)
        if (right_divides(ideal_.element(v), ideal_.element(a))) {
          prefix_alive_[v] = 1;
          break;
        }
    }
    return prefix_alive_[v] == 1;
  }

  Bits step(const Bits& st, int e) {
    const int S = ideal_.size();
    Bits out(W_ + 1, 0);
    bool any = false;
    for (std::size_t k = 1; k <= W_; ++k) any = any || st[k];
    const int v = static_cast<int>(static_cast<std::int64_t>(st[0]));
    const std::vector<int>* fresh = nullptr;
    if (v >= 0) {
      auto it = targets_.find(v);
      if (it != targets_.end()) fresh = &it->second;
    }
    if (any || fresh) {
      // slot 0: empty suffix, so e itself must land in U or hit a target
      auto hit = [&](int val) {
        if (any && test(st, 1 + val)) return true;
        if (fresh)
          for (int t : *fresh)
            if (t == val) return true;
        return false;
      };
      if (hit(e)) put(out, 0);
      for (int u = 0; u < S; ++u)
        if (hit(ideal_.mul(e, u))) put(out, 1 + u);
    }
    int nv = kDead;
    if (v == kEmpty)
      nv = e;
    else if (v >= 0)
      nv = ideal_.mul(v, e);
    if (nv >= 0 && !prefix_alive(nv)) nv = kDead;
    out[0] = static_cast<std::uint64_t>(static_cast<std::int64_t>(nv));
    return out;
  }

  int intern(const Bits& st) {
    auto [it, fresh] = index_.emplace(st, static_cast<int>(states_.size()));
    if (fresh) states_.push_back(st);
    return it->second;
  }

  struct BitsHash {
    std::size_t operator()(const Bits& v) const noexcept {
      std::size_t h = v.size();
      for (auto x : v) h = (h ^ x) * 0x9E3779B97F4A7C15ULL + (h >> 29);
      return h;
    }
  };

  const Ideal& ideal_;
  int N_ = 0;
  std::size_t W_ = 0;
  std::vector<int> letter_;
  std::unordered_map<int, std::vector<int>> targets_;
  std::vector<signed char> prefix_alive_;
  std::vector<Bits> states_;
  std::unordered_map<Bits, int, BitsHash> index_;
  std::vector<int> trans_;
};

}  // namespace

InvariantCheck certify_split_invariant(const Presentation& p, const IdealSpec& spec, const Triple& t,
                                       std::size_t state_budget) {
  InvariantCheck out;
  auto ideal = make_ideal(spec);
  int a = -1, b = -1, c = -1;
  for (int k = 0; k < p.size(); ++k) {
    if (p.generators[k].map == t.alpha && a < 0) a = k;
    if (p.generators[k].map == t.beta && b < 0) b = k;
    if (p.generators[k].map == t.gamma && c < 0) c = k;
  }
  if (a < 0 || b < 0 || c < 0) {
    out.reason = "triple is not made of letters";
    return out;
  }
  out.inside = {b, c};
  out.outside = {a, b, c};
  if (p.evaluate(out.inside) != p.evaluate(out.outside)) {
    out.reason = "the two words differ in the target";
    return out;
  }
  SplitDfa dfa(p, *ideal, t);
  bool built = dfa.build(state_budget);
  out.states = dfa.size();
  if (!built) {
    out.reason = "invariant automaton exceeded " + std::to_string(state_budget) + " states";
    return out;
  }
  std::size_t classes = 0;
  auto cls = dfa.minimize(classes);
  out.minimal_states = classes;
  if (!dfa.accepting(dfa.run(0, out.inside))) {
    out.reason = "x_beta x_gamma is outside the language";
    return out;
  }
  if (dfa.accepting(dfa.run(0, out.outside))) {
    out.reason = "x_alpha x_beta x_gamma is inside the language";
    return out;
  }
  for (std::size_t s = 0; s < dfa.size(); ++s)
    for (const auto& [u, v] : p.relations)
      if (cls[dfa.run(static_cast<int>(s), u)] != cls[dfa.run(static_cast<int>(s), v)]) {
        out.reason = "language not closed under " + p.word_str(u) + " = " + p.word_str(v);
        return out;
      }
  out.certified = true;
  return out;
}

std::vector<Triple> candidate_triples(const Presentation& p, const IdealSpec& spec, std::size_t limit) {
  std::vector<Triple> out;
  if (p.size() == 0 || limit == 0) return out;
  auto ideal = make_ideal(spec);
  int low = spec.n + 1, top = -1;
  for (const auto& g : p.generators) {
    low = std::min(low, g.map.rank());
    if (g.map.rank() < spec.n || spec.m < spec.n) top = std::max(top, g.map.rank());
  }
  std::vector<int> ids;
  for (const auto& g : p.generators)
    if (g.map.rank() == top) ids.push_back(ideal->id_of(g.map));
  std::sort(ids.begin(), ids.end(), [&](int x, int y) { return ideal->element(x) < ideal->element(y); });
  for (int bb : ids)
    for (int cc : ids) {
      int bc = ideal->mul(bb, cc);
      if (ideal->rank_of(bc) >= low) continue;
      for (int aa : ids) {
        if (ideal->rank_of(ideal->mul(aa, bb)) >= low) continue;
        if (ideal->mul(aa, bc) != bc) continue;
        out.push_back({ideal->element(aa), ideal->element(bb), ideal->element(cc)});
        if (out.size() >= limit) return out;
      }
    }
  return out;
}

}  // namespace depthwork

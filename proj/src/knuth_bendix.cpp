#include "depthwork/knuth_bendix.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <unordered_map>

namespace depthwork {

namespace {

constexpr std::uint64_t kBase = 1000003ULL;

std::uint64_t word_hash(const Word& w) {
  std::uint64_t h = 0;
  for (int c : w) h = h * kBase + static_cast<std::uint64_t>(c + 1);
  return h;
}

bool contains(const Word& hay, const Word& needle) {
  if (needle.size() > hay.size()) return false;
  return std::search(hay.begin(), hay.end(), needle.begin(), needle.end()) != hay.end();
}

class RuleStore {
 public:
  explicit RuleStore(int alphabet) : by_first(alphabet), by_last(alphabet) {}

  int add(Word l, Word r) {
    int id = static_cast<int>(lhs.size());
    by_hash[word_hash(l)].push_back(id);
    if (l.size() >= len_count.size()) len_count.resize(l.size() + 1, 0);
    if (len_count[l.size()]++ == 0) refresh_lengths();
    by_first[l.front()].push_back(id);
    by_last[l.back()].push_back(id);
    lhs.push_back(std::move(l));
    rhs.push_back(std::move(r));
    active.push_back(1);
    ++live;
    return id;
  }

  void deactivate(int id) {
    if (!active[id]) return;
    active[id] = 0;
    --live;
    auto& bucket = by_hash[word_hash(lhs[id])];
    bucket.erase(std::find(bucket.begin(), bucket.end(), id));
    if (--len_count[lhs[id].size()] == 0) refresh_lengths();
  }

  Word reduce(const Word& w) const {
    Word out;
    std::vector<std::uint64_t> h{0};
    Word todo(w.rbegin(), w.rend());
    out.reserve(w.size());
    while (!todo.empty()) {
      int c = todo.back();
      todo.pop_back();
      out.push_back(c);
      h.push_back(h.back() * kBase + static_cast<std::uint64_t>(c + 1));
      const std::size_t top = out.size();
      for (std::size_t L : lengths) {
        if (L > top) break;
        std::uint64_t key = h[top] - h[top - L] * pow_of(L);
        auto it = by_hash.find(key);
        if (it == by_hash.end()) continue;
        int hit = -1;
        for (int id : it->second)
          if (lhs[id].size() == L && std::equal(lhs[id].begin(), lhs[id].end(), out.end() - L)) {
            hit = id;
            break;
          }
        if (hit < 0) continue;
        out.resize(top - L);
        h.resize(top - L + 1);
        todo.insert(todo.end(), rhs[hit].rbegin(), rhs[hit].rend());
        break;
      }
    }
    return out;
  }

  std::vector<Word> lhs, rhs;
  std::vector<char> active;
  std::vector<std::vector<int>> by_first, by_last;
  std::size_t live = 0;

 private:
  void refresh_lengths() {
    lengths.clear();
    for (std::size_t L = 0; L < len_count.size(); ++L)
      if (len_count[L]) lengths.push_back(L);
    while (pows.size() <= len_count.size()) pows.push_back(pows.empty() ? 1 : pows.back() * kBase);
  }
  std::uint64_t pow_of(std::size_t L) const { return pows[L]; }

  std::unordered_map<std::uint64_t, std::vector<int>> by_hash;
  std::vector<int> len_count;
  std::vector<std::size_t> lengths;
  std::vector<std::uint64_t> pows{1};
};

class Completion {
 public:
  Completion(const Presentation& p, const KbOptions& opts) : store_(p.size()), opts_(opts) {
    for (const auto& r : p.relations) pending_.push_back(r);
  }

  RewritingSystem run(int alphabet) {
    bool ok = drain();
    for (std::size_t i = 0; ok && i < store_.lhs.size(); ++i) {
      if (!store_.active[i]) continue;
      ok = overlaps_of(static_cast<int>(i));
    }
    std::vector<Relation> rules;
    for (std::size_t id = 0; id < store_.lhs.size(); ++id)
      if (store_.active[id]) rules.push_back({store_.lhs[id], store_.rhs[id]});
    return RewritingSystem(alphabet, std::move(rules),
                           ok ? RewritingSystem::Status::Confluent
                              : RewritingSystem::Status::StoppedAtBudget);
  }

 private:
  bool budget_ok() const {
    if (store_.lhs.size() > opts_.rule_budget) return false;
    if (opts_.overlap_budget && overlaps_ > opts_.overlap_budget) return false;
    return true;
  }

  void add_equation(Word u, Word v) {
    u = store_.reduce(u);
    v = store_.reduce(v);
    if (u == v) return;
    if (shortlex_less(u, v)) std::swap(u, v);
    const int id = store_.add(u, v);
    const Word& l = store_.lhs[id];
    for (int j = 0; j < id; ++j) {
      if (!store_.active[j]) continue;
      if (store_.lhs[j].size() >= l.size() && contains(store_.lhs[j], l)) {
        pending_.push_back({store_.lhs[j], store_.rhs[j]});
        store_.deactivate(j);
      } else if (store_.rhs[j].size() >= l.size() && contains(store_.rhs[j], l)) {
        store_.rhs[j] = store_.reduce(store_.rhs[j]);
      }
    }
  }

  bool drain() {
    while (!pending_.empty()) {
      auto [u, v] = std::move(pending_.front());
      pending_.pop_front();
      add_equation(std::move(u), std::move(v));
      if (!budget_ok()) return false;
    }
    return true;
  }

  // lhs_a = X Y, lhs_b = Y Z with |Y| = k
  bool resolve(int a, int b, std::size_t k) {
    ++overlaps_;
    const Word& la = store_.lhs[a];
    const Word& lb = store_.lhs[b];
    if (k >= la.size() || k >= lb.size()) return true;
    if (!std::equal(la.end() - k, la.end(), lb.begin())) return true;
    Word w1 = store_.rhs[a];
    w1.insert(w1.end(), lb.begin() + k, lb.end());
    Word w2(la.begin(), la.end() - k);
    w2.insert(w2.end(), store_.rhs[b].begin(), store_.rhs[b].end());
    pending_.push_back({std::move(w1), std::move(w2)});
    return drain();
  }

  bool overlaps_of(int i) {
    for (std::size_t k = 1; k < store_.lhs[i].size(); ++k) {
      const int c = store_.lhs[i][store_.lhs[i].size() - k];
      for (std::size_t t = 0; t < store_.by_first[c].size(); ++t) {
        int j = store_.by_first[c][t];
        if (j > i) break;
        if (!store_.active[i]) return true;
        if (!store_.active[j]) continue;
        if (!resolve(i, j, k)) return false;
      }
    }
    for (std::size_t k = 1; k < store_.lhs[i].size(); ++k) {
      const int c = store_.lhs[i][k - 1];
      for (std::size_t t = 0; t < store_.by_last[c].size(); ++t) {
        int j = store_.by_last[c][t];
        if (j >= i) break;
        if (!store_.active[i]) return true;
        if (!store_.active[j]) continue;
        if (!resolve(j, i, k)) return false;
      }
    }
    return true;
  }

  RuleStore store_;
  KbOptions opts_;
  std::deque<Relation> pending_;
  std::size_t overlaps_ = 0;
};

}  // namespace

struct RewritingSystem::Index {
  explicit Index(int alphabet) : store(alphabet) {}
  RuleStore store;
};

RewritingSystem::RewritingSystem(int alphabet, std::vector<Relation> rules, Status status)
    : alphabet_(alphabet), rules_(std::move(rules)), status_(status) {
  auto idx = std::make_shared<Index>(alphabet);
  for (const auto& [l, r] : rules_) idx->store.add(l, r);
  index_ = std::move(idx);
}

Word RewritingSystem::reduce(const Word& w) const { return index_->store.reduce(w); }

std::optional<bool> RewritingSystem::equal(const Word& u, const Word& v) const {
  Word ru = reduce(u), rv = reduce(v);
  if (ru == rv) return true;
  if (!confluent()) return std::nullopt;
  return false;
}

NormalFormCount RewritingSystem::normal_forms(std::size_t state_budget) const {
  NormalFormCount out;
  if (!confluent()) {
    out.note = "system not confluent";
    return out;
  }
  const int N = alphabet_;
  std::size_t total_len = 1;
  for (const auto& r : rules_) total_len += r.first.size();
  if (N > 0 && total_len * static_cast<std::size_t>(N) > state_budget) {
    out.note = "normal-form automaton over budget";
    return out;
  }
  // Aho-Corasick automaton on the left-hand sides
  std::vector<int> go(static_cast<std::size_t>(N), -1);
  std::vector<char> bad{0};
  auto new_node = [&]() {
    go.resize(go.size() + N, -1);
    bad.push_back(0);
    return static_cast<int>(bad.size() - 1);
  };
  for (const auto& r : rules_) {
    int v = 0;
    for (int c : r.first) {
      int& nx = go[static_cast<std::size_t>(v) * N + c];
      if (nx < 0) {
        int made = new_node();
        go[static_cast<std::size_t>(v) * N + c] = made;
        v = made;
      } else {
        v = nx;
      }
    }
    bad[v] = 1;
  }
  const int S = static_cast<int>(bad.size());
  std::vector<int> fail(S, 0);
  std::deque<int> q;
  for (int c = 0; c < N; ++c) {
    int& nx = go[c];
    if (nx < 0)
      nx = 0;
    else {
      fail[nx] = 0;
      q.push_back(nx);
    }
  }
  while (!q.empty()) {
    int v = q.front();
    q.pop_front();
    bad[v] = bad[v] || bad[fail[v]];
    for (int c = 0; c < N; ++c) {
      int& nx = go[static_cast<std::size_t>(v) * N + c];
      int fb = go[static_cast<std::size_t>(fail[v]) * N + c];
      if (nx < 0)
        nx = fb;
      else {
        fail[nx] = fb;
        q.push_back(nx);
      }
    }
  }
  // count paths through safe states; a reachable cycle means infinitely many
  using u128 = unsigned __int128;
  const u128 cap = std::numeric_limits<std::uint64_t>::max();
  std::vector<u128> cnt(S, 0);
  std::vector<char> color(S, 0);
  std::vector<std::pair<int, int>> stack{{0, 0}};
  color[0] = 1;
  while (!stack.empty()) {
    auto& [v, c] = stack.back();
    if (c == N) {
      u128 s = 1;
      for (int d = 0; d < N; ++d) {
        int w = go[static_cast<std::size_t>(v) * N + d];
        if (!bad[w]) s = std::min(cap, s + cnt[w]);
      }
      cnt[v] = s;
      color[v] = 2;
      stack.pop_back();
      continue;
    }
    int w = go[static_cast<std::size_t>(v) * N + c];
    ++c;
    if (bad[w]) continue;
    if (color[w] == 1) {
      out.kind = NormalFormCount::Kind::Infinite;
      return out;
    }
    if (color[w] == 0) {
      color[w] = 1;
      stack.push_back({w, 0});
    }
  }
  if (cnt[0] >= cap) {
    out.note = "count overflows 64 bits";
    return out;
  }
  out.kind = NormalFormCount::Kind::Finite;
  out.count = static_cast<std::uint64_t>(cnt[0] - 1);
  return out;
}

RewritingSystem knuth_bendix(const Presentation& p, const KbOptions& opts) {
  return Completion(p, opts).run(p.size());
}

}  // namespace depthwork

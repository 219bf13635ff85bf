#include "depthwork/enumerate.hpp"

#include <algorithm>
#include <deque>
#include <unordered_map>

namespace depthwork {

int CongruenceTable::class_of(const Word& w) const {
  if (!closed() || w.empty()) return -1;
  int c = letter_class[w[0]];
  for (std::size_t k = 1; k < w.size(); ++k) c = right_mult[c][w[k]];
  return c;
}

namespace {

class Felsch {
 public:
  Felsch(const Presentation& p, const EnumerateOptions& opts)
      : N_(p.size()), opts_(opts) {
    for (const auto& r : p.relations) {
      int id = static_cast<int>(rels_.size());
      rels_.push_back(r);
      if (r.first.size() > 2 || r.second.size() > 2) {
        long_.push_back(id);
        continue;
      }
      for (const Word* side : {&r.first, &r.second}) {
        by_first_.resize(N_);
        auto& lst = by_first_[(*side)[0]];
        if (lst.empty() || lst.back() != id) lst.push_back(id);
        if (side->size() == 2) {
          auto& pl = by_pair_[key((*side)[0], (*side)[1])];
          if (pl.empty() || pl.back() != id) pl.push_back(id);
        }
      }
    }
    by_first_.resize(N_);
    cap_ = std::max<std::size_t>(4 * std::max<std::size_t>(opts.size_budget, 256), 1024);
    new_coset();
  }

  CongruenceTable run() {
    CongruenceTable out;
    std::size_t next = 0;
    bool ok = true;
    while (ok) {
      ok = process();
      if (!ok) break;
      while (next < rows_ && (!alive_[next] || row_complete(next))) ++next;
      if (next == rows_) {
        if (!scan_long()) break;
        next = 0;
        continue;
      }
      if (rows_ >= cap_) {
        next = compact(next);
        while (next < rows_ && (!alive_[next] || row_complete(next))) ++next;
      }
      if (!long_.empty() && next >= scanned_) {
        scanned_ = next + 1;
        ok = hlt_scan(static_cast<int>(next));
        continue;
      }
      int g = 0;
      while (at(next, g) >= 0) ++g;
      int d = new_coset();
      set_entry(static_cast<int>(next), g, d);
      ++steps_;
      if (over_budget()) ok = false;
    }
    out.peak_live = peak_;
    out.steps = steps_;
    if (!ok) return out;
    out.status = CongruenceTable::Status::Closed;
    // renumber by breadth-first search from the base point so that
    // representatives are shortlex-least
    std::vector<int> num(rows_, -1);
    std::vector<int> order;
    std::vector<Word> words;
    num[0] = 0;
    order.push_back(0);
    words.push_back({});
    for (std::size_t h = 0; h < order.size(); ++h) {
      int c = order[h];
      for (int g = 0; g < N_; ++g) {
        int d = find(at(c, g));
        if (num[d] < 0) {
          num[d] = static_cast<int>(order.size());
          order.push_back(d);
          Word w = words[h];
          w.push_back(g);
          words.push_back(std::move(w));
        }
      }
    }
    out.classes = order.size() - 1;
    out.representatives.assign(words.begin() + 1, words.end());
    out.letter_class.resize(N_);
    for (int g = 0; g < N_; ++g) out.letter_class[g] = num[find(at(0, g))] - 1;
    out.right_mult.assign(out.classes, std::vector<int>(N_));
    for (std::size_t k = 1; k < order.size(); ++k)
      for (int g = 0; g < N_; ++g) out.right_mult[k - 1][g] = num[find(at(order[k], g))] - 1;
    return out;
  }

 private:
  static std::uint64_t key(int a, int b) {
    return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint32_t>(b);
  }

  int& at(std::size_t c, int g) { return table_[c * N_ + g]; }
  int at(std::size_t c, int g) const { return table_[c * N_ + g]; }

  bool row_complete(std::size_t c) const {
    for (int g = 0; g < N_; ++g)
      if (at(c, g) < 0) return false;
    return true;
  }

  int find(int c) {
    while (parent_[c] != c) {
      parent_[c] = parent_[parent_[c]];
      c = parent_[c];
    }
    return c;
  }

  int new_coset() {
    int c = static_cast<int>(rows_++);
    table_.resize(rows_ * N_, -1);
    parent_.push_back(c);
    alive_.push_back(1);
    pre_.emplace_back();
    ++live_;
    peak_ = std::max(peak_, live_ - 1);
    return c;
  }

  bool over_budget() const {
    if (opts_.size_budget && live_ - 1 > opts_.size_budget) return true;
    if (opts_.step_budget && steps_ > opts_.step_budget) return true;
    return false;
  }

  void set_entry(int c, int g, int d) {
    at(c, g) = d;
    pre_[d].push_back({c, g});
    deductions_.push_back({c, g});
  }

  // trace all but the last letter; returns the coset before the last
  // letter, or -1 when the trace leaves the table
  int trace_prefix(int c, const Word& w) {
    for (std::size_t k = 0; k + 1 < w.size(); ++k) {
      int d = at(c, w[k]);
      if (d < 0) return -1;
      c = find(d);
    }
    return c;
  }

  void check(int a, int rel) {
    const auto& [u, v] = rels_[rel];
    int cu = trace_prefix(a, u);
    int cv = trace_prefix(a, v);
    int lu = cu >= 0 ? at(cu, u.back()) : -1;
    int lv = cv >= 0 ? at(cv, v.back()) : -1;
    if (lu >= 0 && lv >= 0) {
      lu = find(lu);
      lv = find(lv);
      if (lu != lv) coincidences_.push_back({lu, lv});
    } else if (lu >= 0 && cv >= 0) {
      set_entry(cv, v.back(), find(lu));
    } else if (lv >= 0 && cu >= 0) {
      set_entry(cu, u.back(), find(lv));
    }
  }

  void merge(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    int k = std::min(a, b), d = std::max(a, b);
    parent_[d] = k;
    alive_[d] = 0;
    --live_;
    auto pre = std::move(pre_[d]);
    pre_[d].clear();
    for (auto [x, g] : pre) {
      if (x == d || !alive_[x] || at(x, g) != d) continue;
      at(x, g) = k;
      pre_[k].push_back({x, g});
      deductions_.push_back({x, g});
    }
    for (int g = 0; g < N_; ++g) {
      int e = at(d, g);
      if (e < 0) continue;
      e = find(e);
      int f = at(k, g);
      if (f < 0)
        set_entry(k, g, e);
      else if (find(f) != e)
        coincidences_.push_back({f, e});
    }
  }

  bool process() {
    while (true) {
      while (!coincidences_.empty()) {
        auto [a, b] = coincidences_.front();
        coincidences_.pop_front();
        merge(a, b);
      }
      if (deductions_.empty()) return true;
      auto [c, g] = deductions_.back();
      deductions_.pop_back();
      if (!alive_[c] || at(c, g) < 0) continue;
      if (++steps_, over_budget()) return false;
      for (int rel : by_first_[g]) check(c, rel);
      for (std::size_t k = 0; k < pre_[c].size(); ++k) {
        auto [a, x] = pre_[c][k];
        if (!alive_[a] || at(a, x) != c) continue;
        auto it = by_pair_.find(key(x, g));
        if (it == by_pair_.end()) continue;
        for (int rel : it->second) check(a, rel);
      }
    }
  }

  // full scan of the long relations; true if anything changed
  bool scan_long() {
    if (long_.empty()) return false;
    for (std::size_t c = 0; c < rows_; ++c) {
      if (!alive_[c]) continue;
      for (int rel : long_) check(static_cast<int>(c), rel);
    }
    return !deductions_.empty() || !coincidences_.empty();
  }

  // trace each long relation from c, defining cosets as needed
  bool hlt_scan(int c) {
    for (int rel : long_) {
      if (!alive_[c]) return true;
      for (const Word* w : {&rels_[rel].first, &rels_[rel].second}) {
        int cur = c;
        for (std::size_t k = 0; k + 1 < w->size(); ++k) {
          if (at(cur, (*w)[k]) < 0) {
            set_entry(cur, (*w)[k], new_coset());
            ++steps_;
          }
          cur = find(at(cur, (*w)[k]));
        }
      }
      check(c, rel);
      if (!process() || over_budget()) return false;
    }
    return true;
  }

  std::size_t compact(std::size_t next) {
    std::vector<int> num(rows_, -1);
    int cnt = 0;
    for (std::size_t c = 0; c < rows_; ++c)
      if (alive_[c]) num[c] = cnt++;
    std::vector<int> table(static_cast<std::size_t>(cnt) * N_, -1);
    for (std::size_t c = 0; c < rows_; ++c) {
      if (!alive_[c]) continue;
      for (int g = 0; g < N_; ++g) {
        int e = at(c, g);
        table[num[c] * N_ + g] = e < 0 ? -1 : num[find(e)];
      }
    }
    std::size_t new_next = cnt;
    for (std::size_t c = next; c < rows_; ++c)
      if (alive_[c]) {
        new_next = num[c];
        break;
      }
    std::size_t new_scanned = cnt;
    for (std::size_t c = scanned_; c < rows_; ++c)
      if (alive_[c]) {
        new_scanned = num[c];
        break;
      }
    scanned_ = std::min(scanned_, new_scanned);
    rows_ = cnt;
    table_.swap(table);
    parent_.resize(cnt);
    alive_.assign(cnt, 1);
    pre_.assign(cnt, {});
    for (int c = 0; c < cnt; ++c) {
      parent_[c] = c;
      for (int g = 0; g < N_; ++g) {
        int e = at(c, g);
        if (e >= 0) pre_[e].push_back({c, g});
      }
    }
    cap_ = std::max(cap_, 2 * rows_);
    return new_next;
  }

  int N_;
  EnumerateOptions opts_;
  std::vector<Relation> rels_;
  std::vector<int> long_;
  std::vector<std::vector<int>> by_first_;
  std::unordered_map<std::uint64_t, std::vector<int>> by_pair_;
  std::vector<int> table_;
  std::vector<int> parent_;
  std::vector<char> alive_;
  std::vector<std::vector<std::pair<int, int>>> pre_;
  std::vector<std::pair<int, int>> deductions_;
  std::deque<std::pair<int, int>> coincidences_;
  std::size_t rows_ = 0;
  std::size_t live_ = 0;
  std::size_t peak_ = 0;
  std::size_t steps_ = 0;
  std::size_t cap_ = 0;
  std::size_t scanned_ = 0;
};

}  // namespace

CongruenceTable enumerate(const Presentation& p, const EnumerateOptions& opts) {
  if (p.size() == 0) {
    CongruenceTable t;
    t.status = CongruenceTable::Status::Closed;
    return t;
  }
  return Felsch(p, opts).run();
}

}  // namespace depthwork

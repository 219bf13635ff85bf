#include "depthwork/witness.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

namespace depthwork {

namespace {

[[noreturn]] void range_error(const std::string& what) {
  throw PreconditionError("witness range: " + what);
}

bool same_kernel(const PartialMap& f, const PartialMap& g) {
  for (int x = 0; x < f.n(); ++x) {
    if (f.defined(x) != g.defined(x)) return false;
    if (!f.defined(x)) continue;
    for (int y = x + 1; y < f.n(); ++y)
      if (f.defined(y) && (f.at(x) == f.at(y)) != (g.at(x) == g.at(y))) return false;
  }
  return true;
}

// p = alpha q and s = q^-1 beta for some permutation q
bool relabel_pair(const PartialMap& p, const PartialMap& s, const PartialMap& alpha, const PartialMap& beta) {
  if (!same_kernel(p, alpha)) return false;
  const int n = alpha.n();
  std::vector<int> q(n, -1);
  for (int x = 0; x < n; ++x)
    if (alpha.defined(x)) q[alpha.at(x)] = p.at(x);
  std::vector<int> rest_a, rest_s;
  for (int y = 0; y < n; ++y) {
    if (q[y] >= 0) {
      if (s.at(q[y]) != beta.at(y)) return false;
    } else {
      rest_a.push_back(beta.at(y));
    }
    if (!p.in_image(y)) rest_s.push_back(s.at(y));
  }
  std::sort(rest_a.begin(), rest_a.end());
  std::sort(rest_s.begin(), rest_s.end());
  return rest_a == rest_s;
}

template <class Match>
bool split_form_with(const MapWord& w, const PartialMap& alpha, int r, Match match) {
  if (w.size() < 2) return false;
  const int top = alpha.rank();
  for (const auto& f : w)
    if (f.rank() != top) return false;
  std::vector<PartialMap> suffix(w.size());
  suffix.back() = w.back();
  for (std::size_t k = w.size() - 1; k-- > 0;) suffix[k] = w[k] * suffix[k + 1];
  PartialMap prefix = w[0];
  for (std::size_t k = 1; k < w.size(); ++k) {
    if ((w[k - 1] * w[k]).rank() == r && match(prefix, suffix[k])) return true;
    prefix = prefix * w[k];
  }
  return false;
}

using Key = unsigned __int128;

struct KeyHash {
  std::size_t operator()(Key k) const noexcept {
    auto lo = static_cast<std::uint64_t>(k), hi = static_cast<std::uint64_t>(k >> 64);
    return static_cast<std::size_t>((lo ^ (hi * 0x9E3779B97F4A7C15ULL)) * 0xC2B2AE3D27D4EB4FULL);
  }
};

// letters of rank r..m with products, factorizations and the relabeling action
class Search {
 public:
  Search(Family fam, int n, int r, int m, bool quotient) : n_(n), quotient_(quotient) {
    for (int k = r; k <= m; ++k)
      for (const auto& f : all_of_rank(fam, n, k)) {
        id_.emplace(f, static_cast<int>(letters_.size()));
        letters_.push_back(f);
      }
    const std::size_t L = letters_.size();
    bits_ = 1;
    while ((std::size_t{1} << bits_) <= L) ++bits_;
    prod_.assign(L * L, -1);
    factors_.resize(L);
    if (quotient_) build_relabeling();
    for (std::size_t a = 0; a < L; ++a)
      for (std::size_t b = 0; b < L; ++b) {
        auto it = id_.find(letters_[a] * letters_[b]);
        if (it == id_.end()) continue;
        prod_[a * L + b] = it->second;
        if (!quotient_ || rmin_[a] == static_cast<int>(a))
          factors_[it->second].push_back({static_cast<int>(a), static_cast<int>(b)});
      }
  }

  std::size_t max_len() const { return 128 / bits_; }
  int id(const PartialMap& f) const { return id_.at(f); }

  MapWord maps(const std::vector<int>& w) const {
    MapWord out;
    for (int a : w) out.push_back(letters_[a]);
    return out;
  }

  Key pack(const std::vector<int>& w) const {
    Key k = 0;
    for (std::size_t i = 0; i < w.size(); ++i) k |= static_cast<Key>(w[i] + 1) << (bits_ * i);
    return k;
  }

  std::vector<int> unpack(Key k) const {
    std::vector<int> w;
    const Key mask = (Key{1} << bits_) - 1;
    for (; k; k >>= bits_) w.push_back(static_cast<int>(k & mask) - 1);
    return w;
  }

  // least word in the relabeling class
  std::vector<int> canonical(const std::vector<int>& w) const {
    if (!quotient_) return w;
    std::vector<int> out;
    std::vector<int> states{0}, next;
    std::vector<char> mark(perms_.size(), 0);
    for (std::size_t i = 0; i < w.size(); ++i) {
      const bool last = i + 1 == w.size();
      int best = -1;
      for (int p : states) {
        int b = left_[static_cast<std::size_t>(w[i]) * perms_.size() + p];
        int c = last ? b : rmin_[b];
        if (best < 0 || c < best) best = c;
      }
      out.push_back(best);
      if (last) break;
      next.clear();
      for (int p : states) {
        int b = left_[static_cast<std::size_t>(w[i]) * perms_.size() + p];
        if (rmin_[b] != best) continue;
        for (int q : relabelers_[b])
          if (!mark[q]) {
            mark[q] = 1;
            next.push_back(q);
          }
      }
      for (int q : next) mark[q] = 0;
      std::swap(states, next);
    }
    return out;
  }

  template <class F>
  void neighbors(const std::vector<int>& w, std::size_t max_len, F&& f) const {
    const std::size_t L = letters_.size();
    std::vector<int> v;
    for (std::size_t i = 0; i + 1 < w.size(); ++i) {
      int p = prod_[static_cast<std::size_t>(w[i]) * L + w[i + 1]];
      if (p < 0) continue;
      v.assign(w.begin(), w.begin() + i);
      v.push_back(p);
      v.insert(v.end(), w.begin() + i + 2, w.end());
      f(v);
    }
    if (w.size() >= max_len) return;
    for (std::size_t i = 0; i < w.size(); ++i)
      for (auto [a, b] : factors_[w[i]]) {
        v.assign(w.begin(), w.begin() + i);
        v.push_back(a);
        v.push_back(b);
        v.insert(v.end(), w.begin() + i + 1, w.end());
        f(v);
      }
  }

 private:
  void build_relabeling() {
    std::vector<int> base(n_);
    std::iota(base.begin(), base.end(), 0);
    do {
      PartialMap p(n_);
      for (int x = 0; x < n_; ++x) p.set(x, base[x]);
      perms_.push_back(p);
    } while (std::next_permutation(base.begin(), base.end()));
    const std::size_t L = letters_.size(), P = perms_.size();
    std::vector<PartialMap> inverse;
    for (const auto& p : perms_) {
      PartialMap q(n_);
      for (int x = 0; x < n_; ++x) q.set(p.at(x), x);
      inverse.push_back(q);
    }
    left_.resize(L * P);
    rmin_.resize(L);
    relabelers_.resize(L);
    for (std::size_t a = 0; a < L; ++a) {
      for (std::size_t p = 0; p < P; ++p) left_[a * P + p] = id_.at(inverse[p] * letters_[a]);
      PartialMap least(n_);
      std::vector<int> seen(n_, -1);
      int next = 0;
      for (int x = 0; x < n_; ++x) {
        if (!letters_[a].defined(x)) continue;
        int y = letters_[a].at(x);
        if (seen[y] < 0) seen[y] = next++;
        least.set(x, seen[y]);
      }
      rmin_[a] = id_.at(least);
      for (std::size_t p = 0; p < P; ++p)
        if (letters_[a] * perms_[p] == least) relabelers_[a].push_back(static_cast<int>(p));
    }
  }

  int n_;
  bool quotient_;
  int bits_ = 1;
  std::vector<PartialMap> letters_;
  std::unordered_map<PartialMap, int, PartialMapHash> id_;
  std::vector<int> prod_;
  std::vector<std::vector<std::pair<int, int>>> factors_;
  std::vector<PartialMap> perms_;
  std::vector<int> left_;
  std::vector<int> rmin_;
  std::vector<std::vector<int>> relabelers_;
};

}  // namespace

WitnessPair counterexample(Family fam, int n, int m, int r) {
  const int eps = epsilon(fam);
  if (n < 1 || n > kMaxN) range_error("n must lie in [1, " + std::to_string(kMaxN) + "]");
  if (!(m < n)) range_error("needs m < n");
  if (!(r < m)) range_error("needs r < m");
  if (!(r > std::max(2 * m - n, eps)))
    range_error("needs r > max(2m-n, " + std::to_string(eps) + ") = " + std::to_string(std::max(2 * m - n, eps)));
  WitnessPair out{PartialMap(n), PartialMap(n)};
  // 1-based formulas, stored 0-based
  auto put = [](PartialMap& f, int x, int y) { f.set(x - 1, y - 1); };
  if (fam == Family::T) {
    for (int x = 1; x <= n; ++x) put(out.alpha, x, std::min(x, m));
    for (int x = 1; x <= n; ++x) {
      if (x <= r - 2) put(out.beta, x, x);
      else if (x <= m) put(out.beta, x, r - 1);
      else if (x <= 2 * m - r) put(out.beta, x, x - (m + 1) + r);
      else put(out.beta, x, m);
    }
  } else {
    for (int x = 1; x <= m; ++x) put(out.alpha, x, x);
    for (int x = 1; x < r; ++x) put(out.beta, x, x);
    for (int k = 0; k <= m - r; ++k) put(out.beta, m + 1 + k, r + k);
  }
  return out;
}

bool split_form(const MapWord& w, const PartialMap& alpha, const PartialMap& beta, int r) {
  return split_form_with(w, alpha, r,
                         [&](const PartialMap& p, const PartialMap& s) { return p == alpha && s == beta; });
}

bool split_form_relabeled(const MapWord& w, const PartialMap& alpha, const PartialMap& beta, int r) {
  return split_form_with(w, alpha, r, [&](const PartialMap& p, const PartialMap& s) {
    return relabel_pair(p, s, alpha, beta);
  });
}

InvarianceReport bounded_invariance(Family fam, int n, int m, int r, int step_bound, bool quotient,
                                    std::size_t state_budget) {
  InvarianceReport rep;
  rep.fam = fam;
  rep.n = n;
  rep.m = m;
  rep.r = r;
  rep.step_bound = step_bound;
  rep.quotient = quotient;
  rep.witness = counterexample(fam, n, m, r);
  if (step_bound < 0) throw UsageError("step bound must be nonnegative");
  if (quotient && n > 5) throw UsageError("relabeling search supports n <= 5");
  const PartialMap& a = rep.witness.alpha;
  const PartialMap& b = rep.witness.beta;
  Search search(fam, n, r, m, quotient);
  const std::size_t max_len = std::min<std::size_t>(search.max_len(), 2 + static_cast<std::size_t>(step_bound));
  if (2 + static_cast<std::size_t>(step_bound) > search.max_len() && step_bound > 0)
    throw UsageError("step bound too large for the word encoding");

  auto invariant = [&](const MapWord& w) {
    return quotient ? split_form_relabeled(w, b, b, r - 1) : split_form(w, b, b, r - 1);
  };
  const int ia = search.id(a), ib = search.id(b);
  const Key forbidden = search.pack(search.canonical({ia, ib, ib}));
  std::unordered_set<Key, KeyHash> seen;
  std::vector<Key> frontier{search.pack(search.canonical({ib, ib}))};
  seen.insert(frontier[0]);
  rep.split_form_held = invariant(search.maps({ib, ib}));
  for (int depth = 0; depth < step_bound && !rep.truncated; ++depth) {
    std::vector<Key> next;
    for (Key k : frontier) {
      search.neighbors(search.unpack(k), max_len, [&](const std::vector<int>& v) {
        Key c = search.pack(search.canonical(v));
        if (!seen.insert(c).second) return;
        next.push_back(c);
        if (c == forbidden) rep.forbidden_reached = true;
        if (!invariant(search.maps(v)) && rep.split_form_held) {
          rep.split_form_held = false;
          rep.first_violation = word_str(search.maps(v));
        }
      });
      if (seen.size() > state_budget) {
        rep.truncated = true;
        break;
      }
    }
    if (rep.truncated) break;
    frontier = std::move(next);
    rep.depth_reached = depth + 1;
  }
  if (!rep.truncated) {
    // one more step from the last level, checked only
    for (Key k : frontier)
      search.neighbors(search.unpack(k), max_len + 1, [&](const std::vector<int>& v) {
        ++rep.frontier_steps;
        if (v.size() == 3 && search.pack(search.canonical(v)) == forbidden) rep.forbidden_reached = true;
        if (!invariant(search.maps(v)) && rep.steps_preserve) {
          rep.steps_preserve = false;
          if (rep.first_violation.empty()) rep.first_violation = word_str(search.maps(v));
        }
      });
  }
  rep.states = seen.size();
  return rep;
}

}  // namespace depthwork

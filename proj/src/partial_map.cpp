#include "depthwork/partial_map.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <sstream>

namespace depthwork {

int epsilon(Family fam) { return fam == Family::T ? 1 : 0; }

std::string_view family_name(Family fam) {
  switch (fam) {
    case Family::PT: return "PT";
    case Family::T: return "T";
    case Family::I: return "I";
  }
  return "?";
}

Family parse_family(std::string_view s) {
  if (s == "PT") return Family::PT;
  if (s == "T") return Family::T;
  if (s == "I") return Family::I;
  throw UsageError("unknown family '" + std::string(s) + "' (expected PT, T or I)");
}

PartialMap::PartialMap(int n) {
  if (n < 1 || n > kMaxN) throw UsageError("n must lie in [1," + std::to_string(kMaxN) + "]");
  n_ = static_cast<std::uint8_t>(n);
}

PartialMap PartialMap::identity(int n) {
  PartialMap f(n);
  for (int x = 0; x < n; ++x) f.set(x, x);
  return f;
}

PartialMap PartialMap::partial_identity(int n, const std::vector<int>& pts) {
  PartialMap f(n);
  for (int x : pts) f.set(x, x);
  return f;
}

PartialMap PartialMap::from_one_based(int n, const std::vector<int>& vals) {
  if (static_cast<int>(vals.size()) != n) throw UsageError("entry count differs from n");
  PartialMap f(n);
  for (int x = 0; x < n; ++x) {
    int v = vals[x];
    if (v < 0 || v > n) throw UsageError("entry out of range");
    f.set(x, v - 1);
  }
  return f;
}

PartialMap PartialMap::from_one_based(int n, std::initializer_list<int> vals) {
  return from_one_based(n, std::vector<int>(vals));
}

PartialMap PartialMap::from_blocks(
    int n, std::initializer_list<std::pair<std::initializer_list<int>, int>> blocks) {
  PartialMap f(n);
  for (const auto& [dom, img] : blocks) {
    for (int x : dom) {
      if (x < 1 || x > n || img < 1 || img > n) throw UsageError("block point out of range");
      f.set(x - 1, img - 1);
    }
  }
  return f;
}

PartialMap PartialMap::from_code(int n, std::uint64_t code) {
  PartialMap f(n);
  for (int x = 0; x < n; ++x) {
    int d = static_cast<int>(code % (n + 1));
    code /= (n + 1);
    f.set(x, d - 1);
  }
  return f;
}

int PartialMap::rank() const {
  unsigned seen = 0;
  for (int x = 0; x < n_; ++x)
    if (e_[x] != kUndef) seen |= 1u << e_[x];
  return __builtin_popcount(seen);
}

int PartialMap::domain_size() const {
  int c = 0;
  for (int x = 0; x < n_; ++x) c += e_[x] != kUndef;
  return c;
}

std::vector<int> PartialMap::image() const {
  unsigned seen = 0;
  for (int x = 0; x < n_; ++x)
    if (e_[x] != kUndef) seen |= 1u << e_[x];
  std::vector<int> out;
  for (int y = 0; y < n_; ++y)
    if (seen >> y & 1u) out.push_back(y);
  return out;
}

std::vector<int> PartialMap::domain() const {
  std::vector<int> out;
  for (int x = 0; x < n_; ++x)
    if (e_[x] != kUndef) out.push_back(x);
  return out;
}

std::vector<int> PartialMap::complement_of_domain() const {
  std::vector<int> out;
  for (int x = 0; x < n_; ++x)
    if (e_[x] == kUndef) out.push_back(x);
  return out;
}

std::vector<int> PartialMap::complement_of_image() const {
  std::vector<int> out;
  for (int y = 0; y < n_; ++y)
    if (!in_image(y)) out.push_back(y);
  return out;
}

std::vector<std::vector<int>> PartialMap::kernel_classes() const {
  std::vector<std::vector<int>> out;
  std::array<int, kMaxN> slot;
  slot.fill(-1);
  for (int x = 0; x < n_; ++x) {
    if (e_[x] == kUndef) continue;
    int& s = slot[e_[x]];
    if (s < 0) {
      s = static_cast<int>(out.size());
      out.emplace_back();
    }
    out[s].push_back(x);
  }
  return out;
}

std::vector<int> PartialMap::preimage(int y) const {
  std::vector<int> out;
  for (int x = 0; x < n_; ++x)
    if (e_[x] == y) out.push_back(x);
  return out;
}

bool PartialMap::in_image(int y) const {
  for (int x = 0; x < n_; ++x)
    if (e_[x] == y) return true;
  return false;
}

bool PartialMap::is_total() const {
  for (int x = 0; x < n_; ++x)
    if (e_[x] == kUndef) return false;
  return true;
}

bool PartialMap::is_injective() const {
  unsigned seen = 0;
  for (int x = 0; x < n_; ++x) {
    if (e_[x] == kUndef) continue;
    if (seen >> e_[x] & 1u) return false;
    seen |= 1u << e_[x];
  }
  return true;
}

std::uint64_t PartialMap::code() const {
  std::uint64_t c = 0;
  for (int x = n_ - 1; x >= 0; --x) c = c * (n_ + 1) + (e_[x] == kUndef ? 0 : e_[x] + 1);
  return c;
}

std::string PartialMap::str() const {
  std::ostringstream os;
  os << '[';
  for (int x = 0; x < n_; ++x) {
    if (x) os << ' ';
    if (e_[x] == kUndef)
      os << '-';
    else
      os << e_[x] + 1;
  }
  os << ']';
  return os.str();
}

PartialMap compose(const PartialMap& f, const PartialMap& g) {
  if (f.n() != g.n()) throw UsageError("compose: maps act on different ground sets");
  PartialMap h(f.n());
  for (int x = 0; x < f.n(); ++x) {
    int y = f.at(x);
    if (y >= 0) h.set(x, g.at(y));
  }
  return h;
}

bool member(const PartialMap& f, Family fam) {
  switch (fam) {
    case Family::PT: return true;
    case Family::T: return f.is_total();
    case Family::I: return f.is_injective();
  }
  return false;
}

std::uint64_t family_size(Family fam, int n) {
  std::uint64_t total = 0;
  switch (fam) {
    case Family::PT: {
      total = 1;
      for (int i = 0; i < n; ++i) total *= n + 1;
      return total;
    }
    case Family::T: {
      total = 1;
      for (int i = 0; i < n; ++i) total *= n;
      return total;
    }
    case Family::I: {
      for (int k = 0; k <= n; ++k) {
        std::uint64_t c = 1, perm = 1;
        for (int i = 0; i < k; ++i) {
          c = c * (n - i) / (i + 1);
          perm *= (n - i);
        }
        total += c * perm;
      }
      return total;
    }
  }
  return 0;
}

namespace {

std::vector<PartialMap> build_family(Family fam, int n) {
  std::vector<PartialMap> out;
  // odometer over entries with digit order 0..n-1 then undefined, so the
  // output is already in canonical order
  std::vector<int> digit(n, 0);
  const int top = fam == Family::T ? n - 1 : n;
  while (true) {
    PartialMap f(n);
    for (int x = 0; x < n; ++x) f.set(x, digit[x] == n ? -1 : digit[x]);
    if (member(f, fam)) out.push_back(f);
    int pos = n - 1;
    while (pos >= 0 && digit[pos] == top) {
      digit[pos] = 0;
      --pos;
    }
    if (pos < 0) break;
    ++digit[pos];
  }
  return out;
}

}  // namespace

const std::vector<PartialMap>& family_elements(Family fam, int n) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::vector<PartialMap>> cache;
  if (n < 1 || n > kMaxN) throw UsageError("n out of range");
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(static_cast<int>(fam), n);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, build_family(fam, n)).first;
  return it->second;
}

std::vector<PartialMap> all_of_rank(Family fam, int n, int r) {
  if (r < epsilon(fam) || r > n)
    throw UsageError("rank " + std::to_string(r) + " outside [" + std::to_string(epsilon(fam)) +
                     "," + std::to_string(n) + "]");
  std::vector<PartialMap> out;
  for (const auto& f : family_elements(fam, n))
    if (f.rank() == r) out.push_back(f);
  return out;
}

}  // namespace depthwork

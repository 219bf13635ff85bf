#include "depthwork/ideal.hpp"

#include <algorithm>
#include <map>
#include <mutex>

namespace depthwork {

void IdealSpec::validate() const {
  if (n < 1 || n > kMaxN) throw UsageError("n must lie in [1," + std::to_string(kMaxN) + "]");
  if (m < eps() || m > n)
    throw UsageError("m must lie in [" + std::to_string(eps()) + "," + std::to_string(n) + "]");
}

std::string IdealSpec::str() const {
  return std::string(family_name(fam)) + "(n=" + std::to_string(n) + ",m=" + std::to_string(m) + ")";
}

JChain ideal_elements(const IdealSpec& spec) {
  spec.validate();
  JChain out;
  for (int r = spec.eps(); r <= spec.m; ++r) out.push_back({r, all_of_rank(spec.fam, spec.n, r)});
  return out;
}

int depth_of_class(const IdealSpec& spec, int r) {
  spec.validate();
  if (r < spec.eps() || r > spec.m)
    throw UsageError("rank " + std::to_string(r) + " is not a class of " + spec.str());
  return spec.m - r + 1;
}

bool l_related(const PartialMap& f, const PartialMap& g) { return f.image() == g.image(); }

bool r_related(const PartialMap& f, const PartialMap& g) {
  return f.domain() == g.domain() && f.kernel_classes() == g.kernel_classes();
}

Ideal::Ideal(const IdealSpec& spec) : spec_(spec) {
  spec.validate();
  for (int r = spec.m; r >= spec.eps(); --r)
    for (const auto& f : all_of_rank(spec.fam, spec.n, r)) {
      elems_.push_back(f);
      ranks_.push_back(r);
    }
  std::uint64_t space = 1;
  for (int i = 0; i < spec.n; ++i) space *= spec.n + 1;
  if (space <= (1u << 22)) {
    dense_.assign(space, -1);
    for (int id = 0; id < size(); ++id) dense_[elems_[id].code()] = id;
  } else {
    for (int id = 0; id < size(); ++id) sparse_.emplace(elems_[id].code(), id);
  }
  const auto sz = static_cast<std::size_t>(size());
  if (sz * sz <= (1u << 22)) {
    table_.resize(sz * sz);
    for (int a = 0; a < size(); ++a)
      for (int b = 0; b < size(); ++b) table_[a * sz + b] = id_of(elems_[a] * elems_[b]);
  }
}

int Ideal::id_of(const PartialMap& f) const {
  if (f.n() != spec_.n) return -1;
  if (!dense_.empty()) return dense_[f.code()];
  auto it = sparse_.find(f.code());
  return it == sparse_.end() ? -1 : it->second;
}

int Ideal::mul(int a, int b) const {
  if (!table_.empty()) return table_[static_cast<std::size_t>(a) * size() + b];
  return id_of(elems_[a] * elems_[b]);
}

int Ideal::count_rank_at_least(int i) const {
  return static_cast<int>(std::partition_point(ranks_.begin(), ranks_.end(),
                                               [i](int r) { return r >= i; }) -
                          ranks_.begin());
}

std::vector<int> Ideal::ids_of_rank(int r) const {
  std::vector<int> out;
  for (int id = 0; id < size(); ++id)
    if (ranks_[id] == r) out.push_back(id);
  return out;
}

std::shared_ptr<const Ideal> make_ideal(const IdealSpec& spec) {
  static std::mutex mu;
  static std::map<std::tuple<int, int, int>, std::shared_ptr<const Ideal>> cache;
  spec.validate();
  auto key = std::make_tuple(static_cast<int>(spec.fam), spec.n, spec.m);
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  auto made = std::make_shared<const Ideal>(spec);
  std::lock_guard<std::mutex> lock(mu);
  return cache.emplace(key, made).first->second;
}

}  // namespace depthwork

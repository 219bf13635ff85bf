#pragma once

#include <cstdint>
#include <memory>
#include <unordered_map>
#include <vector>

#include "depthwork/partial_map.hpp"

namespace depthwork {

struct IdealSpec {
  Family fam = Family::I;
  int n = 1;
  int m = 0;

  int eps() const { return epsilon(fam); }
  // throws UsageError unless 1 <= n <= kMaxN and eps <= m <= n
  void validate() const;
  std::string str() const;
  friend bool operator==(const IdealSpec&, const IdealSpec&) = default;
};

struct JClass {
  int rank = 0;
  std::vector<PartialMap> elements;
};

// classes in increasing rank, eps..m
using JChain = std::vector<JClass>;

JChain ideal_elements(const IdealSpec& spec);
int depth_of_class(const IdealSpec& spec, int r);

bool l_related(const PartialMap& f, const PartialMap& g);
bool r_related(const PartialMap& f, const PartialMap& g);

// The ideal I_m with elements numbered in generator order: rank
// descending, then canonical map order. Elements of rank >= i are
// exactly the ids below count_rank_at_least(i).
class Ideal {
 public:
  explicit Ideal(const IdealSpec& spec);

  const IdealSpec& spec() const { return spec_; }
  int n() const { return spec_.n; }
  int size() const { return static_cast<int>(elems_.size()); }
  const PartialMap& element(int id) const { return elems_[id]; }
  const std::vector<PartialMap>& elements() const { return elems_; }
  int rank_of(int id) const { return ranks_[id]; }
  int id_of(const PartialMap& f) const;
  int mul(int a, int b) const;
  int count_rank_at_least(int i) const;
  // ids of the elements of rank exactly r, in generator order
  std::vector<int> ids_of_rank(int r) const;

 private:
  IdealSpec spec_;
  std::vector<PartialMap> elems_;
  std::vector<int> ranks_;
  std::vector<int> dense_;
  std::unordered_map<std::uint64_t, int> sparse_;
  std::vector<int> table_;
};

std::shared_ptr<const Ideal> make_ideal(const IdealSpec& spec);

}  // namespace depthwork

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "depthwork/defines.hpp"

namespace depthwork {

// m - max(eps, 2m-n) + 1 below the top, 3 at m = n; needs n >= 3
int formula_depth(const IdealSpec& spec);

struct VerdictCell {
  int i = 0;
  Verdict verdict;
  double seconds = 0;
};

struct ComputedDepth {
  // largest i whose restriction defines the ideal
  std::optional<int> largest_defining;
  std::optional<int> depth;
  // restriction index of the first inconclusive verdict met
  std::optional<int> inconclusive_at;
  // descending i; entries below the largest defining index are implied
  std::vector<VerdictCell> cells;
};

// Scans i downward from m. A restriction that defines the ideal makes every
// lower one define it too, so those cells are filled in as implied unless
// jobs > 1, in which case every i is decided on its own.
ComputedDepth computed_depth(const IdealSpec& spec, const Budgets& budgets, int jobs = 1);

// least rank of a product of two rank-m elements
int min_product_rank(const IdealSpec& spec);
// m - min_product_rank + 1; needs m < n
int multiplication_depth(const IdealSpec& spec);

struct DepthReport {
  IdealSpec spec;
  int formula = 0;
  ComputedDepth computed;
  std::optional<int> multiplication;
  std::string multiplication_note;
  double seconds = 0;

  bool conclusive() const { return computed.depth.has_value(); }
  // conclusive and every available number equals the formula
  bool agree() const;
};

DepthReport reconcile(const IdealSpec& spec, const Budgets& budgets, int jobs = 1);

}  // namespace depthwork

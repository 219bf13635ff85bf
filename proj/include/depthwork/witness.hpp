#pragma once

#include <cstddef>
#include <string>

#include "depthwork/derivation.hpp"

namespace depthwork {

struct WitnessPair {
  PartialMap alpha;
  PartialMap beta;
};

// alpha, beta of rank m with alpha beta = beta beta = alpha beta beta of
// rank r-1. Needs m < n and max(2m-n, eps) < r < m.
WitnessPair counterexample(Family fam, int n, int m, int r);

// w = (prefix)(suffix) with prefix product alpha, suffix product beta,
// every letter of rank rank(alpha), and the two letters at the cut
// multiplying to rank r
bool split_form(const MapWord& w, const PartialMap& alpha, const PartialMap& beta, int r);

// as split_form, with (alpha, beta) allowed to be (alpha p, p^-1 beta)
// for a permutation p
bool split_form_relabeled(const MapWord& w, const PartialMap& alpha, const PartialMap& beta, int r);

struct InvarianceReport {
  Family fam = Family::I;
  int n = 0, m = 0, r = 0;
  int step_bound = 0;
  WitnessPair witness;
  // letters are identified up to relabeling the point set between neighbours
  bool quotient = true;
  int depth_reached = 0;
  std::size_t states = 0;
  // single steps taken out of the last level and checked without storing
  std::size_t frontier_steps = 0;
  bool split_form_held = true;
  bool steps_preserve = true;
  bool forbidden_reached = false;
  bool truncated = false;
  std::string first_violation;

  bool holds() const { return split_form_held && steps_preserve && !forbidden_reached; }
};

// Breadth-first search from x_beta x_beta under the Cayley relations with
// letters and products of rank in [r, m], up to step_bound steps. Every
// visited word must be in split form for (beta, beta) and x_alpha x_beta x_beta
// must stay out of reach. Stops with truncated set past state_budget.
InvarianceReport bounded_invariance(Family fam, int n, int m, int r, int step_bound, bool quotient = true,
                                    std::size_t state_budget = 30'000'000);

}  // namespace depthwork

#pragma once

#include <vector>

#include "depthwork/derivation.hpp"

namespace depthwork {

// x_gamma x_delta -> x_alpha x_beta inside the window [r+1, r+2]
Derivation equalize_pairs(const IdealSpec& spec, const PartialMap& alpha, const PartialMap& beta,
                          const PartialMap& gamma, const PartialMap& delta);

struct TripleReduction {
  PartialMap alpha;  // replaces the first two letters
  PartialMap gamma;  // the original gamma unless no rank r+1 alpha' fits it
  Derivation derivation;
};

// x_alpha x_beta x_gamma -> x_alpha' x_gamma' inside [r+1, r+2]; gamma' = gamma whenever
// some alpha' of rank r+1 has alpha' gamma = alpha beta gamma
TripleReduction reduce_triple(const IdealSpec& spec, const PartialMap& alpha, const PartialMap& beta,
                              const PartialMap& gamma);

struct PairReduction {
  PartialMap alpha;
  PartialMap beta;
  Derivation derivation;
};

// x_gamma x_delta with ranks above r+1 -> x_alpha x_beta of rank r+1, inside [r+1, m]
PairReduction split_high_rank(const IdealSpec& spec, const PartialMap& gamma, const PartialMap& delta);

struct WordReduction {
  PartialMap alpha;
  PartialMap beta;
  Derivation derivation;
  // rank sum of the word after each pass of the descent
  std::vector<int> rank_sums;
};

// word over letters of rank at least r+1 with value of rank r -> x_alpha x_beta, inside [r+1, m]
WordReduction reduce_word(const IdealSpec& spec, const MapWord& w);

}  // namespace depthwork

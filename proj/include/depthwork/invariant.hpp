#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "depthwork/presentation.hpp"

namespace depthwork {

struct Triple {
  PartialMap alpha, beta, gamma;
};

// Certificate that x_alpha x_beta x_gamma = x_beta x_gamma is not a
// consequence of the relations of p. The language of words p q with
// eval(p) = beta g and eval(q) = g^-1 gamma (g a unit of the ideal, or
// the identity when the ideal has no units) is built as a DFA; it is
// certified when every relation u = v sends each reachable state to
// equivalent states under u and v, it contains x_beta x_gamma, and it
// omits x_alpha x_beta x_gamma.
struct InvariantCheck {
  bool certified = false;
  std::string reason;
  Word inside;
  Word outside;
  std::size_t states = 0;
  std::size_t minimal_states = 0;
};

InvariantCheck certify_split_invariant(const Presentation& p, const IdealSpec& spec, const Triple& t,
                                       std::size_t state_budget = 2'000'000);

// triples of letters from the highest non-unit rank present with
// alpha beta gamma = beta gamma and both alpha beta, beta gamma below
// the lowest letter rank; canonical order
std::vector<Triple> candidate_triples(const Presentation& p, const IdealSpec& spec, std::size_t limit);

// t = s u for some partial map u
bool right_divides(const PartialMap& s, const PartialMap& t);

}  // namespace depthwork

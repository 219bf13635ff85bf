#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "depthwork/invariant.hpp"
#include "depthwork/presentation.hpp"

namespace depthwork {

struct Budgets {
  // live classes during enumeration; 0 means 10 x |I_m|
  std::size_t size_budget = 0;
  std::size_t step_budget = 0;
  std::size_t kb_rule_budget = 1'000'000;
  std::size_t kb_overlap_budget = 20'000'000;
  std::size_t dfa_state_budget = 2'000'000;
  std::size_t witness_attempts = 4;
  bool use_kb = true;

  std::size_t effective_size_budget(const IdealSpec& spec) const;
};

enum class VerdictKind { Defines, NotDefines, Inconclusive };
std::string_view verdict_name(VerdictKind k);

struct Verdict {
  VerdictKind kind = VerdictKind::Inconclusive;
  // enumeration | knuth-bendix | split-invariant | implied
  std::string method;
  std::string detail;
  // equal in the target, distinct in the presented semigroup
  std::optional<Relation> witness;
  std::optional<std::uint64_t> presented;
  bool infinite = false;
};

Verdict defines(const Presentation& p, const IdealSpec& spec, const Budgets& budgets,
                const std::vector<Triple>& hints = {});

enum class TietzeMove { T1, T2, T3, T4 };

struct TietzePayload {
  // T1: relation to add; T2: relation to remove; T4: relation b = w
  Relation relation;
  // T3: fresh symbol and its defining word
  std::string symbol;
  Word word;
};

struct TietzeResult {
  bool accepted = false;
  std::string reason;
  Presentation result;
};

TietzeResult tietze(const Presentation& p, TietzeMove move, const TietzePayload& payload,
                    const Budgets& budgets = {});

// decides u = v in the semigroup presented by p, nullopt when undecided
std::optional<bool> word_equal(const Presentation& p, const Word& u, const Word& v, const Budgets& budgets);

}  // namespace depthwork

#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "depthwork/presentation.hpp"

namespace depthwork {

struct KbOptions {
  std::size_t rule_budget = 1'000'000;
  // overlap computations; 0 means unbounded
  std::size_t overlap_budget = 50'000'000;
};

struct NormalFormCount {
  enum class Kind { Finite, Infinite, Unknown };
  Kind kind = Kind::Unknown;
  std::uint64_t count = 0;
  std::string note;
};

class RewritingSystem {
 public:
  enum class Status { Confluent, StoppedAtBudget };

  RewritingSystem(int alphabet, std::vector<Relation> rules, Status status);

  Status status() const { return status_; }
  bool confluent() const { return status_ == Status::Confluent; }
  int alphabet() const { return alphabet_; }
  const std::vector<Relation>& rules() const { return rules_; }

  Word reduce(const Word& w) const;
  // decided only when confluent
  std::optional<bool> equal(const Word& u, const Word& v) const;
  NormalFormCount normal_forms(std::size_t state_budget = 20'000'000) const;

 private:
  int alphabet_;
  std::vector<Relation> rules_;
  Status status_;
  struct Index;
  std::shared_ptr<const Index> index_;
};

RewritingSystem knuth_bendix(const Presentation& p, const KbOptions& opts = {});

}  // namespace depthwork

#pragma once

#include <cstddef>
#include <vector>

#include "depthwork/presentation.hpp"

namespace depthwork {

// Right action of the generators on the classes of A+/R#, found by
// Felsch-style enumeration with the empty word as an extra base point.
struct CongruenceTable {
  enum class Status { Closed, BudgetExceeded };

  Status status = Status::BudgetExceeded;
  std::size_t classes = 0;
  std::vector<Word> representatives;
  // class of each one-letter word
  std::vector<int> letter_class;
  // right_mult[c][g]: class of (representative of c) * g
  std::vector<std::vector<int>> right_mult;
  std::size_t peak_live = 0;
  std::size_t steps = 0;

  bool closed() const { return status == Status::Closed; }
  int class_of(const Word& w) const;
};

struct EnumerateOptions {
  // maximum live classes at any moment; 0 means unbounded
  std::size_t size_budget = 0;
  // maximum definitions plus processed deductions; 0 means unbounded
  std::size_t step_budget = 0;
};

CongruenceTable enumerate(const Presentation& p, const EnumerateOptions& opts = {});

}  // namespace depthwork

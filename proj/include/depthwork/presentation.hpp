#pragma once

#include <string>
#include <utility>
#include <vector>

#include "depthwork/ideal.hpp"

namespace depthwork {

using Word = std::vector<int>;
using Relation = std::pair<Word, Word>;

struct Generator {
  std::string symbol;
  PartialMap map;
};

struct Presentation {
  std::vector<Generator> generators;
  std::vector<Relation> relations;

  int size() const { return static_cast<int>(generators.size()); }
  int index_of(const std::string& symbol) const;  // -1 if absent
  PartialMap evaluate(const Word& w) const;
  std::string word_str(const Word& w) const;
  // nonempty sides over the alphabet, both sides equal under evaluation
  void validate() const;
};

// symbol of the k-th element of I_m in generator order
std::string cayley_symbol(int k);

Presentation cayley(const IdealSpec& spec);
Presentation restriction(const IdealSpec& spec, int i);

bool shortlex_less(const Word& a, const Word& b);

}  // namespace depthwork

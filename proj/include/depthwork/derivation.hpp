#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

#include "depthwork/ideal.hpp"

namespace depthwork {

// A side condition of a construction is not met.
class PreconditionError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// One application of a Cayley relation x_s x_t = x_{st}.
struct Step {
  int pos = 0;
  std::array<PartialMap, 2> pair;
  PartialMap product;
  // true: x_s x_t -> x_{st}; false: x_{st} -> x_s x_t
  bool forward = true;
};

using MapWord = std::vector<PartialMap>;

struct Derivation {
  IdealSpec spec;
  int lo = 0;
  int hi = 0;
  MapWord start;
  MapWord end;
  std::vector<Step> steps;
  std::vector<std::string> tags;
};

struct CheckResult {
  bool ok = true;
  int step = -1;
  std::string reason;
  explicit operator bool() const { return ok; }
};

// every step rewrites the exact subword, all relation letters and products
// have rank in [lo, hi] and lie in the ideal, and the steps lead from start to end
CheckResult check(const Derivation& d);

PartialMap evaluate(const MapWord& w);
Derivation reversed(const Derivation& d);
std::string word_str(const MapWord& w);

// Records steps on a working word. Positions out of range throw
// std::logic_error; an expansion whose factors do not multiply to the letter
// is kept and left for check() to reject.
class Builder {
 public:
  Builder(const IdealSpec& spec, int lo, int hi, MapWord start);

  const MapWord& word() const { return word_; }
  const PartialMap& at(int pos) const { return word_.at(pos); }
  int size() const { return static_cast<int>(word_.size()); }

  void expand(int pos, const PartialMap& s, const PartialMap& t);
  void contract(int pos);
  // replace x_s x_t at pos by x_s' x_t' through their common product
  void pivot(int pos, const PartialMap& s, const PartialMap& t);
  // replay d on the subword starting at offset
  void splice(const Derivation& d, int offset);
  void tag(std::string t) { tags_.push_back(std::move(t)); }

  Derivation finish() const;

 private:
  IdealSpec spec_;
  int lo_, hi_;
  MapWord start_;
  MapWord word_;
  std::vector<Step> steps_;
  std::vector<std::string> tags_;
};

}  // namespace depthwork

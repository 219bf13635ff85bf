#include "depthwork/derivation.hpp"

#include <sstream>

namespace depthwork {

PartialMap evaluate(const MapWord& w) {
  if (w.empty()) throw std::logic_error("empty word has no value");
  PartialMap acc = w.front();
  for (std::size_t i = 1; i < w.size(); ++i) acc = acc * w[i];
  return acc;
}

std::string word_str(const MapWord& w) {
  std::ostringstream os;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) os << ' ';
    os << w[i].str();
  }
  return os.str();
}

namespace {

std::string letter_problem(const Derivation& d, const PartialMap& f) {
  if (f.n() != d.spec.n) return "letter " + f.str() + " acts on the wrong ground set";
  if (!member(f, d.spec.fam)) return "letter " + f.str() + " is not in the family";
  int r = f.rank();
  if (r > d.spec.m) return "letter " + f.str() + " lies outside the ideal";
  if (r < d.lo || r > d.hi)
    return "letter " + f.str() + " has rank " + std::to_string(r) + " outside the window [" +
           std::to_string(d.lo) + "," + std::to_string(d.hi) + "]";
  return {};
}

}  // namespace

CheckResult check(const Derivation& d) {
  CheckResult res;
  auto fail = [&](int step, std::string why) {
    res.ok = false;
    res.step = step;
    res.reason = std::move(why);
    return res;
  };
  if (d.start.empty() || d.end.empty()) return fail(-1, "empty endpoint");
  if (d.lo > d.hi || d.hi > d.spec.m) return fail(-1, "window is not inside the ideal");
  for (const auto& f : d.start)
    if (f.n() != d.spec.n || !member(f, d.spec.fam) || f.rank() > d.spec.m)
      return fail(-1, "start letter " + f.str() + " is not in the ideal");
  MapWord w = d.start;
  for (std::size_t k = 0; k < d.steps.size(); ++k) {
    const Step& s = d.steps[k];
    const int at = static_cast<int>(k);
    for (const auto* f : {&s.pair[0], &s.pair[1], &s.product})
      if (auto why = letter_problem(d, *f); !why.empty()) return fail(at, why);
    if (s.pair[0] * s.pair[1] != s.product) return fail(at, "cited relation is not a Cayley relation");
    if (s.pos < 0) return fail(at, "negative position");
    const auto pos = static_cast<std::size_t>(s.pos);
    if (s.forward) {
      if (pos + 1 >= w.size() || w[pos] != s.pair[0] || w[pos + 1] != s.pair[1])
        return fail(at, "subword at position does not match the relation");
      w[pos] = s.product;
      w.erase(w.begin() + static_cast<long>(pos) + 1);
    } else {
      if (pos >= w.size() || w[pos] != s.product)
        return fail(at, "letter at position does not match the relation");
      w[pos] = s.pair[0];
      w.insert(w.begin() + static_cast<long>(pos) + 1, s.pair[1]);
    }
  }
  if (w != d.end) return fail(-1, "steps end at " + word_str(w) + " not at the recorded end");
  if (evaluate(d.start) != evaluate(d.end)) return fail(-1, "endpoints evaluate differently");
  return res;
}

Derivation reversed(const Derivation& d) {
  Derivation r = d;
  std::swap(r.start, r.end);
  r.steps.assign(d.steps.rbegin(), d.steps.rend());
  for (auto& s : r.steps) s.forward = !s.forward;
  return r;
}

Builder::Builder(const IdealSpec& spec, int lo, int hi, MapWord start)
    : spec_(spec), lo_(lo), hi_(hi), start_(start), word_(std::move(start)) {}

void Builder::expand(int pos, const PartialMap& s, const PartialMap& t) {
  if (pos < 0 || pos >= size()) throw std::logic_error("expand: position out of range");
  // a mismatch is recorded as is and reported by check()
  steps_.push_back({pos, {s, t}, word_[pos], false});
  word_[pos] = s;
  word_.insert(word_.begin() + pos + 1, t);
}

void Builder::contract(int pos) {
  if (pos < 0 || pos + 1 >= size()) throw std::logic_error("contract: position out of range");
  PartialMap p = word_[pos] * word_[pos + 1];
  steps_.push_back({pos, {word_[pos], word_[pos + 1]}, p, true});
  word_[pos] = p;
  word_.erase(word_.begin() + pos + 1);
}

void Builder::pivot(int pos, const PartialMap& s, const PartialMap& t) {
  if (pos < 0 || pos + 1 >= size()) throw std::logic_error("pivot: position out of range");
  if (word_[pos] == s && word_[pos + 1] == t) return;
  contract(pos);
  expand(pos, s, t);
}

void Builder::splice(const Derivation& d, int offset) {
  if (offset < 0 || offset + static_cast<int>(d.start.size()) > size())
    throw std::logic_error("splice: derivation does not fit");
  for (std::size_t i = 0; i < d.start.size(); ++i)
    if (word_[offset + i] != d.start[i]) throw std::logic_error("splice: start does not match the word");
  for (Step s : d.steps) {
    s.pos += offset;
    if (s.forward)
      contract(s.pos);
    else
      expand(s.pos, s.pair[0], s.pair[1]);
  }
  for (const auto& t : d.tags) tags_.push_back(t);
}

Derivation Builder::finish() const {
  Derivation d;
  d.spec = spec_;
  d.lo = lo_;
  d.hi = hi_;
  d.start = start_;
  d.end = word_;
  d.steps = steps_;
  d.tags = tags_;
  return d;
}

}  // namespace depthwork

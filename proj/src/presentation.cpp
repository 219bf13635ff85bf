#include "depthwork/presentation.hpp"

namespace depthwork {

int Presentation::index_of(const std::string& symbol) const {
  for (int k = 0; k < size(); ++k)
    if (generators[k].symbol == symbol) return k;
  return -1;
}

PartialMap Presentation::evaluate(const Word& w) const {
  if (w.empty()) throw UsageError("cannot evaluate the empty word");
  PartialMap f = generators.at(w[0]).map;
  for (std::size_t k = 1; k < w.size(); ++k) f = f * generators.at(w[k]).map;
  return f;
}

std::string Presentation::word_str(const Word& w) const {
  std::string s;
  for (std::size_t k = 0; k < w.size(); ++k) {
    if (k) s += ' ';
    s += generators.at(w[k]).symbol;
  }
  return s;
}

void Presentation::validate() const {
  for (const auto& [u, v] : relations) {
    if (u.empty() || v.empty()) throw UsageError("relation with an empty side");
    for (const Word* w : {&u, &v})
      for (int x : *w)
        if (x < 0 || x >= size()) throw UsageError("relation uses an undeclared generator");
    if (evaluate(u) != evaluate(v))
      throw UsageError("relation " + word_str(u) + " = " + word_str(v) + " fails in the target");
  }
}

std::string cayley_symbol(int k) { return "g" + std::to_string(k); }

Presentation restriction(const IdealSpec& spec, int i) {
  spec.validate();
  if (i < spec.eps() || i > spec.m)
    throw UsageError("restriction index " + std::to_string(i) + " outside [" +
                     std::to_string(spec.eps()) + "," + std::to_string(spec.m) + "]");
  auto ideal = make_ideal(spec);
  const int N = ideal->count_rank_at_least(i);
  Presentation p;
  p.generators.reserve(N);
  for (int k = 0; k < N; ++k) p.generators.push_back({cayley_symbol(k), ideal->element(k)});
  for (int s = 0; s < N; ++s)
    for (int t = 0; t < N; ++t) {
      int st = ideal->mul(s, t);
      if (st < N) p.relations.push_back({{s, t}, {st}});
    }
  return p;
}

Presentation cayley(const IdealSpec& spec) { return restriction(spec, spec.eps()); }

bool shortlex_less(const Word& a, const Word& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

}  // namespace depthwork

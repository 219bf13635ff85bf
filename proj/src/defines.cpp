#include "depthwork/defines.hpp"

#include <algorithm>

#include "depthwork/enumerate.hpp"
#include "depthwork/knuth_bendix.hpp"

namespace depthwork {

std::size_t Budgets::effective_size_budget(const IdealSpec& spec) const {
  if (size_budget) return size_budget;
  return 10 * static_cast<std::size_t>(make_ideal(spec)->size());
}

std::string_view verdict_name(VerdictKind k) {
  switch (k) {
    case VerdictKind::Defines: return "Defines";
    case VerdictKind::NotDefines: return "NotDefines";
    case VerdictKind::Inconclusive: return "Inconclusive";
  }
  return "?";
}

namespace {

std::string mismatch(const std::string& presented, std::size_t target) {
  return "size mismatch: presented cardinality " + presented + " vs target " + std::to_string(target);
}

}  // namespace

Verdict defines(const Presentation& p, const IdealSpec& spec, const Budgets& budgets,
                const std::vector<Triple>& hints) {
  spec.validate();
  auto ideal = make_ideal(spec);
  for (const auto& g : p.generators)
    if (ideal->id_of(g.map) < 0)
      throw UsageError("generator " + g.symbol + " = " + g.map.str() + " is not in " + spec.str());
  p.validate();
  const auto target = static_cast<std::size_t>(ideal->size());

  Verdict v;
  std::vector<Triple> tries = hints;
  for (auto& t : candidate_triples(p, spec, budgets.witness_attempts)) tries.push_back(t);
  std::string notes;
  for (std::size_t k = 0; k < tries.size() && k < hints.size() + budgets.witness_attempts; ++k) {
    auto chk = certify_split_invariant(p, spec, tries[k], budgets.dfa_state_budget);
    if (chk.certified) {
      v.kind = VerdictKind::NotDefines;
      v.method = "split-invariant";
      v.witness = Relation{chk.outside, chk.inside};
      v.detail = "witness pair (" + p.word_str(chk.outside) + ", " + p.word_str(chk.inside) +
                 ") equal in the target, separated by an invariant language with " +
                 std::to_string(chk.minimal_states) + " states";
      return v;
    }
    if (notes.empty()) notes = chk.reason;
  }

  auto table = enumerate(p, {budgets.effective_size_budget(spec), budgets.step_budget});
  if (table.closed()) {
    v.presented = table.classes;
    v.method = "enumeration";
    if (table.classes == target) {
      v.kind = VerdictKind::Defines;
      v.detail = "presented cardinality " + std::to_string(target) + " equals the target";
    } else {
      v.kind = VerdictKind::NotDefines;
      v.detail = mismatch(std::to_string(table.classes), target);
    }
    return v;
  }
  std::string reason = "enumeration exceeded its budget";

  if (budgets.use_kb) {
    auto rs = knuth_bendix(p, {budgets.kb_rule_budget, budgets.kb_overlap_budget});
    if (rs.confluent()) {
      auto nf = rs.normal_forms();
      v.method = "knuth-bendix";
      if (nf.kind == NormalFormCount::Kind::Infinite) {
        v.kind = VerdictKind::NotDefines;
        v.infinite = true;
        v.detail = mismatch("infinite", target);
        return v;
      }
      if (nf.kind == NormalFormCount::Kind::Finite) {
        v.presented = nf.count;
        v.kind = nf.count == target ? VerdictKind::Defines : VerdictKind::NotDefines;
        v.detail = nf.count == target ? "presented cardinality equals the target"
                                      : mismatch(std::to_string(nf.count), target);
        return v;
      }
      reason += "; " + nf.note;
    } else {
      reason += "; completion stopped at its budget";
    }
  }
  if (!notes.empty()) reason += "; witness: " + notes;
  v.kind = VerdictKind::Inconclusive;
  v.method = "none";
  v.detail = reason;
  return v;
}

std::optional<bool> word_equal(const Presentation& p, const Word& u, const Word& v, const Budgets& budgets) {
  std::size_t cap = budgets.size_budget ? budgets.size_budget : 100000;
  auto table = enumerate(p, {cap, budgets.step_budget});
  if (table.closed()) return table.class_of(u) == table.class_of(v);
  auto rs = knuth_bendix(p, {budgets.kb_rule_budget, budgets.kb_overlap_budget});
  return rs.equal(u, v);
}

namespace {

bool occurs(const Word& w, int b) { return std::find(w.begin(), w.end(), b) != w.end(); }

}  // namespace

TietzeResult tietze(const Presentation& p, TietzeMove move, const TietzePayload& payload,
                    const Budgets& budgets) {
  TietzeResult out;
  out.result = p;
  auto check_word = [&](const Word& w) {
    if (w.empty()) throw UsageError("empty word in Tietze payload");
    for (int x : w)
      if (x < 0 || x >= p.size()) throw UsageError("Tietze payload uses an undeclared generator");
  };
  switch (move) {
    case TietzeMove::T1: {
      check_word(payload.relation.first);
      check_word(payload.relation.second);
      auto eq = word_equal(p, payload.relation.first, payload.relation.second, budgets);
      if (!eq) {
        out.reason = "consequence check inconclusive";
        return out;
      }
      if (!*eq) {
        out.reason = "relation is not a consequence";
        return out;
      }
      out.result.relations.push_back(payload.relation);
      out.accepted = true;
      return out;
    }
    case TietzeMove::T2: {
      auto it = std::find(out.result.relations.begin(), out.result.relations.end(), payload.relation);
      if (it == out.result.relations.end()) {
        out.reason = "relation not present";
        return out;
      }
      out.result.relations.erase(it);
      auto eq = word_equal(out.result, payload.relation.first, payload.relation.second, budgets);
      if (!eq || !*eq) {
        out.reason = eq ? "relation is not a consequence of the others" : "consequence check inconclusive";
        out.result = p;
        return out;
      }
      out.accepted = true;
      return out;
    }
    case TietzeMove::T3: {
      check_word(payload.word);
      if (payload.symbol.empty() || p.index_of(payload.symbol) >= 0) {
        out.reason = "symbol is not fresh";
        return out;
      }
      out.result.generators.push_back({payload.symbol, p.evaluate(payload.word)});
      out.result.relations.push_back({{p.size()}, payload.word});
      out.accepted = true;
      return out;
    }
    case TietzeMove::T4: {
      const auto& [lhs, w] = payload.relation;
      if (lhs.size() != 1) {
        out.reason = "relation is not of the form b = w";
        return out;
      }
      check_word(w);
      const int b = lhs[0];
      if (occurs(w, b)) {
        out.reason = "defining word contains the generator";
        return out;
      }
      auto& rels = out.result.relations;
      auto it = std::find(rels.begin(), rels.end(), payload.relation);
      if (it == rels.end()) {
        out.reason = "relation not present";
        return out;
      }
      rels.erase(it);
      auto subst = [&](const Word& x) {
        Word y;
        for (int c : x) {
          if (c == b)
            y.insert(y.end(), w.begin(), w.end());
          else
            y.push_back(c > b ? c - 1 : c);
        }
        return y;
      };
      for (auto& [u, v] : rels) {
        u = subst(u);
        v = subst(v);
      }
      out.result.generators.erase(out.result.generators.begin() + b);
      out.accepted = true;
      return out;
    }
  }
  return out;
}

}  // namespace depthwork

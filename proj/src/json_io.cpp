#include "depthwork/json_io.hpp"

#include "depthwork/presentation.hpp"

namespace depthwork {

namespace {

MapWord word_from_json(const json& j, const Ideal& ideal) {
  if (!j.is_array()) throw UsageError("word must be an array");
  MapWord w;
  for (const auto& x : j) w.push_back(map_from_json(x, ideal));
  return w;
}

json word_to_json(const MapWord& w, const Ideal& ideal) {
  json out = json::array();
  for (const auto& f : w) out.push_back(symbol_of(f, ideal));
  return out;
}

}  // namespace

PartialMap map_from_json(const json& j, const Ideal& ideal) {
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    std::size_t used = 0;
    int k = -1;
    try {
      if (s.size() >= 2 && s[0] == 'g') k = std::stoi(s.substr(1), &used);
    } catch (const std::exception&) {
      k = -1;
    }
    if (k < 0 || used + 1 != s.size() || k >= ideal.size()) throw UsageError("unknown generator '" + s + "'");
    return ideal.element(k);
  }
  if (!j.is_array()) throw UsageError("a map is a symbol or an array of images");
  std::vector<int> vals;
  for (const auto& v : j) {
    if (!v.is_number_integer()) throw UsageError("map entries must be integers");
    vals.push_back(v.get<int>());
  }
  PartialMap f = PartialMap::from_one_based(ideal.n(), vals);
  if (ideal.id_of(f) < 0) throw UsageError("map " + f.str() + " is not in " + ideal.spec().str());
  return f;
}

json map_to_json(const PartialMap& f) {
  json out = json::array();
  for (int x = 0; x < f.n(); ++x) out.push_back(f.defined(x) ? f.at(x) + 1 : 0);
  return out;
}

std::string symbol_of(const PartialMap& f, const Ideal& ideal) {
  const int k = ideal.id_of(f);
  if (k < 0) throw UsageError("map " + f.str() + " is not in " + ideal.spec().str());
  return cayley_symbol(k);
}

json derivation_to_json(const Derivation& d) {
  auto ideal = make_ideal(d.spec);
  json steps = json::array();
  for (const auto& s : d.steps)
    steps.push_back({{"pos", s.pos},
                     {"rel", {{symbol_of(s.pair[0], *ideal), symbol_of(s.pair[1], *ideal)},
                              {symbol_of(s.product, *ideal)}}},
                     {"dir", s.forward ? "fwd" : "bwd"}});
  return {{"family", std::string(family_name(d.spec.fam))},
          {"n", d.spec.n},
          {"m", d.spec.m},
          {"window", {d.lo, d.hi}},
          {"start", word_to_json(d.start, *ideal)},
          {"steps", steps},
          {"end", word_to_json(d.end, *ideal)},
          {"tags", d.tags}};
}

Derivation derivation_from_json(const json& j) {
  try {
    Derivation d;
    d.spec = IdealSpec{parse_family(j.at("family").get<std::string>()), j.at("n").get<int>(), j.at("m").get<int>()};
    d.spec.validate();
    auto ideal = make_ideal(d.spec);
    const auto& win = j.at("window");
    if (!win.is_array() || win.size() != 2) throw UsageError("window must be [lo, hi]");
    d.lo = win[0].get<int>();
    d.hi = win[1].get<int>();
    d.start = word_from_json(j.at("start"), *ideal);
    d.end = word_from_json(j.at("end"), *ideal);
    for (const auto& s : j.at("steps")) {
      Step st;
      st.pos = s.at("pos").get<int>();
      const auto& rel = s.at("rel");
      if (!rel.is_array() || rel.size() != 2 || rel[0].size() != 2 || rel[1].size() != 1)
        throw UsageError("relation must be [[s, t], [st]]");
      st.pair = {map_from_json(rel[0][0], *ideal), map_from_json(rel[0][1], *ideal)};
      st.product = map_from_json(rel[1][0], *ideal);
      const std::string dir = s.at("dir").get<std::string>();
      if (dir != "fwd" && dir != "bwd") throw UsageError("dir must be fwd or bwd");
      st.forward = dir == "fwd";
      d.steps.push_back(st);
    }
    if (j.contains("tags")) d.tags = j.at("tags").get<std::vector<std::string>>();
    return d;
  } catch (const json::exception& e) {
    throw UsageError(std::string("malformed derivation: ") + e.what());
  }
}

json report_to_json(const InvarianceReport& r) {
  return {{"family", std::string(family_name(r.fam))},
          {"n", r.n},
          {"m", r.m},
          {"r", r.r},
          {"step_bound", r.step_bound},
          {"relabeling_quotient", r.quotient},
          {"depth_reached", r.depth_reached},
          {"states", r.states},
          {"frontier_steps", r.frontier_steps},
          {"split_form_held", r.split_form_held},
          {"steps_preserve", r.steps_preserve},
          {"forbidden_reached", r.forbidden_reached},
          {"truncated", r.truncated},
          {"bounded_evidence_only", true},
          {"first_violation", r.first_violation}};
}

}  // namespace depthwork

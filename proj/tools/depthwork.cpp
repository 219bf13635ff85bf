#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "depthwork/depth.hpp"
#include "depthwork/enumerate.hpp"
#include "depthwork/json_io.hpp"
#include "depthwork/knuth_bendix.hpp"
#include "depthwork/reduction.hpp"
#include "depthwork/rules.hpp"
#include "depthwork/witness.hpp"

using namespace depthwork;

namespace {

constexpr const char* kVersion = "0.1.0";

enum Exit { kOk = 0, kMath = 1, kUsage = 2 };

struct Global {
  std::uint64_t seed = 1;
  int jobs = 1;
  bool allow_inconclusive = false;
  bool extended_budget = false;
  std::string manifest;
  std::string output;
};

struct SpecArgs {
  std::string family = "I";
  int n = 3;
  int m = 2;

  IdealSpec spec() const {
    IdealSpec s{parse_family(family), n, m};
    s.validate();
    return s;
  }
};

void add_spec(CLI::App* cmd, SpecArgs& a) {
  cmd->add_option("--family", a.family, "PT, T or I")->required();
  cmd->add_option("--n", a.n, "points")->required();
  cmd->add_option("--m", a.m, "top rank of the ideal")->required();
}

// DEPTHWORK_BUDGET_MB bounds the enumeration table, the invariant DFA and
// the rewriting system; --extended-budget multiplies the defaults by 8
Budgets budgets_for(const IdealSpec& spec, const Global& g) {
  Budgets b;
  if (g.extended_budget) {
    b.size_budget = 80 * static_cast<std::size_t>(make_ideal(spec)->size());
    b.kb_rule_budget *= 8;
    b.kb_overlap_budget *= 8;
    b.dfa_state_budget *= 8;
  }
  if (const char* env = std::getenv("DEPTHWORK_BUDGET_MB")) {
    char* end = nullptr;
    const unsigned long long mb = std::strtoull(env, &end, 10);
    if (end == env || *end != '\0' || mb == 0) throw UsageError("DEPTHWORK_BUDGET_MB must be a positive integer");
    const std::size_t bytes = static_cast<std::size_t>(mb) << 20;
    const std::size_t gens = static_cast<std::size_t>(make_ideal(spec)->size()) + 1;
    b.size_budget = std::max<std::size_t>(1000, bytes / (4 * gens + 64));
    b.dfa_state_budget = std::max<std::size_t>(1000, bytes / 256);
    b.kb_rule_budget = std::max<std::size_t>(1000, bytes / 512);
  }
  return b;
}

json budgets_json(const Budgets& b) {
  return {{"size_budget", b.size_budget},
          {"step_budget", b.step_budget},
          {"kb_rule_budget", b.kb_rule_budget},
          {"kb_overlap_budget", b.kb_overlap_budget},
          {"dfa_state_budget", b.dfa_state_budget},
          {"witness_attempts", b.witness_attempts}};
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw UsageError("cannot write " + path);
  out << text;
}

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw UsageError("malformed JSON in " + path + ": " + e.what());
  }
}

json verdict_json(const Verdict& v, const Presentation* p) {
  json j{{"verdict", std::string(verdict_name(v.kind))}, {"method", v.method}, {"detail", v.detail}};
  if (v.presented) j["presented"] = *v.presented;
  if (v.infinite) j["presented"] = "infinite";
  if (v.witness && p) j["witness"] = {p->word_str(v.witness->first), p->word_str(v.witness->second)};
  return j;
}

json word_json(const Presentation& p, const Word& w) {
  json out = json::array();
  for (int x : w) out.push_back(p.generators.at(x).symbol);
  return out;
}

// ---- depth-table

struct TableArgs {
  std::string families = "I,T,PT";
  int n_min = 3;
  int n_max = 3;
  std::string csv;
  std::string json_path;
};

int cmd_depth_table(const TableArgs& a, const Global& g, json& summary) {
  if (a.n_max < 3 || a.n_min < 3) throw UsageError("the depth formula needs n >= 3");
  if (a.n_min > a.n_max) throw UsageError("--n-min exceeds --n-max");
  std::vector<Family> fams;
  std::stringstream ss(a.families);
  for (std::string f; std::getline(ss, f, ',');) fams.push_back(parse_family(f));
  std::ostringstream csv;
  csv << "family,n,m,formula,computed,multiplication,agree\n";
  json rows = json::array();
  int disagree = 0, inconclusive = 0;
  for (Family fam : fams)
    for (int n = a.n_min; n <= a.n_max; ++n)
      for (int m = epsilon(fam); m <= n; ++m) {
        IdealSpec spec{fam, n, m};
        auto rep = reconcile(spec, budgets_for(spec, g), g.jobs);
        std::string computed =
            rep.computed.depth ? std::to_string(*rep.computed.depth)
                               : "inconclusive at i=" + std::to_string(rep.computed.inconclusive_at.value_or(-1));
        std::string mult = rep.multiplication ? std::to_string(*rep.multiplication) : "unsupported";
        csv << family_name(fam) << ',' << n << ',' << m << ',' << rep.formula << ',' << computed << ',' << mult
            << ',' << (rep.agree() ? "true" : "false") << '\n';
        json cells = json::array();
        for (const auto& c : rep.computed.cells) {
          json v = verdict_json(c.verdict, nullptr);
          v["i"] = c.i;
          cells.push_back(v);
        }
        rows.push_back({{"family", std::string(family_name(fam))},
                        {"n", n},
                        {"m", m},
                        {"formula", rep.formula},
                        {"computed", computed},
                        {"multiplication", mult},
                        {"agree", rep.agree()},
                        {"verdicts", cells}});
        if (!rep.conclusive())
          ++inconclusive;
        else if (!rep.agree())
          ++disagree;
      }
  emit(csv.str(), a.csv);
  if (!a.json_path.empty()) emit(rows.dump(2) + "\n", a.json_path);
  summary = {{"rows", rows.size()}, {"disagreements", disagree}, {"inconclusive", inconclusive}};
  if (disagree) return kMath;
  if (inconclusive && !g.allow_inconclusive) return kMath;
  return kOk;
}

// ---- defines / present / enumerate / kb

struct PresArgs {
  SpecArgs s;
  int i = -1;
};

Presentation presentation_of(const PresArgs& a, IdealSpec& spec) {
  spec = a.s.spec();
  return a.i < 0 ? cayley(spec) : restriction(spec, a.i);
}

int cmd_defines(const PresArgs& a, const Global& g, json& summary) {
  IdealSpec spec;
  auto p = presentation_of(a, spec);
  auto v = defines(p, spec, budgets_for(spec, g));
  json j = verdict_json(v, &p);
  j["spec"] = spec.str();
  j["restriction"] = a.i < 0 ? spec.eps() : a.i;
  emit(j.dump(2) + "\n", g.output);
  summary = {{"verdict", std::string(verdict_name(v.kind))}};
  return v.kind == VerdictKind::Inconclusive && !g.allow_inconclusive ? kMath : kOk;
}

int cmd_present(const PresArgs& a, const Global& g, json& summary) {
  IdealSpec spec;
  auto p = presentation_of(a, spec);
  json gens = json::array();
  for (const auto& gen : p.generators) gens.push_back({{"symbol", gen.symbol}, {"map", map_to_json(gen.map)}});
  json rels = json::array();
  for (const auto& [u, v] : p.relations) rels.push_back({word_json(p, u), word_json(p, v)});
  json j{{"spec", spec.str()}, {"restriction", a.i < 0 ? spec.eps() : a.i}, {"generators", gens}, {"relations", rels}};
  emit(j.dump(2) + "\n", g.output);
  summary = {{"generators", p.size()}, {"relations", p.relations.size()}};
  return kOk;
}

int cmd_enumerate(const PresArgs& a, const Global& g, json& summary) {
  IdealSpec spec;
  auto p = presentation_of(a, spec);
  const Budgets b = budgets_for(spec, g);
  auto t = enumerate(p, {b.effective_size_budget(spec), b.step_budget});
  json j{{"spec", spec.str()},
         {"restriction", a.i < 0 ? spec.eps() : a.i},
         {"closed", t.closed()},
         {"target", make_ideal(spec)->size()}};
  if (t.closed()) j["classes"] = t.classes;
  emit(j.dump(2) + "\n", g.output);
  summary = {{"closed", t.closed()}};
  return t.closed() || g.allow_inconclusive ? kOk : kMath;
}

int cmd_kb(const PresArgs& a, const Global& g, json& summary) {
  IdealSpec spec;
  auto p = presentation_of(a, spec);
  const Budgets b = budgets_for(spec, g);
  auto rs = knuth_bendix(p, {b.kb_rule_budget, b.kb_overlap_budget});
  json j{{"spec", spec.str()},
         {"restriction", a.i < 0 ? spec.eps() : a.i},
         {"confluent", rs.confluent()},
         {"rules", rs.rules().size()},
         {"target", make_ideal(spec)->size()}};
  if (rs.confluent()) {
    auto nf = rs.normal_forms();
    if (nf.kind == NormalFormCount::Kind::Finite) j["normal_forms"] = nf.count;
    if (nf.kind == NormalFormCount::Kind::Infinite) j["normal_forms"] = "infinite";
    if (nf.kind == NormalFormCount::Kind::Unknown) j["normal_forms"] = "unknown: " + nf.note;
  }
  emit(j.dump(2) + "\n", g.output);
  summary = {{"confluent", rs.confluent()}};
  return rs.confluent() || g.allow_inconclusive ? kOk : kMath;
}

// ---- jclasses

int cmd_jclasses(const SpecArgs& a, const Global& g, json& summary) {
  auto spec = a.spec();
  json rows = json::array();
  for (const auto& cls : ideal_elements(spec)) {
    std::vector<PartialMap> lreps, rreps;
    for (const auto& f : cls.elements) {
      if (std::none_of(lreps.begin(), lreps.end(), [&](const PartialMap& x) { return l_related(x, f); }))
        lreps.push_back(f);
      if (std::none_of(rreps.begin(), rreps.end(), [&](const PartialMap& x) { return r_related(x, f); }))
        rreps.push_back(f);
    }
    rows.push_back({{"rank", cls.rank},
                    {"size", cls.elements.size()},
                    {"l_classes", lreps.size()},
                    {"r_classes", rreps.size()},
                    {"depth", depth_of_class(spec, cls.rank)}});
  }
  emit(json{{"spec", spec.str()}, {"classes", rows}}.dump(2) + "\n", g.output);
  summary = {{"classes", rows.size()}};
  return kOk;
}

// ---- counterexample

struct WitnessArgs {
  std::string family = "I";
  int n = 4, m = 2, r = 1;
  int bound = 6;
  bool literal = false;
  bool skip_search = false;
};

int cmd_counterexample(const WitnessArgs& a, const Global& g, json& summary) {
  const Family fam = parse_family(a.family);
  auto w = counterexample(fam, a.n, a.m, a.r);
  json j{{"family", std::string(family_name(fam))},
         {"n", a.n},
         {"m", a.m},
         {"r", a.r},
         {"alpha", map_to_json(w.alpha)},
         {"beta", map_to_json(w.beta)},
         {"alpha_beta", map_to_json(w.alpha * w.beta)},
         {"beta_beta", map_to_json(w.beta * w.beta)},
         {"alpha_beta_beta", map_to_json(w.alpha * w.beta * w.beta)},
         {"product_rank", (w.alpha * w.beta).rank()}};
  bool ok = w.alpha * w.beta == w.beta * w.beta && w.alpha * w.beta * w.beta == w.beta * w.beta &&
            (w.alpha * w.beta).rank() == a.r - 1;
  if (!a.skip_search) {
    auto rep = bounded_invariance(fam, a.n, a.m, a.r, a.bound, !a.literal);
    j["invariance"] = report_to_json(rep);
    ok = ok && rep.holds();
    if (rep.truncated && !g.allow_inconclusive) ok = false;
  }
  j["identities_hold"] = ok;
  emit(j.dump(2) + "\n", g.output);
  summary = {{"ok", ok}};
  return ok ? kOk : kMath;
}

// ---- derive

struct DeriveArgs {
  SpecArgs s;
  std::string op = "equalize";
  int r = -1;
  std::string input;
  std::string rule;
};

std::vector<PartialMap> letters(const json& in, const Ideal& ideal, std::initializer_list<const char*> keys) {
  std::vector<PartialMap> out;
  for (const char* k : keys) {
    if (!in.contains(k)) throw UsageError(std::string("input lacks \"") + k + "\"");
    out.push_back(map_from_json(in.at(k), ideal));
  }
  return out;
}

RuleParams params_from_json(const json& p) {
  RuleParams out;
  auto point = [&](const char* k, int& dst) {
    if (p.contains(k)) dst = p.at(k).get<int>() - 1;
  };
  if (p.contains("cls")) out.cls = p.at("cls").get<int>();
  if (p.contains("target")) out.target = p.at("target").get<int>();
  point("point", out.point);
  point("point2", out.point2);
  if (p.contains("part"))
    for (int x : p.at("part").get<std::vector<int>>()) out.part.push_back(x - 1);
  if (p.contains("reading")) {
    const auto r = p.at("reading").get<std::string>();
    if (r == "as-printed")
      out.reading = KerBetaReading::AsPrinted;
    else if (r != "image-excluded")
      throw UsageError("reading must be as-printed or image-excluded");
  }
  return out;
}

// a random instance for the operation, drawn with the global seed
json sample_input(const std::string& op, const IdealSpec& spec, int r, std::mt19937_64& rng) {
  const auto low = all_of_rank(spec.fam, spec.n, r + 1);
  if (low.empty()) throw PreconditionError("precondition fails: no letters of rank r+1");
  auto pick = [&]() { return low[std::uniform_int_distribution<std::size_t>(0, low.size() - 1)(rng)]; };
  for (int tries = 0; tries < 200000; ++tries) {
    PartialMap a = pick(), b = pick();
    if ((a * b).rank() != r) continue;
    if (op == "equalize") {
      for (int t2 = 0; t2 < 2000; ++t2) {
        PartialMap c = pick(), d = pick();
        if (c * d == a * b)
          return {{"alpha", map_to_json(a)}, {"beta", map_to_json(b)}, {"gamma", map_to_json(c)},
                  {"delta", map_to_json(d)}};
      }
    } else if (op == "triple") {
      PartialMap c = pick();
      if ((b * c).rank() == r && (a * b * c).rank() == r)
        return {{"alpha", map_to_json(a)}, {"beta", map_to_json(b)}, {"gamma", map_to_json(c)}};
    } else {
      return {{"alpha", map_to_json(a)}, {"beta", map_to_json(b)}};
    }
  }
  throw PreconditionError("precondition fails: no sample instance found");
}

int cmd_derive(const DeriveArgs& a, const Global& g, json& summary) {
  const auto spec = a.s.spec();
  static const std::vector<std::string> ops{"equalize", "triple", "split", "word", "rule"};
  if (std::find(ops.begin(), ops.end(), a.op) == ops.end())
    throw UsageError("unknown op '" + a.op + "' (equalize, triple, split, word, rule)");
  const int eps = spec.eps();
  if (a.r < eps || a.r > 2 * spec.m - spec.n - 1)
    throw PreconditionError("precondition fails: r = " + std::to_string(a.r) + " must satisfy " +
                            std::to_string(eps) + " <= r <= 2m-n-1 = " + std::to_string(2 * spec.m - spec.n - 1));
  auto ideal = make_ideal(spec);
  json in;
  if (a.input.empty()) {
    if (a.op == "split" || a.op == "word") throw UsageError("--input is required for op " + a.op);
    std::mt19937_64 rng(g.seed);
    in = sample_input(a.op, spec, a.r, rng);
    if (a.op == "rule") in["rule"] = a.rule;
  } else {
    in = read_json(a.input);
  }
  if (!in.is_object()) throw UsageError("input must be a JSON object");
  auto rank_is = [&](const PartialMap& f, int want, const char* what) {
    if (f.rank() != want)
      throw PreconditionError(std::string("precondition fails: ") + what + " has rank " + std::to_string(f.rank()) +
                              ", expected " + std::to_string(want));
  };
  Derivation d;
  json extra;
  if (a.op == "equalize") {
    auto v = letters(in, *ideal, {"alpha", "beta", "gamma", "delta"});
    rank_is(v[0], a.r + 1, "alpha");
    d = equalize_pairs(spec, v[0], v[1], v[2], v[3]);
  } else if (a.op == "triple") {
    auto v = letters(in, *ideal, {"alpha", "beta", "gamma"});
    rank_is(v[0], a.r + 1, "alpha");
    auto res = reduce_triple(spec, v[0], v[1], v[2]);
    d = res.derivation;
    extra = {{"alpha", map_to_json(res.alpha)}, {"gamma", map_to_json(res.gamma)}};
  } else if (a.op == "split") {
    auto v = letters(in, *ideal, {"gamma", "delta"});
    rank_is(v[0] * v[1], a.r, "gamma delta");
    auto res = split_high_rank(spec, v[0], v[1]);
    d = res.derivation;
    extra = {{"alpha", map_to_json(res.alpha)}, {"beta", map_to_json(res.beta)}};
  } else if (a.op == "word") {
    if (!in.contains("word") || !in.at("word").is_array()) throw UsageError("input lacks \"word\"");
    MapWord w;
    for (const auto& x : in.at("word")) w.push_back(map_from_json(x, *ideal));
    rank_is(evaluate(w), a.r, "the word's value");
    auto res = reduce_word(spec, w);
    d = res.derivation;
    extra = {{"alpha", map_to_json(res.alpha)}, {"beta", map_to_json(res.beta)}, {"rank_sums", res.rank_sums}};
  } else {
    const std::string name = in.contains("rule") ? in.at("rule").get<std::string>() : a.rule;
    auto kind = parse_rule(name);
    if (!kind) throw UsageError("unknown rule '" + name + "'");
    auto v = letters(in, *ideal, {"alpha", "beta"});
    rank_is(v[0], a.r + 1, "alpha");
    RuleParams p;
    if (in.contains("params")) {
      p = params_from_json(in.at("params"));
    } else {
      auto all = admissible_params(*kind, spec, v[0], v[1]);
      if (all.empty()) throw PreconditionError("precondition fails: rule " + name + " has no admissible parameters");
      p = all.front();
    }
    auto res = apply_rule(*kind, spec, v[0], v[1], p);
    d = res.derivation;
    extra = {{"alpha", map_to_json(res.alpha)}, {"beta", map_to_json(res.beta)}};
  }
  auto verdict = check(d);
  json j = derivation_to_json(d);
  j["checked"] = static_cast<bool>(verdict);
  if (!verdict) j["check_failure"] = {{"step", verdict.step}, {"reason", verdict.reason}};
  if (!extra.is_null()) j["result"] = extra;
  emit(j.dump(2) + "\n", g.output);
  summary = {{"steps", d.steps.size()}, {"checked", static_cast<bool>(verdict)}};
  return verdict ? kOk : kMath;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Relational depth of ideals in PT_n, T_n and I_n"};
  app.require_subcommand(1);
  Global g;
  app.add_option("--seed", g.seed, "seed for sampled inputs");
  app.add_option("--jobs", g.jobs, "worker threads for per-index verdicts")->check(CLI::PositiveNumber);
  app.add_flag("--allow-inconclusive", g.allow_inconclusive, "exit 0 when a verdict is inconclusive");
  app.add_flag("--extended-budget", g.extended_budget, "raise enumeration and completion budgets");
  app.add_option("--manifest", g.manifest, "write a run manifest here");
  app.add_option("-o,--output", g.output, "write the primary output here instead of stdout");

  TableArgs table;
  auto* c_table = app.add_subcommand("depth-table", "formula, computed and multiplication depth per ideal");
  c_table->add_option("--families", table.families, "comma separated");
  c_table->add_option("--n-min", table.n_min);
  c_table->add_option("--n-max", table.n_max);
  c_table->add_option("--csv", table.csv, "CSV path, stdout by default");
  c_table->add_option("--json", table.json_path, "per-cell verdicts as JSON");

  PresArgs pres_def, pres_show, pres_enum, pres_kb;
  auto* c_def = app.add_subcommand("defines", "decide whether a restriction presents the ideal");
  auto* c_show = app.add_subcommand("present", "print a restriction presentation");
  auto* c_enum = app.add_subcommand("enumerate", "congruence enumeration of a restriction");
  auto* c_kb = app.add_subcommand("kb", "Knuth-Bendix completion of a restriction");
  for (auto [cmd, args] : {std::pair{c_def, &pres_def}, std::pair{c_show, &pres_show},
                           std::pair{c_enum, &pres_enum}, std::pair{c_kb, &pres_kb}}) {
    add_spec(cmd, args->s);
    cmd->add_option("--i", args->i, "restriction index, the full Cayley presentation by default");
  }

  DeriveArgs derive;
  auto* c_derive = app.add_subcommand("derive", "build and check a derivation");
  add_spec(c_derive, derive.s);
  c_derive->add_option("--op", derive.op, "equalize, triple, split, word or rule");
  c_derive->add_option("--r", derive.r, "rank of the product")->required();
  c_derive->add_option("--input", derive.input, "JSON with the letters; sampled with --seed when absent");
  c_derive->add_option("--rule", derive.rule, "rule name for op rule");

  WitnessArgs wit;
  auto* c_wit = app.add_subcommand("counterexample", "witness pair for a non-defining restriction");
  c_wit->add_option("--family", wit.family)->required();
  c_wit->add_option("--n", wit.n)->required();
  c_wit->add_option("--m", wit.m)->required();
  c_wit->add_option("--r", wit.r)->required();
  c_wit->add_option("--bound", wit.bound, "steps explored from x_beta x_beta");
  c_wit->add_flag("--literal", wit.literal, "search words without relabeling classes");
  c_wit->add_flag("--no-search", wit.skip_search, "skip the bounded search");

  SpecArgs jc;
  auto* c_jc = app.add_subcommand("jclasses", "J-classes of the ideal");
  add_spec(c_jc, jc);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  const auto t0 = std::chrono::steady_clock::now();
  json summary;
  int code = kOk;
  std::string command = app.get_subcommands().front()->get_name();
  try {
    if (*c_table) code = cmd_depth_table(table, g, summary);
    else if (*c_def) code = cmd_defines(pres_def, g, summary);
    else if (*c_show) code = cmd_present(pres_show, g, summary);
    else if (*c_enum) code = cmd_enumerate(pres_enum, g, summary);
    else if (*c_kb) code = cmd_kb(pres_kb, g, summary);
    else if (*c_derive) code = cmd_derive(derive, g, summary);
    else if (*c_wit) code = cmd_counterexample(wit, g, summary);
    else if (*c_jc) code = cmd_jclasses(jc, g, summary);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    code = kUsage;
    summary = {{"error", e.what()}};
  } catch (const PreconditionError& e) {
    std::cerr << e.what() << '\n';
    code = kMath;
    summary = {{"error", e.what()}};
  } catch (const json::exception& e) {
    std::cerr << "usage error: malformed input: " << e.what() << '\n';
    code = kUsage;
    summary = {{"error", e.what()}};
  }

  if (!g.manifest.empty()) {
    std::vector<std::string> params(argv + 1, argv + argc);
    json budgets;
    try {
      budgets = budgets_json(budgets_for({Family::I, 1, 0}, g));
    } catch (const UsageError&) {
      budgets = "invalid";
    }
    json manifest{{"command", command},
                  {"parameters", params},
                  {"budgets", budgets},
                  {"tool_version", kVersion},
                  {"wall_seconds", std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()},
                  {"exit_code", code},
                  {"summary", summary}};
    std::ofstream(g.manifest) << manifest.dump(2) << '\n';
  }
  return code;
}

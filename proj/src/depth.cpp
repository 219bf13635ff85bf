#include "depthwork/depth.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <thread>

namespace depthwork {

namespace {

double since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

VerdictCell decide(const IdealSpec& spec, int i, const Budgets& budgets) {
  auto t0 = std::chrono::steady_clock::now();
  VerdictCell c;
  c.i = i;
  c.verdict = defines(restriction(spec, i), spec, budgets);
  c.seconds = since(t0);
  return c;
}

}  // namespace

int formula_depth(const IdealSpec& spec) {
  spec.validate();
  if (spec.n < 3) throw UsageError("the depth formula needs n >= 3");
  if (spec.m == spec.n) return 3;
  return spec.m - std::max(spec.eps(), 2 * spec.m - spec.n) + 1;
}

ComputedDepth computed_depth(const IdealSpec& spec, const Budgets& budgets, int jobs) {
  spec.validate();
  ComputedDepth out;
  const int lo = spec.eps();
  if (jobs > 1) {
    std::vector<VerdictCell> cells(spec.m - lo + 1);
    std::atomic<int> next{0};
    auto work = [&]() {
      for (int k; (k = next++) < static_cast<int>(cells.size());) cells[k] = decide(spec, spec.m - k, budgets);
    };
    std::vector<std::thread> pool;
    for (int t = 0; t < std::min<int>(jobs, static_cast<int>(cells.size())); ++t) pool.emplace_back(work);
    for (auto& t : pool) t.join();
    out.cells = cells;
  } else {
    for (int i = spec.m; i >= lo; --i) {
      out.cells.push_back(decide(spec, i, budgets));
      const auto kind = out.cells.back().verdict.kind;
      if (kind == VerdictKind::Inconclusive) break;
      if (kind != VerdictKind::Defines) continue;
      for (int j = i - 1; j >= lo; --j) {
        VerdictCell c;
        c.i = j;
        c.verdict.kind = VerdictKind::Defines;
        c.verdict.method = "implied";
        c.verdict.detail = "restriction " + std::to_string(i) + " already defines the ideal";
        out.cells.push_back(c);
      }
      break;
    }
  }
  for (const auto& c : out.cells) {
    if (c.verdict.kind == VerdictKind::Inconclusive) {
      out.inconclusive_at = c.i;
      break;
    }
    if (c.verdict.kind == VerdictKind::Defines) {
      out.largest_defining = c.i;
      out.depth = spec.m - c.i + 1;
      break;
    }
  }
  if (out.inconclusive_at) {
    out.largest_defining.reset();
    out.depth.reset();
  }
  return out;
}

int min_product_rank(const IdealSpec& spec) {
  spec.validate();
  const auto top = all_of_rank(spec.fam, spec.n, spec.m);
  int best = spec.m;
  for (const auto& a : top)
    for (const auto& b : top) best = std::min(best, (a * b).rank());
  return best;
}

int multiplication_depth(const IdealSpec& spec) {
  spec.validate();
  if (spec.m == spec.n) throw UsageError("multiplication depth needs a proper ideal (m < n)");
  return spec.m - min_product_rank(spec) + 1;
}

bool DepthReport::agree() const {
  if (!computed.depth || *computed.depth != formula) return false;
  return !multiplication || *multiplication == formula;
}

DepthReport reconcile(const IdealSpec& spec, const Budgets& budgets, int jobs) {
  auto t0 = std::chrono::steady_clock::now();
  DepthReport rep;
  rep.spec = spec;
  rep.formula = formula_depth(spec);
  rep.computed = computed_depth(spec, budgets, jobs);
  if (spec.m < spec.n)
    rep.multiplication = multiplication_depth(spec);
  else
    rep.multiplication_note = "unsupported at m = n";
  rep.seconds = since(t0);
  return rep;
}

}  // namespace depthwork

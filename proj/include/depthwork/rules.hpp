#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "depthwork/derivation.hpp"

namespace depthwork {

// Labeling of a pair alpha, beta in J_{r+1} with alpha*beta in J_r.
// Classes 0..r of alpha; a[k] is the image of A[k]. B[k] is the beta class
// holding a[k] for k < r and B[r] is the beta class no image of alpha meets.
// type 1: a[r] lies in B[r-1] next to a[r-1].
// type 2: a[r] lies outside dom beta.
struct PairShape {
  int n = 0;
  int r = 0;
  int type = 1;
  std::vector<std::vector<int>> A;
  std::vector<int> a;
  std::vector<std::vector<int>> B;
  std::vector<int> b;
  std::vector<int> undef_a;
  std::vector<int> undef_b;

  // index of the beta class holding x, r+1 when x is outside dom beta
  int beta_class_of(int x) const;
  int alpha_class_of(int x) const;
  std::vector<int> image_a() const;
  std::vector<int> image_b() const;
};

PairShape shape_of(const PartialMap& alpha, const PartialMap& beta);

enum class RuleKind {
  IChangeImAlpha,
  IChangeKerAlpha,
  IChangeImBeta,
  ILocalKerBeta,
  IGlobalKerBeta,
  TChangeImBeta,
  TChangeImAlpha,
  TMoveKerBeta,
  TSplitKerAlpha,
  TMoveKerAlpha,
  PT1ChangeImBeta,
  PT1ChangeImAlpha,
  PT1MoveKerBeta,
  PT1SplitKerAlpha,
  PT1MoveKerAlpha,
  PT2DropKerAlpha,
  PT2ChangeFreeImAlpha,
  PT2ChangeImAlpha,
  PT2MoveKerBeta,
  PT2ChangeImBeta,
  PTSwitch,
};

std::string_view rule_name(RuleKind k);
std::optional<RuleKind> parse_rule(std::string_view s);
Family rule_family(RuleKind k);
const std::vector<RuleKind>& all_rules();

enum class KerBetaReading { AsPrinted, ImageExcluded };

// Points are 0-based. Class indices refer to the PairShape labeling of the
// input pair; target == r+1 names the complement of dom beta.
struct RuleParams {
  int cls = -1;
  int target = -1;
  int point = -1;
  int point2 = -1;
  std::vector<int> part;
  KerBetaReading reading = KerBetaReading::ImageExcluded;
};

struct RuleResult {
  PartialMap alpha;
  PartialMap beta;
  Derivation derivation;
};

// Throws PreconditionError when a side condition fails.
RuleResult apply_rule(RuleKind kind, const IdealSpec& spec, const PartialMap& alpha,
                      const PartialMap& beta, const RuleParams& params);

// Every parameter choice the rule accepts on this pair, in a fixed order.
std::vector<RuleParams> admissible_params(RuleKind kind, const IdealSpec& spec,
                                          const PartialMap& alpha, const PartialMap& beta);

}  // namespace depthwork

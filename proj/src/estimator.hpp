#pragma once

// Partially identified effects of answer reviewing for a single item.
//
// Only the observed transition proportions are available, so the item's
// effects are reported as signs and bounds:
//   ATT sign     sgn(P(WR) - P(RW))
//   ATE (free)   [P(WR) - P(RW) - P(RR),  P(WW) + P(WR) - P(RW) - kappa]
//   ATE (tight)  [P(WR) - P(RW),          same upper]   if P(WW2) > P(RR1)
//   ATU (free)   [-1, 1]
// The tightened bound and the positive ATU sign both rest on the untestable
// P(WW2) > P(RR1) assumption, which callers must opt into explicitly.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "transition.hpp"

namespace reviewbounds {

enum class Sign { Negative, Indeterminate, Positive };
enum class AssumedSign { Positive, NotAsserted };

std::string_view to_string(Sign s);
std::string_view to_string(AssumedSign s);
Sign parse_sign(std::string_view s);
AssumedSign parse_assumed_sign(std::string_view s);

struct EffectBound {
  double lower = -1.0;
  double upper = 1.0;
  Sign sign_verdict = Sign::Indeterminate;
  bool assumption_used = false;

  bool contains(double value) const noexcept { return lower <= value && value <= upper; }
  double width() const noexcept { return upper - lower; }
};

// Strict: positive needs lower > 0, negative needs upper < 0.
EffectBound make_bound(double lower, double upper, bool assumption_used) noexcept;

struct GapInterval {
  double lower = 0.0;
  double upper = 0.0;
  double level = 0.95;
  int replicates = 0;
};

struct ItemEstimate {
  std::string item_id;
  ItemTally tally;
  ItemProportions proportions;
  Sign att_sign = Sign::Indeterminate;
  EffectBound ate_free;
  EffectBound ate_tight;
  EffectBound atu_free;
  AssumedSign atu_sign_under_assumption = AssumedSign::NotAsserted;
  std::optional<GapInterval> bootstrap_gap;
};

Sign attSign(const ItemProportions& p) noexcept;
EffectBound ateBoundsFree(const ItemProportions& p) noexcept;
EffectBound ateBoundsTightened(const ItemProportions& p) noexcept;

// Count-based overloads: each endpoint is one integer numerator divided once
// by the item total, which keeps endpoint identities exact and makes
// comparisons against count-based ground truth exact too.
Sign attSign(const ItemTally& t) noexcept;
EffectBound ateBoundsFree(const ItemTally& t);
EffectBound ateBoundsTightened(const ItemTally& t);

EffectBound atuBoundsFree() noexcept;
AssumedSign atuSignUnderAssumption(bool assume) noexcept;

struct BootstrapOptions {
  int replicates = 1000;
  double level = 0.95;
  std::uint64_t seed = 0;
};

// Throws Error(Usage) for replicates < 100 or a level outside (0, 1).
void checkBootstrapOptions(const BootstrapOptions& opts);

// Percentile interval for P(WR) - P(RW) from resampling the item's
// analyzable examinees with replacement. Resampling examinees is a
// multinomial draw over their transition classes, so only the tally is
// needed. Throws as checkBootstrapOptions, and Error(InsufficientData) for
// fewer than 10 analyzable records.
GapInterval bootstrapGapInterval(const ItemTally& tally, const BootstrapOptions& opts);
GapInterval bootstrapGapInterval(std::span<const ResponseRecord> records, const AnswerKey& key,
                                 const BootstrapOptions& opts);

// Throws Error(EmptyItem) on a zero total.
ItemEstimate analyzeItem(const ItemTally& tally, bool assume_ww2_gt_rr1 = false);

}  // namespace reviewbounds

#include "estimator.hpp"

#include <algorithm>
#include <boost/random/binomial_distribution.hpp>
#include <boost/random/mersenne_twister.hpp>
#include <cmath>
#include <vector>

#include "error.hpp"

namespace reviewbounds {

std::string_view to_string(Sign s) {
  switch (s) {
    case Sign::Negative: return "negative";
    case Sign::Indeterminate: return "indeterminate";
    case Sign::Positive: return "positive";
  }
  return "indeterminate";
}

std::string_view to_string(AssumedSign s) {
  return s == AssumedSign::Positive ? "positive" : "not_asserted";
}

Sign parse_sign(std::string_view s) {
  if (s == "positive") return Sign::Positive;
  if (s == "negative") return Sign::Negative;
  if (s == "indeterminate") return Sign::Indeterminate;
  throw Error(ErrorKind::MalformedInput, "unknown sign verdict '" + std::string(s) + "'");
}

AssumedSign parse_assumed_sign(std::string_view s) {
  if (s == "positive") return AssumedSign::Positive;
  if (s == "not_asserted") return AssumedSign::NotAsserted;
  throw Error(ErrorKind::MalformedInput, "unknown ATU sign '" + std::string(s) + "'");
}

EffectBound make_bound(double lower, double upper, bool assumption_used) noexcept {
  Sign verdict = Sign::Indeterminate;
  if (lower > 0.0) {
    verdict = Sign::Positive;
  } else if (upper < 0.0) {
    verdict = Sign::Negative;
  }
  return EffectBound{lower, upper, verdict, assumption_used};
}

namespace {

Sign sign_of_difference(double a, double b) noexcept {
  if (a > b) return Sign::Positive;
  if (a < b) return Sign::Negative;
  return Sign::Indeterminate;
}

std::int64_t as_signed(std::uint64_t v) { return static_cast<std::int64_t>(v); }

double ratio(std::int64_t numerator, std::uint64_t total) {
  return static_cast<double>(numerator) / static_cast<double>(total);
}

void require_total(const ItemTally& t) {
  if (t.total() == 0) {
    throw Error(ErrorKind::EmptyItem, "item '" + t.item_id + "' has no analyzable records");
  }
}

}  // namespace

Sign attSign(const ItemProportions& p) noexcept { return sign_of_difference(p.p_wr, p.p_rw); }

EffectBound ateBoundsFree(const ItemProportions& p) noexcept {
  return make_bound(p.p_wr - p.p_rw - p.p_rr, p.p_ww + p.p_wr - p.p_rw - p.kappa, false);
}

EffectBound ateBoundsTightened(const ItemProportions& p) noexcept {
  return make_bound(p.p_wr - p.p_rw, p.p_ww + p.p_wr - p.p_rw - p.kappa, true);
}

Sign attSign(const ItemTally& t) noexcept { return sign_of_difference(t.n_wr, t.n_rw); }

EffectBound ateBoundsFree(const ItemTally& t) {
  require_total(t);
  const auto n = t.total();
  return make_bound(ratio(as_signed(t.n_wr) - as_signed(t.n_rw) - as_signed(t.n_rr), n),
                    ratio(as_signed(t.n_ww) + as_signed(t.n_wr) - as_signed(t.n_rw) -
                              as_signed(t.n_ww_changed),
                          n),
                    false);
}

EffectBound ateBoundsTightened(const ItemTally& t) {
  require_total(t);
  const auto n = t.total();
  return make_bound(ratio(as_signed(t.n_wr) - as_signed(t.n_rw), n),
                    ratio(as_signed(t.n_ww) + as_signed(t.n_wr) - as_signed(t.n_rw) -
                              as_signed(t.n_ww_changed),
                          n),
                    true);
}

EffectBound atuBoundsFree() noexcept { return make_bound(-1.0, 1.0, false); }

AssumedSign atuSignUnderAssumption(bool assume) noexcept {
  return assume ? AssumedSign::Positive : AssumedSign::NotAsserted;
}

namespace {

// Linear interpolation between order statistics (Hyndman & Fan type 7).
double quantile_sorted(const std::vector<double>& sorted, double q) {
  const double h = (static_cast<double>(sorted.size()) - 1.0) * q;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

}  // namespace

void checkBootstrapOptions(const BootstrapOptions& opts) {
  if (opts.replicates < 100) {
    throw Error(ErrorKind::Usage, "bootstrap needs at least 100 replicates, got " +
                                      std::to_string(opts.replicates));
  }
  if (!(opts.level > 0.0 && opts.level < 1.0)) {
    throw Error(ErrorKind::Usage, "bootstrap level must lie strictly between 0 and 1");
  }
}

GapInterval bootstrapGapInterval(const ItemTally& tally, const BootstrapOptions& opts) {
  checkBootstrapOptions(opts);
  const std::uint64_t n = tally.total();
  if (n < 10) {
    throw Error(ErrorKind::InsufficientData,
                "item '" + tally.item_id + "' has " + std::to_string(n) +
                    " analyzable records; bootstrap needs at least 10");
  }

  // WR ~ Bin(n, n_wr/n); RW | WR ~ Bin(n - WR, n_rw/(n - n_wr)).
  const double p_wr = static_cast<double>(tally.n_wr) / static_cast<double>(n);
  const std::uint64_t rest = n - tally.n_wr;
  const double p_rw_given_rest =
      rest == 0 ? 0.0 : static_cast<double>(tally.n_rw) / static_cast<double>(rest);

  boost::random::mt19937_64 engine(opts.seed);
  std::vector<double> gaps;
  gaps.reserve(static_cast<std::size_t>(opts.replicates));
  for (int b = 0; b < opts.replicates; ++b) {
    const std::int64_t k_wr =
        boost::random::binomial_distribution<std::int64_t>(static_cast<std::int64_t>(n), p_wr)(engine);
    const std::int64_t k_rw = boost::random::binomial_distribution<std::int64_t>(
        static_cast<std::int64_t>(n) - k_wr, p_rw_given_rest)(engine);
    gaps.push_back(static_cast<double>(k_wr - k_rw) / static_cast<double>(n));
  }
  std::sort(gaps.begin(), gaps.end());
  const double alpha = 1.0 - opts.level;
  return GapInterval{quantile_sorted(gaps, alpha / 2.0), quantile_sorted(gaps, 1.0 - alpha / 2.0),
                     opts.level, opts.replicates};
}

GapInterval bootstrapGapInterval(std::span<const ResponseRecord> records, const AnswerKey& key,
                                 const BootstrapOptions& opts) {
  TallyAccumulator acc(key);
  for (const auto& r : records) acc.add(r);
  return bootstrapGapInterval(acc.tally(), opts);
}

ItemEstimate analyzeItem(const ItemTally& tally, bool assume_ww2_gt_rr1) {
  ItemEstimate e;
  e.item_id = tally.item_id;
  e.tally = tally;
  e.proportions = proportions(tally);
  e.att_sign = attSign(tally);
  e.ate_free = ateBoundsFree(tally);
  e.ate_tight = ateBoundsTightened(tally);
  e.atu_free = atuBoundsFree();
  e.atu_sign_under_assumption = atuSignUnderAssumption(assume_ww2_gt_rr1);
  return e;
}

}  // namespace reviewbounds

#include "simulator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "error.hpp"
#include "random.hpp"

namespace reviewbounds {

std::string_view to_string(LatentGroup g) {
  static constexpr std::array<std::string_view, kNumGroups> names = {
      "WW1", "WW2", "WW3", "WR", "RW", "RR1", "RR2", "RR3"};
  return names[index_of(g)];
}

void SimConfig::validate() const {
  double sum = 0.0;
  for (double p : group_probs) {
    if (!(p >= 0.0) || !std::isfinite(p)) {
      throw Error(ErrorKind::Configuration, "group_probs must be finite and nonnegative");
    }
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-12) {
    throw Error(ErrorKind::Configuration,
                "group_probs must sum to 1 (got " + std::to_string(sum) + ")");
  }
  if (!(ww3_change_prob >= 0.0 && ww3_change_prob <= 1.0)) {
    throw Error(ErrorKind::Configuration, "ww3_change_prob must lie in [0, 1]");
  }
  if (num_alternatives < 2) {
    throw Error(ErrorKind::Configuration, "num_alternatives must be at least 2");
  }
  if (ww3_change_prob > 0.0 && num_alternatives < 3) {
    throw Error(ErrorKind::Configuration,
                "ww3_change_prob > 0 needs at least 3 alternatives (a second wrong choice)");
  }
  if (population < 1) throw Error(ErrorKind::Configuration, "population must be at least 1");
}

std::array<std::uint64_t, kNumGroups> exact_group_counts(const SimConfig& config) {
  const auto n = static_cast<double>(config.population);
  std::array<std::uint64_t, kNumGroups> counts{};
  std::array<double, kNumGroups> remainder{};
  std::uint64_t assigned = 0;
  for (std::size_t g = 0; g < kNumGroups; ++g) {
    const double share = config.group_probs[g] * n;
    counts[g] = static_cast<std::uint64_t>(std::floor(share));
    remainder[g] = share - std::floor(share);
    assigned += counts[g];
  }
  // Over-assignment can only come from rounding noise in the probabilities.
  while (assigned > config.population) {
    auto g = static_cast<std::size_t>(
        std::distance(counts.begin(), std::max_element(counts.begin(), counts.end())));
    --counts[g];
    --assigned;
  }
  std::array<std::size_t, kNumGroups> order{};
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return remainder[a] > remainder[b]; });
  for (std::size_t i = 0; assigned < config.population; i = (i + 1) % kNumGroups) {
    ++counts[order[i]];
    ++assigned;
  }
  return counts;
}

std::string examinee_label(std::uint64_t index, std::uint64_t population) {
  const std::size_t width = std::to_string(population).size();
  std::string digits = std::to_string(index + 1);
  return "e" + std::string(width - std::min(width, digits.size()), '0') + digits;
}

namespace {

// Stream ids above this are reserved for whole-item draws.
constexpr std::uint64_t kShuffleStream = ~std::uint64_t{0};

LatentGroup draw_group(const std::array<double, kNumGroups>& cumulative, double u) {
  for (std::size_t g = 0; g + 1 < kNumGroups; ++g) {
    if (u < cumulative[g]) return kAllGroups[g];
  }
  // Land on the last group with positive mass so zero-probability groups
  // can never appear through rounding.
  for (std::size_t g = kNumGroups; g-- > 0;) {
    if (g == 0 || cumulative[g] > cumulative[g - 1]) return kAllGroups[g];
  }
  return kAllGroups.back();
}

}  // namespace

std::vector<LatentRecord> generate(const SimConfig& config, const AnswerKey& key) {
  config.validate();
  if (key.num_alternatives() != config.num_alternatives) {
    throw Error(ErrorKind::Configuration,
                "item '" + key.item_id() + "': key has " + std::to_string(key.num_alternatives()) +
                    " alternatives but the config specifies " +
                    std::to_string(config.num_alternatives));
  }
  if (key.alphabet() == Alphabet::Open) {
    throw Error(ErrorKind::Configuration,
                "item '" + key.item_id() + "': simulation needs a letter or numeric key");
  }
  const auto wrong = key.wrong_alternatives();
  const auto& correct = key.correct_choice();
  const std::uint64_t n = config.population;

  std::vector<LatentGroup> groups(n);
  if (config.allocation == Allocation::Exact) {
    const auto counts = exact_group_counts(config);
    auto it = groups.begin();
    for (std::size_t g = 0; g < kNumGroups; ++g) {
      it = std::fill_n(it, counts[g], kAllGroups[g]);
    }
    Stream shuffle(config.seed, kShuffleStream);
    for (std::uint64_t i = n; i > 1; --i) {
      std::swap(groups[i - 1], groups[shuffle.next_below(i)]);
    }
  } else {
    std::array<double, kNumGroups> cumulative{};
    std::partial_sum(config.group_probs.begin(), config.group_probs.end(), cumulative.begin());
    for (std::uint64_t i = 0; i < n; ++i) {
      Stream s(config.seed, i);
      groups[i] = draw_group(cumulative, s.next_unit());
    }
  }

  std::vector<LatentRecord> out;
  out.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    // Draw 0 of stream i is the iid group draw; choice draws follow it.
    Stream s(config.seed, i);
    s.next_u64();
    LatentRecord r;
    r.examinee_id = examinee_label(i, n);
    r.item_id = key.item_id();
    r.group = groups[i];
    const auto t = traits(r.group);
    const std::string& first = t.first_correct ? correct : wrong[s.next_below(wrong.size())];
    r.first_choice = first;
    switch (r.group) {
      case LatentGroup::WR:
        r.final_choice = correct;
        break;
      case LatentGroup::RW:
        r.final_choice = wrong[s.next_below(wrong.size())];
        break;
      case LatentGroup::WW3:
        r.ww3_changed = s.next_unit() < config.ww3_change_prob;
        if (r.ww3_changed) {
          // Uniform over wrong alternatives other than the first choice.
          std::size_t pick = s.next_below(wrong.size() - 1);
          if (wrong[pick] == first) pick = wrong.size() - 1;
          r.final_choice = wrong[pick];
        } else {
          r.final_choice = first;
        }
        break;
      default:
        r.final_choice = first;
        break;
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::uint64_t GroundTruth::treated() const noexcept {
  std::uint64_t t = 0;
  for (auto g : kAllGroups) {
    if (traits(g).reviewed) t += count(g);
  }
  return t;
}

GroundTruth groundTruth(std::span<const LatentRecord> records) {
  if (records.empty()) throw Error(ErrorKind::EmptyItem, "ground truth needs at least one record");
  GroundTruth gt;
  gt.n = records.size();
  for (const auto& r : records) {
    ++gt.latent_counts[index_of(r.group)];
    if (r.group == LatentGroup::WW3 && r.ww3_changed) ++gt.ww3_changed;
  }
  const auto n = static_cast<double>(gt.n);
  for (std::size_t g = 0; g < kNumGroups; ++g) {
    gt.latent_freqs[g] = static_cast<double>(gt.latent_counts[g]) / n;
  }
  auto c = [&](LatentGroup g) { return static_cast<std::int64_t>(gt.count(g)); };
  const std::uint64_t treated = gt.treated();
  const std::uint64_t untreated = gt.n - treated;

  gt.ate = static_cast<double>(c(LatentGroup::WW2) + c(LatentGroup::WR) - c(LatentGroup::RW) -
                               c(LatentGroup::RR1)) /
           n;
  if (treated > 0) {
    gt.att = static_cast<double>(c(LatentGroup::WR) - c(LatentGroup::RW)) /
             static_cast<double>(treated);
  }
  if (untreated > 0) {
    gt.atu = static_cast<double>(c(LatentGroup::WW2) - c(LatentGroup::RR1)) /
             static_cast<double>(untreated);
  }
  gt.p_treated = static_cast<double>(treated) / n;
  return gt;
}

std::vector<ResponseRecord> projectObserved(std::span<const LatentRecord> records) {
  std::vector<ResponseRecord> out;
  out.reserve(records.size());
  for (const auto& r : records) {
    out.push_back(ResponseRecord{r.examinee_id, r.item_id, r.first_choice, r.final_choice});
  }
  return out;
}

}  // namespace reviewbounds

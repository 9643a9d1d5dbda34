#pragma once

// Synthetic exam populations with fully known potential outcomes.
//
// Every examinee-item record belongs to one of eight latent groups. The group
// fixes first-answer correctness F, reviewing status T, and both potential
// outcomes, so population ATE/ATT/ATU are known exactly and can be compared
// against the bounds computed from the projected answer sheet.

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "transition.hpp"

namespace reviewbounds {

enum class LatentGroup : std::uint8_t { WW1, WW2, WW3, WR, RW, RR1, RR2, RR3 };

inline constexpr std::size_t kNumGroups = 8;
inline constexpr std::array<LatentGroup, kNumGroups> kAllGroups = {
    LatentGroup::WW1, LatentGroup::WW2, LatentGroup::WW3, LatentGroup::WR,
    LatentGroup::RW,  LatentGroup::RR1, LatentGroup::RR2, LatentGroup::RR3};

struct GroupTraits {
  int first_correct;  // F, which is also Y(0)
  int reviewed;       // T
  int y1;             // Y(1)
  int y0;             // Y(0)
  int tau;            // Y(1) - Y(0)
};

constexpr GroupTraits traits(LatentGroup g) noexcept {
  switch (g) {
    case LatentGroup::WW1: return {0, 0, 0, 0, 0};
    case LatentGroup::WW2: return {0, 0, 1, 0, +1};
    case LatentGroup::WW3: return {0, 1, 0, 0, 0};
    case LatentGroup::WR: return {0, 1, 1, 0, +1};
    case LatentGroup::RW: return {1, 1, 0, 1, -1};
    case LatentGroup::RR1: return {1, 0, 0, 1, -1};
    case LatentGroup::RR2: return {1, 0, 1, 1, 0};
    case LatentGroup::RR3: return {1, 1, 1, 1, 0};
  }
  return {0, 0, 0, 0, 0};
}

// Observed final correctness under consistency: Y = Y(1) T + Y(0) (1 - T).
constexpr int observed_final_correct(LatentGroup g) noexcept {
  const auto t = traits(g);
  return t.y1 * t.reviewed + t.y0 * (1 - t.reviewed);
}

std::string_view to_string(LatentGroup g);
constexpr std::size_t index_of(LatentGroup g) noexcept { return static_cast<std::size_t>(g); }

struct LatentRecord {
  std::string examinee_id;
  std::string item_id;
  LatentGroup group = LatentGroup::WW1;
  std::string first_choice;
  std::string final_choice;
  bool ww3_changed = false;
};

enum class Allocation {
  Iid,    // each record's group drawn independently from group_probs
  Exact,  // group counts fixed by largest-remainder rounding of N * group_probs, order shuffled
};

struct SimConfig {
  // Ordered WW1, WW2, WW3, WR, RW, RR1, RR2, RR3.
  std::array<double, kNumGroups> group_probs{};
  double ww3_change_prob = 0.0;
  int num_alternatives = 4;
  std::uint64_t population = 1000;
  std::uint64_t seed = 0;
  Allocation allocation = Allocation::Iid;

  // Throws Error(Configuration) on a violated invariant.
  void validate() const;
};

// Group counts used under Allocation::Exact; sums to population.
std::array<std::uint64_t, kNumGroups> exact_group_counts(const SimConfig& config);

// Exactly `population` records for one item. Deterministic in config.seed.
// Throws Error(Configuration) for an invalid config, a key whose alternative
// count differs from the config, or a key with an open alphabet.
std::vector<LatentRecord> generate(const SimConfig& config, const AnswerKey& key);

std::string examinee_label(std::uint64_t index, std::uint64_t population);

struct GroundTruth {
  std::uint64_t n = 0;
  std::array<std::uint64_t, kNumGroups> latent_counts{};
  std::array<double, kNumGroups> latent_freqs{};
  std::uint64_t ww3_changed = 0;
  double ate = 0.0;
  std::optional<double> att;  // absent when nobody reviewed
  std::optional<double> atu;  // absent when everybody reviewed
  double p_treated = 0.0;

  std::uint64_t count(LatentGroup g) const noexcept { return latent_counts[index_of(g)]; }
  std::uint64_t treated() const noexcept;
};

// Effects from empirical latent frequencies. Throws Error(EmptyItem) when
// records is empty.
GroundTruth groundTruth(std::span<const LatentRecord> records);

std::vector<ResponseRecord> projectObserved(std::span<const LatentRecord> records);

}  // namespace reviewbounds

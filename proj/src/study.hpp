#pragma once

// Simulation config files and the multi-item study writer.
//
// A config is a JSON object. Single-item form:
//
//   { "population": 1000, "seed": 7, "num_alternatives": 4,
//     "ww3_change_prob": 0.3, "allocation": "iid",
//     "item_id": "item1", "correct_choice": "A",
//     "group_probs": [WW1, WW2, WW3, WR, RW, RR1, RR2, RR3] }
//
// "group_counts" (eight integers) may replace "group_probs"; it implies
// exact allocation with population = sum of counts. Multi-item form puts
// per-item objects under "items"; each inherits the top-level fields it does
// not set, and its seed defaults to one derived from the top-level seed and
// the item's position. Omitting group_probs and group_counts entirely is only
// meaningful to `validate`, which then draws them from a flat Dirichlet.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include <json.hpp>

#include "simulator.hpp"

namespace reviewbounds {

struct StudyItem {
  AnswerKey key;
  SimConfig config;
  bool has_group_probs = true;
  // ww3_change_prob was given explicitly (validate draws it otherwise).
  bool has_ww3_change_prob = true;
};

struct StudyConfig {
  std::vector<StudyItem> items;
};

// Throws Error(Configuration) for invalid content. Items without group
// probabilities are accepted here; simulateStudy rejects them.
StudyConfig parseStudyConfig(const nlohmann::json& doc);
StudyConfig loadStudyConfig(const std::filesystem::path& path);

struct StudyOutput {
  std::vector<AnswerKey> keys;
  std::vector<GroundTruth> truths;  // parallel to keys
};

// Generates every item and writes, under out_dir:
//   responses.csv     observed answer sheets, item by item
//   keys.csv          answer keys
//   ground_truth.json exact latent effects per item
// Items are generated and written one at a time.
StudyOutput simulateStudy(const StudyConfig& study, const std::filesystem::path& out_dir);

nlohmann::ordered_json ground_truth_json(const AnswerKey& key, const GroundTruth& truth);

}  // namespace reviewbounds

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "dataset.hpp"
#include "estimator.hpp"

namespace reviewbounds {

struct VerdictCounts {
  std::uint64_t positive = 0;
  std::uint64_t negative = 0;
  std::uint64_t indeterminate = 0;

  void add(Sign s) noexcept;
  std::uint64_t total() const noexcept { return positive + negative + indeterminate; }
  bool operator==(const VerdictCounts&) const = default;
};

// An item that could not be analyzed (no non-blank responses).
struct FlaggedItem {
  std::string item_id;
  std::uint64_t n_dropped = 0;
  std::string reason;
};

struct ReportSummary {
  std::uint64_t n_items = 0;
  VerdictCounts att;
  VerdictCounts ate_free;
  VerdictCounts ate_tight;
  // Free-bound verdicts, or tightened ones when the assumption is asserted.
  VerdictCounts ate;
  std::uint64_t flagged = 0;
};

struct Report {
  bool assume_ww2_gt_rr1 = false;
  std::vector<ItemEstimate> per_item;
  std::vector<FlaggedItem> flagged;
  ReportSummary summary;
  std::uint64_t n_examinees = 0;
  std::uint64_t n_rows = 0;
  std::uint64_t n_analyzed = 0;
  std::uint64_t n_dropped = 0;
  std::optional<BootstrapOptions> bootstrap;
};

struct AnalyzeOptions {
  bool assume_ww2_gt_rr1 = false;
  std::optional<BootstrapOptions> bootstrap;
};

// One estimate per analyzable item; empty items are flagged, not fatal.
// Bootstrap intervals use a per-item seed derived from the configured seed
// and are omitted for items with fewer than 10 analyzable records.
Report analyze(const Dataset& dataset, const AnalyzeOptions& options = {});

nlohmann::ordered_json to_json(const Report& report);
Report report_from_json(const nlohmann::json& doc);

void writeReportJson(const Report& report, const std::filesystem::path& path);
Report readReportJson(const std::filesystem::path& path);

// Aligned plain-text table followed by the verdict summary.
std::string formatReportTable(const Report& report);

}  // namespace reviewbounds

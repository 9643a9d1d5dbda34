#pragma once

#include <filesystem>
#include <vector>

#include "report.hpp"

namespace reviewbounds {

// Writes into out_dir (created if missing):
//   figure1.csv  item_id,p_wr,p_rw
//   figure2.csv  item_id,ate_lower_free,ate_upper_free
//   figure1.svg  P(WR) solid and P(RW) dashed, items along the x axis
//   figure2.svg  assumption-free ATE interval per item with a zero line
// CSV values are the shortest round-trip text of the report doubles.
// Throws Error(Usage) for an empty report, Error(Io) when a file cannot be
// written. Returns the paths written.
std::vector<std::filesystem::path> emitFigures(const Report& report,
                                               const std::filesystem::path& out_dir);

}  // namespace reviewbounds

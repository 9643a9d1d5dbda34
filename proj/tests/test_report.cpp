#include <catch_amalgamated.hpp>

#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "error.hpp"
#include "figures.hpp"
#include "report.hpp"

using namespace reviewbounds;
namespace fs = std::filesystem;
using Catch::Matchers::ContainsSubstring;

namespace {

fs::path scratch(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("reviewbounds_report_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Dataset dataset_of(std::vector<ItemTally> tallies) {
  Dataset ds;
  for (const auto& t : tallies) {
    ds.keys.emplace_back(t.item_id, "A", 4);
    ds.n_rows += t.total() + t.n_dropped;
  }
  ds.tallies = std::move(tallies);
  ds.n_items = ds.keys.size();
  ds.n_examinees = 100;
  return ds;
}

// 52 items with more WR than RW, plus item 38 with more RW than WR.
Dataset exam53() {
  std::vector<ItemTally> tallies;
  for (int j = 1; j <= 53; ++j) {
    if (j == 38) {
      tallies.push_back(ItemTally{"38", 20000, 595, 1238, 71902 - 20000 - 595 - 1238, 150, 0});
    } else {
      tallies.push_back(ItemTally{std::to_string(j), 15000, 4000 + static_cast<std::uint64_t>(j),
                                  1500, 71902 - 15000 - 4000 - static_cast<std::uint64_t>(j) - 1500,
                                  300, 0});
    }
  }
  return dataset_of(std::move(tallies));
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(slurp(p));
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> fields;
    std::stringstream ls(line);
    std::string f;
    while (std::getline(ls, f, ',')) fields.push_back(f);
    rows.push_back(fields);
  }
  return rows;
}

double parse_double(const std::string& s) {
  double v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  REQUIRE(ec == std::errc{});
  REQUIRE(ptr == s.data() + s.size());
  return v;
}

}  // namespace

TEST_CASE("53-item exam summary", "[report]") {
  const auto r = analyze(exam53());
  CHECK(r.summary.n_items == 53);
  CHECK(r.summary.att.positive == 52);
  CHECK(r.summary.att.negative == 1);
  CHECK(r.summary.att.indeterminate == 0);
  CHECK(r.summary.ate_free.indeterminate == 53);
  CHECK(r.summary.ate == r.summary.ate_free);
  CHECK(r.flagged.empty());

  const auto assumed = analyze(exam53(), {true, std::nullopt});
  CHECK(assumed.summary.ate == assumed.summary.ate_tight);
  CHECK(assumed.summary.ate_tight.positive == 52);
  CHECK(assumed.summary.ate_tight.indeterminate == 1);
  for (const auto& e : assumed.per_item) {
    CHECK(e.atu_sign_under_assumption == AssumedSign::Positive);
  }

  const auto table = formatReportTable(r);
  CHECK_THAT(table, ContainsSubstring("ATT sign: 52 positive / 1 negative / 0 indeterminate"));
}

TEST_CASE("all-right item and empty items", "[report]") {
  const auto r = analyze(dataset_of({ItemTally{"rr", 0, 0, 0, 12, 0, 0},
                                     ItemTally{"blank", 0, 0, 0, 0, 0, 5}}));
  REQUIRE(r.per_item.size() == 1);
  CHECK(r.per_item[0].att_sign == Sign::Indeterminate);
  CHECK(r.per_item[0].ate_free.lower == -1.0);
  CHECK(r.per_item[0].ate_free.upper == 0.0);
  REQUIRE(r.flagged.size() == 1);
  CHECK(r.flagged[0].item_id == "blank");
  CHECK(r.flagged[0].n_dropped == 5);
  CHECK(r.summary.n_items == 2);
  CHECK(r.summary.flagged == 1);
  CHECK(r.n_analyzed + r.n_dropped == r.n_rows);
  CHECK_THAT(formatReportTable(r), ContainsSubstring("blank"));
}

TEST_CASE("bootstrap inside analyze", "[report]") {
  const auto ds = dataset_of({ItemTally{"big", 40, 30, 10, 20, 0, 0}, ItemTally{"tiny", 1, 2, 1, 1, 0, 0}});
  const auto r = analyze(ds, {false, BootstrapOptions{200, 0.9, 3}});
  REQUIRE(r.per_item[0].bootstrap_gap);
  CHECK(r.per_item[0].bootstrap_gap->lower <= 0.2);
  CHECK(r.per_item[0].bootstrap_gap->upper >= 0.2);
  CHECK_FALSE(r.per_item[1].bootstrap_gap);
  const auto again = analyze(ds, {false, BootstrapOptions{200, 0.9, 3}});
  CHECK(again.per_item[0].bootstrap_gap->lower == r.per_item[0].bootstrap_gap->lower);
  CHECK_THROWS_AS(analyze(ds, {false, BootstrapOptions{10, 0.9, 3}}), Error);
}

TEST_CASE("report JSON round trip", "[report]") {
  auto ds = exam53();
  ds.tallies.push_back(ItemTally{"empty", 0, 0, 0, 0, 0, 2});
  ds.keys.emplace_back("empty", "A", 4);
  const auto r = analyze(ds, {true, BootstrapOptions{100, 0.95, 8}});
  const auto dir = scratch("json");
  writeReportJson(r, dir / "report.json");
  const auto back = readReportJson(dir / "report.json");
  CHECK(to_json(back).dump() == to_json(r).dump());
  CHECK(formatReportTable(back) == formatReportTable(r));
  REQUIRE(back.per_item.size() == r.per_item.size());
  for (std::size_t i = 0; i < r.per_item.size(); ++i) {
    CHECK(back.per_item[i].ate_free.lower == r.per_item[i].ate_free.lower);
    CHECK(back.per_item[i].proportions.p_wr == r.per_item[i].proportions.p_wr);
  }
  CHECK_THROWS_AS(report_from_json(nlohmann::json::parse(R"({"items": 3})")), Error);
  CHECK_THROWS_AS(readReportJson(dir / "missing.json"), Error);
}

TEST_CASE("figure CSVs are exact", "[report][figures]") {
  const auto r = analyze(exam53());
  const auto dir = scratch("figures");
  const auto written = emitFigures(r, dir);
  CHECK(written.size() == 4);

  const auto f1 = read_csv(dir / "figure1.csv");
  REQUIRE(f1.size() == 54);
  CHECK(f1[0] == std::vector<std::string>{"item_id", "p_wr", "p_rw"});
  int rw_above = 0;
  for (std::size_t i = 1; i < f1.size(); ++i) {
    const auto& e = r.per_item[i - 1];
    REQUIRE(f1[i][0] == e.item_id);
    REQUIRE(parse_double(f1[i][1]) == e.proportions.p_wr);
    REQUIRE(parse_double(f1[i][2]) == e.proportions.p_rw);
    rw_above += parse_double(f1[i][2]) > parse_double(f1[i][1]);
  }
  CHECK(rw_above == 1);

  const auto f2 = read_csv(dir / "figure2.csv");
  REQUIRE(f2.size() == 54);
  CHECK(f2[0] == std::vector<std::string>{"item_id", "ate_lower_free", "ate_upper_free"});
  for (std::size_t i = 1; i < f2.size(); ++i) {
    const auto& e = r.per_item[i - 1];
    REQUIRE(parse_double(f2[i][1]) == e.ate_free.lower);
    REQUIRE(parse_double(f2[i][2]) == e.ate_free.upper);
    REQUIRE(parse_double(f2[i][1]) < 0.0);
    REQUIRE(parse_double(f2[i][2]) > 0.0);
  }

  const auto svg = slurp(dir / "figure1.svg");
  CHECK_THAT(svg, ContainsSubstring("stroke-dasharray"));
  CHECK_THAT(svg, ContainsSubstring("</svg>"));
}

TEST_CASE("single-item figures are well formed", "[report][figures]") {
  const auto r = analyze(dataset_of({ItemTally{"only<&>", 3, 3, 1, 3, 1, 0}}));
  const auto dir = scratch("single");
  emitFigures(r, dir);
  for (const char* name : {"figure1.svg", "figure2.svg"}) {
    const auto svg = slurp(dir / name);
    CHECK(svg.starts_with("<?xml"));
    CHECK(svg.ends_with("</svg>\n"));
    CHECK(svg.find("nan") == std::string::npos);
    CHECK(svg.find("inf") == std::string::npos);
    CHECK_THAT(svg, ContainsSubstring("only&lt;&amp;&gt;"));
    CHECK(svg.find("only<") == std::string::npos);
  }
  Report empty;
  CHECK_THROWS_AS(emitFigures(empty, dir), Error);
}

#include <catch_amalgamated.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>

#include "reviewbounds/reviewbounds.h"

namespace fs = std::filesystem;
using Catch::Matchers::ContainsSubstring;

namespace {

fs::path scratch(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("reviewbounds_capi_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

void write(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

}  // namespace

TEST_CASE("classification through the C API", "[capi]") {
  rb_transition kind;
  int changed = -1;
  REQUIRE(rb_classify("A", "C", "B", 4, &kind, &changed) == RB_OK);
  CHECK(kind == RB_TRANSITION_WW);
  CHECK(changed == 1);
  REQUIRE(rb_classify("A", "B", "B", 4, &kind, &changed) == RB_OK);
  CHECK(kind == RB_TRANSITION_WR);
  REQUIRE(rb_classify("", "B", "B", 4, &kind, &changed) == RB_OK);
  CHECK(kind == RB_TRANSITION_EXCLUDED);
  CHECK(rb_classify("A", "Z", "B", 4, &kind, &changed) == RB_ERR_MALFORMED_INPUT);
  CHECK_THAT(rb_last_error(), ContainsSubstring("'Z'"));
  CHECK(rb_classify(nullptr, "Z", "B", 4, &kind, &changed) == RB_ERR_INVALID_ARGUMENT);
}

TEST_CASE("estimands through the C API", "[capi]") {
  const rb_counts counts{3, 3, 1, 3, 1, 0};
  rb_proportions p;
  REQUIRE(rb_proportions_from_counts(&counts, &p) == RB_OK);
  CHECK(p.p_wr == 0.3);
  CHECK(rb_att_sign(&p) == RB_SIGN_POSITIVE);

  rb_bound b;
  REQUIRE(rb_ate_bounds_free(&p, &b) == RB_OK);
  CHECK(std::abs(b.lower + 0.1) < 1e-12);
  CHECK(std::abs(b.upper - 0.4) < 1e-12);
  CHECK(b.sign_verdict == RB_SIGN_INDETERMINATE);
  REQUIRE(rb_ate_bounds_tightened(&p, &b) == RB_OK);
  CHECK(b.sign_verdict == RB_SIGN_POSITIVE);
  CHECK(b.assumption_used == 1);

  const rb_bound atu = rb_atu_bounds_free();
  CHECK(atu.lower == -1.0);
  CHECK(atu.upper == 1.0);
  CHECK(rb_atu_positive_under_assumption(1) == 1);
  CHECK(rb_atu_positive_under_assumption(0) == 0);

  const rb_counts empty{0, 0, 0, 0, 0, 3};
  CHECK(rb_proportions_from_counts(&empty, &p) == RB_ERR_EMPTY_ITEM);

  rb_gap_interval g;
  REQUIRE(rb_bootstrap_gap(&counts, 100, 0.95, 1, &g) == RB_OK);
  CHECK(g.present == 1);
  CHECK(g.lower <= g.upper);
  const rb_counts few{1, 1, 1, 1, 0, 0};
  CHECK(rb_bootstrap_gap(&few, 100, 0.95, 1, &g) == RB_ERR_INSUFFICIENT_DATA);
  CHECK(rb_bootstrap_gap(&counts, 5, 0.95, 1, &g) == RB_ERR_USAGE);
}

TEST_CASE("dataset, analysis and report through the C API", "[capi]") {
  const auto dir = scratch("analyze");
  write(dir / "responses.csv",
        "examinee_id,item_id,first_choice,final_choice\n"
        "e1,q1,A,B\ne1,q2,A,A\ne2,q1,B,B\ne2,q2,C,A\ne3,q1,B,C\ne3,q2,,\n");
  write(dir / "keys.csv", "item_id,correct_choice,num_alternatives\nq1,B,4\nq2,A,4\nq3,A,4\n");

  rb_dataset* ds = nullptr;
  REQUIRE(rb_dataset_load((dir / "responses.csv").c_str(), (dir / "keys.csv").c_str(), &ds) == RB_OK);
  uint64_t examinees = 0, items = 0, rows = 0;
  REQUIRE(rb_dataset_shape(ds, &examinees, &items, &rows) == RB_OK);
  CHECK(examinees == 3);
  CHECK(items == 3);
  CHECK(rows == 6);

  rb_analyze_options opts;
  rb_analyze_options_init(&opts);
  opts.assume_ww2_gt_rr1 = 1;
  rb_report* report = nullptr;
  REQUIRE(rb_analyze(ds, &opts, &report) == RB_OK);
  rb_dataset_free(ds);

  rb_report_summary s;
  REQUIRE(rb_report_get_summary(report, &s) == RB_OK);
  CHECK(s.n_items == 3);
  CHECK(s.flagged == 1);
  CHECK(s.n_analyzed + s.n_dropped == s.n_rows);
  CHECK(s.assume_ww2_gt_rr1 == 1);
  REQUIRE(rb_report_item_count(report) == 2);

  rb_item_estimate e;
  REQUIRE(rb_report_item(report, 0, &e) == RB_OK);
  CHECK(std::string(e.item_id) == "q1");
  CHECK(e.counts.n_wr == 1);
  CHECK(e.counts.n_rw == 1);
  CHECK(e.att_sign == RB_SIGN_INDETERMINATE);
  CHECK(e.atu_positive_under_assumption == 1);
  CHECK(e.bootstrap_gap.present == 0);
  CHECK(rb_report_item(report, 2, &e) == RB_ERR_INVALID_ARGUMENT);

  char* table = nullptr;
  REQUIRE(rb_report_format_table(report, &table) == RB_OK);
  CHECK_THAT(table, ContainsSubstring("q2"));
  rb_string_free(table);

  REQUIRE(rb_report_write_json(report, (dir / "report.json").c_str()) == RB_OK);
  rb_report* loaded = nullptr;
  REQUIRE(rb_report_load_json((dir / "report.json").c_str(), &loaded) == RB_OK);
  CHECK(rb_report_item_count(loaded) == 2);
  REQUIRE(rb_report_emit_figures(loaded, (dir / "figs").c_str()) == RB_OK);
  CHECK(fs::exists(dir / "figs" / "figure1.csv"));
  CHECK(fs::exists(dir / "figs" / "figure2.svg"));
  rb_report_free(loaded);
  rb_report_free(report);

  CHECK(rb_dataset_load("/nonexistent.csv", (dir / "keys.csv").c_str(), &ds) == RB_ERR_IO);
  CHECK(ds == nullptr);
}

TEST_CASE("simulation and validation through the C API", "[capi]") {
  rb_sim_config* cfg = nullptr;
  REQUIRE(rb_sim_config_parse(R"({"population": 200, "seed": 4,
      "group_probs": [0.1, 0.1, 0.1, 0.2, 0.1, 0.1, 0.1, 0.2], "ww3_change_prob": 0.5})",
                              &cfg) == RB_OK);
  CHECK(rb_sim_config_item_count(cfg) == 1);
  CHECK(rb_sim_config_seed(cfg) == 4);

  const auto dir = scratch("simulate");
  REQUIRE(rb_simulate(cfg, dir.c_str()) == RB_OK);
  CHECK(fs::exists(dir / "responses.csv"));
  CHECK(fs::exists(dir / "keys.csv"));
  CHECK(fs::exists(dir / "ground_truth.json"));

  rb_validation* v = nullptr;
  REQUIRE(rb_validate(cfg, 5, 4, &v) == RB_OK);
  rb_validation_summary s;
  REQUIRE(rb_validation_get_summary(v, &s) == RB_OK);
  CHECK(s.trials == 5);
  CHECK(s.passed == 1);
  CHECK(s.free_covered == 5);
  char* line = nullptr;
  REQUIRE(rb_validation_trial_line(v, 0, &line) == RB_OK);
  CHECK_THAT(line, ContainsSubstring("seed=4"));
  rb_string_free(line);
  CHECK(rb_validation_trial_line(v, 5, &line) == RB_ERR_INVALID_ARGUMENT);
  rb_validation_free(v);
  rb_sim_config_free(cfg);

  REQUIRE(rb_validate(nullptr, 3, 10, &v) == RB_OK);
  char* text = nullptr;
  REQUIRE(rb_validation_format(v, &text) == RB_OK);
  CHECK_THAT(text, ContainsSubstring("result: PASS"));
  rb_string_free(text);
  rb_validation_free(v);

  CHECK(rb_validate(nullptr, 0, 10, &v) == RB_ERR_USAGE);
  CHECK(rb_sim_config_parse("{not json", &cfg) == RB_ERR_CONFIG);
  CHECK(rb_sim_config_parse(R"({"group_probs": [1, 1]})", &cfg) == RB_ERR_CONFIG);
  CHECK(std::string(rb_status_name(RB_ERR_CONFIG)) == "configuration error");
  CHECK(std::string(rb_version()) == "1.0.0");
}

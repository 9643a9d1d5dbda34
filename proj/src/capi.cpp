#include "reviewbounds/reviewbounds.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "dataset.hpp"
#include "error.hpp"
#include "estimator.hpp"
#include "figures.hpp"
#include "report.hpp"
#include "study.hpp"
#include "transition.hpp"
#include "validate.hpp"

struct rb_dataset {
  reviewbounds::Dataset value;
};

struct rb_report {
  reviewbounds::Report value;
};

struct rb_sim_config {
  reviewbounds::StudyConfig value;
};

struct rb_validation {
  reviewbounds::ValidationSummary value;
};

namespace {

using namespace reviewbounds;

thread_local std::string g_last_error;

rb_status status_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::MalformedInput: return RB_ERR_MALFORMED_INPUT;
    case ErrorKind::EmptyItem: return RB_ERR_EMPTY_ITEM;
    case ErrorKind::InsufficientData: return RB_ERR_INSUFFICIENT_DATA;
    case ErrorKind::Configuration: return RB_ERR_CONFIG;
    case ErrorKind::Io: return RB_ERR_IO;
    case ErrorKind::Usage: return RB_ERR_USAGE;
  }
  return RB_ERR_INTERNAL;
}

rb_status fail(rb_status status, std::string message) {
  g_last_error = std::move(message);
  return status;
}

template <typename F>
rb_status guarded(F&& body) {
  try {
    body();
    return RB_OK;
  } catch (const Error& e) {
    return fail(status_for(e.kind()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(RB_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(RB_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(RB_ERR_INTERNAL, "unknown error");
  }
}

#define RB_REQUIRE(cond, what)                                  \
  do {                                                          \
    if (!(cond)) return fail(RB_ERR_INVALID_ARGUMENT, (what));  \
  } while (0)

char* copy_string(const std::string& s) {
  auto* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

rb_sign to_c(Sign s) {
  switch (s) {
    case Sign::Positive: return RB_SIGN_POSITIVE;
    case Sign::Negative: return RB_SIGN_NEGATIVE;
    case Sign::Indeterminate: return RB_SIGN_INDETERMINATE;
  }
  return RB_SIGN_INDETERMINATE;
}

rb_bound to_c(const EffectBound& b) {
  return rb_bound{b.lower, b.upper, to_c(b.sign_verdict), b.assumption_used ? 1 : 0};
}

rb_verdict_counts to_c(const VerdictCounts& c) {
  return rb_verdict_counts{c.positive, c.negative, c.indeterminate};
}

ItemProportions from_c(const rb_proportions& p) {
  return ItemProportions{p.p_ww, p.p_wr, p.p_rw, p.p_rr, p.kappa};
}

ItemTally from_c(const rb_counts& c) {
  ItemTally t;
  t.n_ww = c.n_ww;
  t.n_wr = c.n_wr;
  t.n_rw = c.n_rw;
  t.n_rr = c.n_rr;
  t.n_ww_changed = c.n_ww_changed;
  t.n_dropped = c.n_dropped;
  return t;
}

rb_counts to_c(const ItemTally& t) {
  return rb_counts{t.n_ww, t.n_wr, t.n_rw, t.n_rr, t.n_ww_changed, t.n_dropped};
}

}  // namespace

extern "C" {

const char* rb_version(void) { return "1.0.0"; }

const char* rb_last_error(void) { return g_last_error.c_str(); }

const char* rb_status_name(rb_status status) {
  switch (status) {
    case RB_OK: return "ok";
    case RB_ERR_MALFORMED_INPUT: return "malformed input";
    case RB_ERR_EMPTY_ITEM: return "empty item";
    case RB_ERR_INSUFFICIENT_DATA: return "insufficient data";
    case RB_ERR_CONFIG: return "configuration error";
    case RB_ERR_IO: return "i/o error";
    case RB_ERR_USAGE: return "usage error";
    case RB_ERR_INVALID_ARGUMENT: return "invalid argument";
    case RB_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

void rb_string_free(char* s) { std::free(s); }

rb_status rb_classify(const char* first_choice, const char* final_choice,
                      const char* correct_choice, int num_alternatives, rb_transition* kind,
                      int* changed) {
  RB_REQUIRE(first_choice && final_choice && correct_choice && kind && changed,
             "rb_classify: null argument");
  return guarded([&] {
    const AnswerKey key("item", correct_choice, num_alternatives);
    const auto cls =
        classify(ResponseRecord{"examinee", "item", first_choice, final_choice}, key);
    if (!cls) {
      *kind = RB_TRANSITION_EXCLUDED;
      *changed = 0;
      return;
    }
    *kind = static_cast<rb_transition>(static_cast<int>(cls->kind));
    *changed = cls->changed ? 1 : 0;
  });
}

rb_status rb_proportions_from_counts(const rb_counts* counts, rb_proportions* out) {
  RB_REQUIRE(counts && out, "rb_proportions_from_counts: null argument");
  return guarded([&] {
    const auto p = proportions(from_c(*counts));
    *out = rb_proportions{p.p_ww, p.p_wr, p.p_rw, p.p_rr, p.kappa};
  });
}

rb_sign rb_att_sign(const rb_proportions* p) {
  return p ? to_c(attSign(from_c(*p))) : RB_SIGN_INDETERMINATE;
}

rb_status rb_ate_bounds_free(const rb_proportions* p, rb_bound* out) {
  RB_REQUIRE(p && out, "rb_ate_bounds_free: null argument");
  *out = to_c(ateBoundsFree(from_c(*p)));
  return RB_OK;
}

rb_status rb_ate_bounds_tightened(const rb_proportions* p, rb_bound* out) {
  RB_REQUIRE(p && out, "rb_ate_bounds_tightened: null argument");
  *out = to_c(ateBoundsTightened(from_c(*p)));
  return RB_OK;
}

rb_bound rb_atu_bounds_free(void) { return to_c(atuBoundsFree()); }

int rb_atu_positive_under_assumption(int assume) {
  return atuSignUnderAssumption(assume != 0) == AssumedSign::Positive ? 1 : 0;
}

rb_status rb_bootstrap_gap(const rb_counts* counts, int replicates, double level, uint64_t seed,
                           rb_gap_interval* out) {
  RB_REQUIRE(counts && out, "rb_bootstrap_gap: null argument");
  return guarded([&] {
    const auto g = bootstrapGapInterval(from_c(*counts), BootstrapOptions{replicates, level, seed});
    *out = rb_gap_interval{1, g.lower, g.upper, g.level, g.replicates};
  });
}

rb_status rb_dataset_load(const char* responses_path, const char* keys_path, rb_dataset** out) {
  RB_REQUIRE(responses_path && keys_path && out, "rb_dataset_load: null argument");
  *out = nullptr;
  return guarded([&] { *out = new rb_dataset{loadResponses(responses_path, keys_path)}; });
}

void rb_dataset_free(rb_dataset* ds) { delete ds; }

rb_status rb_dataset_shape(const rb_dataset* ds, uint64_t* n_examinees, uint64_t* n_items,
                           uint64_t* n_rows) {
  RB_REQUIRE(ds, "rb_dataset_shape: null dataset");
  if (n_examinees) *n_examinees = ds->value.n_examinees;
  if (n_items) *n_items = ds->value.n_items;
  if (n_rows) *n_rows = ds->value.n_rows;
  return RB_OK;
}

void rb_analyze_options_init(rb_analyze_options* opts) {
  if (!opts) return;
  opts->assume_ww2_gt_rr1 = 0;
  opts->bootstrap_replicates = 0;
  opts->bootstrap_level = 0.95;
  opts->seed = 0;
}

rb_status rb_analyze(const rb_dataset* ds, const rb_analyze_options* opts, rb_report** out) {
  RB_REQUIRE(ds && out, "rb_analyze: null argument");
  *out = nullptr;
  return guarded([&] {
    AnalyzeOptions o;
    if (opts) {
      o.assume_ww2_gt_rr1 = opts->assume_ww2_gt_rr1 != 0;
      if (opts->bootstrap_replicates != 0) {
        o.bootstrap = BootstrapOptions{opts->bootstrap_replicates, opts->bootstrap_level, opts->seed};
      }
    }
    *out = new rb_report{analyze(ds->value, o)};
  });
}

void rb_report_free(rb_report* report) { delete report; }

rb_status rb_report_load_json(const char* path, rb_report** out) {
  RB_REQUIRE(path && out, "rb_report_load_json: null argument");
  *out = nullptr;
  return guarded([&] { *out = new rb_report{readReportJson(path)}; });
}

rb_status rb_report_write_json(const rb_report* report, const char* path) {
  RB_REQUIRE(report && path, "rb_report_write_json: null argument");
  return guarded([&] { writeReportJson(report->value, path); });
}

rb_status rb_report_format_table(const rb_report* report, char** out) {
  RB_REQUIRE(report && out, "rb_report_format_table: null argument");
  return guarded([&] { *out = copy_string(formatReportTable(report->value)); });
}

rb_status rb_report_get_summary(const rb_report* report, rb_report_summary* out) {
  RB_REQUIRE(report && out, "rb_report_get_summary: null argument");
  const auto& r = report->value;
  const auto& s = r.summary;
  *out = rb_report_summary{s.n_items,       s.flagged,          to_c(s.att),     to_c(s.ate_free),
                           to_c(s.ate_tight), to_c(s.ate),       r.n_examinees,   r.n_rows,
                           r.n_analyzed,    r.n_dropped,        r.assume_ww2_gt_rr1 ? 1 : 0};
  return RB_OK;
}

size_t rb_report_item_count(const rb_report* report) {
  return report ? report->value.per_item.size() : 0;
}

rb_status rb_report_item(const rb_report* report, size_t index, rb_item_estimate* out) {
  RB_REQUIRE(report && out, "rb_report_item: null argument");
  RB_REQUIRE(index < report->value.per_item.size(), "rb_report_item: index out of range");
  const auto& e = report->value.per_item[index];
  out->item_id = e.item_id.c_str();
  out->counts = to_c(e.tally);
  out->proportions = rb_proportions{e.proportions.p_ww, e.proportions.p_wr, e.proportions.p_rw,
                                    e.proportions.p_rr, e.proportions.kappa};
  out->att_sign = to_c(e.att_sign);
  out->ate_free = to_c(e.ate_free);
  out->ate_tight = to_c(e.ate_tight);
  out->atu_free = to_c(e.atu_free);
  out->atu_positive_under_assumption = e.atu_sign_under_assumption == AssumedSign::Positive ? 1 : 0;
  out->bootstrap_gap = e.bootstrap_gap ? rb_gap_interval{1, e.bootstrap_gap->lower,
                                                         e.bootstrap_gap->upper,
                                                         e.bootstrap_gap->level,
                                                         e.bootstrap_gap->replicates}
                                       : rb_gap_interval{0, 0.0, 0.0, 0.0, 0};
  return RB_OK;
}

rb_status rb_report_emit_figures(const rb_report* report, const char* out_dir) {
  RB_REQUIRE(report && out_dir, "rb_report_emit_figures: null argument");
  return guarded([&] { emitFigures(report->value, out_dir); });
}

rb_status rb_sim_config_load(const char* path, rb_sim_config** out) {
  RB_REQUIRE(path && out, "rb_sim_config_load: null argument");
  *out = nullptr;
  return guarded([&] { *out = new rb_sim_config{loadStudyConfig(path)}; });
}

rb_status rb_sim_config_parse(const char* json_text, rb_sim_config** out) {
  RB_REQUIRE(json_text && out, "rb_sim_config_parse: null argument");
  *out = nullptr;
  return guarded([&] {
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorKind::Configuration, std::string("config: ") + e.what());
    }
    *out = new rb_sim_config{parseStudyConfig(doc)};
  });
}

void rb_sim_config_free(rb_sim_config* config) { delete config; }

size_t rb_sim_config_item_count(const rb_sim_config* config) {
  return config ? config->value.items.size() : 0;
}

uint64_t rb_sim_config_seed(const rb_sim_config* config) {
  return config && !config->value.items.empty() ? config->value.items.front().config.seed : 0;
}

rb_status rb_simulate(const rb_sim_config* config, const char* out_dir) {
  RB_REQUIRE(config && out_dir, "rb_simulate: null argument");
  return guarded([&] { simulateStudy(config->value, out_dir); });
}

rb_status rb_validate(const rb_sim_config* config, uint64_t trials, uint64_t seed,
                      rb_validation** out) {
  RB_REQUIRE(out, "rb_validate: null argument");
  *out = nullptr;
  return guarded([&] {
    ValidationOptions o = config ? validation_options_from(config->value) : ValidationOptions{};
    o.trials = trials;
    o.seed = seed;
    *out = new rb_validation{validate(o)};
  });
}

void rb_validation_free(rb_validation* v) { delete v; }

rb_status rb_validation_get_summary(const rb_validation* v, rb_validation_summary* out) {
  RB_REQUIRE(v && out, "rb_validation_get_summary: null argument");
  const auto& s = v->value;
  *out = rb_validation_summary{s.trials,
                               s.free_covered,
                               s.tight_applicable,
                               s.tight_covered_applicable,
                               s.expected_violations,
                               s.sign_checked,
                               s.sign_sound,
                               s.identity_ok,
                               s.decomposition_checked,
                               s.decomposition_ok,
                               s.coarsening_ok,
                               s.max_identity_error,
                               s.max_decomposition_error,
                               s.failing_seeds.size(),
                               s.passed() ? 1 : 0};
  return RB_OK;
}

rb_status rb_validation_trial_line(const rb_validation* v, uint64_t index, char** out) {
  RB_REQUIRE(v && out, "rb_validation_trial_line: null argument");
  RB_REQUIRE(index < v->value.results.size(), "rb_validation_trial_line: index out of range");
  return guarded([&] { *out = copy_string(v->value.results[index].describe()); });
}

int rb_validation_trial_failed(const rb_validation* v, uint64_t index) {
  if (!v || index >= v->value.results.size()) return 0;
  return v->value.results[index].failed() ? 1 : 0;
}

int rb_validation_trial_expected_violation(const rb_validation* v, uint64_t index) {
  if (!v || index >= v->value.results.size()) return 0;
  return v->value.results[index].expected_violation() ? 1 : 0;
}

uint64_t rb_validation_failing_seed(const rb_validation* v, uint64_t index) {
  if (!v || index >= v->value.failing_seeds.size()) return 0;
  return v->value.failing_seeds[index];
}

rb_status rb_validation_format(const rb_validation* v, char** out) {
  RB_REQUIRE(v && out, "rb_validation_format: null argument");
  return guarded([&] { *out = copy_string(v->value.format()); });
}

}  // extern "C"

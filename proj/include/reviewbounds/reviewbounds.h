/*
 * reviewbounds: partially identified effects of answer reviewing on
 * multiple-choice items, plus a latent-outcome simulator used to validate
 * them.
 *
 * C interface. Objects are opaque handles owned by the caller and released
 * with the matching *_free function. Every fallible call returns an
 * rb_status; on failure rb_last_error() describes the problem. The message
 * is thread-local and valid until the next failing call on that thread.
 */
#ifndef REVIEWBOUNDS_H
#define REVIEWBOUNDS_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(REVIEWBOUNDS_BUILDING)
#    define RB_API __declspec(dllexport)
#  else
#    define RB_API __declspec(dllimport)
#  endif
#else
#  define RB_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rb_status {
  RB_OK = 0,
  RB_ERR_MALFORMED_INPUT = 1,
  RB_ERR_EMPTY_ITEM = 2,
  RB_ERR_INSUFFICIENT_DATA = 3,
  RB_ERR_CONFIG = 4,
  RB_ERR_IO = 5,
  RB_ERR_USAGE = 6,
  RB_ERR_INVALID_ARGUMENT = 7,
  RB_ERR_INTERNAL = 8
} rb_status;

typedef enum rb_sign {
  RB_SIGN_NEGATIVE = -1,
  RB_SIGN_INDETERMINATE = 0,
  RB_SIGN_POSITIVE = 1
} rb_sign;

typedef enum rb_transition {
  RB_TRANSITION_WW = 0,
  RB_TRANSITION_WR = 1,
  RB_TRANSITION_RW = 2,
  RB_TRANSITION_RR = 3,
  RB_TRANSITION_EXCLUDED = 4 /* blank first or final answer */
} rb_transition;

typedef struct rb_proportions {
  double p_ww;
  double p_wr;
  double p_rw;
  double p_rr;
  double kappa; /* changed from one wrong answer to another */
} rb_proportions;

typedef struct rb_counts {
  uint64_t n_ww;
  uint64_t n_wr;
  uint64_t n_rw;
  uint64_t n_rr;
  uint64_t n_ww_changed;
  uint64_t n_dropped;
} rb_counts;

typedef struct rb_bound {
  double lower;
  double upper;
  rb_sign sign_verdict;
  int assumption_used;
} rb_bound;

typedef struct rb_gap_interval {
  int present;
  double lower;
  double upper;
  double level;
  int replicates;
} rb_gap_interval;

typedef struct rb_item_estimate {
  const char* item_id; /* owned by the report */
  rb_counts counts;
  rb_proportions proportions;
  rb_sign att_sign;
  rb_bound ate_free;
  rb_bound ate_tight;
  rb_bound atu_free;
  int atu_positive_under_assumption; /* 1 = positive, 0 = not asserted */
  rb_gap_interval bootstrap_gap;
} rb_item_estimate;

typedef struct rb_verdict_counts {
  uint64_t positive;
  uint64_t negative;
  uint64_t indeterminate;
} rb_verdict_counts;

typedef struct rb_report_summary {
  uint64_t n_items;
  uint64_t flagged;
  rb_verdict_counts att;
  rb_verdict_counts ate_free;
  rb_verdict_counts ate_tight;
  rb_verdict_counts ate; /* tight verdicts when the assumption is asserted */
  uint64_t n_examinees;
  uint64_t n_rows;
  uint64_t n_analyzed;
  uint64_t n_dropped;
  int assume_ww2_gt_rr1;
} rb_report_summary;

typedef struct rb_analyze_options {
  int assume_ww2_gt_rr1;
  int bootstrap_replicates; /* 0 disables the bootstrap */
  double bootstrap_level;
  uint64_t seed;
} rb_analyze_options;

typedef struct rb_validation_summary {
  uint64_t trials;
  uint64_t free_covered;
  uint64_t tight_applicable;
  uint64_t tight_covered_applicable;
  uint64_t expected_violations;
  uint64_t sign_checked;
  uint64_t sign_sound;
  uint64_t identity_ok;
  uint64_t decomposition_checked;
  uint64_t decomposition_ok;
  uint64_t coarsening_ok;
  double max_identity_error;
  double max_decomposition_error;
  uint64_t n_failures;
  int passed;
} rb_validation_summary;

typedef struct rb_dataset rb_dataset;
typedef struct rb_report rb_report;
typedef struct rb_sim_config rb_sim_config;
typedef struct rb_validation rb_validation;

RB_API const char* rb_version(void);
RB_API const char* rb_last_error(void);
RB_API const char* rb_status_name(rb_status status);

/* Releases strings returned through char** out-parameters. */
RB_API void rb_string_free(char* s);

/* ---- per-item estimands ------------------------------------------------ */

/* num_alternatives follows the key-file rules: a letter or numeric correct
 * choice fixes the alphabet, anything else accepts any non-blank token. */
RB_API rb_status rb_classify(const char* first_choice, const char* final_choice,
                             const char* correct_choice, int num_alternatives,
                             rb_transition* kind, int* changed);
RB_API rb_status rb_proportions_from_counts(const rb_counts* counts, rb_proportions* out);
RB_API rb_sign rb_att_sign(const rb_proportions* p);
RB_API rb_status rb_ate_bounds_free(const rb_proportions* p, rb_bound* out);
RB_API rb_status rb_ate_bounds_tightened(const rb_proportions* p, rb_bound* out);
RB_API rb_bound rb_atu_bounds_free(void);
/* 1 (positive) when assume != 0, otherwise 0 (not asserted). */
RB_API int rb_atu_positive_under_assumption(int assume);
RB_API rb_status rb_bootstrap_gap(const rb_counts* counts, int replicates, double level,
                                  uint64_t seed, rb_gap_interval* out);

/* ---- datasets and reports ------------------------------------------------ */

RB_API rb_status rb_dataset_load(const char* responses_path, const char* keys_path,
                                 rb_dataset** out);
RB_API void rb_dataset_free(rb_dataset* ds);
RB_API rb_status rb_dataset_shape(const rb_dataset* ds, uint64_t* n_examinees, uint64_t* n_items,
                                  uint64_t* n_rows);

RB_API void rb_analyze_options_init(rb_analyze_options* opts);
RB_API rb_status rb_analyze(const rb_dataset* ds, const rb_analyze_options* opts, rb_report** out);
RB_API void rb_report_free(rb_report* report);

RB_API rb_status rb_report_load_json(const char* path, rb_report** out);
RB_API rb_status rb_report_write_json(const rb_report* report, const char* path);
/* Aligned text table plus summary; free with rb_string_free. */
RB_API rb_status rb_report_format_table(const rb_report* report, char** out);
RB_API rb_status rb_report_get_summary(const rb_report* report, rb_report_summary* out);
RB_API size_t rb_report_item_count(const rb_report* report);
RB_API rb_status rb_report_item(const rb_report* report, size_t index, rb_item_estimate* out);
RB_API rb_status rb_report_emit_figures(const rb_report* report, const char* out_dir);

/* ---- simulation and validation ------------------------------------------ */

RB_API rb_status rb_sim_config_load(const char* path, rb_sim_config** out);
RB_API rb_status rb_sim_config_parse(const char* json_text, rb_sim_config** out);
RB_API void rb_sim_config_free(rb_sim_config* config);
RB_API size_t rb_sim_config_item_count(const rb_sim_config* config);
/* Seed of the first item (the top-level seed for single-item configs). */
RB_API uint64_t rb_sim_config_seed(const rb_sim_config* config);

/* Writes responses.csv, keys.csv and ground_truth.json into out_dir. */
RB_API rb_status rb_simulate(const rb_sim_config* config, const char* out_dir);

/* config may be NULL: flat-Dirichlet group probabilities, N = 1000, four
 * alternatives. Trial t uses seed + t. A failed oracle check is not an
 * error: the call returns RB_OK and the summary reports passed = 0. */
RB_API rb_status rb_validate(const rb_sim_config* config, uint64_t trials, uint64_t seed,
                             rb_validation** out);
RB_API void rb_validation_free(rb_validation* v);
RB_API rb_status rb_validation_get_summary(const rb_validation* v, rb_validation_summary* out);
/* One line per trial; free with rb_string_free. */
RB_API rb_status rb_validation_trial_line(const rb_validation* v, uint64_t index, char** out);
RB_API int rb_validation_trial_failed(const rb_validation* v, uint64_t index);
RB_API int rb_validation_trial_expected_violation(const rb_validation* v, uint64_t index);
RB_API uint64_t rb_validation_failing_seed(const rb_validation* v, uint64_t index);
/* Multi-line human summary; free with rb_string_free. */
RB_API rb_status rb_validation_format(const rb_validation* v, char** out);

#ifdef __cplusplus
}
#endif

#endif /* REVIEWBOUNDS_H */

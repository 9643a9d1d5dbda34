// reviewbounds command-line tool, built on the C API.
//
// Exit codes: 0 success, 1 validation failure, 2 input or usage error.
// REVIEWBOUNDS_SEED, when set, overrides every --seed value.

#include <CLI11.hpp>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

#include "reviewbounds/reviewbounds.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidationFailed = 1;
constexpr int kExitInputError = 2;
constexpr const char* kSeedEnv = "REVIEWBOUNDS_SEED";

template <typename T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};
using DatasetPtr = std::unique_ptr<rb_dataset, Deleter<rb_dataset, rb_dataset_free>>;
using ReportPtr = std::unique_ptr<rb_report, Deleter<rb_report, rb_report_free>>;
using ConfigPtr = std::unique_ptr<rb_sim_config, Deleter<rb_sim_config, rb_sim_config_free>>;
using ValidationPtr = std::unique_ptr<rb_validation, Deleter<rb_validation, rb_validation_free>>;

struct OwnedString {
  char* s = nullptr;
  ~OwnedString() { rb_string_free(s); }
};

struct CliError {
  int exit_code;
};

void check(rb_status status) {
  if (status == RB_OK) return;
  std::cerr << "error: " << rb_last_error() << '\n';
  throw CliError{kExitInputError};
}

std::uint64_t resolve_seed(std::optional<std::uint64_t> flag, std::uint64_t fallback) {
  if (const char* env = std::getenv(kSeedEnv); env && *env) {
    char* end = nullptr;
    const auto v = std::strtoull(env, &end, 10);
    if (*end != '\0') {
      std::cerr << "error: " << kSeedEnv << " is not an unsigned integer: '" << env << "'\n";
      throw CliError{kExitInputError};
    }
    if (flag && *flag != v) {
      std::cerr << "note: " << kSeedEnv << "=" << v << " overrides --seed " << *flag << '\n';
    }
    return v;
  }
  return flag.value_or(fallback);
}

void print_table(const rb_report* report, std::ostream& out) {
  OwnedString table;
  check(rb_report_format_table(report, &table.s));
  out << table.s;
}

struct AnalyzeArgs {
  std::string responses;
  std::string keys;
  bool assume = false;
  int bootstrap = 0;
  double level = 0.95;
  std::optional<std::uint64_t> seed;
  std::string out;
};

int run_analyze(const AnalyzeArgs& a) {
  rb_dataset* raw_ds = nullptr;
  check(rb_dataset_load(a.responses.c_str(), a.keys.c_str(), &raw_ds));
  DatasetPtr ds(raw_ds);

  rb_analyze_options opts;
  rb_analyze_options_init(&opts);
  opts.assume_ww2_gt_rr1 = a.assume ? 1 : 0;
  opts.bootstrap_replicates = a.bootstrap;
  opts.bootstrap_level = a.level;
  opts.seed = resolve_seed(a.seed, 0);
  rb_report* raw_report = nullptr;
  check(rb_analyze(ds.get(), &opts, &raw_report));
  ReportPtr report(raw_report);

  print_table(report.get(), std::cout);
  if (!a.out.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(a.out, ec);
    if (ec) {
      std::cerr << "error: cannot create directory '" << a.out << "'\n";
      return kExitInputError;
    }
    const auto dir = std::filesystem::path(a.out);
    check(rb_report_write_json(report.get(), (dir / "report.json").string().c_str()));
    std::ofstream txt(dir / "report.txt");
    print_table(report.get(), txt);
    if (!txt) {
      std::cerr << "error: failed writing " << (dir / "report.txt") << '\n';
      return kExitInputError;
    }
  }
  return kExitOk;
}

int run_simulate(const std::string& config_path, const std::string& out_dir) {
  rb_sim_config* raw = nullptr;
  check(rb_sim_config_load(config_path.c_str(), &raw));
  ConfigPtr config(raw);
  check(rb_simulate(config.get(), out_dir.c_str()));
  std::cout << "wrote responses.csv, keys.csv, ground_truth.json to " << out_dir << " ("
            << rb_sim_config_item_count(config.get()) << " items)\n";
  return kExitOk;
}

int run_validate(const std::string& config_path, std::uint64_t trials,
                 std::optional<std::uint64_t> seed_flag, bool verbose) {
  ConfigPtr config;
  if (!config_path.empty()) {
    rb_sim_config* raw = nullptr;
    check(rb_sim_config_load(config_path.c_str(), &raw));
    config.reset(raw);
  }
  const std::uint64_t seed = resolve_seed(seed_flag, config ? rb_sim_config_seed(config.get()) : 0);
  rb_validation* raw_v = nullptr;
  check(rb_validate(config.get(), trials, seed, &raw_v));
  ValidationPtr v(raw_v);

  rb_validation_summary summary;
  check(rb_validation_get_summary(v.get(), &summary));
  for (std::uint64_t i = 0; i < summary.trials; ++i) {
    const bool failed = rb_validation_trial_failed(v.get(), i) != 0;
    const bool expected = rb_validation_trial_expected_violation(v.get(), i) != 0;
    if (verbose || failed || expected) {
      OwnedString line;
      check(rb_validation_trial_line(v.get(), i, &line.s));
      std::cout << line.s << '\n';
    }
  }
  OwnedString text;
  check(rb_validation_format(v.get(), &text.s));
  std::cout << text.s;
  if (!summary.passed) {
    std::cout << "replay a failing trial with: validate"
              << (config_path.empty() ? "" : " --config " + config_path)
              << " --trials 1 --seed " << rb_validation_failing_seed(v.get(), 0) << '\n';
    return kExitValidationFailed;
  }
  return kExitOk;
}

int run_report(const std::string& in_path, const std::string& figures_dir) {
  rb_report* raw = nullptr;
  check(rb_report_load_json(in_path.c_str(), &raw));
  ReportPtr report(raw);
  print_table(report.get(), std::cout);
  if (!figures_dir.empty()) {
    check(rb_report_emit_figures(report.get(), figures_dir.c_str()));
    std::cout << "wrote figure1.csv, figure2.csv, figure1.svg, figure2.svg to " << figures_dir
              << '\n';
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Partially identified effects of answer reviewing on multiple-choice items"};
  app.require_subcommand(1);
  app.set_version_flag("--version", rb_version());

  AnalyzeArgs analyze_args;
  auto* analyze = app.add_subcommand("analyze", "Estimate ATT sign and ATE/ATU bounds per item");
  analyze->add_option("--responses", analyze_args.responses, "Responses CSV")->required();
  analyze->add_option("--keys", analyze_args.keys, "Answer key CSV")->required();
  analyze->add_flag("--assume-ww2-gt-rr1", analyze_args.assume,
                    "Assert P(WW2) > P(RR1): use tightened ATE bounds for the sign summary");
  analyze->add_option("--bootstrap", analyze_args.bootstrap,
                      "Bootstrap replicates for the P(WR)-P(RW) interval (0 = off, else >= 100)")
      ->check(CLI::NonNegativeNumber);
  analyze->add_option("--level", analyze_args.level, "Bootstrap interval level")
      ->default_val(0.95);
  analyze->add_option("--seed", analyze_args.seed, "Bootstrap seed");
  analyze->add_option("--out", analyze_args.out, "Directory for report.json and report.txt");

  std::string sim_config, sim_out;
  auto* simulate = app.add_subcommand("simulate", "Generate synthetic answer sheets with known effects");
  simulate->add_option("--config", sim_config, "Simulation config JSON")->required();
  simulate->add_option("--out", sim_out, "Output directory")->required();

  std::string val_config;
  std::uint64_t val_trials = 1000;
  std::optional<std::uint64_t> val_seed;
  bool val_verbose = false;
  auto* validate = app.add_subcommand("validate", "Check the estimators against simulated ground truth");
  validate->add_option("--config", val_config,
                       "Single-item config; omit group_probs for Dirichlet-drawn populations");
  validate->add_option("--trials", val_trials, "Number of trials")->default_val(1000);
  validate->add_option("--seed", val_seed, "Seed of the first trial (trial t uses seed + t)");
  validate->add_flag("--verbose", val_verbose, "Print every trial");

  std::string report_in, figures_dir;
  auto* report = app.add_subcommand("report", "Print a saved report and emit figures");
  report->add_option("--in", report_in, "report.json written by analyze")->required();
  report->add_option("--figures-dir", figures_dir, "Directory for figure CSV and SVG files");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInputError;
  }

  try {
    if (*analyze) return run_analyze(analyze_args);
    if (*simulate) return run_simulate(sim_config, sim_out);
    if (*validate) {
      if (val_trials == 0) {
        std::cerr << "error: --trials must be at least 1\n";
        return kExitInputError;
      }
      return run_validate(val_config, val_trials, val_seed, val_verbose);
    }
    if (*report) return run_report(report_in, figures_dir);
  } catch (const CliError& e) {
    return e.exit_code;
  }
  return kExitInputError;
}

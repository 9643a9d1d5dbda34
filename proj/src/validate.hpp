#pragma once

// Oracle harness: simulate a population with known latent groups, project
// it onto answer sheets, estimate, and check the estimates against the
// exact population effects.
//
// Checked per trial:
//   free coverage      true ATE inside the assumption-free bound (always)
//   tight coverage     true ATE inside the tightened bound whenever
//                      freq(WW2) >= freq(RR1); exclusions otherwise are
//                      recorded as expected violations, not failures
//   sign soundness     ATT sign verdict equals the sign of the true ATT
//                      whenever P(WR) != P(RW)
//   identities         group-formula ATE/ATT/ATU equal record-level means of
//                      tau; ATE = ATT p + ATU (1 - p)
//   coarsening         observed tallies equal the sums of latent counts

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "estimator.hpp"
#include "simulator.hpp"
#include "study.hpp"

namespace reviewbounds {

inline constexpr double kIdentityTolerance = 1e-12;

using EstimatorFn = std::function<ItemEstimate(const ItemTally&)>;

struct ValidationOptions {
  std::uint64_t trials = 1000;
  std::uint64_t seed = 0;
  // Fixed latent distribution; when absent each trial draws group_probs
  // from a flat Dirichlet over the eight groups.
  std::optional<SimConfig> fixed;
  std::uint64_t population = 1000;
  int num_alternatives = 4;
  // When absent each Dirichlet trial draws it uniformly from [0, 1).
  std::optional<double> ww3_change_prob;
  std::string correct_choice = "A";
  // Replaceable for fault-injection tests of the harness itself.
  EstimatorFn estimator;
};

// Trial t runs with seed = options.seed + t, so `trials = 1, seed = s`
// replays the trial that ran with seed s.
ValidationOptions validation_options_from(const StudyConfig& config);

struct TrialResult {
  std::uint64_t seed = 0;
  SimConfig config;
  GroundTruth truth;
  ItemTally tally;
  ItemEstimate estimate;

  bool free_covered = false;
  bool tight_applicable = false;  // freq(WW2) >= freq(RR1)
  bool tight_covered = false;
  std::optional<bool> sign_sound;  // absent when n_wr == n_rw
  double identity_error = 0.0;
  std::optional<double> decomposition_error;
  bool coarsening_ok = false;

  bool expected_violation() const noexcept { return !tight_applicable && !tight_covered; }
  std::vector<std::string> failures() const;
  bool failed() const { return !failures().empty(); }
  // One line: seed, config summary, truth, bounds, status.
  std::string describe() const;
};

struct ValidationSummary {
  std::uint64_t trials = 0;
  std::uint64_t free_covered = 0;
  std::uint64_t tight_applicable = 0;
  std::uint64_t tight_covered_applicable = 0;
  std::uint64_t expected_violations = 0;
  std::uint64_t sign_checked = 0;
  std::uint64_t sign_sound = 0;
  std::uint64_t identity_ok = 0;
  std::uint64_t decomposition_checked = 0;
  std::uint64_t decomposition_ok = 0;
  std::uint64_t coarsening_ok = 0;
  double max_identity_error = 0.0;
  double max_decomposition_error = 0.0;
  std::vector<std::uint64_t> failing_seeds;
  std::vector<TrialResult> results;

  bool passed() const noexcept { return failing_seeds.empty(); }
  std::string format() const;
};

SimConfig trial_config(const ValidationOptions& options, std::uint64_t trial_seed);
TrialResult run_trial(const ValidationOptions& options, std::uint64_t trial_seed);

// Throws Error(Usage) when trials == 0.
ValidationSummary validate(const ValidationOptions& options);

}  // namespace reviewbounds

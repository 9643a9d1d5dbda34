#include "validate.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "error.hpp"
#include "format.hpp"
#include "random.hpp"

namespace reviewbounds {

namespace {

// Stream id for per-trial config draws; record streams use small ids.
constexpr std::uint64_t kConfigStream = ~std::uint64_t{0} - 1;

int sign_of(double v) { return (v > 0.0) - (v < 0.0); }

int sign_of(Sign s) {
  switch (s) {
    case Sign::Positive: return 1;
    case Sign::Negative: return -1;
    case Sign::Indeterminate: return 0;
  }
  return 0;
}

}  // namespace

ValidationOptions validation_options_from(const StudyConfig& config) {
  if (config.items.size() != 1) {
    throw Error(ErrorKind::Configuration, "validate expects a single-item config");
  }
  const auto& item = config.items.front();
  ValidationOptions o;
  o.seed = item.config.seed;
  o.population = item.config.population;
  o.num_alternatives = item.config.num_alternatives;
  o.correct_choice = item.key.correct_choice();
  if (item.has_ww3_change_prob) o.ww3_change_prob = item.config.ww3_change_prob;
  if (item.has_group_probs) o.fixed = item.config;
  return o;
}

SimConfig trial_config(const ValidationOptions& options, std::uint64_t trial_seed) {
  if (options.fixed) {
    SimConfig c = *options.fixed;
    c.seed = trial_seed;
    return c;
  }
  SimConfig c;
  c.population = options.population;
  c.num_alternatives = options.num_alternatives;
  c.seed = trial_seed;
  Stream s(trial_seed, kConfigStream);
  // Flat Dirichlet: normalized standard exponentials.
  double total = 0.0;
  for (auto& p : c.group_probs) {
    p = s.next_exponential();
    total += p;
  }
  for (auto& p : c.group_probs) p /= total;
  const double drawn_change = s.next_unit();
  c.ww3_change_prob =
      c.num_alternatives >= 3 ? options.ww3_change_prob.value_or(drawn_change) : 0.0;
  return c;
}

TrialResult run_trial(const ValidationOptions& options, std::uint64_t trial_seed) {
  TrialResult r;
  r.seed = trial_seed;
  r.config = trial_config(options, trial_seed);
  const AnswerKey key("validate", options.correct_choice, r.config.num_alternatives);

  const auto latent = generate(r.config, key);
  r.truth = groundTruth(latent);
  const auto observed = projectObserved(latent);
  r.tally = tallyItem(observed, key);
  r.estimate = options.estimator ? options.estimator(r.tally) : analyzeItem(r.tally);

  const auto& t = r.truth;
  r.free_covered = r.estimate.ate_free.contains(t.ate);
  r.tight_applicable = t.count(LatentGroup::WW2) >= t.count(LatentGroup::RR1);
  r.tight_covered = r.estimate.ate_tight.contains(t.ate);
  if (r.tally.n_wr != r.tally.n_rw) {
    r.sign_sound = t.att && sign_of(*t.att) == sign_of(r.estimate.att_sign);
  }

  // Record-level route: average tau directly over each subset.
  long long tau_all = 0, tau_treated = 0, tau_untreated = 0;
  std::uint64_t treated = 0;
  for (const auto& rec : latent) {
    const auto g = traits(rec.group);
    tau_all += g.tau;
    if (g.reviewed) {
      tau_treated += g.tau;
      ++treated;
    } else {
      tau_untreated += g.tau;
    }
  }
  const auto n = static_cast<double>(latent.size());
  double err = std::abs(static_cast<double>(tau_all) / n - t.ate);
  if (treated > 0) {
    err = std::max(err, t.att ? std::abs(static_cast<double>(tau_treated) / treated - *t.att) : 1.0);
  } else if (t.att) {
    err = 1.0;
  }
  const std::uint64_t untreated = latent.size() - treated;
  if (untreated > 0) {
    err = std::max(err,
                   t.atu ? std::abs(static_cast<double>(tau_untreated) / untreated - *t.atu) : 1.0);
  } else if (t.atu) {
    err = 1.0;
  }
  r.identity_error = err;
  if (t.att && t.atu) {
    r.decomposition_error = std::abs(t.ate - (*t.att * t.p_treated + *t.atu * (1.0 - t.p_treated)));
  }

  auto c = [&](LatentGroup g) { return t.count(g); };
  r.coarsening_ok = r.tally.n_ww == c(LatentGroup::WW1) + c(LatentGroup::WW2) + c(LatentGroup::WW3) &&
                    r.tally.n_wr == c(LatentGroup::WR) && r.tally.n_rw == c(LatentGroup::RW) &&
                    r.tally.n_rr == c(LatentGroup::RR1) + c(LatentGroup::RR2) + c(LatentGroup::RR3) &&
                    r.tally.n_ww_changed == t.ww3_changed && r.tally.n_dropped == 0;
  return r;
}

std::vector<std::string> TrialResult::failures() const {
  std::vector<std::string> out;
  if (!free_covered) out.emplace_back("free-bound-coverage");
  if (tight_applicable && !tight_covered) out.emplace_back("tight-bound-coverage");
  if (sign_sound && !*sign_sound) out.emplace_back("att-sign");
  if (!(identity_error <= kIdentityTolerance)) out.emplace_back("identity");
  if (decomposition_error && !(*decomposition_error <= kIdentityTolerance)) {
    out.emplace_back("decomposition");
  }
  if (!coarsening_ok) out.emplace_back("coarsening");
  return out;
}

std::string TrialResult::describe() const {
  std::ostringstream out;
  out << "seed=" << seed << " n=" << truth.n << " ate=" << format_real(truth.ate)
      << " att=" << (truth.att ? format_real(*truth.att) : "absent")
      << " free=[" << format_real(estimate.ate_free.lower) << "," << format_real(estimate.ate_free.upper)
      << "] tight=[" << format_real(estimate.ate_tight.lower) << ","
      << format_real(estimate.ate_tight.upper) << "] ww2=" << truth.count(LatentGroup::WW2)
      << " rr1=" << truth.count(LatentGroup::RR1) << " status=";
  const auto f = failures();
  if (!f.empty()) {
    out << "FAIL(";
    for (std::size_t i = 0; i < f.size(); ++i) out << (i ? "," : "") << f[i];
    out << ")";
  } else if (expected_violation()) {
    out << "expected-violation";
  } else {
    out << "ok";
  }
  return out.str();
}

ValidationSummary validate(const ValidationOptions& options) {
  if (options.trials == 0) throw Error(ErrorKind::Usage, "validate needs at least one trial");
  ValidationSummary s;
  s.results.reserve(options.trials);
  for (std::uint64_t i = 0; i < options.trials; ++i) {
    auto r = run_trial(options, options.seed + i);
    ++s.trials;
    s.free_covered += r.free_covered;
    if (r.tight_applicable) {
      ++s.tight_applicable;
      s.tight_covered_applicable += r.tight_covered;
    }
    s.expected_violations += r.expected_violation();
    if (r.sign_sound) {
      ++s.sign_checked;
      s.sign_sound += *r.sign_sound;
    }
    s.identity_ok += r.identity_error <= kIdentityTolerance;
    s.max_identity_error = std::max(s.max_identity_error, r.identity_error);
    if (r.decomposition_error) {
      ++s.decomposition_checked;
      s.decomposition_ok += *r.decomposition_error <= kIdentityTolerance;
      s.max_decomposition_error = std::max(s.max_decomposition_error, *r.decomposition_error);
    }
    s.coarsening_ok += r.coarsening_ok;
    if (r.failed()) s.failing_seeds.push_back(r.seed);
    s.results.push_back(std::move(r));
  }
  return s;
}

std::string ValidationSummary::format() const {
  std::ostringstream out;
  out << "trials: " << trials << '\n'
      << "free-bound coverage: " << free_covered << "/" << trials << '\n'
      << "tightened-bound coverage where freq(WW2) >= freq(RR1): " << tight_covered_applicable << "/"
      << tight_applicable << '\n'
      << "expected violations (freq(WW2) < freq(RR1), tight bound excludes ATE): "
      << expected_violations << '\n'
      << "ATT sign soundness: " << sign_sound << "/" << sign_checked << '\n'
      << "identities (tolerance 1e-12): " << identity_ok << "/" << trials
      << " (max error " << format_real(max_identity_error) << ")\n"
      << "decomposition (tolerance 1e-12): " << decomposition_ok << "/" << decomposition_checked
      << " (max error " << format_real(max_decomposition_error) << ")\n"
      << "coarsening: " << coarsening_ok << "/" << trials << '\n'
      << "result: " << (passed() ? "PASS" : "FAIL") << '\n';
  for (auto seed : failing_seeds) out << "failing seed: " << seed << '\n';
  return out.str();
}

}  // namespace reviewbounds

#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "error.hpp"
#include "estimator.hpp"
#include "simulator.hpp"

using namespace reviewbounds;
using Catch::Approx;

namespace {

constexpr double kTol = 1e-12;

ItemProportions props(double ww, double wr, double rw, double rr, double kappa) {
  return ItemProportions{ww, wr, rw, rr, kappa};
}

// Item #38 of the operational exam: 595 WR and 1238 RW of 71,902 examinees.
// The WW/RR split of the remainder is arbitrary.
ItemTally item38() { return ItemTally{"38", 20000, 595, 1238, 71902 - 20000 - 595 - 1238, 150, 0}; }

ItemProportions random_props(std::mt19937_64& rng) {
  std::exponential_distribution<double> e(1.0);
  double x[4];
  double s = 0.0;
  for (double& v : x) s += (v = e(rng));
  const double ww = x[0] / s;
  return props(ww, x[1] / s, x[2] / s, x[3] / s,
               ww * std::uniform_real_distribution<double>(0.0, 1.0)(rng));
}

}  // namespace

TEST_CASE("ATT sign from the WR/RW ordering", "[estimator]") {
  CHECK(attSign(props(0.3, 0.3, 0.1, 0.3, 0.1)) == Sign::Positive);
  CHECK(attSign(props(0.3, 0.2, 0.2, 0.3, 0.0)) == Sign::Indeterminate);
  CHECK(attSign(props(0.3, 0.1, 0.2, 0.4, 0.0)) == Sign::Negative);
  CHECK(attSign(item38()) == Sign::Negative);
  CHECK(attSign(proportions(item38())) == Sign::Negative);
}

TEST_CASE("assumption-free ATE bounds", "[estimator]") {
  auto b = ateBoundsFree(props(0.3, 0.3, 0.1, 0.3, 0.1));
  CHECK(b.lower == Approx(-0.1).margin(kTol));
  CHECK(b.upper == Approx(0.4).margin(kTol));
  CHECK(b.sign_verdict == Sign::Indeterminate);
  CHECK_FALSE(b.assumption_used);

  b = ateBoundsFree(props(0, 0, 0, 1, 0));
  CHECK(b.lower == -1.0);
  CHECK(b.upper == 0.0);
  CHECK(b.sign_verdict == Sign::Indeterminate);

  b = ateBoundsFree(props(0, 1, 0, 0, 0));
  CHECK(b.lower == 1.0);
  CHECK(b.upper == 1.0);
  CHECK(b.sign_verdict == Sign::Positive);

  b = ateBoundsFree(props(0.1, 0.0, 0.5, 0.4, 0.0));
  CHECK(b.upper == Approx(-0.4).margin(kTol));
  CHECK(b.sign_verdict == Sign::Negative);
}

TEST_CASE("tightened ATE bounds", "[estimator]") {
  auto b = ateBoundsTightened(props(0.3, 0.3, 0.1, 0.3, 0.1));
  CHECK(b.lower == Approx(0.2).margin(kTol));
  CHECK(b.upper == Approx(0.4).margin(kTol));
  CHECK(b.sign_verdict == Sign::Positive);
  CHECK(b.assumption_used);

  b = ateBoundsTightened(props(0.3, 0.1, 0.1, 0.5, 0.05));
  CHECK(b.lower == 0.0);
  CHECK(b.upper == Approx(0.25).margin(kTol));
  CHECK(b.sign_verdict == Sign::Indeterminate);

  b = ateBoundsTightened(item38());
  CHECK(b.lower == Approx(-643.0 / 71902.0).margin(1e-9));
  CHECK(b.lower == Approx(-0.008943).margin(5e-7));
  CHECK(b.sign_verdict == Sign::Indeterminate);
}

TEST_CASE("ATU bound and assumed ATU sign", "[estimator]") {
  const auto b = atuBoundsFree();
  CHECK(b.lower == -1.0);
  CHECK(b.upper == 1.0);
  CHECK(b.sign_verdict == Sign::Indeterminate);
  CHECK_FALSE(b.assumption_used);
  CHECK(atuSignUnderAssumption(true) == AssumedSign::Positive);
  CHECK(atuSignUnderAssumption(false) == AssumedSign::NotAsserted);

  CHECK(analyzeItem(ItemTally{"rr", 0, 0, 0, 7, 0, 0}, true).atu_sign_under_assumption ==
        AssumedSign::Positive);
  CHECK(analyzeItem(ItemTally{"wr", 0, 7, 0, 0, 0, 0}, true).atu_free.width() == 2.0);
}

TEST_CASE("strict sign verdicts at zero", "[estimator]") {
  CHECK(make_bound(0.0, 0.5, false).sign_verdict == Sign::Indeterminate);
  CHECK(make_bound(-0.5, 0.0, false).sign_verdict == Sign::Indeterminate);
  CHECK(make_bound(1e-300, 0.5, false).sign_verdict == Sign::Positive);
  CHECK(make_bound(-0.5, -1e-300, false).sign_verdict == Sign::Negative);
}

TEST_CASE("analyzeItem composes the estimands", "[estimator]") {
  auto e = analyzeItem(ItemTally{"q", 3, 3, 1, 3, 1, 0});
  CHECK(e.att_sign == Sign::Positive);
  CHECK(e.ate_free.lower == Approx(-0.1).margin(kTol));
  CHECK(e.ate_free.upper == Approx(0.4).margin(kTol));
  CHECK(e.ate_tight.lower == Approx(0.2).margin(kTol));
  CHECK(e.ate_tight.upper == Approx(0.4).margin(kTol));
  CHECK(e.atu_sign_under_assumption == AssumedSign::NotAsserted);

  e = analyzeItem(ItemTally{"rr", 0, 0, 0, 9, 0, 2});
  CHECK(e.att_sign == Sign::Indeterminate);
  CHECK(e.ate_free.lower == -1.0);
  CHECK(e.ate_free.upper == 0.0);
  CHECK(e.tally.n_dropped == 2);

  e = analyzeItem(item38());
  CHECK(e.att_sign == Sign::Negative);
  CHECK(e.ate_tight.sign_verdict == Sign::Indeterminate);

  CHECK_THROWS_AS(analyzeItem(ItemTally{"empty", 0, 0, 0, 0, 0, 4}), Error);
}

TEST_CASE("bound algebra over random proportions", "[estimator][property]") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 2000; ++i) {
    const auto p = random_props(rng);
    const auto f = ateBoundsFree(p);
    const auto t = ateBoundsTightened(p);
    REQUIRE(t.lower >= f.lower);
    REQUIRE(t.upper == f.upper);
    REQUIRE(std::abs(f.width() - (p.p_ww + p.p_rr - p.kappa)) <= kTol);
    REQUIRE(std::abs(t.width() - (p.p_ww - p.kappa)) <= kTol);
    for (double v : {f.lower, f.upper, t.lower, t.upper}) {
      REQUIRE(v >= -1.0 - kTol);
      REQUIRE(v <= 1.0 + kTol);
    }
    REQUIRE(f.lower <= f.upper + kTol);
    REQUIRE(t.lower <= t.upper + kTol);
  }
}

TEST_CASE("ATT sign depends only on the WR/RW ordering", "[estimator][property]") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<std::uint64_t> count(0, 500);
  for (int i = 0; i < 1000; ++i) {
    ItemTally t{"q", count(rng), count(rng), count(rng), count(rng) + 1, 0, 0};
    const Sign base = attSign(t);
    // Moving WW/RR mass around, or scaling every count, keeps the ordering.
    ItemTally moved = t;
    moved.n_ww += count(rng);
    moved.n_rr = count(rng) + 1;
    ItemTally scaled{"q", 3 * t.n_ww, 3 * t.n_wr, 3 * t.n_rw, 3 * t.n_rr, 0, 0};
    REQUIRE(attSign(moved) == base);
    REQUIRE(attSign(scaled) == base);
    REQUIRE(attSign(proportions(t)) == base);
  }
}

TEST_CASE("count-based and proportion-based bounds agree", "[estimator]") {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<std::uint64_t> count(0, 100000);
  for (int i = 0; i < 500; ++i) {
    ItemTally t{"q", count(rng), count(rng), count(rng), count(rng) + 1, 0, 0};
    t.n_ww_changed = t.n_ww / 3;
    const auto a = ateBoundsFree(t), b = ateBoundsFree(proportions(t));
    REQUIRE(std::abs(a.lower - b.lower) <= kTol);
    REQUIRE(std::abs(a.upper - b.upper) <= kTol);
    const auto c = ateBoundsTightened(t), d = ateBoundsTightened(proportions(t));
    REQUIRE(std::abs(c.lower - d.lower) <= kTol);
  }
}

TEST_CASE("bootstrap gap interval", "[estimator][bootstrap]") {
  SECTION("constant item") {
    const auto g = bootstrapGapInterval(ItemTally{"wr", 0, 50, 0, 0, 0, 0}, {200, 0.95, 1});
    CHECK(g.lower == 1.0);
    CHECK(g.upper == 1.0);
  }
  SECTION("balanced item straddles zero") {
    const auto g = bootstrapGapInterval(ItemTally{"b", 4000, 1000, 1000, 4000, 0, 0}, {500, 0.95, 9});
    CHECK(g.lower < 0.0);
    CHECK(g.upper > 0.0);
  }
  SECTION("deterministic under a seed") {
    const ItemTally t{"q", 40, 25, 10, 25, 3, 0};
    const auto a = bootstrapGapInterval(t, {300, 0.9, 5});
    const auto b = bootstrapGapInterval(t, {300, 0.9, 5});
    CHECK(a.lower == b.lower);
    CHECK(a.upper == b.upper);
    CHECK(a.lower <= 0.15);
    CHECK(a.upper >= 0.15);
  }
  SECTION("record and tally entry points agree") {
    const AnswerKey key("q", "A", 4);
    std::vector<ResponseRecord> rs;
    for (int i = 0; i < 30; ++i) {
      rs.push_back({"e" + std::to_string(i), "q", i % 3 ? "B" : "A", i % 2 ? "A" : "B"});
    }
    rs.push_back({"blank", "q", "", "A"});
    const auto a = bootstrapGapInterval(rs, key, {200, 0.95, 4});
    const auto b = bootstrapGapInterval(tallyItem(rs, key), {200, 0.95, 4});
    CHECK(a.lower == b.lower);
    CHECK(a.upper == b.upper);
  }
  SECTION("argument checks") {
    const ItemTally small{"s", 3, 3, 3, 0, 0, 0};
    try {
      bootstrapGapInterval(small, {200, 0.95, 1});
      FAIL("expected insufficient data");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::InsufficientData);
    }
    const ItemTally ok{"s", 30, 30, 30, 0, 0, 0};
    CHECK_THROWS_AS(bootstrapGapInterval(ok, {99, 0.95, 1}), Error);
    CHECK_THROWS_AS(bootstrapGapInterval(ok, {100, 1.0, 1}), Error);
    CHECK_THROWS_AS(bootstrapGapInterval(ok, {100, 0.0, 1}), Error);
  }
}

// Monte Carlo coverage study: a population whose true gap P(WR) - P(RW) is
// 0.10, N = 10,000 per repetition, 1,000 repetitions, 95% intervals. The
// percentile interval should cover the true gap in at least 90% of them.
TEST_CASE("bootstrap coverage via the simulator", "[estimator][bootstrap][slow]") {
  const AnswerKey key("q", "A", 4);
  SimConfig cfg;
  cfg.group_probs = {0.10, 0.10, 0.10, 0.20, 0.10, 0.05, 0.05, 0.30};
  cfg.ww3_change_prob = 0.3;
  cfg.population = 10000;
  int covered = 0;
  constexpr int kReps = 1000;
  for (int rep = 0; rep < kReps; ++rep) {
    cfg.seed = 1000 + static_cast<std::uint64_t>(rep);
    const auto tally = tallyItem(projectObserved(generate(cfg, key)), key);
    const auto g = bootstrapGapInterval(tally, {200, 0.95, static_cast<std::uint64_t>(rep)});
    covered += (g.lower <= 0.10 && 0.10 <= g.upper);
  }
  INFO("covered " << covered << " of " << kReps);
  CHECK(covered >= 900);
}

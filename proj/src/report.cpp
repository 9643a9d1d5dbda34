#include "report.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "error.hpp"
#include "random.hpp"

namespace reviewbounds {

using nlohmann::json;
using nlohmann::ordered_json;

void VerdictCounts::add(Sign s) noexcept {
  switch (s) {
    case Sign::Positive: ++positive; break;
    case Sign::Negative: ++negative; break;
    case Sign::Indeterminate: ++indeterminate; break;
  }
}

namespace {

void summarize(Report& r) {
  ReportSummary s;
  s.n_items = r.per_item.size() + r.flagged.size();
  s.flagged = r.flagged.size();
  for (const auto& e : r.per_item) {
    s.att.add(e.att_sign);
    s.ate_free.add(e.ate_free.sign_verdict);
    s.ate_tight.add(e.ate_tight.sign_verdict);
    s.ate.add(r.assume_ww2_gt_rr1 ? e.ate_tight.sign_verdict : e.ate_free.sign_verdict);
  }
  r.summary = s;
}

}  // namespace

Report analyze(const Dataset& dataset, const AnalyzeOptions& options) {
  if (options.bootstrap) checkBootstrapOptions(*options.bootstrap);
  Report r;
  r.assume_ww2_gt_rr1 = options.assume_ww2_gt_rr1;
  r.bootstrap = options.bootstrap;
  r.n_examinees = dataset.n_examinees;
  r.n_rows = dataset.n_rows;
  for (std::size_t j = 0; j < dataset.tallies.size(); ++j) {
    const auto& tally = dataset.tallies[j];
    r.n_dropped += tally.n_dropped;
    r.n_analyzed += tally.total();
    if (tally.total() == 0) {
      r.flagged.push_back(FlaggedItem{tally.item_id, tally.n_dropped, "no analyzable records"});
      continue;
    }
    auto est = analyzeItem(tally, options.assume_ww2_gt_rr1);
    if (options.bootstrap && tally.total() >= 10) {
      BootstrapOptions b = *options.bootstrap;
      b.seed = derive_seed(options.bootstrap->seed, j);
      est.bootstrap_gap = bootstrapGapInterval(tally, b);
    }
    r.per_item.push_back(std::move(est));
  }
  summarize(r);
  return r;
}

namespace {

ordered_json bound_json(const EffectBound& b) {
  return ordered_json{{"lower", b.lower},
                      {"upper", b.upper},
                      {"sign_verdict", to_string(b.sign_verdict)},
                      {"assumption_used", b.assumption_used}};
}

EffectBound bound_from(const json& j) {
  return EffectBound{j.at("lower").get<double>(), j.at("upper").get<double>(),
                     parse_sign(j.at("sign_verdict").get<std::string>()),
                     j.at("assumption_used").get<bool>()};
}

ordered_json counts_json(const VerdictCounts& c) {
  return ordered_json{{"positive", c.positive}, {"negative", c.negative}, {"indeterminate", c.indeterminate}};
}

}  // namespace

ordered_json to_json(const Report& report) {
  ordered_json items = ordered_json::array();
  for (const auto& e : report.per_item) {
    const auto& t = e.tally;
    const auto& p = e.proportions;
    ordered_json item{
        {"item_id", e.item_id},
        {"counts",
         {{"n_ww", t.n_ww},
          {"n_wr", t.n_wr},
          {"n_rw", t.n_rw},
          {"n_rr", t.n_rr},
          {"n_ww_changed", t.n_ww_changed},
          {"n_dropped", t.n_dropped}}},
        {"proportions",
         {{"p_ww", p.p_ww}, {"p_wr", p.p_wr}, {"p_rw", p.p_rw}, {"p_rr", p.p_rr}, {"kappa", p.kappa}}},
        {"att_sign", to_string(e.att_sign)},
        {"ate_free", bound_json(e.ate_free)},
        {"ate_tight", bound_json(e.ate_tight)},
        {"atu_free", bound_json(e.atu_free)},
        {"atu_sign_under_assumption", to_string(e.atu_sign_under_assumption)},
    };
    if (e.bootstrap_gap) {
      item["bootstrap_gap"] = {{"lower", e.bootstrap_gap->lower},
                               {"upper", e.bootstrap_gap->upper},
                               {"level", e.bootstrap_gap->level},
                               {"replicates", e.bootstrap_gap->replicates}};
    }
    items.push_back(std::move(item));
  }
  ordered_json flagged = ordered_json::array();
  for (const auto& f : report.flagged) {
    flagged.push_back({{"item_id", f.item_id}, {"n_dropped", f.n_dropped}, {"reason", f.reason}});
  }
  ordered_json doc{
      {"assume_ww2_gt_rr1", report.assume_ww2_gt_rr1},
      {"n_examinees", report.n_examinees},
      {"n_rows", report.n_rows},
      {"n_analyzed", report.n_analyzed},
      {"n_dropped", report.n_dropped},
      {"summary",
       {{"n_items", report.summary.n_items},
        {"flagged", report.summary.flagged},
        {"att_sign", counts_json(report.summary.att)},
        {"ate_sign_free", counts_json(report.summary.ate_free)},
        {"ate_sign_tight", counts_json(report.summary.ate_tight)},
        {"ate_sign", counts_json(report.summary.ate)}}},
      {"items", std::move(items)},
      {"flagged_items", std::move(flagged)},
  };
  if (report.bootstrap) {
    doc["bootstrap"] = {{"replicates", report.bootstrap->replicates},
                        {"level", report.bootstrap->level},
                        {"seed", report.bootstrap->seed}};
  }
  return doc;
}

Report report_from_json(const json& doc) {
  try {
    Report r;
    r.assume_ww2_gt_rr1 = doc.at("assume_ww2_gt_rr1").get<bool>();
    r.n_examinees = doc.at("n_examinees").get<std::uint64_t>();
    r.n_rows = doc.at("n_rows").get<std::uint64_t>();
    r.n_analyzed = doc.at("n_analyzed").get<std::uint64_t>();
    r.n_dropped = doc.at("n_dropped").get<std::uint64_t>();
    if (doc.contains("bootstrap")) {
      const auto& b = doc.at("bootstrap");
      r.bootstrap = BootstrapOptions{b.at("replicates").get<int>(), b.at("level").get<double>(),
                                     b.at("seed").get<std::uint64_t>()};
    }
    for (const auto& item : doc.at("items")) {
      ItemEstimate e;
      e.item_id = item.at("item_id").get<std::string>();
      const auto& c = item.at("counts");
      e.tally.item_id = e.item_id;
      e.tally.n_ww = c.at("n_ww").get<std::uint64_t>();
      e.tally.n_wr = c.at("n_wr").get<std::uint64_t>();
      e.tally.n_rw = c.at("n_rw").get<std::uint64_t>();
      e.tally.n_rr = c.at("n_rr").get<std::uint64_t>();
      e.tally.n_ww_changed = c.at("n_ww_changed").get<std::uint64_t>();
      e.tally.n_dropped = c.at("n_dropped").get<std::uint64_t>();
      const auto& p = item.at("proportions");
      e.proportions = ItemProportions{p.at("p_ww").get<double>(), p.at("p_wr").get<double>(),
                                      p.at("p_rw").get<double>(), p.at("p_rr").get<double>(),
                                      p.at("kappa").get<double>()};
      e.att_sign = parse_sign(item.at("att_sign").get<std::string>());
      e.ate_free = bound_from(item.at("ate_free"));
      e.ate_tight = bound_from(item.at("ate_tight"));
      e.atu_free = bound_from(item.at("atu_free"));
      e.atu_sign_under_assumption =
          parse_assumed_sign(item.at("atu_sign_under_assumption").get<std::string>());
      if (item.contains("bootstrap_gap")) {
        const auto& g = item.at("bootstrap_gap");
        e.bootstrap_gap = GapInterval{g.at("lower").get<double>(), g.at("upper").get<double>(),
                                      g.at("level").get<double>(), g.at("replicates").get<int>()};
      }
      r.per_item.push_back(std::move(e));
    }
    for (const auto& f : doc.at("flagged_items")) {
      r.flagged.push_back(FlaggedItem{f.at("item_id").get<std::string>(),
                                      f.at("n_dropped").get<std::uint64_t>(),
                                      f.at("reason").get<std::string>()});
    }
    summarize(r);
    return r;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::MalformedInput, std::string("report JSON: ") + e.what());
  }
}

void writeReportJson(const Report& report, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::Io, "cannot open '" + path.string() + "' for writing");
  out << to_json(report).dump(2) << '\n';
  if (!out) throw Error(ErrorKind::Io, "failed writing '" + path.string() + "'");
}

Report readReportJson(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open '" + path.string() + "' for reading");
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::MalformedInput, path.string() + ": " + e.what());
  }
  return report_from_json(doc);
}

namespace {

std::string fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

std::string interval(const EffectBound& b) { return "[" + fixed(b.lower) + ", " + fixed(b.upper) + "]"; }

std::string verdicts(const VerdictCounts& c) {
  return std::to_string(c.positive) + " positive / " + std::to_string(c.negative) + " negative / " +
         std::to_string(c.indeterminate) + " indeterminate";
}

}  // namespace

std::string formatReportTable(const Report& report) {
  const std::vector<std::string> header = {"item",     "n",         "dropped",   "P(WR)",
                                           "P(RW)",    "kappa",     "ATT sign",  "ATE free",
                                           "ATE tight", "ATE sign"};
  std::vector<std::vector<std::string>> rows;
  for (const auto& e : report.per_item) {
    const Sign ate = report.assume_ww2_gt_rr1 ? e.ate_tight.sign_verdict : e.ate_free.sign_verdict;
    rows.push_back({e.item_id, std::to_string(e.tally.total()), std::to_string(e.tally.n_dropped),
                    fixed(e.proportions.p_wr), fixed(e.proportions.p_rw), fixed(e.proportions.kappa),
                    std::string(to_string(e.att_sign)), interval(e.ate_free), interval(e.ate_tight),
                    std::string(to_string(ate))});
  }
  std::vector<std::size_t> width(header.size());
  for (std::size_t c = 0; c < header.size(); ++c) {
    width[c] = header[c].size();
    for (const auto& row : rows) width[c] = std::max(width[c], row[c].size());
  }
  std::ostringstream out;
  auto emit = [&](const std::vector<std::string>& row) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out << "  ";
      // Left-align text columns, right-align numbers.
      const bool left = c == 0 || c == 6 || c == 9;
      const std::string pad(width[c] - row[c].size(), ' ');
      out << (left ? row[c] + pad : pad + row[c]);
    }
    out << '\n';
  };
  emit(header);
  for (const auto& row : rows) emit(row);

  out << '\n';
  for (const auto& f : report.flagged) {
    out << "flagged item " << f.item_id << ": " << f.reason << " (" << f.n_dropped << " dropped)\n";
  }
  const auto& s = report.summary;
  out << "items: " << s.n_items << " (" << report.per_item.size() << " analyzed, " << s.flagged
      << " flagged)\n";
  out << "records: " << report.n_rows << " rows, " << report.n_analyzed << " analyzed, "
      << report.n_dropped << " dropped (blank answers)\n";
  out << "ATT sign: " << verdicts(s.att) << '\n';
  out << "ATE sign (assumption-free bound): " << verdicts(s.ate_free) << '\n';
  out << "ATE sign (tightened bound, needs P(WW2) > P(RR1)): " << verdicts(s.ate_tight) << '\n';
  if (report.assume_ww2_gt_rr1) {
    out << "assumption P(WW2) > P(RR1): asserted; ATU sign positive for every item\n";
  } else {
    out << "assumption P(WW2) > P(RR1): not asserted; ATU bound [-1, 1], sign unknown\n";
  }
  return out.str();
}

}  // namespace reviewbounds

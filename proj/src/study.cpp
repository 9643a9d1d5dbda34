#include "study.hpp"

#include <fstream>

#include "dataset.hpp"
#include "error.hpp"
#include "random.hpp"

namespace reviewbounds {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

template <typename T>
T field_or(const json& obj, const json& parent, const char* name, T fallback) {
  if (obj.contains(name)) return obj.at(name).get<T>();
  if (parent.contains(name)) return parent.at(name).get<T>();
  return fallback;
}

Allocation parse_allocation(const std::string& s) {
  if (s == "iid") return Allocation::Iid;
  if (s == "exact") return Allocation::Exact;
  throw Error(ErrorKind::Configuration, "allocation must be \"iid\" or \"exact\", got \"" + s + "\"");
}

StudyItem parse_item(const json& obj, const json& top, std::optional<std::size_t> position) {
  SimConfig c;
  c.num_alternatives = field_or<int>(obj, top, "num_alternatives", 4);
  c.population = field_or<std::uint64_t>(obj, top, "population", 1000);
  c.allocation = parse_allocation(field_or<std::string>(obj, top, "allocation", "iid"));
  const auto base_seed = top.value<std::uint64_t>("seed", 0);
  c.seed = obj.contains("seed") || !position ? field_or<std::uint64_t>(obj, top, "seed", 0)
                                             : derive_seed(base_seed, *position);
  const bool has_change = obj.contains("ww3_change_prob") || top.contains("ww3_change_prob");
  c.ww3_change_prob = field_or<double>(obj, top, "ww3_change_prob", 0.0);

  const json& src = obj.contains("group_counts") || obj.contains("group_probs") ? obj : top;
  bool has_probs = true;
  if (src.contains("group_counts")) {
    const auto counts = src.at("group_counts").get<std::vector<std::uint64_t>>();
    if (counts.size() != kNumGroups) {
      throw Error(ErrorKind::Configuration, "group_counts needs 8 entries");
    }
    std::uint64_t n = 0;
    for (auto k : counts) n += k;
    if (n == 0) throw Error(ErrorKind::Configuration, "group_counts must not all be zero");
    for (std::size_t g = 0; g < kNumGroups; ++g) {
      c.group_probs[g] = static_cast<double>(counts[g]) / static_cast<double>(n);
    }
    c.population = n;
    c.allocation = Allocation::Exact;
  } else if (src.contains("group_probs")) {
    const auto probs = src.at("group_probs").get<std::vector<double>>();
    if (probs.size() != kNumGroups) {
      throw Error(ErrorKind::Configuration, "group_probs needs 8 entries");
    }
    std::copy(probs.begin(), probs.end(), c.group_probs.begin());
  } else {
    has_probs = false;
  }

  const std::string default_id = position ? "item" + std::to_string(*position + 1) : "item1";
  AnswerKey key(field_or<std::string>(obj, top, "item_id", default_id),
                field_or<std::string>(obj, top, "correct_choice", "A"), c.num_alternatives);

  if (has_probs) c.validate();
  return StudyItem{std::move(key), c, has_probs, has_change};
}

}  // namespace

StudyConfig parseStudyConfig(const json& doc) {
  if (!doc.is_object()) throw Error(ErrorKind::Configuration, "config must be a JSON object");
  try {
    StudyConfig study;
    if (doc.contains("items")) {
      const auto& items = doc.at("items");
      if (!items.is_array() || items.empty()) {
        throw Error(ErrorKind::Configuration, "\"items\" must be a nonempty array");
      }
      for (std::size_t j = 0; j < items.size(); ++j) {
        study.items.push_back(parse_item(items[j], doc, j));
      }
    } else {
      study.items.push_back(parse_item(doc, json::object(), std::nullopt));
    }
    std::vector<std::string> ids;
    for (const auto& it : study.items) {
      for (const auto& id : ids) {
        if (id == it.key.item_id()) {
          throw Error(ErrorKind::Configuration, "duplicate item_id '" + id + "' in config");
        }
      }
      ids.push_back(it.key.item_id());
    }
    return study;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Configuration, std::string("config: ") + e.what());
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Configuration) throw;
    throw Error(ErrorKind::Configuration, std::string("config: ") + e.what());
  }
}

StudyConfig loadStudyConfig(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open '" + path.string() + "' for reading");
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Configuration, path.string() + ": " + e.what());
  }
  return parseStudyConfig(doc);
}

ordered_json ground_truth_json(const AnswerKey& key, const GroundTruth& truth) {
  ordered_json counts = ordered_json::object();
  ordered_json freqs = ordered_json::object();
  for (auto g : kAllGroups) {
    counts[std::string(to_string(g))] = truth.count(g);
    freqs[std::string(to_string(g))] = truth.latent_freqs[index_of(g)];
  }
  return ordered_json{
      {"item_id", key.item_id()},
      {"n", truth.n},
      {"ate", truth.ate},
      {"att", truth.att ? ordered_json(*truth.att) : ordered_json(nullptr)},
      {"atu", truth.atu ? ordered_json(*truth.atu) : ordered_json(nullptr)},
      {"p_treated", truth.p_treated},
      {"ww3_changed", truth.ww3_changed},
      {"latent_counts", std::move(counts)},
      {"latent_freqs", std::move(freqs)},
  };
}

StudyOutput simulateStudy(const StudyConfig& study, const std::filesystem::path& out_dir) {
  for (const auto& it : study.items) {
    if (!it.has_group_probs) {
      throw Error(ErrorKind::Configuration,
                  "item '" + it.key.item_id() + "': simulate needs group_probs or group_counts");
    }
  }
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw Error(ErrorKind::Io, "cannot create directory '" + out_dir.string() + "'");

  auto open = [](const std::filesystem::path& p) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw Error(ErrorKind::Io, "cannot open '" + p.string() + "' for writing");
    return out;
  };
  auto responses = open(out_dir / "responses.csv");
  writeResponsesHeader(responses);

  StudyOutput result;
  ordered_json truth_items = ordered_json::array();
  for (const auto& it : study.items) {
    const auto latent = generate(it.config, it.key);
    const auto observed = projectObserved(latent);
    writeResponses(responses, observed);
    result.keys.push_back(it.key);
    result.truths.push_back(groundTruth(latent));
    truth_items.push_back(ground_truth_json(it.key, result.truths.back()));
  }
  if (!responses) throw Error(ErrorKind::Io, "failed writing responses.csv");

  auto keys = open(out_dir / "keys.csv");
  writeKeys(keys, result.keys);
  auto truth = open(out_dir / "ground_truth.json");
  truth << ordered_json{{"items", std::move(truth_items)}}.dump(2) << '\n';
  if (!keys || !truth) throw Error(ErrorKind::Io, "failed writing simulation output");
  return result;
}

}  // namespace reviewbounds

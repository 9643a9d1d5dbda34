#include "dataset.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <unordered_map>

#include "error.hpp"

namespace reviewbounds {

namespace {

std::string_view trim_line(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  return line;
}

// Exactly N comma-separated fields, or nullopt.
template <std::size_t N>
std::optional<std::array<std::string_view, N>> split_fields(std::string_view line,
                                                            std::size_t& found) {
  std::array<std::string_view, N> out{};
  found = 0;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    const auto end = comma == std::string_view::npos ? line.size() : comma;
    if (found < N) out[found] = line.substr(start, end - start);
    ++found;
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  if (found != N) return std::nullopt;
  return out;
}

void expect_header(std::istream& in, std::string_view header, std::string_view what) {
  std::string line;
  if (!std::getline(in, line)) {
    throw Error(ErrorKind::MalformedInput, std::string(what) + ": empty file, expected header '" +
                                               std::string(header) + "'");
  }
  std::string_view got = trim_line(line);
  if (got.starts_with("\xEF\xBB\xBF")) got.remove_prefix(3);
  if (got != header) {
    throw Error(ErrorKind::MalformedInput, std::string(what) + " line 1: expected header '" +
                                               std::string(header) + "', got '" +
                                               std::string(got) + "'");
  }
}

std::string line_prefix(std::string_view what, std::uint64_t line_no) {
  return std::string(what) + " line " + std::to_string(line_no) + ": ";
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open '" + path.string() + "' for reading");
  return in;
}

std::vector<AnswerKey> read_keys(std::istream& in) {
  expect_header(in, kKeysHeader, "keys");
  std::vector<AnswerKey> keys;
  std::set<std::string, std::less<>> seen;
  std::string line;
  std::uint64_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    const auto text = trim_line(line);
    if (text.empty()) continue;
    std::size_t found = 0;
    auto fields = split_fields<3>(text, found);
    if (!fields) {
      throw Error(ErrorKind::MalformedInput, line_prefix("keys", line_no) + "expected 3 fields, got " +
                                                 std::to_string(found));
    }
    auto [item, correct, m_text] = *fields;
    if (item.empty()) {
      throw Error(ErrorKind::MalformedInput, line_prefix("keys", line_no) + "empty item_id");
    }
    int m = 0;
    auto [ptr, ec] = std::from_chars(m_text.data(), m_text.data() + m_text.size(), m);
    if (ec != std::errc{} || ptr != m_text.data() + m_text.size()) {
      throw Error(ErrorKind::MalformedInput, line_prefix("keys", line_no) +
                                                 "num_alternatives is not an integer: '" +
                                                 std::string(m_text) + "'");
    }
    if (!seen.emplace(item).second) {
      throw Error(ErrorKind::MalformedInput,
                  line_prefix("keys", line_no) + "duplicate key for item '" + std::string(item) + "'");
    }
    try {
      keys.emplace_back(std::string(item), std::string(correct), m);
    } catch (const Error& e) {
      throw Error(ErrorKind::MalformedInput, line_prefix("keys", line_no) + e.what());
    }
  }
  return keys;
}

}  // namespace

const ItemTally* Dataset::find(std::string_view item_id) const {
  for (const auto& t : tallies) {
    if (t.item_id == item_id) return &t;
  }
  return nullptr;
}

std::vector<AnswerKey> loadKeys(const std::filesystem::path& key_path) {
  auto in = open_input(key_path);
  return read_keys(in);
}

Dataset loadResponses(const std::filesystem::path& responses_path,
                      const std::filesystem::path& key_path) {
  auto keys = open_input(key_path);
  auto responses = open_input(responses_path);
  return loadResponses(responses, keys);
}

Dataset loadResponses(std::istream& responses, std::istream& keys_in) {
  Dataset ds;
  ds.keys = read_keys(keys_in);
  ds.n_items = ds.keys.size();

  std::unordered_map<std::string, std::size_t> item_index;
  std::vector<TallyAccumulator> acc;
  acc.reserve(ds.keys.size());
  for (std::size_t j = 0; j < ds.keys.size(); ++j) {
    item_index.emplace(ds.keys[j].item_id(), j);
    acc.emplace_back(ds.keys[j]);
  }

  std::unordered_map<std::string, std::uint32_t> examinee_index;
  // first_line[item][examinee] = line of the first response, 0 if unseen.
  std::vector<std::vector<std::uint64_t>> first_line(ds.keys.size());
  std::set<std::string> unknown_items;

  expect_header(responses, kResponsesHeader, "responses");
  std::string line;
  std::uint64_t line_no = 1;
  ResponseRecord rec;
  while (std::getline(responses, line)) {
    ++line_no;
    const auto text = trim_line(line);
    if (text.empty()) continue;
    std::size_t found = 0;
    auto fields = split_fields<4>(text, found);
    if (!fields) {
      throw Error(ErrorKind::MalformedInput, line_prefix("responses", line_no) +
                                                 "expected 4 fields, got " + std::to_string(found));
    }
    const auto& [examinee, item, first, final_choice] = *fields;
    if (examinee.empty() || item.empty()) {
      throw Error(ErrorKind::MalformedInput,
                  line_prefix("responses", line_no) + "empty examinee_id or item_id");
    }
    ++ds.n_rows;

    rec.examinee_id.assign(examinee);
    rec.item_id.assign(item);
    rec.first_choice.assign(first);
    rec.final_choice.assign(final_choice);

    auto [e_it, inserted] =
        examinee_index.try_emplace(rec.examinee_id, static_cast<std::uint32_t>(examinee_index.size()));
    const auto it = item_index.find(rec.item_id);
    if (it == item_index.end()) {
      unknown_items.insert(rec.item_id);
      continue;
    }
    const std::size_t j = it->second;
    auto& lines = first_line[j];
    if (lines.size() <= e_it->second) lines.resize(e_it->second + 1, 0);
    if (lines[e_it->second] != 0) {
      throw Error(ErrorKind::MalformedInput,
                  "responses: duplicate response for examinee '" + rec.examinee_id + "', item '" +
                      rec.item_id + "' at lines " + std::to_string(lines[e_it->second]) + " and " +
                      std::to_string(line_no));
    }
    lines[e_it->second] = line_no;
    try {
      acc[j].add(rec);
    } catch (const Error& e) {
      throw Error(ErrorKind::MalformedInput, line_prefix("responses", line_no) + e.what());
    }
  }
  if (responses.bad()) throw Error(ErrorKind::Io, "error while reading responses");
  if (!unknown_items.empty()) {
    std::string list;
    for (const auto& id : unknown_items) list += (list.empty() ? "" : ", ") + id;
    throw Error(ErrorKind::MalformedInput, "responses reference items missing from the key file: " + list);
  }

  ds.n_examinees = examinee_index.size();
  ds.tallies.reserve(acc.size());
  for (const auto& a : acc) ds.tallies.push_back(a.tally());
  return ds;
}

void writeResponsesHeader(std::ostream& out) { out << kResponsesHeader << '\n'; }

void writeResponses(std::ostream& out, std::span<const ResponseRecord> records) {
  for (const auto& r : records) {
    out << r.examinee_id << ',' << r.item_id << ',' << r.first_choice << ',' << r.final_choice
        << '\n';
  }
}

void writeKeys(std::ostream& out, std::span<const AnswerKey> keys) {
  out << kKeysHeader << '\n';
  for (const auto& k : keys) {
    out << k.item_id() << ',' << k.correct_choice() << ',' << k.num_alternatives() << '\n';
  }
}

}  // namespace reviewbounds

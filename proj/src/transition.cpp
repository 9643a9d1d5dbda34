#include "transition.hpp"

#include <charconv>

#include "error.hpp"

namespace reviewbounds {

namespace {

bool parse_index(std::string_view s, int& out) {
  if (s.empty() || (s.size() > 1 && s.front() == '0')) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && ptr == s.data() + s.size();
}

Alphabet infer_alphabet(const std::string& correct) {
  if (correct.size() == 1 && correct[0] >= 'A' && correct[0] <= 'Z') return Alphabet::UpperLetters;
  if (correct.size() == 1 && correct[0] >= 'a' && correct[0] <= 'z') return Alphabet::LowerLetters;
  int v = 0;
  if (parse_index(correct, v)) return v == 0 ? Alphabet::ZeroBasedDigits : Alphabet::OneBasedDigits;
  return Alphabet::Open;
}

}  // namespace

AnswerKey::AnswerKey(std::string item_id, std::string correct_choice, int num_alternatives)
    : item_id_(std::move(item_id)),
      correct_(std::move(correct_choice)),
      m_(num_alternatives),
      alphabet_(infer_alphabet(correct_)) {
  if (m_ < 2) {
    throw Error(ErrorKind::MalformedInput,
                "item '" + item_id_ + "': num_alternatives must be at least 2, got " +
                    std::to_string(m_));
  }
  if ((alphabet_ == Alphabet::UpperLetters || alphabet_ == Alphabet::LowerLetters) && m_ > 26) {
    throw Error(ErrorKind::MalformedInput,
                "item '" + item_id_ + "': letter keys support at most 26 alternatives");
  }
  if (correct_.empty() || !accepts(correct_)) {
    throw Error(ErrorKind::MalformedInput, "item '" + item_id_ + "': correct choice '" + correct_ +
                                               "' is not one of its " + std::to_string(m_) +
                                               " alternatives");
  }
}

bool AnswerKey::accepts(std::string_view token) const {
  switch (alphabet_) {
    case Alphabet::UpperLetters:
      return token.size() == 1 && token[0] >= 'A' && token[0] < 'A' + m_;
    case Alphabet::LowerLetters:
      return token.size() == 1 && token[0] >= 'a' && token[0] < 'a' + m_;
    case Alphabet::OneBasedDigits: {
      int v = 0;
      return parse_index(token, v) && v >= 1 && v <= m_;
    }
    case Alphabet::ZeroBasedDigits: {
      int v = 0;
      return parse_index(token, v) && v >= 0 && v < m_;
    }
    case Alphabet::Open:
      return !token.empty();
  }
  return false;
}

std::vector<std::string> AnswerKey::alternatives() const {
  std::vector<std::string> out;
  for (int i = 0; i < m_; ++i) {
    switch (alphabet_) {
      case Alphabet::UpperLetters: out.emplace_back(1, static_cast<char>('A' + i)); break;
      case Alphabet::LowerLetters: out.emplace_back(1, static_cast<char>('a' + i)); break;
      case Alphabet::OneBasedDigits: out.push_back(std::to_string(i + 1)); break;
      case Alphabet::ZeroBasedDigits: out.push_back(std::to_string(i)); break;
      case Alphabet::Open: return {};
    }
  }
  return out;
}

std::vector<std::string> AnswerKey::wrong_alternatives() const {
  auto all = alternatives();
  std::erase(all, correct_);
  return all;
}

std::string_view to_string(TransitionKind kind) {
  switch (kind) {
    case TransitionKind::WW: return "WW";
    case TransitionKind::WR: return "WR";
    case TransitionKind::RW: return "RW";
    case TransitionKind::RR: return "RR";
  }
  return "?";
}

std::optional<TransitionClass> classify(const ResponseRecord& record, const AnswerKey& key) {
  if (record.item_id != key.item_id()) {
    throw Error(ErrorKind::MalformedInput, "examinee '" + record.examinee_id + "': record item '" +
                                               record.item_id + "' classified against key for '" +
                                               key.item_id() + "'");
  }
  for (const std::string* token : {&record.first_choice, &record.final_choice}) {
    if (!token->empty() && !key.accepts(*token)) {
      throw Error(ErrorKind::MalformedInput, "examinee '" + record.examinee_id + "', item '" +
                                                 record.item_id + "': invalid choice token '" +
                                                 *token + "'");
    }
  }
  if (record.first_choice.empty() || record.final_choice.empty()) return std::nullopt;

  const bool first_right = record.first_choice == key.correct_choice();
  const bool final_right = record.final_choice == key.correct_choice();
  const bool changed = record.first_choice != record.final_choice;
  TransitionKind kind = first_right ? (final_right ? TransitionKind::RR : TransitionKind::RW)
                                    : (final_right ? TransitionKind::WR : TransitionKind::WW);
  return TransitionClass{kind, changed};
}

void ItemTally::add(const TransitionClass& cls) noexcept {
  switch (cls.kind) {
    case TransitionKind::WW:
      ++n_ww;
      if (cls.changed) ++n_ww_changed;
      break;
    case TransitionKind::WR: ++n_wr; break;
    case TransitionKind::RW: ++n_rw; break;
    case TransitionKind::RR: ++n_rr; break;
  }
}

void ItemTally::merge(const ItemTally& other) noexcept {
  n_ww += other.n_ww;
  n_wr += other.n_wr;
  n_rw += other.n_rw;
  n_rr += other.n_rr;
  n_ww_changed += other.n_ww_changed;
  n_dropped += other.n_dropped;
}

TallyAccumulator::TallyAccumulator(AnswerKey key) : key_(std::move(key)) {
  tally_.item_id = key_.item_id();
}

void TallyAccumulator::note_open_token(const ResponseRecord& record, const std::string& token) {
  if (token.empty() || seen_tokens_.contains(token)) return;
  if (seen_tokens_.empty()) seen_tokens_.insert(key_.correct_choice());
  seen_tokens_.insert(token);
  if (seen_tokens_.size() > static_cast<std::size_t>(key_.num_alternatives())) {
    throw Error(ErrorKind::MalformedInput,
                "examinee '" + record.examinee_id + "', item '" + record.item_id +
                    "': invalid choice token '" + token + "' (item declares only " +
                    std::to_string(key_.num_alternatives()) + " alternatives)");
  }
}

std::optional<TransitionClass> TallyAccumulator::add(const ResponseRecord& record) {
  auto cls = classify(record, key_);
  if (key_.alphabet() == Alphabet::Open) {
    note_open_token(record, record.first_choice);
    note_open_token(record, record.final_choice);
  }
  if (cls) {
    tally_.add(*cls);
  } else {
    ++tally_.n_dropped;
  }
  return cls;
}

ItemTally tallyItem(std::span<const ResponseRecord> records, const AnswerKey& key) {
  TallyAccumulator acc(key);
  for (const auto& r : records) acc.add(r);
  if (acc.tally().total() == 0) {
    throw Error(ErrorKind::EmptyItem, "item '" + key.item_id() + "' has no analyzable records (" +
                                          std::to_string(acc.tally().n_dropped) + " dropped)");
  }
  return acc.tally();
}

ItemProportions proportions(const ItemTally& tally) {
  const std::uint64_t n = tally.total();
  if (n == 0) {
    throw Error(ErrorKind::EmptyItem, "item '" + tally.item_id + "' has no analyzable records");
  }
  const double total = static_cast<double>(n);
  return ItemProportions{
      .p_ww = static_cast<double>(tally.n_ww) / total,
      .p_wr = static_cast<double>(tally.n_wr) / total,
      .p_rw = static_cast<double>(tally.n_rw) / total,
      .p_rr = static_cast<double>(tally.n_rr) / total,
      .kappa = static_cast<double>(tally.n_ww_changed) / total,
  };
}

}  // namespace reviewbounds

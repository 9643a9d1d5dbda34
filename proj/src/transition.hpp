#pragma once

// Observable answer-transition taxonomy: each (first, final) response pair on
// an item is classified by first-answer and final-answer correctness, and
// per-item tallies are accumulated from those classes.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace reviewbounds {

// How the set of valid choice tokens for an item is derived from its key.
// Single-letter keys imply "A".."A+m-1" (or lowercase), numeric keys imply
// "1".."m" ("0".."m-1" when the key itself is "0"). Any other key string
// leaves the alphabet open: any non-blank token is accepted, but an item may
// show at most m distinct tokens.
enum class Alphabet { UpperLetters, LowerLetters, OneBasedDigits, ZeroBasedDigits, Open };

class AnswerKey {
 public:
  // Throws Error(MalformedInput) if m < 2 or the correct choice is not one of
  // the m alternatives implied by the alphabet.
  AnswerKey(std::string item_id, std::string correct_choice, int num_alternatives);

  const std::string& item_id() const noexcept { return item_id_; }
  const std::string& correct_choice() const noexcept { return correct_; }
  int num_alternatives() const noexcept { return m_; }
  Alphabet alphabet() const noexcept { return alphabet_; }

  bool accepts(std::string_view token) const;

  // Ordered alternatives; empty for an open alphabet.
  std::vector<std::string> alternatives() const;
  // Alternatives other than the correct one; empty for an open alphabet.
  std::vector<std::string> wrong_alternatives() const;

 private:
  std::string item_id_;
  std::string correct_;
  int m_;
  Alphabet alphabet_;
};

struct ResponseRecord {
  std::string examinee_id;
  std::string item_id;
  std::string first_choice;  // empty = blank
  std::string final_choice;  // empty = blank
};

enum class TransitionKind : std::uint8_t { WW, WR, RW, RR };

std::string_view to_string(TransitionKind kind);

struct TransitionClass {
  TransitionKind kind;
  bool changed;

  bool operator==(const TransitionClass&) const = default;
};

// std::nullopt means the record is excluded (blank first or final choice).
// Throws Error(MalformedInput) for a token the key does not accept or an
// item mismatch.
std::optional<TransitionClass> classify(const ResponseRecord& record, const AnswerKey& key);

struct ItemTally {
  std::string item_id;
  std::uint64_t n_ww = 0;
  std::uint64_t n_wr = 0;
  std::uint64_t n_rw = 0;
  std::uint64_t n_rr = 0;
  std::uint64_t n_ww_changed = 0;
  std::uint64_t n_dropped = 0;

  std::uint64_t total() const noexcept { return n_ww + n_wr + n_rw + n_rr; }

  void add(const TransitionClass& cls) noexcept;
  // Counts are additive, so merge order does not matter.
  void merge(const ItemTally& other) noexcept;

  bool operator==(const ItemTally&) const = default;
};

struct ItemProportions {
  double p_ww = 0.0;
  double p_wr = 0.0;
  double p_rw = 0.0;
  double p_rr = 0.0;
  double kappa = 0.0;
};

// Incremental tally for one item. Records can be fed one at a time so a
// caller never has to hold an item's records in memory.
class TallyAccumulator {
 public:
  explicit TallyAccumulator(AnswerKey key);

  // Returns the class, or nullopt when the record was dropped.
  std::optional<TransitionClass> add(const ResponseRecord& record);

  const AnswerKey& key() const noexcept { return key_; }
  const ItemTally& tally() const noexcept { return tally_; }

 private:
  void note_open_token(const ResponseRecord& record, const std::string& token);

  AnswerKey key_;
  ItemTally tally_;
  std::unordered_set<std::string> seen_tokens_;  // open alphabets only
};

// Throws Error(EmptyItem) when no record is analyzable.
ItemTally tallyItem(std::span<const ResponseRecord> records, const AnswerKey& key);

// Throws Error(EmptyItem) on a zero total.
ItemProportions proportions(const ItemTally& tally);

}  // namespace reviewbounds

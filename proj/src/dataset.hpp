#pragma once

// Answer-sheet files.
//
//   responses.csv   examinee_id,item_id,first_choice,final_choice
//   keys.csv        item_id,correct_choice,num_alternatives
//
// UTF-8, one header line, no quoting; an empty choice field is a blank
// answer. Responses are tallied as they stream in, so loading never holds
// the individual records.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "transition.hpp"

namespace reviewbounds {

struct Dataset {
  std::vector<AnswerKey> keys;     // key-file order
  std::vector<ItemTally> tallies;  // parallel to keys
  std::uint64_t n_examinees = 0;
  std::uint64_t n_items = 0;
  std::uint64_t n_rows = 0;

  const ItemTally* find(std::string_view item_id) const;
};

std::vector<AnswerKey> loadKeys(const std::filesystem::path& key_path);

// Throws Error(MalformedInput) on a malformed row (with line number), a
// response for an item missing from the key file (listing every such item),
// or a duplicated (examinee, item) pair (with both line numbers); Error(Io)
// when a file cannot be read.
Dataset loadResponses(const std::filesystem::path& responses_path,
                      const std::filesystem::path& key_path);

// Same as above but over already-open streams.
Dataset loadResponses(std::istream& responses, std::istream& keys);

inline constexpr std::string_view kResponsesHeader = "examinee_id,item_id,first_choice,final_choice";
inline constexpr std::string_view kKeysHeader = "item_id,correct_choice,num_alternatives";

void writeResponsesHeader(std::ostream& out);
void writeResponses(std::ostream& out, std::span<const ResponseRecord> records);
void writeKeys(std::ostream& out, std::span<const AnswerKey> keys);

}  // namespace reviewbounds

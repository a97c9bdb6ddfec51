// Copyright 2026 The sqlseq Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sqlseq/example.hpp"
#include "sqlseq/text.hpp"
#include "sqlseq/vocab.hpp"

namespace sqlseq {

// Pointer-target entry for the end-of-sequence step: "point at the terminal
// slot", which the pointer model places at the last emphasized position.
inline constexpr TokenId kTerminalPointer = -1;

// One JSON object per line:
//   {"question": str, "header": [str], "types": [str],
//    "sql": {"sel": int, "agg": int, "conds": [[col, op, value], ...]}}
// `op` is an index into ["=", ">", "<"] or the operator string; `value` may be
// a string or a number. Throws a data error on malformed input.
Example parse_example(std::string_view json_line);
std::string to_json_line(const Example& example);

struct ExampleFile {
  std::vector<Example> examples;
  // Records using operators other than "=", which the linearization cannot express.
  std::size_t skipped_unsupported = 0;
};

// Malformed lines raise a data error naming the line number.
ExampleFile read_examples(const std::filesystem::path& path);
void write_examples(const std::filesystem::path& path, std::span<const Example> examples);

// Model-facing token sequences for one example, all lowercase.
struct PreparedExample {
  Tokens input;     // augmented question
  Tokens target;    // linearized SQL, without end-of-sequence
  Tokens question;  // aligned question tokens only
  int agg = 0;
};

PreparedExample prepare_example(const Example& example,
                                AugmentStyle style = AugmentStyle::keywords_first);

struct EncodedPair {
  std::vector<TokenId> input_ids;
  std::vector<TokenId> target_ids;  // ends with Vocabulary::kEos
  // Same length as target_ids; the final entry is kTerminalPointer. Absent
  // when a target token does not occur in the input.
  std::optional<std::vector<TokenId>> pointer_targets;
  std::vector<TokenId> question_ids;
  int agg = 0;

  friend bool operator==(const EncodedPair&, const EncodedPair&) = default;
};

// Input side only, for ad-hoc questions without a gold query: target stays
// empty and agg is 0.
PreparedExample prepare_question(std::string_view question, std::span<const std::string> header,
                                 AugmentStyle style = AugmentStyle::keywords_first);

EncodedPair encode_example(const PreparedExample& prepared, const Vocabulary& input_vocab,
                           const Vocabulary& target_vocab);

// {"input_ids": [...], "target_ids": [...], "pointer_targets": [...] | null,
//  "question_ids": [...], "agg": int}
std::string to_json_line(const EncodedPair& pair);
EncodedPair parse_pair(std::string_view json_line);
std::vector<EncodedPair> read_pairs(const std::filesystem::path& path);
void write_pairs(const std::filesystem::path& path, std::span<const EncodedPair> pairs);

}  // namespace sqlseq

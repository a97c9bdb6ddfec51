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

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sqlseq/example.hpp"

namespace sqlseq {

using Tokens = std::vector<std::string>;

// The fixed keyword block placed in front of every augmented input.
inline constexpr std::array<std::string_view, 10> kSqlKeywords = {
    "SELECT", "FROM", "WHERE", "COUNT", "MIN", "MAX", "AVG", "SUM", "AND", "="};

std::string to_lower(std::string_view text);

// Lowercases and splits on whitespace. A single trailing '?' on the final
// token is removed (the token is dropped if nothing remains); all other
// punctuation is kept. Throws a data error for empty input.
Tokens tokenize_question(std::string_view text);

// "Max Gross Weight" -> "Max-Gross-Weight". Case is preserved.
std::string hyphenate_header(std::string_view column);
Tokens hyphenate_headers(std::span<const std::string> header);

// Replaces question spans that spell a column name (case-insensitively) with
// the lowercase hyphenated column token. Columns may be given raw
// ("Max Gross Weight") or hyphenated ("Max-Gross-Weight"). Overlapping
// candidates resolve longest first, leftmost on ties.
Tokens align_columns(std::span<const std::string> question, std::span<const std::string> header);

enum class AugmentStyle {
  keywords_first,  // keywords ++ columns ++ question
  columns_first,   // columns ++ keywords ++ question
};

// Joins the keyword block, hyphenated columns and aligned question tokens,
// keeping the display case of each part. No separator tokens.
Tokens augment(std::span<const std::string> question_tokens, std::span<const std::string> header,
               AugmentStyle style = AugmentStyle::keywords_first);
Tokens augment(const Example& example, AugmentStyle style = AugmentStyle::keywords_first);

// "select [agg] column from [where col = value... (and col = value...)*]",
// lowercase. Condition values go through tokenize_question.
Tokens linearize_sql(const SqlTarget& sql, std::span<const std::string> header);

struct ParsedCondition {
  std::string column;
  Tokens value;
  friend bool operator==(const ParsedCondition&, const ParsedCondition&) = default;
  friend auto operator<=>(const ParsedCondition&, const ParsedCondition&) = default;
};

struct ParsedSql {
  int agg = 0;
  std::string column;
  std::vector<ParsedCondition> conds;
  friend bool operator==(const ParsedSql&, const ParsedSql&) = default;
};

// Inverse of linearize_sql. The "from" token is optional. Inside a WHERE
// clause, "and" starts a new condition only when followed by "<column> =".
// Returns nullopt for token sequences outside the grammar.
std::optional<ParsedSql> parse_sql(std::span<const std::string> tokens);

}  // namespace sqlseq

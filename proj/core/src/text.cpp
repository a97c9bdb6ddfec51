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

#include "sqlseq/text.hpp"

#include <algorithm>
#include <cctype>
#include <tuple>

#include "sqlseq/errors.hpp"

namespace sqlseq {

namespace {

constexpr std::array<std::string_view, 6> kAggNames = {"NULL", "MAX", "MIN", "COUNT", "SUM", "AVG"};
constexpr std::array<std::string_view, 6> kAggKeywords = {"", "max", "min", "count", "sum", "avg"};

Tokens split_on(std::string_view text, bool (*is_sep)(char)) {
  Tokens out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && is_sep(text[i])) ++i;
    std::size_t j = i;
    while (j < text.size() && !is_sep(text[j])) ++j;
    if (j > i) out.emplace_back(text.substr(i, j - i));
    i = j;
  }
  return out;
}

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }
bool is_hyphen(char c) { return c == '-'; }

// Lowercase word sequence a column name is spelled with in a question.
Tokens column_words(std::string_view column) {
  Tokens words = split_on(to_lower(column), is_space);
  if (words.size() == 1) {
    Tokens parts = split_on(words.front(), is_hyphen);
    if (parts.size() > 1) return parts;
  }
  return words;
}

int agg_from_keyword(std::string_view token) {
  for (int a = 1; a < kAggregationCount; ++a)
    if (token == kAggKeywords[static_cast<std::size_t>(a)]) return a;
  return 0;
}

}  // namespace

std::string_view aggregation_name(int agg) {
  if (agg < 0 || agg >= kAggregationCount) raise(ErrorKind::data, "aggregation index {} outside [0, 5]", agg);
  return kAggNames[static_cast<std::size_t>(agg)];
}

std::string_view aggregation_keyword(int agg) {
  if (agg < 0 || agg >= kAggregationCount) raise(ErrorKind::data, "aggregation index {} outside [0, 5]", agg);
  return kAggKeywords[static_cast<std::size_t>(agg)];
}

void validate(const Example& example) {
  if (example.header.empty()) raise(ErrorKind::data, "example has an empty header");
  if (example.header.size() != example.types.size())
    raise(ErrorKind::data, "header has {} columns but types has {}", example.header.size(),
          example.types.size());
  for (const auto& col : example.header)
    if (col.find_first_not_of(" \t\r\n") == std::string::npos)
      raise(ErrorKind::data, "header contains an empty column name");
  const auto& sql = example.sql;
  if (sql.agg < 0 || sql.agg >= kAggregationCount)
    raise(ErrorKind::data, "aggregation index {} outside [0, 5]", sql.agg);
  if (sql.sel >= example.header.size())
    raise(ErrorKind::data, "select column {} outside {} columns", sql.sel, example.header.size());
  for (const auto& c : sql.conds)
    if (c.column >= example.header.size())
      raise(ErrorKind::data, "condition column {} outside {} columns", c.column, example.header.size());
}

std::string to_lower(std::string_view text) {
  std::string out(text);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

Tokens tokenize_question(std::string_view text) {
  Tokens tokens = split_on(to_lower(text), is_space);
  if (!tokens.empty() && tokens.back().back() == '?') {
    tokens.back().pop_back();
    if (tokens.back().empty()) tokens.pop_back();
  }
  if (tokens.empty()) raise(ErrorKind::data, "empty question text");
  return tokens;
}

std::string hyphenate_header(std::string_view column) {
  Tokens words = split_on(column, is_space);
  std::string out;
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (i) out += '-';
    out += words[i];
  }
  return out;
}

Tokens hyphenate_headers(std::span<const std::string> header) {
  Tokens out;
  out.reserve(header.size());
  for (const auto& col : header) out.push_back(hyphenate_header(col));
  return out;
}

Tokens align_columns(std::span<const std::string> question, std::span<const std::string> header) {
  struct Candidate {
    std::size_t start;
    std::size_t length;
    std::size_t column;
  };
  Tokens lowered;
  lowered.reserve(question.size());
  for (const auto& t : question) lowered.push_back(to_lower(t));

  std::vector<Candidate> candidates;
  for (std::size_t c = 0; c < header.size(); ++c) {
    const Tokens words = column_words(header[c]);
    if (words.empty() || words.size() > lowered.size()) continue;
    for (std::size_t i = 0; i + words.size() <= lowered.size(); ++i)
      if (std::equal(words.begin(), words.end(), lowered.begin() + static_cast<std::ptrdiff_t>(i)))
        candidates.push_back({i, words.size(), c});
  }
  std::stable_sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
    return std::tie(b.length, a.start) < std::tie(a.length, b.start);
  });

  std::vector<int> owner(lowered.size(), -1);
  std::vector<const Candidate*> chosen_at(lowered.size(), nullptr);
  for (const auto& cand : candidates) {
    bool free = true;
    for (std::size_t k = cand.start; k < cand.start + cand.length; ++k) free = free && owner[k] < 0;
    if (!free) continue;
    for (std::size_t k = cand.start; k < cand.start + cand.length; ++k) owner[k] = 1;
    chosen_at[cand.start] = &cand;
  }

  Tokens out;
  for (std::size_t i = 0; i < lowered.size();) {
    if (const Candidate* cand = chosen_at[i]) {
      out.push_back(to_lower(hyphenate_header(header[cand->column])));
      i += cand->length;
    } else {
      out.push_back(lowered[i]);
      ++i;
    }
  }
  return out;
}

Tokens augment(std::span<const std::string> question_tokens, std::span<const std::string> header,
               AugmentStyle style) {
  if (question_tokens.empty()) raise(ErrorKind::data, "cannot augment an empty question");
  Tokens keywords(kSqlKeywords.begin(), kSqlKeywords.end());
  Tokens columns = hyphenate_headers(header);
  Tokens out;
  out.reserve(keywords.size() + columns.size() + question_tokens.size());
  if (style == AugmentStyle::keywords_first) {
    out.insert(out.end(), keywords.begin(), keywords.end());
    out.insert(out.end(), columns.begin(), columns.end());
  } else {
    out.insert(out.end(), columns.begin(), columns.end());
    out.insert(out.end(), keywords.begin(), keywords.end());
  }
  out.insert(out.end(), question_tokens.begin(), question_tokens.end());
  return out;
}

Tokens augment(const Example& example, AugmentStyle style) {
  const Tokens aligned = align_columns(tokenize_question(example.question), example.header);
  return augment(aligned, example.header, style);
}

Tokens linearize_sql(const SqlTarget& sql, std::span<const std::string> header) {
  if (sql.sel >= header.size())
    raise(ErrorKind::data, "select column {} outside {} columns", sql.sel, header.size());
  Tokens out{"select"};
  if (sql.agg != 0) out.emplace_back(aggregation_keyword(sql.agg));
  out.push_back(to_lower(hyphenate_header(header[sql.sel])));
  out.emplace_back("from");
  for (std::size_t i = 0; i < sql.conds.size(); ++i) {
    const Condition& c = sql.conds[i];
    if (c.column >= header.size())
      raise(ErrorKind::data, "condition column {} outside {} columns", c.column, header.size());
    if (c.op != "=") raise(ErrorKind::data, "unsupported condition operator '{}'", c.op);
    out.emplace_back(i == 0 ? "where" : "and");
    out.push_back(to_lower(hyphenate_header(header[c.column])));
    out.emplace_back("=");
    Tokens value = tokenize_question(c.value);
    out.insert(out.end(), value.begin(), value.end());
  }
  return out;
}

std::optional<ParsedSql> parse_sql(std::span<const std::string> tokens) {
  const std::size_t n = tokens.size();
  auto is_clause_word = [](const std::string& t) { return t == "from" || t == "where"; };
  if (n < 2 || tokens[0] != "select") return std::nullopt;

  ParsedSql out;
  std::size_t i = 1;
  if (int agg = agg_from_keyword(tokens[i]); agg != 0 && i + 1 < n && !is_clause_word(tokens[i + 1])) {
    out.agg = agg;
    ++i;
  }
  if (i >= n || is_clause_word(tokens[i]) || tokens[i] == "=") return std::nullopt;
  out.column = tokens[i++];
  if (i < n && tokens[i] == "from") ++i;
  if (i == n) return out;
  if (tokens[i] != "where") return std::nullopt;
  ++i;

  while (true) {
    if (i + 2 >= n) return std::nullopt;  // need column, "=", one value token
    const std::string& col = tokens[i];
    if (col == "=" || col == "and" || is_clause_word(col) || tokens[i + 1] != "=") return std::nullopt;
    std::size_t j = i + 2;
    ParsedCondition cond{col, {}};
    while (j < n && !(tokens[j] == "and" && j + 2 < n && tokens[j + 2] == "=")) {
      cond.value.push_back(tokens[j]);
      ++j;
    }
    if (cond.value.empty()) return std::nullopt;
    out.conds.push_back(std::move(cond));
    if (j == n) return out;
    i = j + 1;
  }
}

}  // namespace sqlseq

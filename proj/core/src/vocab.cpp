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

#include "sqlseq/vocab.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <utility>

#include "sqlseq/errors.hpp"
#include "sqlseq/io.hpp"

namespace sqlseq {

const std::vector<std::string>& reserved_tokens() {
  static const std::vector<std::string> kTokens = {"<pad>", "<go>", "<eos>", "<unk>"};
  return kTokens;
}

Vocabulary::Vocabulary() { assign(reserved_tokens()); }

Vocabulary Vocabulary::build(std::span<const std::vector<std::string>> corpus, std::size_t min_count) {
  std::map<std::string, std::size_t> counts;
  const auto& reserved = reserved_tokens();
  for (const auto& seq : corpus)
    for (const auto& tok : seq)
      if (std::find(reserved.begin(), reserved.end(), tok) == reserved.end()) ++counts[tok];

  std::vector<std::pair<std::string, std::size_t>> ranked(counts.begin(), counts.end());
  // std::map iteration is already lexicographic, so a stable sort on count keeps the tie order.
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });

  std::vector<std::string> tokens = reserved;
  for (auto& [tok, n] : ranked)
    if (n >= min_count) tokens.push_back(tok);
  return from_tokens(std::move(tokens));
}

Vocabulary Vocabulary::from_tokens(std::vector<std::string> tokens) {
  Vocabulary v;
  v.assign(std::move(tokens));
  return v;
}

void Vocabulary::assign(std::vector<std::string> tokens) {
  const auto& reserved = reserved_tokens();
  if (tokens.size() < kReserved || !std::equal(reserved.begin(), reserved.end(), tokens.begin()))
    raise(ErrorKind::data, "vocabulary must start with the reserved symbols <pad> <go> <eos> <unk>");
  std::unordered_map<std::string, TokenId> ids;
  ids.reserve(tokens.size());
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const auto& tok = tokens[i];
    if (tok.empty() || tok.find_first_of("\t\n") != std::string::npos)
      raise(ErrorKind::data, "invalid vocabulary token at id {}", i);
    if (!ids.emplace(tok, static_cast<TokenId>(i)).second)
      raise(ErrorKind::data, "duplicate vocabulary token '{}'", tok);
  }
  tokens_ = std::move(tokens);
  ids_ = std::move(ids);
}

TokenId Vocabulary::encode(std::string_view token) const {
  auto it = ids_.find(std::string(token));
  return it == ids_.end() ? kUnk : it->second;
}

std::vector<TokenId> Vocabulary::encode(std::span<const std::string> tokens) const {
  std::vector<TokenId> out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) out.push_back(encode(t));
  return out;
}

const std::string& Vocabulary::decode(TokenId id) const {
  if (id < 0 || static_cast<std::size_t>(id) >= tokens_.size())
    raise(ErrorKind::index, "token id {} outside vocabulary of {}", id, tokens_.size());
  return tokens_[static_cast<std::size_t>(id)];
}

std::vector<std::string> Vocabulary::decode(std::span<const TokenId> ids) const {
  std::vector<std::string> out;
  out.reserve(ids.size());
  for (TokenId id : ids) out.push_back(decode(id));
  return out;
}

bool Vocabulary::contains(std::string_view token) const { return ids_.count(std::string(token)) > 0; }

std::string Vocabulary::serialize() const {
  std::string out;
  for (std::size_t i = 0; i < tokens_.size(); ++i) {
    out += tokens_[i];
    out += '\t';
    out += std::to_string(i);
    out += '\n';
  }
  return out;
}

Vocabulary Vocabulary::parse(std::string_view text) {
  std::vector<std::string> tokens;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (line.empty()) continue;
    const std::size_t tab = line.rfind('\t');
    if (tab == std::string_view::npos) raise(ErrorKind::data, "vocabulary line {}: missing tab", line_no);
    std::size_t id = 0;
    const auto idtext = line.substr(tab + 1);
    auto [ptr, ec] = std::from_chars(idtext.data(), idtext.data() + idtext.size(), id);
    if (ec != std::errc{} || ptr != idtext.data() + idtext.size())
      raise(ErrorKind::data, "vocabulary line {}: bad id '{}'", line_no, idtext);
    if (id != tokens.size())
      raise(ErrorKind::data, "vocabulary line {}: expected id {}, got {}", line_no, tokens.size(), id);
    tokens.emplace_back(line.substr(0, tab));
  }
  return from_tokens(std::move(tokens));
}

void Vocabulary::save(const std::filesystem::path& path) const { write_text_file(path, serialize()); }

Vocabulary Vocabulary::load(const std::filesystem::path& path) { return parse(read_text_file(path)); }

}  // namespace sqlseq

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
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace sqlseq {

using TokenId = std::int32_t;

// Bijective token <-> id mapping. Ids 0..3 are reserved for the pad, go,
// end-of-sequence and unknown symbols; corpus tokens follow in descending
// frequency, ties broken lexicographically.
class Vocabulary {
 public:
  static constexpr TokenId kPad = 0;
  static constexpr TokenId kGo = 1;
  static constexpr TokenId kEos = 2;
  static constexpr TokenId kUnk = 3;
  static constexpr std::size_t kReserved = 4;

  // Reserved symbols only.
  Vocabulary();

  // Tokens occurring fewer than `min_count` times are left out (and so encode to kUnk).
  static Vocabulary build(std::span<const std::vector<std::string>> corpus, std::size_t min_count = 1);

  // From an id-ordered token list whose first four entries are the reserved symbols.
  static Vocabulary from_tokens(std::vector<std::string> tokens);

  TokenId encode(std::string_view token) const;
  std::vector<TokenId> encode(std::span<const std::string> tokens) const;
  const std::string& decode(TokenId id) const;
  std::vector<std::string> decode(std::span<const TokenId> ids) const;

  bool contains(std::string_view token) const;
  std::size_t size() const noexcept { return tokens_.size(); }
  const std::vector<std::string>& tokens() const noexcept { return tokens_; }

  // "token<TAB>id" per line, in id order.
  std::string serialize() const;
  static Vocabulary parse(std::string_view text);
  void save(const std::filesystem::path& path) const;
  static Vocabulary load(const std::filesystem::path& path);

  friend bool operator==(const Vocabulary& a, const Vocabulary& b) { return a.tokens_ == b.tokens_; }

 private:
  void assign(std::vector<std::string> tokens);

  std::vector<std::string> tokens_;
  std::unordered_map<std::string, TokenId> ids_;
};

const std::vector<std::string>& reserved_tokens();

}  // namespace sqlseq

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

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sqlseq/dataset.hpp"
#include "sqlseq/errors.hpp"
#include "sqlseq/vocab.hpp"

namespace sqlseq {

class Seq2SeqModel;

// Exact fraction kept as integers so scores can be compared bit-for-bit
// before any floating-point division.
struct Ratio {
  std::uint64_t num = 0;
  std::uint64_t den = 1;

  double value() const noexcept { return static_cast<double>(num) / static_cast<double>(den); }
  friend bool operator==(const Ratio&, const Ratio&) = default;
};

// Drops everything from the first EOS on, and every PAD.
template <typename T>
std::vector<T> strip_special(std::span<const T> tokens, const T& eos, const T& pad) {
  std::vector<T> out;
  for (const T& t : tokens) {
    if (t == eos) break;
    if (t != pad) out.push_back(t);
  }
  return out;
}

inline std::vector<TokenId> strip_special(std::span<const TokenId> ids) {
  return strip_special<TokenId>(ids, Vocabulary::kEos, Vocabulary::kPad);
}

template <typename T>
bool exact_match(std::span<const T> pred, std::span<const T> ref) {
  return std::equal(pred.begin(), pred.end(), ref.begin(), ref.end());
}

// |multiset(pred) ∩ multiset(ref)|.
template <typename T>
std::uint64_t multiset_overlap(std::span<const T> pred, std::span<const T> ref) {
  std::map<T, std::int64_t> counts;
  for (const T& t : ref) ++counts[t];
  std::uint64_t hits = 0;
  for (const T& t : pred) {
    auto it = counts.find(t);
    if (it != counts.end() && it->second > 0) {
      --it->second;
      ++hits;
    }
  }
  return hits;
}

// Overlap over max(|pred|, |ref|). Throws invalid_range for an empty reference.
template <typename T>
Ratio bow_ratio(std::span<const T> pred, std::span<const T> ref) {
  if (ref.empty()) raise(ErrorKind::invalid_range, "bag-of-words accuracy is undefined for an empty reference");
  return {multiset_overlap(pred, ref), std::max(pred.size(), ref.size())};
}

// Same overlap over |ref| only.
template <typename T>
Ratio bow_ratio_ref(std::span<const T> pred, std::span<const T> ref) {
  if (ref.empty()) raise(ErrorKind::invalid_range, "bag-of-words accuracy is undefined for an empty reference");
  return {multiset_overlap(pred, ref), ref.size()};
}

template <typename T>
double bow_accuracy(std::span<const T> pred, std::span<const T> ref) {
  return bow_ratio(pred, ref).value();
}

// Index-by-index matches over max(|pred|, |ref|).
template <typename T>
Ratio positional_ratio(std::span<const T> pred, std::span<const T> ref) {
  if (ref.empty()) raise(ErrorKind::invalid_range, "positional accuracy is undefined for an empty reference");
  const std::size_t n = std::min(pred.size(), ref.size());
  std::uint64_t hits = 0;
  for (std::size_t i = 0; i < n; ++i)
    if (pred[i] == ref[i]) ++hits;
  return {hits, std::max(pred.size(), ref.size())};
}

template <typename T>
double positional_accuracy(std::span<const T> pred, std::span<const T> ref) {
  return positional_ratio(pred, ref).value();
}

struct ClauseFlags {
  bool parsed = false;  // prediction parsed under the linearization grammar
  bool agg = false;
  bool sel = false;
  bool where = false;  // condition sets equal, order ignored

  friend bool operator==(const ClauseFlags&, const ClauseFlags&) = default;
};

// Throws a data error when `ref` does not parse. An unparseable prediction
// yields all-false flags.
ClauseFlags clause_breakdown(std::span<const std::string> pred, std::span<const std::string> ref);

struct ExampleScore {
  std::size_t index = 0;
  std::string question;
  std::string prediction;
  std::string gold;
  bool exact = false;
  Ratio bow;
  Ratio bow_ref;
  std::optional<Ratio> positional;
  ClauseFlags clauses;
};

struct MetricsReport {
  std::size_t n_examples = 0;
  std::size_t skipped = 0;  // pairs the model cannot score (pointer without targets)
  double exact_match = 0.0;
  double bow_accuracy = 0.0;      // mean over examples, max-length denominator
  double bow_accuracy_ref = 0.0;  // mean over examples, reference-length denominator
  std::optional<double> positional_accuracy;
  double agg_accuracy = 0.0;
  double sel_accuracy = 0.0;
  double where_accuracy = 0.0;
  std::size_t unparseable = 0;
  std::vector<ExampleScore> worst;
  std::vector<ExampleScore> examples;
};

struct EvaluateOptions {
  std::size_t worst_count = 10;
  std::size_t threads = 1;
};

// Greedy-decodes every pair and scores it against its gold sequence. For the
// pointer variant the gold sequence is the input tokens at the gold positions.
MetricsReport evaluate_split(const Seq2SeqModel& model, std::span<const EncodedPair> pairs,
                             const Vocabulary& input_vocab, const Vocabulary& output_vocab,
                             const EvaluateOptions& options = {});

std::string report_to_json(const MetricsReport& report);
std::string report_to_text(const MetricsReport& report);
// One row per example: index,exact,bow_num,bow_den,positional_num,positional_den,agg,sel,where,parsed
std::string report_to_csv(const MetricsReport& report);

}  // namespace sqlseq

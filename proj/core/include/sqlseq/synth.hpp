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
#include <vector>

#include "sqlseq/example.hpp"

namespace sqlseq {

// Templated single-table questions with gold queries, shaped like the
// public NL-to-SQL corpora: a small set of tables, one selected column, an
// aggregation cue in the wording, and one or two equality conditions whose
// values are quoted in the question.
struct SynthOptions {
  std::size_t count = 1000;
  std::uint64_t seed = 7;
  // Equal class counts (in a shuffled order) instead of a skewed,
  // mostly-NULL distribution.
  bool balanced = true;
  // One fixed keyword per aggregation class and a single template, so the
  // class is a function of one token.
  bool separable = false;
  // Probability that a question's cue phrase is drawn from a different
  // class while the gold label is kept. Ignored when separable.
  double ambiguity = 0.1;
  // Probability of a second WHERE condition.
  double second_condition = 0.3;
};

// Throws a config error for a zero count or a probability outside [0, 1].
std::vector<Example> synthesize(const SynthOptions& options);

}  // namespace sqlseq

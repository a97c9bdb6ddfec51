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
#include <span>
#include <vector>

#include "sqlseq/dataset.hpp"
#include "sqlseq/text.hpp"
#include "sqlseq/vocab.hpp"

namespace sqlseq {

struct Vocabularies {
  Vocabulary input;   // augmented inputs (which contain the questions)
  Vocabulary output;  // linearized queries
};

std::vector<PreparedExample> prepare_all(std::span<const Example> examples,
                                         AugmentStyle style = AugmentStyle::keywords_first);

Vocabularies build_vocabularies(std::span<const PreparedExample> examples, std::size_t min_count = 1);

std::vector<EncodedPair> encode_all(std::span<const PreparedExample> examples, const Vocabularies& vocabs);

// Prepare, build vocabularies from the same examples, and encode.
struct EncodedCorpus {
  Vocabularies vocabs;
  std::vector<EncodedPair> pairs;
};
EncodedCorpus encode_corpus(std::span<const Example> examples, AugmentStyle style = AugmentStyle::keywords_first);

}  // namespace sqlseq

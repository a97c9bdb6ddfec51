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

#include "sqlseq/pipeline.hpp"

namespace sqlseq {

std::vector<PreparedExample> prepare_all(std::span<const Example> examples, AugmentStyle style) {
  std::vector<PreparedExample> out;
  out.reserve(examples.size());
  for (const Example& e : examples) out.push_back(prepare_example(e, style));
  return out;
}

Vocabularies build_vocabularies(std::span<const PreparedExample> examples, std::size_t min_count) {
  std::vector<Tokens> inputs, targets;
  inputs.reserve(examples.size());
  targets.reserve(examples.size());
  for (const PreparedExample& p : examples) {
    inputs.push_back(p.input);
    targets.push_back(p.target);
  }
  return {Vocabulary::build(inputs, min_count), Vocabulary::build(targets, min_count)};
}

std::vector<EncodedPair> encode_all(std::span<const PreparedExample> examples, const Vocabularies& vocabs) {
  std::vector<EncodedPair> out;
  out.reserve(examples.size());
  for (const PreparedExample& p : examples) out.push_back(encode_example(p, vocabs.input, vocabs.output));
  return out;
}

EncodedCorpus encode_corpus(std::span<const Example> examples, AugmentStyle style) {
  const std::vector<PreparedExample> prepared = prepare_all(examples, style);
  EncodedCorpus corpus{build_vocabularies(prepared), {}};
  corpus.pairs = encode_all(prepared, corpus.vocabs);
  return corpus;
}

}  // namespace sqlseq

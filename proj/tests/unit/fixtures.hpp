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
#include <functional>

#include <gtest/gtest.h>

#include "sqlseq/errors.hpp"
#include "sqlseq/model.hpp"
#include "sqlseq/pipeline.hpp"
#include "sqlseq/synth.hpp"

namespace sqlseq::testing {

inline EncodedCorpus toy_corpus(std::size_t count, std::uint64_t seed = 5, double second_condition = 0.0) {
  SynthOptions opt;
  opt.count = count;
  opt.seed = seed;
  opt.second_condition = second_condition;
  return encode_corpus(synthesize(opt));
}

inline ModelConfig tiny_config(Variant variant, const Vocabularies& vocabs, std::size_t dims = 8) {
  ModelConfig c;
  c.variant = variant;
  c.hidden = dims;
  c.embed = dims;
  c.input_vocab = vocabs.input.size();
  c.output_vocab = vocabs.output.size();
  if (variant == Variant::pointer) c.cell_size = 40;
  return c;
}

inline ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "expected an sqlseq::Error";
  return ErrorKind::usage;
}

}  // namespace sqlseq::testing

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
#include <string>
#include <vector>

#include "sqlseq/dataset.hpp"
#include "sqlseq/errors.hpp"
#include "sqlseq/rng.hpp"

namespace sqlseq {

// Cyclic replication of `ids` up to `cell_size`: out[i] = ids[i mod |ids|].
// Refuses to truncate.
template <typename T>
std::vector<T> emphasize(std::span<const T> ids, std::size_t cell_size) {
  if (ids.empty()) raise(ErrorKind::dimension, "cannot emphasize an empty sequence");
  if (ids.size() > cell_size)
    raise(ErrorKind::dimension, "sequence of {} tokens does not fit cell size {}", ids.size(), cell_size);
  std::vector<T> out;
  out.reserve(cell_size);
  for (std::size_t i = 0; i < cell_size; ++i) out.push_back(ids[i % ids.size()]);
  return out;
}

template <typename T>
std::vector<T> emphasize(const std::vector<T>& ids, std::size_t cell_size) {
  return emphasize(std::span<const T>(ids), cell_size);
}

// Position of the first occurrence in `input` of each target token. Throws a
// data error naming the first token that does not occur.
std::vector<TokenId> derive_pointer_targets(std::span<const std::string> target,
                                            std::span<const std::string> input);

// Pairs sharing a padded target length. Inputs keep their own lengths.
struct Batch {
  std::vector<EncodedPair> pairs;
  // Per pair, per target position: 1 on real tokens (including EOS), 0 on padding.
  std::vector<std::vector<double>> weights;
  std::size_t target_length = 0;
  // Indices of the pairs in the bucketed collection.
  std::vector<std::size_t> source_indices;
};

// Sorts by input length (stable), cuts contiguous batches of at most
// `batch_size`, shuffles batch order with `rng`, and pads targets with
// Vocabulary::kPad (pointer targets with 0) under weight 0.
std::vector<Batch> bucket_batches(std::span<const EncodedPair> pairs, std::size_t batch_size, Rng& rng);

}  // namespace sqlseq

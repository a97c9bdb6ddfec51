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

#include "sqlseq/batching.hpp"

#include <algorithm>
#include <numeric>

namespace sqlseq {

std::vector<TokenId> derive_pointer_targets(std::span<const std::string> target,
                                            std::span<const std::string> input) {
  std::vector<TokenId> out;
  out.reserve(target.size());
  for (const auto& tok : target) {
    auto it = std::find(input.begin(), input.end(), tok);
    if (it == input.end()) raise(ErrorKind::data, "unpointable token '{}' does not occur in the input", tok);
    out.push_back(static_cast<TokenId>(it - input.begin()));
  }
  return out;
}

std::vector<Batch> bucket_batches(std::span<const EncodedPair> pairs, std::size_t batch_size, Rng& rng) {
  if (batch_size == 0) raise(ErrorKind::config, "batch size must be at least 1");
  std::vector<std::size_t> order(pairs.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return pairs[a].input_ids.size() < pairs[b].input_ids.size();
  });

  std::vector<Batch> batches;
  for (std::size_t start = 0; start < order.size(); start += batch_size) {
    const std::size_t end = std::min(order.size(), start + batch_size);
    Batch batch;
    for (std::size_t k = start; k < end; ++k)
      batch.target_length = std::max(batch.target_length, pairs[order[k]].target_ids.size());
    for (std::size_t k = start; k < end; ++k) {
      EncodedPair p = pairs[order[k]];
      const std::size_t real = p.target_ids.size();
      std::vector<double> w(batch.target_length, 0.0);
      std::fill(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(real), 1.0);
      p.target_ids.resize(batch.target_length, Vocabulary::kPad);
      if (p.pointer_targets) p.pointer_targets->resize(batch.target_length, 0);
      batch.pairs.push_back(std::move(p));
      batch.weights.push_back(std::move(w));
      batch.source_indices.push_back(order[k]);
    }
    batches.push_back(std::move(batch));
  }
  rng.shuffle(batches);
  return batches;
}

}  // namespace sqlseq

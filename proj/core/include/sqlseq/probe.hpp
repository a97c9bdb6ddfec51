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

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sqlseq/checkpoint.hpp"
#include "sqlseq/dataset.hpp"
#include "sqlseq/example.hpp"
#include "sqlseq/graph.hpp"
#include "sqlseq/layers.hpp"
#include "sqlseq/trainer.hpp"

namespace sqlseq {

// Gold aggregation class of a query. Throws a data error outside 0..5.
int extract_agg_label(const SqlTarget& sql);

struct ProbeExample {
  std::vector<TokenId> question;
  int label = 0;
};

// Question ids and labels of encoded pairs (labels validated).
std::vector<ProbeExample> probe_examples(std::span<const EncodedPair> pairs);

// Per-class counts, in class order.
std::array<std::size_t, kAggregationCount> label_histogram(std::span<const ProbeExample> examples);

// Accuracy of always predicting the most frequent class of `reference` on `examples`.
double majority_baseline(std::span<const ProbeExample> reference, std::span<const ProbeExample> examples);

// Same questions with labels permuted by `seed`.
std::vector<ProbeExample> shuffle_labels(std::span<const ProbeExample> examples, std::uint64_t seed);

struct ProbeConfig {
  std::size_t hidden = 200;
  std::size_t layers = 2;
  std::size_t embed = 300;
  // Off: the first LSTM layer reads one-hot token vectors.
  bool use_embedding = true;
  std::vector<std::size_t> mlp_hidden = {100};
  double init_lo = -0.1;
  double init_hi = 0.1;
  std::uint64_t seed = 2;
  std::size_t input_vocab = 0;

  void validate() const;
  std::string serialize() const;
  static ProbeConfig parse(std::string_view text);

  friend bool operator==(const ProbeConfig&, const ProbeConfig&) = default;
};

// LSTM encoder over the bare question plus an MLP over its final top-layer
// hidden state, trained jointly to predict the aggregation class.
class AggProbe {
 public:
  explicit AggProbe(ProbeConfig config);

  const ProbeConfig& config() const noexcept { return config_; }
  ParameterStore& params() noexcept { return params_; }
  const ParameterStore& params() const noexcept { return params_; }

  // [1, 6] class logits.
  Var forward(Graph& g, std::span<const TokenId> question) const;
  int predict(std::span<const TokenId> question) const;
  double accuracy(std::span<const ProbeExample> examples, std::size_t threads = 1) const;

  // Copies encoder weights from a seq2seq checkpoint whose unidirectional
  // encoder has matching shapes ("encoder.l<k>.*" and "embed.input").
  void load_encoder(const Checkpoint& parser_checkpoint);

 private:
  ProbeConfig config_;
  ParameterStore params_;
  std::optional<ParamId> embed_;
  LstmParams encoder_;
  MlpParams mlp_;
};

Checkpoint probe_checkpoint(const AggProbe& probe, const Vocabulary& input_vocab);
AggProbe load_probe(const Checkpoint& ckpt);

struct ProbeResult {
  std::vector<CurvePoint> curve;  // dev_metric holds dev accuracy
  double majority_baseline = 0.0;  // on dev when it is non-empty, else on train
  std::vector<std::string> warnings;
  std::size_t steps = 0;
};

// Mean cross-entropy over shuffled batches with Adam and elementwise
// clipping. Per-epoch shuffles derive from (config.seed, epoch). Writes
// curve.csv (dev column "dev_acc") and probe.bin when outputs.out_dir is set.
ProbeResult train_probe(AggProbe& probe, std::span<const ProbeExample> train, std::span<const ProbeExample> dev,
                        const TrainConfig& config, const TrainOutputs& outputs = {},
                        const TrainHooks& hooks = {});

}  // namespace sqlseq

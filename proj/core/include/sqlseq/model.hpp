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
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sqlseq/dataset.hpp"
#include "sqlseq/graph.hpp"
#include "sqlseq/layers.hpp"
#include "sqlseq/params.hpp"
#include "sqlseq/vocab.hpp"

namespace sqlseq {

enum class Variant { vanilla, reversed, bidirectional, attention, pointer };

inline constexpr std::array<Variant, 5> kAllVariants = {
    Variant::vanilla, Variant::reversed, Variant::bidirectional, Variant::attention, Variant::pointer};

std::string_view to_string(Variant v) noexcept;
// Throws a config error for unknown names.
Variant parse_variant(std::string_view name);

struct ModelConfig {
  Variant variant = Variant::vanilla;
  std::size_t hidden = 200;
  std::size_t layers = 2;
  std::size_t embed = 300;
  // Static encoder/decoder length of the pointer variant; 0 means unset.
  std::size_t cell_size = 0;
  std::size_t max_decode_len = 32;
  double init_lo = -0.1;
  double init_hi = 0.1;
  std::uint64_t seed = 2;
  // Attention/pointer: project the 2H bidirectional keys down to H.
  bool project_keys = true;
  // Pointer: append EOS to the input before emphasizing it; pointing at the
  // first EOS ends decoding. Without it the decoder always runs cell_size
  // steps over the emphasized target.
  bool pointer_eos = true;
  std::size_t input_vocab = 0;
  std::size_t output_vocab = 0;

  // Throws a config error naming the offending field.
  void validate() const;
  // Decode budget actually used: cell_size for the pointer variant.
  std::size_t decode_limit() const noexcept;

  // Flat "key=value" lines, stable key order.
  std::string serialize() const;
  static ModelConfig parse(std::string_view text);

  friend bool operator==(const ModelConfig&, const ModelConfig&) = default;
};

struct Prediction {
  enum class Stop { eos, max_len };
  // Output-vocabulary ids, or for the pointer variant the input-vocabulary
  // ids found at the predicted positions. Never contains EOS.
  std::vector<TokenId> tokens;
  // Pointer variant only: predicted input positions (into the emphasized source).
  std::vector<std::size_t> positions;
  Stop stopped_by = Stop::max_len;
};

struct ForwardResult {
  Var loss;                // weighted NLL times the caller's scale
  double nll_sum = 0.0;    // unscaled sum of weight * NLL
  double weight_sum = 0.0;
  std::size_t correct = 0; // teacher-forced argmax hits on weighted steps
  std::size_t counted = 0;
};

// One of the five encoder-decoder variants.
//
//   vanilla        2-layer LSTM encoder, 2-layer LSTM decoder, vocabulary projection
//   reversed       vanilla applied to the reversed source
//   bidirectional  forward + backward encoders, merged final state
//   attention      bidirectional encoder, additive attention, [h; context] projection
//   pointer        bidirectional encoder, emphasized static-length source, decoder
//                  logits are attention scores over source positions
//
// The decoder of every variant starts from the encoder's top-layer final
// state, copied into each decoder layer.
class Seq2SeqModel {
 public:
  // Builds parameters with uniform_init from config.seed. config.input_vocab
  // and config.output_vocab must be set.
  explicit Seq2SeqModel(ModelConfig config);

  const ModelConfig& config() const noexcept { return config_; }
  ParameterStore& params() noexcept { return params_; }
  const ParameterStore& params() const noexcept { return params_; }
  bool has_output_projection() const noexcept { return output_w_.has_value(); }

  // Source sequence the encoder sees: reversed for the reversed variant,
  // emphasized (input plus EOS when pointer_eos) for the pointer variant.
  std::vector<TokenId> source_ids(std::span<const TokenId> input_ids) const;

  // False for pairs the variant cannot train on: the pointer variant needs
  // pointer targets and an input that fits the cell.
  bool accepts(const EncodedPair& pair) const;

  // Gold pointer positions for each weighted decoder step (pointer variant).
  std::vector<TokenId> pointer_gold(const EncodedPair& pair, std::span<const double> weights) const;

  // Teacher-forced pass over one (possibly padded) pair. The loss node holds
  // scale * sum_t weights[t] * NLL_t. Steps after the last non-zero weight
  // are not built.
  ForwardResult forward(Graph& g, const EncodedPair& pair, std::span<const double> weights,
                        double scale) const;

  // Total step weight forward() will apply for these batch weights; the
  // pointer variant without pointer_eos always trains cell_size steps.
  double effective_weight(const EncodedPair& pair, std::span<const double> weights) const;

  // Unpadded convenience: unit weights, loss normalized by their sum.
  ForwardResult forward(Graph& g, const EncodedPair& pair) const;

  Prediction greedy_decode(std::span<const TokenId> input_ids) const;

 private:
  struct Encoded {
    Var keys;  // [T, K] memory used by attention / pointer
    LstmState decoder_init;
  };

  Encoded encode(Graph& g, std::span<const TokenId> source) const;
  Var step_logits(Graph& g, Var top_hidden, const std::optional<AttentionMemory>& memory) const;
  std::optional<AttentionMemory> memory(Graph& g, const Encoded& enc) const;

  ModelConfig config_;
  ParameterStore params_;
  ParamId input_embed_;
  std::optional<ParamId> output_embed_;
  std::optional<LstmParams> encoder_;
  std::optional<BidirectionalParams> bi_encoder_;
  LstmParams decoder_;
  std::optional<ParamId> key_projection_;
  std::optional<AttentionParams> attention_;
  std::optional<ParamId> output_w_;
  std::optional<ParamId> output_b_;
};

std::vector<TokenId> reverse_input(std::span<const TokenId> ids);

}  // namespace sqlseq

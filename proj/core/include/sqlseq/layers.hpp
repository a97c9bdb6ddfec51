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

#include "sqlseq/graph.hpp"
#include "sqlseq/params.hpp"
#include "sqlseq/rng.hpp"
#include "sqlseq/vocab.hpp"

namespace sqlseq {

struct InitRange {
  double lo = -0.1;
  double hi = 0.1;
};

// Rows of `table` for each id. Backward scatters into the looked-up rows.
Var embedding_lookup(Graph& g, ParamId table, std::span<const TokenId> ids);

// Gate order inside the 4H-wide matrices is (input, forget, candidate, output).
struct LstmLayerParams {
  ParamId w_input;      // [input_dim, 4H]
  ParamId w_recurrent;  // [H, 4H]
  ParamId bias;         // [4H]
  std::size_t input_dim = 0;
};

struct LstmParams {
  std::vector<LstmLayerParams> layers;
  std::size_t hidden = 0;

  // Registers "<prefix>.l<k>.{w_input,w_recurrent,bias}" for each layer.
  static LstmParams create(ParameterStore& store, const std::string& prefix, std::size_t input_dim,
                           std::size_t hidden, std::size_t layers, InitRange init, Rng& rng);
};

struct LstmCellState {
  Var h;  // [1, H]
  Var c;  // [1, H]
};

// One entry per layer, bottom first.
using LstmState = std::vector<LstmCellState>;

LstmState zero_state(Graph& g, const LstmParams& params);

// One step of one layer: gates = x W_input + h W_recurrent + b,
// c' = f * c + i * g, h' = o * tanh(c').
LstmCellState lstm_cell_step(Graph& g, const LstmLayerParams& layer, Var x, const LstmCellState& state);

// Same step with the input projection x W_input + b already computed ([1, 4H]).
LstmCellState lstm_cell_step_projected(Graph& g, const LstmLayerParams& layer, Var projected,
                                       const LstmCellState& state);

// One time step through every layer.
LstmState lstm_stack_step(Graph& g, const LstmParams& params, Var x, const LstmState& state);

struct UnrollResult {
  Var hidden;       // top-layer hidden states, [T, H]
  LstmState final;  // last state of every layer
};

// Static unroll over the rows of `inputs` ([T, d]); layer k consumes layer k-1's hidden sequence.
UnrollResult unroll(Graph& g, const LstmParams& params, Var inputs, const LstmState& init);

// Unroll whose first layer reads one-hot token vectors: layer 0's input
// matrix has one row per token id and is indexed directly.
UnrollResult unroll_one_hot(Graph& g, const LstmParams& params, std::span<const TokenId> ids,
                            const LstmState& init);

struct BidirectionalParams {
  LstmParams forward;
  LstmParams backward;
  ParamId merge_h_w;  // [2H, H]
  ParamId merge_h_b;  // [H]
  ParamId merge_c_w;
  ParamId merge_c_b;

  static BidirectionalParams create(ParameterStore& store, const std::string& prefix,
                                    std::size_t input_dim, std::size_t hidden, std::size_t layers,
                                    InitRange init, Rng& rng);
};

struct BidirectionalResult {
  Var hidden;            // [T, 2H]: forward half then backward half per position
  LstmCellState merged;  // top-layer final states of both directions projected back to H
};

BidirectionalResult bidirectional_encode(Graph& g, const BidirectionalParams& params, Var inputs);

// Additive scoring: score_t = v . tanh(key_t W_key + query W_query).
struct AttentionParams {
  ParamId w_key;    // [key_dim, A]
  ParamId w_query;  // [query_dim, A]
  ParamId v;        // [A, 1]
  std::size_t key_dim = 0;
  std::size_t query_dim = 0;

  static AttentionParams create(ParameterStore& store, const std::string& prefix, std::size_t key_dim,
                                std::size_t query_dim, std::size_t attention_dim, InitRange init,
                                Rng& rng);
};

// Keys with their projection cached for reuse across decode steps.
struct AttentionMemory {
  Var keys;       // [T, key_dim]
  Var projected;  // [T, A]
};

AttentionMemory attention_memory(Graph& g, const AttentionParams& params, Var keys);

struct AttentionResult {
  Var context;  // [1, key_dim]
  Var weights;  // [1, T]
  Var scores;   // [1, T], pre-softmax
};

AttentionResult additive_attention(Graph& g, const AttentionParams& params,
                                   const AttentionMemory& memory, Var query);

// Unnormalized attention scores over input positions, used directly as logits.
Var pointer_scores(Graph& g, const AttentionParams& params, const AttentionMemory& memory, Var query);

struct MlpParams {
  std::vector<ParamId> weights;
  std::vector<ParamId> biases;

  static MlpParams create(ParameterStore& store, const std::string& prefix, std::size_t input_dim,
                          std::span<const std::size_t> hidden_sizes, std::size_t classes,
                          InitRange init, Rng& rng);
};

// affine -> tanh for each hidden layer, then a final affine to class logits.
Var mlp_forward(Graph& g, const MlpParams& params, Var x);

}  // namespace sqlseq

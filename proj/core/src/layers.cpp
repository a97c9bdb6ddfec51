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

#include "sqlseq/layers.hpp"

#include <algorithm>

#include "sqlseq/errors.hpp"

namespace sqlseq {

Var embedding_lookup(Graph& g, ParamId table, std::span<const TokenId> ids) {
  return g.gather_rows(g.param(table), ids);
}

LstmParams LstmParams::create(ParameterStore& store, const std::string& prefix, std::size_t input_dim,
                              std::size_t hidden, std::size_t layers, InitRange init, Rng& rng) {
  if (hidden == 0 || layers == 0 || input_dim == 0)
    raise(ErrorKind::config, "LSTM '{}' needs positive input, hidden and layer counts", prefix);
  LstmParams p;
  p.hidden = hidden;
  for (std::size_t k = 0; k < layers; ++k) {
    const std::string base = prefix + ".l" + std::to_string(k);
    const std::size_t in = k == 0 ? input_dim : hidden;
    LstmLayerParams layer;
    layer.input_dim = in;
    layer.w_input = store.add_uniform(base + ".w_input", {in, 4 * hidden}, init.lo, init.hi, rng);
    layer.w_recurrent = store.add_uniform(base + ".w_recurrent", {hidden, 4 * hidden}, init.lo, init.hi, rng);
    layer.bias = store.add_uniform(base + ".bias", {4 * hidden}, init.lo, init.hi, rng);
    p.layers.push_back(layer);
  }
  return p;
}

LstmState zero_state(Graph& g, const LstmParams& params) {
  LstmState s;
  for (std::size_t k = 0; k < params.layers.size(); ++k)
    s.push_back({g.zeros(1, params.hidden), g.zeros(1, params.hidden)});
  return s;
}

LstmCellState lstm_cell_step_projected(Graph& g, const LstmLayerParams& layer, Var projected,
                                       const LstmCellState& state) {
  const std::size_t hidden = g.cols(state.h);
  Var gates = g.add(projected, g.matmul(state.h, g.param(layer.w_recurrent)));
  Var hc = g.lstm_pointwise(gates, state.c);
  return {g.slice_cols(hc, 0, hidden), g.slice_cols(hc, hidden, hidden)};
}

LstmCellState lstm_cell_step(Graph& g, const LstmLayerParams& layer, Var x, const LstmCellState& state) {
  Var projected = g.affine(x, g.param(layer.w_input), g.param(layer.bias));
  return lstm_cell_step_projected(g, layer, projected, state);
}

LstmState lstm_stack_step(Graph& g, const LstmParams& params, Var x, const LstmState& state) {
  if (state.size() != params.layers.size())
    raise(ErrorKind::dimension, "LSTM state has {} layers, parameters have {}", state.size(),
          params.layers.size());
  LstmState next;
  next.reserve(state.size());
  Var input = x;
  for (std::size_t k = 0; k < params.layers.size(); ++k) {
    next.push_back(lstm_cell_step(g, params.layers[k], input, state[k]));
    input = next.back().h;
  }
  return next;
}

namespace {

// Runs layers [first, end) given layer `first`'s projected inputs [T, 4H].
UnrollResult unroll_from(Graph& g, const LstmParams& params, Var projected, std::size_t first,
                         LstmState state) {
  const std::size_t steps = g.rows(projected);
  std::vector<Var> hs(steps);
  Var layer_out{};
  for (std::size_t k = first; k < params.layers.size(); ++k) {
    const auto& layer = params.layers[k];
    if (k != first) projected = g.affine(layer_out, g.param(layer.w_input), g.param(layer.bias));
    for (std::size_t t = 0; t < steps; ++t) {
      state[k] = lstm_cell_step_projected(g, layer, g.row(projected, t), state[k]);
      hs[t] = state[k].h;
    }
    layer_out = steps == 1 ? hs[0] : g.stack_rows(hs);
  }
  return {layer_out, std::move(state)};
}

}  // namespace

UnrollResult unroll(Graph& g, const LstmParams& params, Var inputs, const LstmState& init) {
  if (init.size() != params.layers.size())
    raise(ErrorKind::dimension, "initial state has {} layers, parameters have {}", init.size(),
          params.layers.size());
  const auto& first = params.layers.front();
  Var projected = g.affine(inputs, g.param(first.w_input), g.param(first.bias));
  return unroll_from(g, params, projected, 0, init);
}

UnrollResult unroll_one_hot(Graph& g, const LstmParams& params, std::span<const TokenId> ids,
                            const LstmState& init) {
  if (init.size() != params.layers.size())
    raise(ErrorKind::dimension, "initial state has {} layers, parameters have {}", init.size(),
          params.layers.size());
  const auto& first = params.layers.front();
  Var projected = g.add_row(g.gather_rows(g.param(first.w_input), ids), g.param(first.bias));
  return unroll_from(g, params, projected, 0, init);
}

BidirectionalParams BidirectionalParams::create(ParameterStore& store, const std::string& prefix,
                                                std::size_t input_dim, std::size_t hidden,
                                                std::size_t layers, InitRange init, Rng& rng) {
  BidirectionalParams p;
  p.forward = LstmParams::create(store, prefix + ".fwd", input_dim, hidden, layers, init, rng);
  p.backward = LstmParams::create(store, prefix + ".bwd", input_dim, hidden, layers, init, rng);
  p.merge_h_w = store.add_uniform(prefix + ".merge_h.w", {2 * hidden, hidden}, init.lo, init.hi, rng);
  p.merge_h_b = store.add_uniform(prefix + ".merge_h.b", {hidden}, init.lo, init.hi, rng);
  p.merge_c_w = store.add_uniform(prefix + ".merge_c.w", {2 * hidden, hidden}, init.lo, init.hi, rng);
  p.merge_c_b = store.add_uniform(prefix + ".merge_c.b", {hidden}, init.lo, init.hi, rng);
  return p;
}

BidirectionalResult bidirectional_encode(Graph& g, const BidirectionalParams& params, Var inputs) {
  const std::size_t steps = g.rows(inputs);
  Var reversed = inputs;
  if (steps > 1) {
    std::vector<Var> rows(steps);
    for (std::size_t t = 0; t < steps; ++t) rows[t] = g.row(inputs, steps - 1 - t);
    reversed = g.stack_rows(rows);
  }
  UnrollResult fwd = unroll(g, params.forward, inputs, zero_state(g, params.forward));
  UnrollResult bwd = unroll(g, params.backward, reversed, zero_state(g, params.backward));

  Var bwd_aligned = bwd.hidden;
  if (steps > 1) {
    std::vector<Var> rows(steps);
    for (std::size_t t = 0; t < steps; ++t) rows[t] = g.row(bwd.hidden, steps - 1 - t);
    bwd_aligned = g.stack_rows(rows);
  }

  BidirectionalResult out;
  out.hidden = g.concat_cols(fwd.hidden, bwd_aligned);
  const auto& ft = fwd.final.back();
  const auto& bt = bwd.final.back();
  out.merged.h = g.affine(g.concat_cols(ft.h, bt.h), g.param(params.merge_h_w), g.param(params.merge_h_b));
  out.merged.c = g.affine(g.concat_cols(ft.c, bt.c), g.param(params.merge_c_w), g.param(params.merge_c_b));
  return out;
}

AttentionParams AttentionParams::create(ParameterStore& store, const std::string& prefix,
                                        std::size_t key_dim, std::size_t query_dim,
                                        std::size_t attention_dim, InitRange init, Rng& rng) {
  AttentionParams p;
  p.key_dim = key_dim;
  p.query_dim = query_dim;
  p.w_key = store.add_uniform(prefix + ".w_key", {key_dim, attention_dim}, init.lo, init.hi, rng);
  p.w_query = store.add_uniform(prefix + ".w_query", {query_dim, attention_dim}, init.lo, init.hi, rng);
  p.v = store.add_uniform(prefix + ".v", {attention_dim, 1}, init.lo, init.hi, rng);
  return p;
}

AttentionMemory attention_memory(Graph& g, const AttentionParams& params, Var keys) {
  if (g.cols(keys) != params.key_dim)
    raise(ErrorKind::dimension, "attention keys have {} features, expected {}", g.cols(keys), params.key_dim);
  return {keys, g.matmul(keys, g.param(params.w_key))};
}

Var pointer_scores(Graph& g, const AttentionParams& params, const AttentionMemory& memory, Var query) {
  Var q = g.matmul(query, g.param(params.w_query));
  Var hidden = g.tanh(g.add_row(memory.projected, q));
  return g.transpose(g.matmul(hidden, g.param(params.v)));
}

AttentionResult additive_attention(Graph& g, const AttentionParams& params,
                                   const AttentionMemory& memory, Var query) {
  AttentionResult r;
  r.scores = pointer_scores(g, params, memory, query);
  r.weights = g.softmax_rows(r.scores);
  r.context = g.matmul(r.weights, memory.keys);
  return r;
}

MlpParams MlpParams::create(ParameterStore& store, const std::string& prefix, std::size_t input_dim,
                            std::span<const std::size_t> hidden_sizes, std::size_t classes,
                            InitRange init, Rng& rng) {
  MlpParams p;
  std::size_t in = input_dim;
  std::vector<std::size_t> sizes(hidden_sizes.begin(), hidden_sizes.end());
  sizes.push_back(classes);
  for (std::size_t k = 0; k < sizes.size(); ++k) {
    const std::string base = prefix + ".l" + std::to_string(k);
    p.weights.push_back(store.add_uniform(base + ".w", {in, sizes[k]}, init.lo, init.hi, rng));
    p.biases.push_back(store.add_uniform(base + ".b", {sizes[k]}, init.lo, init.hi, rng));
    in = sizes[k];
  }
  return p;
}

Var mlp_forward(Graph& g, const MlpParams& params, Var x) {
  Var h = x;
  for (std::size_t k = 0; k < params.weights.size(); ++k) {
    h = g.affine(h, g.param(params.weights[k]), g.param(params.biases[k]));
    if (k + 1 < params.weights.size()) h = g.tanh(h);
  }
  return h;
}

}  // namespace sqlseq

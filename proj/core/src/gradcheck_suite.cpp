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

#include "sqlseq/gradcheck_suite.hpp"

#include <functional>

#include "sqlseq/graph.hpp"
#include "sqlseq/layers.hpp"
#include "sqlseq/model.hpp"
#include "sqlseq/probe.hpp"
#include "sqlseq/rng.hpp"

namespace sqlseq {

namespace {

constexpr std::size_t kHidden = 3;
constexpr std::size_t kEmbed = 4;
constexpr std::size_t kVocab = 9;

// Builds a loss from a fresh graph over `params`; the suite reduces every
// layer output to a scalar with a fixed random projection so all output
// components carry gradient.
using Builder = std::function<Var(Graph&)>;

Var project_to_scalar(Graph& g, Var out, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> w(g.rows(out) * g.cols(out));
  for (double& x : w) x = rng.uniform(-1.0, 1.0);
  return g.sum(g.mul(out, g.constant(g.rows(out), g.cols(out), w)));
}

GradCheckResult check(ParameterStore& params, const Builder& build, const GradCheckOptions& options) {
  LossFn fn = [&](GradSet* grads) {
    Graph g(params, grads);
    Var loss = build(g);
    if (grads) g.backward(loss);
    return g.scalar(loss);
  };
  return finite_difference_check(fn, params, options);
}

Var input_rows(Graph& g, std::size_t rows, std::size_t cols, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> v(rows * cols);
  for (double& x : v) x = rng.uniform(-1.0, 1.0);
  return g.constant(rows, cols, v);
}

}  // namespace

std::vector<ComponentCheck> run_gradcheck_suite(double tolerance, const GradCheckOptions& options) {
  std::vector<ComponentCheck> out;
  auto record = [&](std::string name, const GradCheckResult& r) {
    out.push_back({std::move(name), r, r.max_rel_error < tolerance});
  };
  const InitRange init{-0.5, 0.5};
  const std::vector<TokenId> ids = {4, 7, 4, 5};

  {
    ParameterStore ps;
    Rng rng(1);
    ParamId table = ps.add_uniform("table", {kVocab, kEmbed}, init.lo, init.hi, rng);
    record("embedding", check(ps, [&](Graph& g) { return project_to_scalar(g, embedding_lookup(g, table, ids), 11); },
                              options));
  }
  {
    ParameterStore ps;
    Rng rng(2);
    ParamId w = ps.add_uniform("w", {kEmbed, kVocab}, init.lo, init.hi, rng);
    ParamId b = ps.add_uniform("b", {kVocab}, init.lo, init.hi, rng);
    record("affine_cross_entropy", check(ps, [&](Graph& g) {
             Var logits = g.affine(input_rows(g, 4, kEmbed, 12), g.param(w), g.param(b));
             const std::vector<double> weights = {1.0, 0.5, 0.0, 2.0};
             return g.weighted_cross_entropy(logits, ids, weights, 0.25);
           }, options));
  }
  {
    ParameterStore ps;
    Rng rng(3);
    LstmParams lstm = LstmParams::create(ps, "lstm", kEmbed, kHidden, 1, init, rng);
    record("lstm_cell", check(ps, [&](Graph& g) {
             LstmState s0 = {{input_rows(g, 1, kHidden, 13), input_rows(g, 1, kHidden, 14)}};
             LstmCellState s = lstm_cell_step(g, lstm.layers[0], input_rows(g, 1, kEmbed, 15), s0[0]);
             return project_to_scalar(g, g.concat_cols(s.h, s.c), 16);
           }, options));
  }
  {
    ParameterStore ps;
    Rng rng(4);
    LstmParams lstm = LstmParams::create(ps, "lstm", kEmbed, kHidden, 2, init, rng);
    record("lstm_stack_unroll", check(ps, [&](Graph& g) {
             UnrollResult r = unroll(g, lstm, input_rows(g, 5, kEmbed, 17), zero_state(g, lstm));
             Var tail = g.concat_cols(r.final[0].c, r.final[1].c);
             return g.add(project_to_scalar(g, r.hidden, 18), project_to_scalar(g, tail, 19));
           }, options));
  }
  {
    ParameterStore ps;
    Rng rng(5);
    LstmParams lstm = LstmParams::create(ps, "lstm", kVocab, kHidden, 2, init, rng);
    record("lstm_one_hot", check(ps, [&](Graph& g) {
             UnrollResult r = unroll_one_hot(g, lstm, ids, zero_state(g, lstm));
             return project_to_scalar(g, r.hidden, 20);
           }, options));
  }
  {
    ParameterStore ps;
    Rng rng(6);
    BidirectionalParams bi = BidirectionalParams::create(ps, "bi", kEmbed, kHidden, 2, init, rng);
    record("bidirectional_encoder", check(ps, [&](Graph& g) {
             BidirectionalResult r = bidirectional_encode(g, bi, input_rows(g, 4, kEmbed, 21));
             Var merged = g.concat_cols(r.merged.h, r.merged.c);
             return g.add(project_to_scalar(g, r.hidden, 22), project_to_scalar(g, merged, 23));
           }, options));
  }
  {
    ParameterStore ps;
    Rng rng(7);
    AttentionParams att = AttentionParams::create(ps, "att", 2 * kHidden, kHidden, kHidden, init, rng);
    record("additive_attention", check(ps, [&](Graph& g) {
             AttentionMemory mem = attention_memory(g, att, input_rows(g, 5, 2 * kHidden, 24));
             AttentionResult r = additive_attention(g, att, mem, input_rows(g, 1, kHidden, 25));
             return g.add(project_to_scalar(g, r.context, 26), project_to_scalar(g, r.weights, 27));
           }, options));
    record("pointer_scores", check(ps, [&](Graph& g) {
             AttentionMemory mem = attention_memory(g, att, input_rows(g, 5, 2 * kHidden, 28));
             Var scores = pointer_scores(g, att, mem, input_rows(g, 1, kHidden, 29));
             const TokenId target[1] = {3};
             const double weight[1] = {1.0};
             return g.weighted_cross_entropy(scores, target, weight, 1.0);
           }, options));
  }
  {
    ParameterStore ps;
    Rng rng(8);
    const std::vector<std::size_t> hidden = {5};
    MlpParams mlp = MlpParams::create(ps, "mlp", kHidden, hidden, 6, init, rng);
    record("mlp", check(ps, [&](Graph& g) {
             return project_to_scalar(g, mlp_forward(g, mlp, input_rows(g, 2, kHidden, 30)), 31);
           }, options));
  }

  EncodedPair pair;
  pair.input_ids = {4, 5, 6, 7, 8};
  pair.target_ids = {4, 6, 5, 7, Vocabulary::kEos};
  pair.pointer_targets = std::vector<TokenId>{0, 2, 1, 3, kTerminalPointer};
  pair.question_ids = {6, 7, 8};
  for (Variant v : kAllVariants) {
    for (bool terminal : {true, false}) {
      if (!terminal && v != Variant::pointer) continue;
      ModelConfig c;
      c.variant = v;
      c.hidden = kHidden;
      c.layers = 2;
      c.embed = kEmbed;
      c.input_vocab = kVocab;
      c.output_vocab = kVocab;
      c.cell_size = 7;
      c.pointer_eos = terminal;
      c.init_lo = init.lo;
      c.init_hi = init.hi;
      Seq2SeqModel model(c);
      LossFn fn = [&](GradSet* grads) {
        Graph g(model.params(), grads);
        ForwardResult r = model.forward(g, pair);
        if (grads) g.backward(r.loss);
        return g.scalar(r.loss);
      };
      std::string name = "model." + std::string(to_string(v));
      if (!terminal) name += ".no_terminal";
      record(name, finite_difference_check(fn, model.params(), options));
    }
  }
  for (bool embedding : {true, false}) {
    ProbeConfig pc;
    pc.hidden = kHidden;
    pc.embed = kEmbed;
    pc.input_vocab = kVocab;
    pc.mlp_hidden = {5};
    pc.use_embedding = embedding;
    pc.init_lo = init.lo;
    pc.init_hi = init.hi;
    AggProbe probe(pc);
    LossFn fn = [&](GradSet* grads) {
      Graph g(probe.params(), grads);
      const TokenId label[1] = {4};
      const double weight[1] = {1.0};
      Var loss = g.weighted_cross_entropy(probe.forward(g, pair.question_ids), label, weight, 1.0);
      if (grads) g.backward(loss);
      return g.scalar(loss);
    };
    record(embedding ? "probe" : "probe.one_hot", finite_difference_check(fn, probe.params(), options));
  }
  return out;
}

}  // namespace sqlseq

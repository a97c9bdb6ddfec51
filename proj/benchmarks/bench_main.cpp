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

#include <benchmark/benchmark.h>

#include <vector>

#include "sqlseq/batching.hpp"
#include "sqlseq/graph.hpp"
#include "sqlseq/layers.hpp"
#include "sqlseq/metrics.hpp"
#include "sqlseq/model.hpp"
#include "sqlseq/params.hpp"
#include "sqlseq/pipeline.hpp"
#include "sqlseq/rng.hpp"
#include "sqlseq/synth.hpp"
#include "sqlseq/trainer.hpp"

namespace {

using namespace sqlseq;

// Forward and backward of x[1, n] * W[n, n].
void BM_MatmulForwardBackward(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  ParameterStore store;
  Rng rng(1);
  const ParamId w = store.add_uniform("w", {n, n}, -0.1, 0.1, rng);
  const std::vector<double> x(n, 0.5);
  GradSet grads(store);
  for (auto _ : state) {
    grads.zero();
    Graph g(store, &grads);
    Var y = g.matmul(g.constant(1, n, x), g.param(w));
    g.backward(g.sum(y));
    benchmark::DoNotOptimize(grads[w].data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n * n));
}
BENCHMARK(BM_MatmulForwardBackward)->Arg(64)->Arg(200);

// One step of a two-layer LSTM stack, inference only.
void BM_LstmStep(benchmark::State& state) {
  const auto h = static_cast<std::size_t>(state.range(0));
  ParameterStore store;
  Rng rng(2);
  const LstmParams lstm = LstmParams::create(store, "lstm", h, h, 2, InitRange{}, rng);
  const std::vector<double> x(h, 0.1);
  for (auto _ : state) {
    Graph g(store);
    LstmState s = lstm_stack_step(g, lstm, g.constant(1, h, x), zero_state(g, lstm));
    benchmark::DoNotOptimize(g.value(s.back().h).data());
  }
}
BENCHMARK(BM_LstmStep)->Arg(64)->Arg(200);

// One optimizer step of a full model on a batch of 16 synthetic pairs.
void BM_TrainStep(benchmark::State& state) {
  const auto variant = static_cast<Variant>(state.range(0));
  SynthOptions so;
  so.count = 16;
  const EncodedCorpus corpus = encode_corpus(synthesize(so));
  ModelConfig mc;
  mc.variant = variant;
  mc.hidden = 64;
  mc.embed = 64;
  mc.input_vocab = corpus.vocabs.input.size();
  mc.output_vocab = corpus.vocabs.output.size();
  mc.cell_size = 60;
  Seq2SeqModel model(mc);
  TrainConfig tc;
  tc.batch_size = 16;
  tc.threads = 1;
  Trainer trainer(model, tc);
  Rng rng(3);
  const Batch batch = bucket_batches(corpus.pairs, 16, rng).front();
  for (auto _ : state) benchmark::DoNotOptimize(trainer.train_batch(batch.pairs, batch.weights).nll_sum);
  state.SetLabel(std::string(to_string(variant)));
}
BENCHMARK(BM_TrainStep)
    ->Arg(static_cast<int>(Variant::vanilla))
    ->Arg(static_cast<int>(Variant::attention))
    ->Arg(static_cast<int>(Variant::pointer))
    ->Unit(benchmark::kMillisecond);

// Greedy decoding of one pair with an untrained attention model.
void BM_GreedyDecode(benchmark::State& state) {
  SynthOptions so;
  so.count = 1;
  const EncodedCorpus corpus = encode_corpus(synthesize(so));
  ModelConfig mc;
  mc.variant = Variant::attention;
  mc.hidden = 64;
  mc.embed = 64;
  mc.input_vocab = corpus.vocabs.input.size();
  mc.output_vocab = corpus.vocabs.output.size();
  const Seq2SeqModel model(mc);
  for (auto _ : state) benchmark::DoNotOptimize(model.greedy_decode(corpus.pairs[0].input_ids).tokens.size());
}
BENCHMARK(BM_GreedyDecode)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();

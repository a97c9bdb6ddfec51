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

#include <gtest/gtest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "fixtures.hpp"
#include "sqlseq/checkpoint.hpp"
#include "sqlseq/probe.hpp"
#include "sqlseq/synth.hpp"
#include "sqlseq/trainer.hpp"

namespace sqlseq {
namespace {

using testing::kind_of;

ProbeConfig small_probe(std::size_t vocab, bool embedding = true) {
  ProbeConfig c;
  c.hidden = 12;
  c.embed = 12;
  c.mlp_hidden = {10};
  c.use_embedding = embedding;
  c.input_vocab = vocab;
  return c;
}

TEST(AggLabel, ComesFromSqlTarget) {
  SqlTarget sql;
  EXPECT_EQ(extract_agg_label(sql), 0);
  sql.agg = static_cast<int>(Aggregation::max);
  EXPECT_EQ(extract_agg_label(sql), 1);
  sql.agg = static_cast<int>(Aggregation::count);
  EXPECT_EQ(extract_agg_label(sql), 3);
  sql.agg = 6;
  EXPECT_EQ(kind_of([&] { extract_agg_label(sql); }), ErrorKind::data);
  EXPECT_EQ(aggregation_name(1), "MAX");
}

TEST(AggLabel, HistogramMatchesDatasetExactly) {
  SynthOptions opt;
  opt.count = 300;
  opt.balanced = false;
  const auto examples = synthesize(opt);
  std::array<std::size_t, kAggregationCount> expected{};
  for (const auto& ex : examples) ++expected[static_cast<std::size_t>(ex.sql.agg)];
  const auto corpus = encode_corpus(examples);
  const auto probes = probe_examples(corpus.pairs);
  EXPECT_EQ(label_histogram(probes), expected);
  EXPECT_GT(expected[0], expected[5]);
  for (std::size_t i = 0; i < probes.size(); ++i) EXPECT_EQ(probes[i].question, corpus.pairs[i].question_ids);
}

TEST(AggLabel, ShuffledLabelsKeepHistogramAndBaseline) {
  const auto corpus = testing::toy_corpus(60, 3);
  const auto probes = probe_examples(corpus.pairs);
  const auto shuffled = shuffle_labels(probes, 9);
  EXPECT_EQ(label_histogram(shuffled), label_histogram(probes));
  std::size_t moved = 0;
  for (std::size_t i = 0; i < probes.size(); ++i) moved += probes[i].label != shuffled[i].label;
  EXPECT_GT(moved, 0u);
  const auto counts = label_histogram(probes);
  const double top = static_cast<double>(*std::max_element(counts.begin(), counts.end()));
  EXPECT_DOUBLE_EQ(majority_baseline(probes, probes), top / static_cast<double>(probes.size()));
}

TEST(Probe, ForwardShapeAndDeterminism) {
  const auto corpus = testing::toy_corpus(10, 4);
  for (bool embedding : {true, false}) {
    AggProbe a(small_probe(corpus.vocabs.input.size(), embedding));
    AggProbe b(small_probe(corpus.vocabs.input.size(), embedding));
    const auto& q = corpus.pairs[0].question_ids;
    Graph ga(a.params()), gb(b.params());
    Var la = a.forward(ga, q), lb = b.forward(gb, q);
    EXPECT_EQ(ga.rows(la), 1u);
    EXPECT_EQ(ga.cols(la), 6u);
    EXPECT_EQ(ga.to_tensor(la), gb.to_tensor(lb));
    EXPECT_EQ(a.predict(q), b.predict(q));
  }
}

TEST(Probe, GradientReachesEncoderAndMlp) {
  const auto corpus = testing::toy_corpus(10, 4);
  AggProbe probe(small_probe(corpus.vocabs.input.size()));
  GradSet grads(probe.params());
  Graph g(probe.params(), &grads);
  const TokenId target[1] = {2};
  const double weight[1] = {1.0};
  g.backward(g.weighted_cross_entropy(probe.forward(g, corpus.pairs[0].question_ids), target, weight, 1.0));
  bool embed = false, encoder = false, mlp = false;
  for (std::size_t i = 0; i < probe.params().size(); ++i) {
    double norm = 0.0;
    for (double v : grads[ParamId{static_cast<std::uint32_t>(i)}]) norm += std::abs(v);
    const auto& name = probe.params().at(i).name;
    if (norm == 0.0) continue;
    embed = embed || name.rfind("embed", 0) == 0;
    encoder = encoder || name.rfind("encoder", 0) == 0;
    mlp = mlp || name.rfind("mlp", 0) == 0;
  }
  EXPECT_TRUE(embed);
  EXPECT_TRUE(encoder);
  EXPECT_TRUE(mlp);
}

TEST(Probe, ConfigAndCheckpointRoundTrip) {
  const auto corpus = testing::toy_corpus(10, 4);
  auto cfg = small_probe(corpus.vocabs.input.size(), false);
  cfg.mlp_hidden = {7, 5};
  EXPECT_EQ(ProbeConfig::parse(cfg.serialize()), cfg);
  AggProbe probe(cfg);
  AggProbe loaded = load_probe(decode_checkpoint(encode_checkpoint(probe_checkpoint(probe, corpus.vocabs.input))));
  EXPECT_EQ(loaded.config(), cfg);
  for (std::size_t i = 0; i < probe.params().size(); ++i)
    EXPECT_EQ(loaded.params().at(i).tensor, probe.params().at(i).tensor);
  auto bad = cfg;
  bad.mlp_hidden = {0};
  EXPECT_EQ(kind_of([&] { bad.validate(); }), ErrorKind::config);
}

TEST(Probe, LoadsEncoderFromParserCheckpoint) {
  const auto corpus = testing::toy_corpus(10, 4);
  auto mc = testing::tiny_config(Variant::vanilla, corpus.vocabs, 12);
  mc.seed = 41;
  Seq2SeqModel parser(mc);
  AggProbe probe(small_probe(corpus.vocabs.input.size()));
  probe.load_encoder(model_checkpoint(parser, corpus.vocabs.input, corpus.vocabs.output));
  for (const auto& p : probe.params()) {
    if (p.name.rfind("mlp", 0) == 0) continue;
    auto id = parser.params().find(p.name);
    ASSERT_TRUE(id) << p.name;
    EXPECT_EQ(p.tensor, parser.params()[*id].tensor) << p.name;
  }
  Seq2SeqModel wrong(testing::tiny_config(Variant::vanilla, corpus.vocabs, 8));
  EXPECT_EQ(kind_of([&] { probe.load_encoder(model_checkpoint(wrong, corpus.vocabs.input, corpus.vocabs.output)); }),
            ErrorKind::data);
}

TEST(Probe, SingleClassDataWarns) {
  const auto corpus = testing::toy_corpus(12, 4);
  auto probes = probe_examples(corpus.pairs);
  for (auto& p : probes) p.label = 3;
  AggProbe probe(small_probe(corpus.vocabs.input.size()));
  TrainConfig tc;
  tc.epochs = 1;
  tc.batch_size = 4;
  auto r = train_probe(probe, probes, {}, tc);
  ASSERT_EQ(r.warnings.size(), 1u);
  EXPECT_NE(r.warnings[0].find("degenerate"), std::string::npos);
  EXPECT_DOUBLE_EQ(r.majority_baseline, 1.0);
}

TEST(Probe, LearnsSeparableSetQuickly) {
  SynthOptions opt;
  opt.count = 600;
  opt.separable = true;
  const auto corpus = encode_corpus(synthesize(opt));
  const auto probes = probe_examples(corpus.pairs);
  const std::span<const ProbeExample> all(probes);
  auto cfg = small_probe(corpus.vocabs.input.size());
  cfg.hidden = cfg.embed = 24;
  cfg.mlp_hidden = {24};
  cfg.init_lo = -0.3;
  cfg.init_hi = 0.3;
  AggProbe probe(cfg);
  TrainConfig tc;
  tc.epochs = 4;
  tc.batch_size = 16;
  auto r = train_probe(probe, all.first(480), all.subspan(480), tc);
  ASSERT_EQ(r.curve.size(), 4u);
  ASSERT_TRUE(r.curve.back().dev_metric);
  EXPECT_GE(*r.curve.back().dev_metric, 0.95);
  EXPECT_GE(r.curve.back().train_accuracy, r.curve.front().train_accuracy);
}

TEST(Synth, BalancedDeterministicAndValid) {
  SynthOptions opt;
  opt.count = 120;
  const auto a = synthesize(opt);
  const auto b = synthesize(opt);
  ASSERT_EQ(a.size(), 120u);
  std::array<std::size_t, kAggregationCount> counts{};
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].question, b[i].question);
    EXPECT_NO_THROW(validate(a[i]));
    ++counts[static_cast<std::size_t>(a[i].sql.agg)];
  }
  for (std::size_t c : counts) EXPECT_EQ(c, 20u);
  for (const auto& pair : encode_corpus(a).pairs) EXPECT_TRUE(pair.pointer_targets);
}

TEST(Synth, SeparableCueDeterminesLabel) {
  SynthOptions opt;
  opt.count = 60;
  opt.separable = true;
  const std::array<std::string, kAggregationCount> cues = {"what", "highest", "lowest", "count", "total", "average"};
  for (const auto& ex : synthesize(opt)) {
    const auto first = tokenize_question(ex.question).front();
    EXPECT_EQ(first, cues[static_cast<std::size_t>(ex.sql.agg)]);
  }
  SynthOptions bad;
  bad.ambiguity = 1.5;
  EXPECT_EQ(kind_of([&] { synthesize(bad); }), ErrorKind::config);
}

}  // namespace
}  // namespace sqlseq

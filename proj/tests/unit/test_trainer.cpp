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

#include <cmath>
#include <filesystem>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "sqlseq/batching.hpp"
#include "sqlseq/checkpoint.hpp"
#include "sqlseq/io.hpp"
#include "sqlseq/metrics.hpp"
#include "sqlseq/trainer.hpp"

namespace sqlseq {
namespace {

namespace fs = std::filesystem;
using testing::kind_of;
using testing::tiny_config;
using testing::toy_corpus;

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("sqlseq_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::vector<double> flat_params(const ParameterStore& ps) {
  std::vector<double> out;
  for (const auto& p : ps) out.insert(out.end(), p.tensor.values().begin(), p.tensor.values().end());
  return out;
}

TrainConfig small_train(std::size_t epochs, std::size_t batch) {
  TrainConfig t;
  t.epochs = epochs;
  t.batch_size = batch;
  t.eval_every = 1;
  return t;
}

class TrainerTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() { corpus = new EncodedCorpus(toy_corpus(12)); }
  static void TearDownTestSuite() { delete corpus; }
  static EncodedCorpus* corpus;
};
EncodedCorpus* TrainerTest::corpus = nullptr;

TEST(Curve, HeaderAndRow) {
  EXPECT_EQ(curve_header("dev_bow"), "epoch,step,train_loss,train_acc,dev_bow,wall_ms\n");
  CurvePoint p;
  p.epoch = 3;
  p.step = 7;
  p.train_loss = 0.5;
  p.train_accuracy = 0.25;
  EXPECT_EQ(curve_row(p), "3,7,0.50000000,0.250000,,0\n");
  p.dev_metric = 0.75;
  EXPECT_EQ(curve_row(p), "3,7,0.50000000,0.250000,0.750000,0\n");
}

TEST(TrainConfigTest, DefaultsValidationAndRoundTrip) {
  TrainConfig t;
  EXPECT_EQ(t.epochs, 300u);
  EXPECT_EQ(t.batch_size, 128u);
  EXPECT_EQ(t.clip_lo, -5.0);
  EXPECT_EQ(t.clip_hi, 5.0);
  EXPECT_EQ(TrainConfig::default_lr(Variant::vanilla), 0.01);
  EXPECT_EQ(TrainConfig::default_lr(Variant::pointer), 0.001);
  t.lr = 0.0125;
  t.max_steps = 17;
  EXPECT_EQ(TrainConfig::parse(t.serialize()), t);
  TrainConfig bad;
  bad.clip_lo = 5.0;
  EXPECT_EQ(kind_of([&] { bad.validate(); }), ErrorKind::config);
}

TEST_F(TrainerTest, OneEpochOneBatchIsOneStep) {
  Seq2SeqModel m(tiny_config(Variant::vanilla, corpus->vocabs));
  Trainer t(m, small_train(1, 64));
  auto r = t.run(corpus->pairs, {});
  EXPECT_EQ(r.progress.step, 1u);
  EXPECT_EQ(t.optimizer().steps(), 1u);
  ASSERT_EQ(r.curve.size(), 1u);
  EXPECT_EQ(r.curve[0].step, 1u);
}

TEST_F(TrainerTest, StepsAreMonotoneAndMaxStepsStopsMidEpoch) {
  Seq2SeqModel m(tiny_config(Variant::vanilla, corpus->vocabs));
  auto cfg = small_train(5, 5);  // 12 pairs -> 3 batches per epoch
  cfg.max_steps = 7;
  Trainer t(m, cfg);
  auto r = t.run(corpus->pairs, {});
  EXPECT_EQ(r.progress.step, 7u);
  ASSERT_EQ(r.curve.size(), 3u);
  for (std::size_t i = 1; i < r.curve.size(); ++i) EXPECT_GT(r.curve[i].step, r.curve[i - 1].step);
}

TEST_F(TrainerTest, SameSeedGivesIdenticalFiles) {
  auto run = [&](const std::string& name) {
    const fs::path dir = scratch_dir(name);
    Seq2SeqModel m(tiny_config(Variant::attention, corpus->vocabs));
    Trainer t(m, small_train(3, 4));
    TrainOutputs out{dir, &corpus->vocabs.input, &corpus->vocabs.output};
    t.run(corpus->pairs, std::span(corpus->pairs).first(4), out);
    return std::make_pair(read_text_file(dir / "curve.csv"), read_text_file(dir / "checkpoint.bin"));
  };
  auto a = run("det_a");
  auto b = run("det_b");
  EXPECT_EQ(a.first, b.first);
  EXPECT_EQ(a.second, b.second);
  EXPECT_EQ(a.first.rfind("epoch,step,train_loss,train_acc,dev_bow,wall_ms\n", 0), 0u);
}

TEST_F(TrainerTest, ThreadCountDoesNotChangeResults) {
  auto run = [&](std::size_t threads) {
    Seq2SeqModel m(tiny_config(Variant::bidirectional, corpus->vocabs));
    auto cfg = small_train(2, 6);
    cfg.threads = threads;
    Trainer t(m, cfg);
    t.run(corpus->pairs, {});
    return flat_params(m.params());
  };
  EXPECT_EQ(run(1), run(3));
}

TEST_F(TrainerTest, CheckpointRoundTripIsBitExact) {
  for (Variant v : kAllVariants) {
    Seq2SeqModel m(tiny_config(v, corpus->vocabs));
    Trainer t(m, small_train(1, 6));
    t.run(corpus->pairs, {});
    const auto progress = t.progress();
    const Checkpoint ckpt = model_checkpoint(m, corpus->vocabs.input, corpus->vocabs.output, &t.config(),
                                             &progress, &t.optimizer());
    const std::string bytes = encode_checkpoint(ckpt);
    ModelBundle bundle = load_model_bundle(decode_checkpoint(bytes));
    EXPECT_EQ(bundle.model.config(), m.config());
    EXPECT_EQ(flat_params(bundle.model.params()), flat_params(m.params()));
    EXPECT_EQ(bundle.input_vocab, corpus->vocabs.input);
    EXPECT_EQ(bundle.output_vocab, corpus->vocabs.output);
    ASSERT_TRUE(bundle.train);
    EXPECT_EQ(*bundle.train, t.config());
    EXPECT_EQ(bundle.progress.step, progress.step);
    ASSERT_TRUE(bundle.adam);
    EXPECT_EQ(encode_checkpoint(model_checkpoint(bundle.model, bundle.input_vocab, bundle.output_vocab)),
              encode_checkpoint(model_checkpoint(m, corpus->vocabs.input, corpus->vocabs.output)));
  }
}

TEST_F(TrainerTest, CorruptCheckpointsAreRejected) {
  Seq2SeqModel m(tiny_config(Variant::vanilla, corpus->vocabs));
  const std::string bytes = encode_checkpoint(model_checkpoint(m, corpus->vocabs.input, corpus->vocabs.output));
  std::string bad_magic = bytes;
  bad_magic[0] = 'X';
  EXPECT_EQ(kind_of([&] { decode_checkpoint(bad_magic); }), ErrorKind::data);
  std::string bad_version = bytes;
  bad_version[8] = 9;
  EXPECT_EQ(kind_of([&] { decode_checkpoint(bad_version); }), ErrorKind::data);
  EXPECT_EQ(kind_of([&] { decode_checkpoint(std::string_view(bytes).substr(0, bytes.size() / 2)); }),
            ErrorKind::data);
  EXPECT_EQ(kind_of([&] { decode_checkpoint(bytes + "x"); }), ErrorKind::data);
  EXPECT_EQ(kind_of([] { load_checkpoint("/nonexistent/sqlseq.bin"); }), ErrorKind::io);

  // A config that disagrees with the stored tensors fails before any model is returned.
  Checkpoint ckpt = decode_checkpoint(bytes);
  for (auto& [name, body] : ckpt.texts)
    if (name == "model.config") body.replace(body.find("hidden=8"), 8, "hidden=9");
  EXPECT_EQ(kind_of([&] { load_model_bundle(ckpt); }), ErrorKind::data);
}

TEST_F(TrainerTest, ResumeMatchesUninterruptedRun) {
  const fs::path full_dir = scratch_dir("resume_full");
  const fs::path part_dir = scratch_dir("resume_part");
  TrainOutputs full_out{full_dir, &corpus->vocabs.input, &corpus->vocabs.output};
  Seq2SeqModel full(tiny_config(Variant::vanilla, corpus->vocabs));
  Trainer t_full(full, small_train(4, 5));
  t_full.run(corpus->pairs, {}, full_out);

  TrainOutputs part_out{part_dir, &corpus->vocabs.input, &corpus->vocabs.output};
  {
    Seq2SeqModel first(tiny_config(Variant::vanilla, corpus->vocabs));
    Trainer t(first, small_train(2, 5));
    t.run(corpus->pairs, {}, part_out);
  }
  ModelBundle bundle = load_model_bundle(load_checkpoint(part_dir / "checkpoint.bin"));
  ASSERT_EQ(bundle.progress.epoch, 2u);
  Trainer t(bundle.model, small_train(4, 5));
  t.resume(bundle.progress, *bundle.adam);
  t.run(corpus->pairs, {}, part_out);

  EXPECT_EQ(flat_params(bundle.model.params()), flat_params(full.params()));
  EXPECT_EQ(read_text_file(part_dir / "curve.csv"), read_text_file(full_dir / "curve.csv"));
  EXPECT_EQ(read_text_file(part_dir / "checkpoint.bin"), read_text_file(full_dir / "checkpoint.bin"));
}

TEST_F(TrainerTest, NonFiniteLossAbortsAndKeepsLastGoodCheckpoint) {
  const fs::path dir = scratch_dir("nan");
  TrainOutputs out{dir, &corpus->vocabs.input, &corpus->vocabs.output};
  Seq2SeqModel m(tiny_config(Variant::vanilla, corpus->vocabs));
  {
    Trainer t(m, small_train(1, 12));
    t.run(corpus->pairs, {}, out);
  }
  const std::string good = read_text_file(dir / "checkpoint.bin");
  for (double& v : m.params().at(0).tensor.values()) v = std::nan("");
  Trainer t(m, small_train(3, 12));
  EXPECT_EQ(kind_of([&] { t.run(corpus->pairs, {}, out); }), ErrorKind::numeric);
  EXPECT_EQ(read_text_file(dir / "checkpoint.bin"), good);
}

EncodedCorpus single_batch() { return toy_corpus(3, 11); }

ModelConfig trainable_config(Variant v, const EncodedCorpus& corpus) {
  const auto& pairs = corpus.pairs;
  const auto& vocabs = corpus.vocabs;
  auto c = tiny_config(v, vocabs, 16);
  if (v == Variant::pointer) {
    // Toy-scale pointer runs need a wider init to leave the linear tanh regime.
    c.init_lo = -0.3;
    c.init_hi = 0.3;
    std::size_t longest = 0;
    for (const auto& p : pairs) longest = std::max(longest, p.input_ids.size());
    c.cell_size = longest + 1;
  }
  return c;
}

TEST(Trainability, LossDecreasesOnRepeatedBatchForEveryVariant) {
  const auto corpus = single_batch();
  for (Variant v : kAllVariants) {
    Seq2SeqModel m(trainable_config(v, corpus));
    auto cfg = small_train(1, 8);
    cfg.lr = TrainConfig::default_lr(v);
    Trainer t(m, cfg);
    Rng rng(1);
    const auto batch = bucket_batches(corpus.pairs, 8, rng).front();
    double previous = INFINITY;
    for (int k = 0; k < 5; ++k) {
      auto r = t.train_batch(batch.pairs, batch.weights);
      const double loss = r.nll_sum / r.weight_sum;
      EXPECT_LT(loss, previous) << to_string(v) << " step " << k;
      previous = loss;
    }
  }
}

TEST(Trainability, RepeatedBatchReachesNearZeroLossForEveryVariant) {
  const auto corpus = single_batch();
  for (Variant v : kAllVariants) {
    Seq2SeqModel m(trainable_config(v, corpus));
    auto cfg = small_train(1, 8);
    cfg.lr = v == Variant::pointer ? 0.001 : 0.01;
    Trainer t(m, cfg);
    Rng rng(1);
    const auto batch = bucket_batches(corpus.pairs, 8, rng).front();
    double loss = INFINITY;
    for (int k = 0; k < 3000 && loss > 0.01; ++k) {
      auto r = t.train_batch(batch.pairs, batch.weights);
      loss = r.nll_sum / r.weight_sum;
    }
    EXPECT_LE(loss, 0.01) << to_string(v);
  }
}

TEST(Trainability, PalindromicInputsGiveIdenticalVanillaAndReversedCurves) {
  auto corpus = toy_corpus(6, 13);
  for (auto& p : corpus.pairs) {
    auto mirrored = p.input_ids;
    mirrored.insert(mirrored.end(), p.input_ids.rbegin(), p.input_ids.rend());
    p.input_ids = mirrored;
  }
  auto run = [&](Variant v) {
    Seq2SeqModel m(tiny_config(v, corpus.vocabs));
    Trainer t(m, small_train(4, 3));
    auto r = t.run(corpus.pairs, {});
    std::string rows;
    for (const auto& p : r.curve) rows += curve_row(p);
    return rows;
  };
  EXPECT_EQ(run(Variant::vanilla), run(Variant::reversed));
}

TEST(Evaluate, MemorizedSetScoresPerfectly) {
  const auto corpus = toy_corpus(4, 17);
  Seq2SeqModel m(tiny_config(Variant::vanilla, corpus.vocabs, 24));
  Trainer t(m, small_train(400, 4));
  TrainHooks hooks;
  hooks.on_epoch = [](const CurvePoint& p) { return p.train_loss > 0.002; };
  t.run(corpus.pairs, {}, {}, hooks);
  auto report = evaluate_split(m, corpus.pairs, corpus.vocabs.input, corpus.vocabs.output);
  EXPECT_EQ(report.n_examples, 4u);
  EXPECT_DOUBLE_EQ(report.exact_match, 1.0);
  EXPECT_DOUBLE_EQ(report.bow_accuracy, 1.0);
  EXPECT_DOUBLE_EQ(report.where_accuracy, 1.0);
  for (const auto& pair : corpus.pairs) {
    auto pred = m.greedy_decode(pair.input_ids);
    EXPECT_EQ(pred.stopped_by, Prediction::Stop::eos);
    EXPECT_EQ(pred.tokens, strip_special(pair.target_ids));
  }
}

TEST(Evaluate, UntrainedPointerIsNearChanceAndReportsAreBounded) {
  const auto corpus = toy_corpus(40, 19);
  Seq2SeqModel m(tiny_config(Variant::pointer, corpus.vocabs));
  auto report = evaluate_split(m, corpus.pairs, corpus.vocabs.input, corpus.vocabs.output);
  ASSERT_TRUE(report.positional_accuracy);
  EXPECT_LT(*report.positional_accuracy, 0.25);
  for (double r : {report.exact_match, report.bow_accuracy, report.bow_accuracy_ref, *report.positional_accuracy,
                   report.agg_accuracy, report.sel_accuracy, report.where_accuracy}) {
    EXPECT_GE(r, 0.0);
    EXPECT_LE(r, 1.0);
  }
  EXPECT_LE(report.worst.size(), 10u);
  auto again = evaluate_split(m, corpus.pairs, corpus.vocabs.input, corpus.vocabs.output);
  EXPECT_EQ(report_to_json(report), report_to_json(again));
  EXPECT_EQ(report_to_csv(report), report_to_csv(again));
  EXPECT_EQ(report_to_csv(report).rfind("index,exact,bow_num,bow_den,positional_num,positional_den,agg,sel,where,parsed\n", 0), 0u);
}

}  // namespace
}  // namespace sqlseq

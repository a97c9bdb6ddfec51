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
#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sqlseq/checkpoint.hpp"
#include "sqlseq/dataset.hpp"
#include "sqlseq/model.hpp"
#include "sqlseq/optim.hpp"
#include "sqlseq/vocab.hpp"

namespace sqlseq {

struct TrainConfig {
  std::size_t epochs = 300;
  std::size_t batch_size = 128;
  double lr = 0.01;
  double clip_lo = -5.0;
  double clip_hi = 5.0;
  // Dev evaluation and checkpoint cadence in epochs. The last epoch always gets both.
  std::size_t eval_every = 10;
  std::uint64_t seed = 2;
  std::size_t threads = 1;
  // Stop after this many optimizer steps; 0 means no cap.
  std::size_t max_steps = 0;

  static double default_lr(Variant variant) noexcept { return variant == Variant::pointer ? 0.001 : 0.01; }

  // Throws a config error naming the offending field.
  void validate() const;
  std::string serialize() const;
  static TrainConfig parse(std::string_view text);

  friend bool operator==(const TrainConfig&, const TrainConfig&) = default;
};

struct CurvePoint {
  std::size_t epoch = 0;
  std::size_t step = 0;
  double train_loss = 0.0;
  double train_accuracy = 0.0;
  std::optional<double> dev_metric;
  double wall_ms = 0.0;
};

// "epoch,step,train_loss,train_acc,<dev_column>,wall_ms"
std::string curve_header(std::string_view dev_column);
std::string curve_row(const CurvePoint& point);

// Where a run resumes: epochs and optimizer steps already taken.
struct TrainingProgress {
  std::size_t epoch = 0;
  std::size_t step = 0;
  // Curve rows logged so far, without the header.
  std::string curve_rows;
};

// Everything needed to restore a seq2seq model and, optionally, continue training it.
struct ModelBundle {
  Seq2SeqModel model;
  Vocabulary input_vocab;
  Vocabulary output_vocab;
  std::optional<TrainConfig> train;
  TrainingProgress progress;
  std::optional<std::vector<AdamState>> adam;
};

// Copies every parameter into "param/<name>" tensors.
void store_parameters(Checkpoint& ckpt, const ParameterStore& params);
// Overwrites `params` from "param/<name>" tensors. Every parameter must be
// present with the same shape and no extra parameter tensors may exist;
// nothing is modified unless all checks pass.
void restore_parameters(ParameterStore& params, const Checkpoint& ckpt);

void store_adam(Checkpoint& ckpt, const ParameterStore& params, const Adam& adam);
std::vector<AdamState> restore_adam(const ParameterStore& params, const Checkpoint& ckpt);

Checkpoint model_checkpoint(const Seq2SeqModel& model, const Vocabulary& input_vocab,
                            const Vocabulary& output_vocab, const TrainConfig* train = nullptr,
                            const TrainingProgress* progress = nullptr, const Adam* adam = nullptr);
ModelBundle load_model_bundle(const Checkpoint& ckpt);

struct TrainOutputs {
  // Directory receiving curve.csv, checkpoint.bin and the final checkpoint; empty disables all file output.
  std::filesystem::path out_dir;
  const Vocabulary* input_vocab = nullptr;
  const Vocabulary* output_vocab = nullptr;
  // Record real elapsed time in the curve; off by default so curves are reproducible byte for byte.
  bool log_wall_time = false;
};

struct TrainHooks {
  // Called after each epoch's curve point; returning false stops training.
  std::function<bool(const CurvePoint&)> on_epoch;
  // Called after every optimizer step with the global step count.
  std::function<void(std::size_t step)> on_step;
};

struct TrainResult {
  std::vector<CurvePoint> curve;
  TrainingProgress progress;
  std::size_t skipped_pairs = 0;  // pairs the variant cannot train on
};

// Teacher-forced training with Adam and elementwise gradient clipping.
//
// Each epoch shuffles bucketed batches with a stream derived from
// (config.seed, epoch), so a run resumed from a checkpoint repeats exactly
// what the uninterrupted run would have done. Gradients of the examples in a
// batch are accumulated in a fixed number of ordered slots and reduced in
// slot order, which keeps results independent of the thread count.
class Trainer {
 public:
  Trainer(Seq2SeqModel& model, TrainConfig config);

  // Continue from a saved state instead of a fresh optimizer.
  void resume(const TrainingProgress& progress, std::vector<AdamState> adam_states);

  const TrainConfig& config() const noexcept { return config_; }
  const Adam& optimizer() const noexcept { return adam_; }
  const TrainingProgress& progress() const noexcept { return progress_; }

  // One optimizer step on one batch; returns (weighted NLL sum, weight, correct, counted).
  ForwardResult train_batch(std::span<const EncodedPair> pairs, std::span<const std::vector<double>> weights);

  TrainResult run(std::span<const EncodedPair> train, std::span<const EncodedPair> dev,
                  const TrainOutputs& outputs = {}, const TrainHooks& hooks = {});

 private:
  Seq2SeqModel& model_;
  TrainConfig config_;
  Adam adam_;
  TrainingProgress progress_;
  std::vector<GradSet> slots_;
  std::vector<std::unique_ptr<Graph>> graphs_;  // one per slot, recycled across steps
};

}  // namespace sqlseq

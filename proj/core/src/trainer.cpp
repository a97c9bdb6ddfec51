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

#include "sqlseq/trainer.hpp"

#include <chrono>
#include <cmath>

#include <fmt/format.h>

#include "sqlseq/batching.hpp"
#include "sqlseq/errors.hpp"
#include "sqlseq/io.hpp"
#include "sqlseq/keyvalues.hpp"
#include "sqlseq/metrics.hpp"
#include "sqlseq/parallel.hpp"

namespace sqlseq {

namespace {

// Gradient accumulation slots per batch. Fixed, so the floating-point
// summation order never depends on how many threads run.
constexpr std::size_t kGradSlots = 4;

constexpr std::string_view kParamPrefix = "param/";
constexpr std::string_view kAdamMPrefix = "adam.m/";
constexpr std::string_view kAdamVPrefix = "adam.v/";

std::string prefixed(std::string_view prefix, const std::string& name) {
  return std::string(prefix) + name;
}

}  // namespace

void TrainConfig::validate() const {
  if (epochs == 0) raise(ErrorKind::config, "epochs must be positive");
  if (batch_size == 0) raise(ErrorKind::config, "batch_size must be positive");
  if (!(lr > 0.0) || !std::isfinite(lr)) raise(ErrorKind::config, "lr must be positive, got {}", lr);
  if (!(clip_lo < clip_hi)) raise(ErrorKind::config, "clip range [{}, {}] is empty", clip_lo, clip_hi);
  if (eval_every == 0) raise(ErrorKind::config, "eval_every must be positive");
  if (threads == 0) raise(ErrorKind::config, "threads must be positive");
}

std::string TrainConfig::serialize() const {
  KeyValues kv;
  kv.set("epochs", fmt::format("{}", epochs));
  kv.set("batch_size", fmt::format("{}", batch_size));
  kv.set("lr", fmt::format("{}", lr));
  kv.set("clip_lo", fmt::format("{}", clip_lo));
  kv.set("clip_hi", fmt::format("{}", clip_hi));
  kv.set("eval_every", fmt::format("{}", eval_every));
  kv.set("seed", fmt::format("{}", seed));
  kv.set("max_steps", fmt::format("{}", max_steps));
  return kv.serialize();
}

TrainConfig TrainConfig::parse(std::string_view text) {
  const KeyValues kv = KeyValues::parse(text);
  TrainConfig c;
  c.epochs = kv.get_size("epochs", c.epochs);
  c.batch_size = kv.get_size("batch_size", c.batch_size);
  c.lr = kv.get_double("lr", c.lr);
  c.clip_lo = kv.get_double("clip_lo", c.clip_lo);
  c.clip_hi = kv.get_double("clip_hi", c.clip_hi);
  c.eval_every = kv.get_size("eval_every", c.eval_every);
  c.seed = kv.get_u64("seed", c.seed);
  c.max_steps = kv.get_size("max_steps", c.max_steps);
  return c;
}

std::string curve_header(std::string_view dev_column) {
  return fmt::format("epoch,step,train_loss,train_acc,{},wall_ms\n", dev_column);
}

std::string curve_row(const CurvePoint& p) {
  const std::string dev = p.dev_metric ? fmt::format("{:.6f}", *p.dev_metric) : std::string();
  return fmt::format("{},{},{:.8f},{:.6f},{},{:.0f}\n", p.epoch, p.step, p.train_loss, p.train_accuracy, dev,
                     p.wall_ms);
}

void store_parameters(Checkpoint& ckpt, const ParameterStore& params) {
  for (const Parameter& p : params) ckpt.add_tensor(prefixed(kParamPrefix, p.name), p.tensor);
}

void restore_parameters(ParameterStore& params, const Checkpoint& ckpt) {
  std::size_t stored = 0;
  for (const auto& [name, t] : ckpt.tensors)
    if (name.starts_with(kParamPrefix)) ++stored;
  if (stored != params.size())
    raise(ErrorKind::data, "checkpoint holds {} parameters, model expects {}", stored, params.size());
  for (const Parameter& p : params) {
    const Tensor& t = ckpt.tensor(prefixed(kParamPrefix, p.name));
    if (t.shape() != p.tensor.shape())
      raise(ErrorKind::data, "parameter '{}' has shape {} in the checkpoint, model expects {}", p.name,
            to_string(t.shape()), to_string(p.tensor.shape()));
  }
  for (Parameter& p : params) {
    const Tensor& t = ckpt.tensor(prefixed(kParamPrefix, p.name));
    std::copy(t.values().begin(), t.values().end(), p.tensor.values().begin());
    p.tensor.zero_grad();
  }
}

void store_adam(Checkpoint& ckpt, const ParameterStore& params, const Adam& adam) {
  std::size_t i = 0;
  for (const Parameter& p : params) {
    const AdamState& s = adam.states()[i++];
    ckpt.add_tensor(prefixed(kAdamMPrefix, p.name), Tensor(p.tensor.shape(), s.m));
    ckpt.add_tensor(prefixed(kAdamVPrefix, p.name), Tensor(p.tensor.shape(), s.v));
  }
  KeyValues kv;
  kv.set("t", fmt::format("{}", adam.steps()));
  ckpt.add_text("adam", kv.serialize());
}

std::vector<AdamState> restore_adam(const ParameterStore& params, const Checkpoint& ckpt) {
  const std::uint64_t t = KeyValues::parse(ckpt.text("adam")).get_u64("t", 0);
  std::vector<AdamState> states;
  for (const Parameter& p : params) {
    AdamState s = AdamState::for_tensor(p.tensor);
    const Tensor& m = ckpt.tensor(prefixed(kAdamMPrefix, p.name));
    const Tensor& v = ckpt.tensor(prefixed(kAdamVPrefix, p.name));
    if (m.shape() != p.tensor.shape() || v.shape() != p.tensor.shape())
      raise(ErrorKind::data, "optimizer state for '{}' does not match the parameter shape", p.name);
    s.m.assign(m.values().begin(), m.values().end());
    s.v.assign(v.values().begin(), v.values().end());
    s.t = t;
    states.push_back(std::move(s));
  }
  return states;
}

Checkpoint model_checkpoint(const Seq2SeqModel& model, const Vocabulary& input_vocab,
                            const Vocabulary& output_vocab, const TrainConfig* train,
                            const TrainingProgress* progress, const Adam* adam) {
  Checkpoint ckpt;
  ckpt.add_text("kind", "seq2seq");
  ckpt.add_text("model.config", model.config().serialize());
  ckpt.add_text("vocab.input", input_vocab.serialize());
  ckpt.add_text("vocab.output", output_vocab.serialize());
  if (train) ckpt.add_text("train.config", train->serialize());
  if (progress) {
    KeyValues kv;
    kv.set("epoch", fmt::format("{}", progress->epoch));
    kv.set("step", fmt::format("{}", progress->step));
    ckpt.add_text("progress", kv.serialize());
    ckpt.add_text("curve", progress->curve_rows);
  }
  store_parameters(ckpt, model.params());
  if (adam) store_adam(ckpt, model.params(), *adam);
  return ckpt;
}

ModelBundle load_model_bundle(const Checkpoint& ckpt) {
  if (ckpt.text("kind") != "seq2seq")
    raise(ErrorKind::data, "checkpoint holds a '{}' model, expected a seq2seq model", ckpt.text("kind"));
  const ModelConfig config = ModelConfig::parse(ckpt.text("model.config"));
  Vocabulary input = Vocabulary::parse(ckpt.text("vocab.input"));
  Vocabulary output = Vocabulary::parse(ckpt.text("vocab.output"));
  if (input.size() != config.input_vocab || (config.variant != Variant::pointer && output.size() != config.output_vocab))
    raise(ErrorKind::data, "checkpoint vocabularies ({} / {}) disagree with its model config ({} / {})",
          input.size(), output.size(), config.input_vocab, config.output_vocab);

  ModelBundle bundle{Seq2SeqModel(config), std::move(input), std::move(output), std::nullopt, {}, std::nullopt};
  restore_parameters(bundle.model.params(), ckpt);
  if (const std::string* t = ckpt.find_text("train.config")) bundle.train = TrainConfig::parse(*t);
  if (const std::string* p = ckpt.find_text("progress")) {
    const KeyValues kv = KeyValues::parse(*p);
    bundle.progress.epoch = kv.get_size("epoch", 0);
    bundle.progress.step = kv.get_size("step", 0);
    if (const std::string* c = ckpt.find_text("curve")) bundle.progress.curve_rows = *c;
  }
  if (ckpt.find_text("adam")) bundle.adam = restore_adam(bundle.model.params(), ckpt);
  return bundle;
}

Trainer::Trainer(Seq2SeqModel& model, TrainConfig config)
    : model_(model), config_(std::move(config)), adam_(model.params()) {
  config_.validate();
  slots_.reserve(kGradSlots);
  for (std::size_t i = 0; i < kGradSlots; ++i) {
    slots_.emplace_back(model_.params());
    graphs_.push_back(std::make_unique<Graph>(model_.params()));
  }
}

void Trainer::resume(const TrainingProgress& progress, std::vector<AdamState> adam_states) {
  if (adam_states.size() != adam_.states().size())
    raise(ErrorKind::data, "optimizer state covers {} parameters, model has {}", adam_states.size(),
          adam_.states().size());
  adam_.states() = std::move(adam_states);
  progress_ = progress;
}

ForwardResult Trainer::train_batch(std::span<const EncodedPair> pairs,
                                   std::span<const std::vector<double>> weights) {
  if (pairs.empty()) raise(ErrorKind::data, "empty batch");
  if (weights.size() != pairs.size())
    raise(ErrorKind::dimension, "{} weight rows for {} pairs", weights.size(), pairs.size());
  double total = 0.0;
  for (std::size_t i = 0; i < pairs.size(); ++i) total += model_.effective_weight(pairs[i], weights[i]);
  if (!(total > 0.0)) raise(ErrorKind::data, "batch has zero total weight");
  const double scale = 1.0 / total;

  const std::size_t n = pairs.size();
  const std::size_t used = std::min(kGradSlots, n);
  std::vector<ForwardResult> results(n);
  parallel_for(used, config_.threads, [&](std::size_t s) {
    GradSet& slot = slots_[s];
    slot.zero();
    for (std::size_t i = n * s / used; i < n * (s + 1) / used; ++i) {
      Graph& g = *graphs_[s];
      g.clear(&slot);
      results[i] = model_.forward(g, pairs[i], weights[i], scale);
      g.backward(results[i].loss);
    }
  });

  ParameterStore& params = model_.params();
  params.zero_grad();
  for (std::size_t s = 0; s < used; ++s) slots_[s].add_to(params);
  clip_gradients(params, config_.clip_lo, config_.clip_hi);
  for (const Parameter& p : params) {
    for (double g : p.tensor.grad()) {
      if (!(g >= config_.clip_lo && g <= config_.clip_hi))
        raise(ErrorKind::numeric, "gradient of '{}' is {} after clipping at step {}", p.name, g,
              progress_.step + 1);
    }
  }
  adam_.step(params, config_.lr);
  ++progress_.step;

  ForwardResult sum;
  for (const ForwardResult& r : results) {
    sum.nll_sum += r.nll_sum;
    sum.weight_sum += r.weight_sum;
    sum.correct += r.correct;
    sum.counted += r.counted;
  }
  if (!std::isfinite(sum.nll_sum)) raise(ErrorKind::numeric, "non-finite training loss at step {}", progress_.step);
  return sum;
}

TrainResult Trainer::run(std::span<const EncodedPair> train, std::span<const EncodedPair> dev,
                         const TrainOutputs& outputs, const TrainHooks& hooks) {
  TrainResult result;
  std::vector<EncodedPair> usable;
  usable.reserve(train.size());
  for (const EncodedPair& p : train) {
    if (model_.accepts(p))
      usable.push_back(p);
    else
      ++result.skipped_pairs;
  }
  if (usable.empty()) raise(ErrorKind::data, "no trainable pairs ({} skipped)", result.skipped_pairs);

  const bool write_files = !outputs.out_dir.empty();
  const bool can_eval = outputs.input_vocab && outputs.output_vocab && !dev.empty();
  if (write_files) {
    if (!outputs.input_vocab || !outputs.output_vocab)
      raise(ErrorKind::config, "vocabularies are required to write checkpoints");
    ensure_directory(outputs.out_dir);
  }

  auto save = [&] {
    if (!write_files) return;
    const Checkpoint ckpt = model_checkpoint(model_, *outputs.input_vocab, *outputs.output_vocab, &config_,
                                             &progress_, &adam_);
    save_checkpoint(outputs.out_dir / "checkpoint.bin", ckpt);
  };

  const auto started = std::chrono::steady_clock::now();
  bool stop = config_.max_steps != 0 && progress_.step >= config_.max_steps;
  for (std::size_t epoch = progress_.epoch + 1; epoch <= config_.epochs && !stop; ++epoch) {
    Rng rng(mix_seed(config_.seed, epoch));
    const std::vector<Batch> batches = bucket_batches(usable, config_.batch_size, rng);
    double nll = 0.0, weight = 0.0;
    std::size_t correct = 0, counted = 0;
    for (const Batch& b : batches) {
      const ForwardResult r = train_batch(b.pairs, b.weights);
      nll += r.nll_sum;
      weight += r.weight_sum;
      correct += r.correct;
      counted += r.counted;
      if (hooks.on_step) hooks.on_step(progress_.step);
      if (config_.max_steps != 0 && progress_.step >= config_.max_steps) {
        stop = true;
        break;
      }
    }

    CurvePoint point;
    point.epoch = epoch;
    point.step = progress_.step;
    point.train_loss = nll / weight;
    point.train_accuracy = counted ? static_cast<double>(correct) / static_cast<double>(counted) : 0.0;
    const bool last = stop || epoch == config_.epochs;
    const bool checkpoint_epoch = last || epoch % config_.eval_every == 0;
    if (checkpoint_epoch && can_eval) {
      EvaluateOptions opts;
      opts.threads = config_.threads;
      opts.worst_count = 0;
      point.dev_metric = evaluate_split(model_, dev, *outputs.input_vocab, *outputs.output_vocab, opts).bow_accuracy;
    }
    if (outputs.log_wall_time)
      point.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();

    progress_.epoch = epoch;
    progress_.curve_rows += curve_row(point);
    result.curve.push_back(point);
    if (write_files) write_file_atomic(outputs.out_dir / "curve.csv", curve_header("dev_bow") + progress_.curve_rows);
    if (hooks.on_epoch && !hooks.on_epoch(point)) stop = true;
    if (checkpoint_epoch || stop) save();
  }
  result.progress = progress_;
  return result;
}

}  // namespace sqlseq

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

#include "sqlseq/probe.hpp"

#include <algorithm>
#include <chrono>
#include <charconv>
#include <cmath>
#include <memory>

#include <fmt/format.h>

#include "sqlseq/errors.hpp"
#include "sqlseq/io.hpp"
#include "sqlseq/keyvalues.hpp"
#include "sqlseq/optim.hpp"
#include "sqlseq/parallel.hpp"
#include "sqlseq/rng.hpp"

namespace sqlseq {

namespace {

constexpr std::size_t kGradSlots = 4;

std::string join_sizes(std::span<const std::size_t> sizes) {
  std::string out;
  for (std::size_t s : sizes) out += (out.empty() ? "" : ",") + fmt::format("{}", s);
  return out;
}

std::vector<std::size_t> parse_sizes(const std::string& text) {
  std::vector<std::size_t> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find(',', pos);
    if (end == std::string::npos) end = text.size();
    std::size_t value = 0;
    auto [ptr, ec] = std::from_chars(text.data() + pos, text.data() + end, value);
    if (ec != std::errc{} || ptr != text.data() + end)
      raise(ErrorKind::config, "mlp_hidden expects comma-separated sizes, got '{}'", text);
    out.push_back(value);
    pos = end + 1;
  }
  return out;
}

std::size_t argmax(std::span<const double> row) {
  return static_cast<std::size_t>(std::max_element(row.begin(), row.end()) - row.begin());
}

}  // namespace

int extract_agg_label(const SqlTarget& sql) {
  if (sql.agg < 0 || sql.agg >= kAggregationCount)
    raise(ErrorKind::data, "aggregation index {} outside 0..{}", sql.agg, kAggregationCount - 1);
  return sql.agg;
}

std::vector<ProbeExample> probe_examples(std::span<const EncodedPair> pairs) {
  std::vector<ProbeExample> out;
  out.reserve(pairs.size());
  for (const EncodedPair& p : pairs) {
    if (p.question_ids.empty()) raise(ErrorKind::data, "pair has an empty question");
    SqlTarget sql;
    sql.agg = p.agg;
    out.push_back({p.question_ids, extract_agg_label(sql)});
  }
  return out;
}

std::array<std::size_t, kAggregationCount> label_histogram(std::span<const ProbeExample> examples) {
  std::array<std::size_t, kAggregationCount> counts{};
  for (const ProbeExample& e : examples) ++counts.at(static_cast<std::size_t>(e.label));
  return counts;
}

double majority_baseline(std::span<const ProbeExample> reference, std::span<const ProbeExample> examples) {
  if (examples.empty()) return 0.0;
  const auto counts = label_histogram(reference);
  const int majority = static_cast<int>(std::max_element(counts.begin(), counts.end()) - counts.begin());
  const auto hits = std::count_if(examples.begin(), examples.end(),
                                  [&](const ProbeExample& e) { return e.label == majority; });
  return static_cast<double>(hits) / static_cast<double>(examples.size());
}

std::vector<ProbeExample> shuffle_labels(std::span<const ProbeExample> examples, std::uint64_t seed) {
  std::vector<int> labels;
  for (const ProbeExample& e : examples) labels.push_back(e.label);
  Rng rng(seed);
  rng.shuffle(labels);
  std::vector<ProbeExample> out(examples.begin(), examples.end());
  for (std::size_t i = 0; i < out.size(); ++i) out[i].label = labels[i];
  return out;
}

void ProbeConfig::validate() const {
  if (hidden == 0) raise(ErrorKind::config, "hidden must be positive");
  if (layers == 0) raise(ErrorKind::config, "layers must be positive");
  if (use_embedding && embed == 0) raise(ErrorKind::config, "embed must be positive");
  for (std::size_t h : mlp_hidden)
    if (h == 0) raise(ErrorKind::config, "mlp_hidden sizes must be positive");
  if (!(init_lo < init_hi)) raise(ErrorKind::config, "init range [{}, {}] is empty", init_lo, init_hi);
  if (input_vocab <= Vocabulary::kUnk)
    raise(ErrorKind::config, "input_vocab must cover the reserved tokens, got {}", input_vocab);
}

std::string ProbeConfig::serialize() const {
  KeyValues kv;
  kv.set("hidden", fmt::format("{}", hidden));
  kv.set("layers", fmt::format("{}", layers));
  kv.set("embed", fmt::format("{}", embed));
  kv.set("use_embedding", use_embedding ? "true" : "false");
  kv.set("mlp_hidden", join_sizes(mlp_hidden));
  kv.set("init_lo", fmt::format("{}", init_lo));
  kv.set("init_hi", fmt::format("{}", init_hi));
  kv.set("seed", fmt::format("{}", seed));
  kv.set("input_vocab", fmt::format("{}", input_vocab));
  return kv.serialize();
}

ProbeConfig ProbeConfig::parse(std::string_view text) {
  const KeyValues kv = KeyValues::parse(text);
  ProbeConfig c;
  c.hidden = kv.get_size("hidden", c.hidden);
  c.layers = kv.get_size("layers", c.layers);
  c.embed = kv.get_size("embed", c.embed);
  c.use_embedding = kv.get_bool("use_embedding", c.use_embedding);
  if (const std::string* m = kv.find("mlp_hidden")) c.mlp_hidden = parse_sizes(*m);
  c.init_lo = kv.get_double("init_lo", c.init_lo);
  c.init_hi = kv.get_double("init_hi", c.init_hi);
  c.seed = kv.get_u64("seed", c.seed);
  c.input_vocab = kv.get_size("input_vocab", c.input_vocab);
  return c;
}

AggProbe::AggProbe(ProbeConfig config) : config_(std::move(config)) {
  config_.validate();
  Rng rng(config_.seed);
  const InitRange init{config_.init_lo, config_.init_hi};
  std::size_t input_dim = config_.input_vocab;
  if (config_.use_embedding) {
    embed_ = params_.add_uniform("embed.input", {config_.input_vocab, config_.embed}, init.lo, init.hi, rng);
    input_dim = config_.embed;
  }
  encoder_ = LstmParams::create(params_, "encoder", input_dim, config_.hidden, config_.layers, init, rng);
  mlp_ = MlpParams::create(params_, "mlp", config_.hidden, config_.mlp_hidden, kAggregationCount, init, rng);
}

Var AggProbe::forward(Graph& g, std::span<const TokenId> question) const {
  if (question.empty()) raise(ErrorKind::data, "empty question");
  UnrollResult r = embed_ ? unroll(g, encoder_, embedding_lookup(g, *embed_, question), zero_state(g, encoder_))
                          : unroll_one_hot(g, encoder_, question, zero_state(g, encoder_));
  return mlp_forward(g, mlp_, r.final.back().h);
}

int AggProbe::predict(std::span<const TokenId> question) const {
  Graph g(params_);
  return static_cast<int>(argmax(g.value(forward(g, question))));
}

double AggProbe::accuracy(std::span<const ProbeExample> examples, std::size_t threads) const {
  if (examples.empty()) return 0.0;
  std::vector<char> hit(examples.size(), 0);
  parallel_for(examples.size(), threads,
               [&](std::size_t i) { hit[i] = predict(examples[i].question) == examples[i].label; });
  const auto hits = std::count(hit.begin(), hit.end(), 1);
  return static_cast<double>(hits) / static_cast<double>(examples.size());
}

void AggProbe::load_encoder(const Checkpoint& parser_checkpoint) {
  std::size_t copied = 0;
  for (Parameter& p : params_) {
    if (!p.name.starts_with("encoder.") && p.name != "embed.input") continue;
    const Tensor* t = parser_checkpoint.find_tensor("param/" + p.name);
    if (!t) raise(ErrorKind::data, "parser checkpoint has no '{}' (bidirectional encoders cannot seed the probe)", p.name);
    if (t->shape() != p.tensor.shape())
      raise(ErrorKind::data, "parser '{}' has shape {}, probe expects {}", p.name, to_string(t->shape()),
            to_string(p.tensor.shape()));
    std::copy(t->values().begin(), t->values().end(), p.tensor.values().begin());
    ++copied;
  }
  if (copied == 0) raise(ErrorKind::data, "parser checkpoint shares no encoder parameters with the probe");
}

Checkpoint probe_checkpoint(const AggProbe& probe, const Vocabulary& input_vocab) {
  Checkpoint ckpt;
  ckpt.add_text("kind", "probe");
  ckpt.add_text("probe.config", probe.config().serialize());
  ckpt.add_text("vocab.input", input_vocab.serialize());
  store_parameters(ckpt, probe.params());
  return ckpt;
}

AggProbe load_probe(const Checkpoint& ckpt) {
  if (ckpt.text("kind") != "probe")
    raise(ErrorKind::data, "checkpoint holds a '{}' model, expected a probe", ckpt.text("kind"));
  AggProbe probe(ProbeConfig::parse(ckpt.text("probe.config")));
  restore_parameters(probe.params(), ckpt);
  return probe;
}

ProbeResult train_probe(AggProbe& probe, std::span<const ProbeExample> train, std::span<const ProbeExample> dev,
                        const TrainConfig& config, const TrainOutputs& outputs, const TrainHooks& hooks) {
  config.validate();
  if (train.empty()) raise(ErrorKind::data, "probe training set is empty");
  ProbeResult result;
  const auto counts = label_histogram(train);
  if (std::count_if(counts.begin(), counts.end(), [](std::size_t c) { return c > 0; }) < 2)
    result.warnings.push_back("degenerate data: the training set contains a single aggregation class");
  result.majority_baseline = dev.empty() ? majority_baseline(train, train) : majority_baseline(train, dev);

  const bool write_files = !outputs.out_dir.empty();
  if (write_files) {
    if (!outputs.input_vocab) raise(ErrorKind::config, "the input vocabulary is required to write checkpoints");
    ensure_directory(outputs.out_dir);
  }

  ParameterStore& params = probe.params();
  Adam adam(params);
  std::vector<GradSet> slots;
  std::vector<std::unique_ptr<Graph>> graphs;
  for (std::size_t i = 0; i < kGradSlots; ++i) {
    slots.emplace_back(params);
    graphs.push_back(std::make_unique<Graph>(params));
  }

  std::vector<std::size_t> order(train.size());
  std::string rows;
  const auto started = std::chrono::steady_clock::now();
  bool stop = false;
  for (std::size_t epoch = 1; epoch <= config.epochs && !stop; ++epoch) {
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    Rng rng(mix_seed(config.seed, epoch));
    rng.shuffle(order);

    double loss_sum = 0.0;
    std::size_t correct = 0;
    for (std::size_t begin = 0; begin < order.size() && !stop; begin += config.batch_size) {
      const std::size_t n = std::min(config.batch_size, order.size() - begin);
      const std::size_t used = std::min(kGradSlots, n);
      const double scale = 1.0 / static_cast<double>(n);
      std::vector<double> losses(n);
      std::vector<char> hits(n, 0);
      parallel_for(used, config.threads, [&](std::size_t s) {
        slots[s].zero();
        for (std::size_t k = n * s / used; k < n * (s + 1) / used; ++k) {
          const ProbeExample& ex = train[order[begin + k]];
          Graph& g = *graphs[s];
          g.clear(&slots[s]);
          Var logits = probe.forward(g, ex.question);
          const TokenId target[1] = {ex.label};
          const double weight[1] = {1.0};
          Var loss = g.weighted_cross_entropy(logits, target, weight, scale);
          g.backward(loss);
          losses[k] = g.scalar(loss) / scale;
          hits[k] = static_cast<int>(argmax(g.value(logits))) == ex.label;
        }
      });
      params.zero_grad();
      for (std::size_t s = 0; s < used; ++s) slots[s].add_to(params);
      clip_gradients(params, config.clip_lo, config.clip_hi);
      adam.step(params, config.lr);
      ++result.steps;
      for (std::size_t k = 0; k < n; ++k) {
        loss_sum += losses[k];
        correct += hits[k];
      }
      if (!std::isfinite(loss_sum)) raise(ErrorKind::numeric, "non-finite probe loss at step {}", result.steps);
      if (hooks.on_step) hooks.on_step(result.steps);
      if (config.max_steps != 0 && result.steps >= config.max_steps) stop = true;
    }

    CurvePoint point;
    point.epoch = epoch;
    point.step = result.steps;
    point.train_loss = loss_sum / static_cast<double>(train.size());
    point.train_accuracy = static_cast<double>(correct) / static_cast<double>(train.size());
    if (!dev.empty()) point.dev_metric = probe.accuracy(dev, config.threads);
    if (outputs.log_wall_time)
      point.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
    rows += curve_row(point);
    result.curve.push_back(point);
    if (write_files) write_file_atomic(outputs.out_dir / "curve.csv", curve_header("dev_acc") + rows);
    if (hooks.on_epoch && !hooks.on_epoch(point)) stop = true;
    const bool last = stop || epoch == config.epochs;
    if (write_files && (last || epoch % config.eval_every == 0))
      save_checkpoint(outputs.out_dir / "probe.bin", probe_checkpoint(probe, *outputs.input_vocab));
  }
  return result;
}

}  // namespace sqlseq

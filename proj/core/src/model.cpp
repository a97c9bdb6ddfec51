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

#include "sqlseq/model.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "sqlseq/batching.hpp"
#include "sqlseq/errors.hpp"
#include "sqlseq/keyvalues.hpp"

namespace sqlseq {

std::string_view to_string(Variant v) noexcept {
  switch (v) {
    case Variant::vanilla: return "vanilla";
    case Variant::reversed: return "reversed";
    case Variant::bidirectional: return "bidirectional";
    case Variant::attention: return "attention";
    case Variant::pointer: return "pointer";
  }
  return "unknown";
}

Variant parse_variant(std::string_view name) {
  for (Variant v : kAllVariants)
    if (to_string(v) == name) return v;
  raise(ErrorKind::config, "unknown variant '{}' (expected vanilla, reversed, bidirectional, attention or pointer)",
        name);
}

void ModelConfig::validate() const {
  if (hidden == 0) raise(ErrorKind::config, "hidden must be positive");
  if (layers == 0) raise(ErrorKind::config, "layers must be positive");
  if (embed == 0) raise(ErrorKind::config, "embed must be positive");
  if (max_decode_len == 0) raise(ErrorKind::config, "max_decode_len must be positive");
  if (!(init_lo < init_hi) || !std::isfinite(init_lo) || !std::isfinite(init_hi))
    raise(ErrorKind::config, "init range [{}, {}] is empty", init_lo, init_hi);
  if (input_vocab <= Vocabulary::kUnk)
    raise(ErrorKind::config, "input_vocab must cover the reserved tokens, got {}", input_vocab);
  if (variant == Variant::pointer) {
    if (cell_size == 0) raise(ErrorKind::config, "cell_size is required for the pointer variant");
    if (pointer_eos && cell_size < 2)
      raise(ErrorKind::config, "cell_size must be at least 2 when pointing at EOS, got {}", cell_size);
  } else if (output_vocab <= Vocabulary::kUnk) {
    raise(ErrorKind::config, "output_vocab must cover the reserved tokens, got {}", output_vocab);
  }
}

std::size_t ModelConfig::decode_limit() const noexcept {
  return variant == Variant::pointer ? cell_size : max_decode_len;
}

std::string ModelConfig::serialize() const {
  KeyValues kv;
  kv.set("variant", std::string(to_string(variant)));
  kv.set("hidden", fmt::format("{}", hidden));
  kv.set("layers", fmt::format("{}", layers));
  kv.set("embed", fmt::format("{}", embed));
  kv.set("cell_size", fmt::format("{}", cell_size));
  kv.set("max_decode_len", fmt::format("{}", max_decode_len));
  kv.set("init_lo", fmt::format("{}", init_lo));
  kv.set("init_hi", fmt::format("{}", init_hi));
  kv.set("seed", fmt::format("{}", seed));
  kv.set("project_keys", project_keys ? "true" : "false");
  kv.set("pointer_eos", pointer_eos ? "true" : "false");
  kv.set("input_vocab", fmt::format("{}", input_vocab));
  kv.set("output_vocab", fmt::format("{}", output_vocab));
  return kv.serialize();
}

ModelConfig ModelConfig::parse(std::string_view text) {
  const KeyValues kv = KeyValues::parse(text);
  ModelConfig c;
  c.variant = parse_variant(kv.get_string("variant", std::string(to_string(c.variant))));
  c.hidden = kv.get_size("hidden", c.hidden);
  c.layers = kv.get_size("layers", c.layers);
  c.embed = kv.get_size("embed", c.embed);
  c.cell_size = kv.get_size("cell_size", c.cell_size);
  c.max_decode_len = kv.get_size("max_decode_len", c.max_decode_len);
  c.init_lo = kv.get_double("init_lo", c.init_lo);
  c.init_hi = kv.get_double("init_hi", c.init_hi);
  c.seed = kv.get_u64("seed", c.seed);
  c.project_keys = kv.get_bool("project_keys", c.project_keys);
  c.pointer_eos = kv.get_bool("pointer_eos", c.pointer_eos);
  c.input_vocab = kv.get_size("input_vocab", c.input_vocab);
  c.output_vocab = kv.get_size("output_vocab", c.output_vocab);
  return c;
}

std::vector<TokenId> reverse_input(std::span<const TokenId> ids) {
  return std::vector<TokenId>(ids.rbegin(), ids.rend());
}

namespace {

bool uses_bidirectional(Variant v) {
  return v == Variant::bidirectional || v == Variant::attention || v == Variant::pointer;
}

bool uses_memory(Variant v) { return v == Variant::attention || v == Variant::pointer; }

std::size_t argmax(std::span<const double> row) {
  return static_cast<std::size_t>(std::max_element(row.begin(), row.end()) - row.begin());
}

}  // namespace

Seq2SeqModel::Seq2SeqModel(ModelConfig config) : config_(std::move(config)) {
  config_.validate();
  Rng rng(config_.seed);
  const InitRange init{config_.init_lo, config_.init_hi};
  const std::size_t H = config_.hidden;
  const Variant v = config_.variant;

  input_embed_ = params_.add_uniform("embed.input", {config_.input_vocab, config_.embed},
                                     init.lo, init.hi, rng);
  if (v != Variant::pointer)
    output_embed_ = params_.add_uniform("embed.output", {config_.output_vocab, config_.embed},
                                        init.lo, init.hi, rng);

  if (uses_bidirectional(v))
    bi_encoder_ = BidirectionalParams::create(params_, "encoder", config_.embed, H, config_.layers, init, rng);
  else
    encoder_ = LstmParams::create(params_, "encoder", config_.embed, H, config_.layers, init, rng);

  decoder_ = LstmParams::create(params_, "decoder", config_.embed, H, config_.layers, init, rng);

  std::size_t key_dim = 2 * H;
  if (uses_memory(v)) {
    if (config_.project_keys) {
      key_projection_ = params_.add_uniform("attention.key_projection", {2 * H, H}, init.lo, init.hi, rng);
      key_dim = H;
    }
    attention_ = AttentionParams::create(params_, "attention", key_dim, H, H, init, rng);
  }

  if (v != Variant::pointer) {
    const std::size_t features = v == Variant::attention ? H + key_dim : H;
    output_w_ = params_.add_uniform("output.w", {features, config_.output_vocab}, init.lo, init.hi, rng);
    output_b_ = params_.add_uniform("output.b", {config_.output_vocab}, init.lo, init.hi, rng);
  }
}

std::vector<TokenId> Seq2SeqModel::source_ids(std::span<const TokenId> input_ids) const {
  if (input_ids.empty()) raise(ErrorKind::data, "empty input sequence");
  switch (config_.variant) {
    case Variant::reversed: return reverse_input(input_ids);
    case Variant::pointer:
      if (config_.pointer_eos) {
        std::vector<TokenId> cycle(input_ids.begin(), input_ids.end());
        cycle.push_back(Vocabulary::kEos);
        return emphasize(cycle, config_.cell_size);
      }
      return emphasize(input_ids, config_.cell_size);
    default: return {input_ids.begin(), input_ids.end()};
  }
}

bool Seq2SeqModel::accepts(const EncodedPair& pair) const {
  if (pair.input_ids.empty() || pair.target_ids.empty()) return false;
  if (config_.variant != Variant::pointer) return true;
  if (!pair.pointer_targets) return false;
  const std::size_t room = config_.pointer_eos ? config_.cell_size - 1 : config_.cell_size;
  if (pair.input_ids.size() > room) return false;
  if (config_.pointer_eos) return pair.pointer_targets->size() <= config_.cell_size;
  return pair.pointer_targets->size() - 1 <= config_.cell_size;
}

std::vector<TokenId> Seq2SeqModel::pointer_gold(const EncodedPair& pair,
                                                std::span<const double> weights) const {
  if (!accepts(pair))
    raise(ErrorKind::data, "pair cannot be handled by the pointer variant (no pointer targets or input longer than the cell)");
  const auto& ptr = *pair.pointer_targets;
  if (weights.size() != ptr.size())
    raise(ErrorKind::dimension, "{} weights for {} pointer targets", weights.size(), ptr.size());
  const auto terminal = static_cast<TokenId>(pair.input_ids.size());
  std::vector<TokenId> gold;
  if (config_.pointer_eos) {
    gold.reserve(ptr.size());
    for (TokenId p : ptr) gold.push_back(p == kTerminalPointer ? terminal : p);
    return gold;
  }
  for (std::size_t t = 0; t < ptr.size(); ++t)
    if (weights[t] > 0.0 && ptr[t] != kTerminalPointer) gold.push_back(ptr[t]);
  return emphasize(gold, config_.cell_size);
}

Seq2SeqModel::Encoded Seq2SeqModel::encode(Graph& g, std::span<const TokenId> source) const {
  Var embedded = embedding_lookup(g, input_embed_, source);
  Encoded out;
  if (bi_encoder_) {
    BidirectionalResult r = bidirectional_encode(g, *bi_encoder_, embedded);
    out.keys = r.hidden;
    out.decoder_init.assign(config_.layers, r.merged);
  } else {
    UnrollResult r = unroll(g, *encoder_, embedded, zero_state(g, *encoder_));
    out.keys = r.hidden;
    out.decoder_init.assign(config_.layers, r.final.back());
  }
  return out;
}

std::optional<AttentionMemory> Seq2SeqModel::memory(Graph& g, const Encoded& enc) const {
  if (!attention_) return std::nullopt;
  Var keys = enc.keys;
  if (key_projection_) keys = g.matmul(keys, g.param(*key_projection_));
  return attention_memory(g, *attention_, keys);
}

Var Seq2SeqModel::step_logits(Graph& g, Var top_hidden, const std::optional<AttentionMemory>& mem) const {
  const std::size_t T = g.rows(top_hidden);
  if (config_.variant == Variant::pointer) {
    std::vector<Var> rows;
    rows.reserve(T);
    for (std::size_t t = 0; t < T; ++t)
      rows.push_back(pointer_scores(g, *attention_, *mem, T == 1 ? top_hidden : g.row(top_hidden, t)));
    return T == 1 ? rows.front() : g.stack_rows(rows);
  }
  Var features = top_hidden;
  if (config_.variant == Variant::attention) {
    std::vector<Var> contexts;
    contexts.reserve(T);
    for (std::size_t t = 0; t < T; ++t)
      contexts.push_back(
          additive_attention(g, *attention_, *mem, T == 1 ? top_hidden : g.row(top_hidden, t)).context);
    features = g.concat_cols(top_hidden, T == 1 ? contexts.front() : g.stack_rows(contexts));
  }
  return g.affine(features, g.param(*output_w_), g.param(*output_b_));
}

ForwardResult Seq2SeqModel::forward(Graph& g, const EncodedPair& pair, std::span<const double> weights,
                                    double scale) const {
  if (weights.size() != pair.target_ids.size())
    raise(ErrorKind::dimension, "{} weights for {} target tokens", weights.size(), pair.target_ids.size());
  std::size_t steps = 0;
  for (std::size_t t = 0; t < weights.size(); ++t)
    if (weights[t] > 0.0) steps = t + 1;
  if (steps == 0) raise(ErrorKind::data, "pair has no weighted target step");

  const std::vector<TokenId> source = source_ids(pair.input_ids);
  Encoded enc = encode(g, source);
  const std::optional<AttentionMemory> mem = memory(g, enc);

  std::vector<TokenId> targets;
  std::vector<double> step_weights;
  std::vector<TokenId> decoder_inputs{Vocabulary::kGo};
  ParamId decoder_table = input_embed_;
  if (config_.variant == Variant::pointer) {
    targets = pointer_gold(pair, weights);
    if (config_.pointer_eos) {
      targets.resize(steps);
      step_weights.assign(weights.begin(), weights.begin() + static_cast<std::ptrdiff_t>(steps));
    } else {
      step_weights.assign(targets.size(), 1.0);
    }
    for (std::size_t t = 0; t + 1 < targets.size(); ++t)
      decoder_inputs.push_back(source[static_cast<std::size_t>(targets[t])]);
  } else {
    decoder_table = *output_embed_;
    targets.assign(pair.target_ids.begin(), pair.target_ids.begin() + static_cast<std::ptrdiff_t>(steps));
    step_weights.assign(weights.begin(), weights.begin() + static_cast<std::ptrdiff_t>(steps));
    for (std::size_t t = 0; t + 1 < steps; ++t) decoder_inputs.push_back(targets[t]);
  }

  Var dec_in = embedding_lookup(g, decoder_table, decoder_inputs);
  UnrollResult dec = unroll(g, decoder_, dec_in, enc.decoder_init);
  Var logits = step_logits(g, dec.hidden, mem);

  ForwardResult r;
  r.loss = g.weighted_cross_entropy(logits, targets, step_weights, scale);
  r.nll_sum = scale != 0.0 ? g.scalar(r.loss) / scale : 0.0;
  const std::size_t width = g.cols(logits);
  const auto values = g.value(logits);
  for (std::size_t t = 0; t < targets.size(); ++t) {
    if (step_weights[t] <= 0.0) continue;
    r.weight_sum += step_weights[t];
    ++r.counted;
    if (argmax(values.subspan(t * width, width)) == static_cast<std::size_t>(targets[t])) ++r.correct;
  }
  return r;
}

double Seq2SeqModel::effective_weight(const EncodedPair&, std::span<const double> weights) const {
  if (config_.variant == Variant::pointer && !config_.pointer_eos)
    return static_cast<double>(config_.cell_size);
  double total = 0.0;
  for (double w : weights) total += w;
  return total;
}

ForwardResult Seq2SeqModel::forward(Graph& g, const EncodedPair& pair) const {
  const std::vector<double> ones(pair.target_ids.size(), 1.0);
  return forward(g, pair, ones, 1.0 / effective_weight(pair, ones));
}

Prediction Seq2SeqModel::greedy_decode(std::span<const TokenId> input_ids) const {
  Graph g(params_);
  const std::vector<TokenId> source = source_ids(input_ids);
  Encoded enc = encode(g, source);
  const std::optional<AttentionMemory> mem = memory(g, enc);
  const bool pointer = config_.variant == Variant::pointer;
  const ParamId table = pointer ? input_embed_ : *output_embed_;
  const std::size_t limit = config_.decode_limit();

  Prediction pred;
  LstmState state = enc.decoder_init;
  TokenId next_input = Vocabulary::kGo;
  for (std::size_t t = 0; t < limit; ++t) {
    const TokenId id_arr[1] = {next_input};
    Var x = embedding_lookup(g, table, id_arr);
    state = lstm_stack_step(g, decoder_, x, state);
    Var logits = step_logits(g, state.back().h, mem);
    const std::size_t best = argmax(g.value(logits));
    if (pointer) {
      if (config_.pointer_eos && source[best] == Vocabulary::kEos) {
        pred.stopped_by = Prediction::Stop::eos;
        return pred;
      }
      pred.positions.push_back(best);
      pred.tokens.push_back(source[best]);
      next_input = source[best];
    } else {
      const auto token = static_cast<TokenId>(best);
      if (token == Vocabulary::kEos) {
        pred.stopped_by = Prediction::Stop::eos;
        return pred;
      }
      pred.tokens.push_back(token);
      next_input = token;
    }
  }
  pred.stopped_by = Prediction::Stop::max_len;
  return pred;
}

}  // namespace sqlseq

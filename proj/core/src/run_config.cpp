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

#include "sqlseq/run_config.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "sqlseq/errors.hpp"
#include "sqlseq/parallel.hpp"

namespace sqlseq {

const std::vector<std::string>& run_config_keys() {
  static const std::vector<std::string> keys = {
      "variant",   "hidden",     "layers",    "embed",       "cell_size",   "max_decode_len", "init_lo",
      "init_hi",   "seed",       "project_keys", "pointer_eos", "epochs", "batch_size",  "lr",
      "clip_lo",   "clip_hi",    "eval_every", "max_steps",  "threads",     "use_embedding",  "mlp_hidden",
      "data_dir",  "out_dir",    "checkpoint", "split",     "log_wall_time"};
  return keys;
}

RunConfig resolve_run_config(const KeyValues& file, const KeyValues& overrides) {
  KeyValues kv;
  for (const KeyValues* layer : {&file, &overrides})
    for (const auto& [key, value] : layer->entries()) {
      const auto& known = run_config_keys();
      if (std::find(known.begin(), known.end(), key) == known.end())
        raise(ErrorKind::config, "unknown setting '{}'", key);
      kv.set(key, value);
    }

  RunConfig rc;
  ModelConfig& m = rc.model;
  m.variant = parse_variant(kv.get_string("variant", std::string(to_string(m.variant))));
  m.hidden = kv.get_size("hidden", m.hidden);
  m.layers = kv.get_size("layers", m.layers);
  m.embed = kv.get_size("embed", m.embed);
  m.cell_size = kv.get_size("cell_size", m.cell_size);
  m.max_decode_len = kv.get_size("max_decode_len", m.max_decode_len);
  m.init_lo = kv.get_double("init_lo", m.init_lo);
  m.init_hi = kv.get_double("init_hi", m.init_hi);
  m.seed = kv.get_u64("seed", m.seed);
  m.project_keys = kv.get_bool("project_keys", m.project_keys);
  m.pointer_eos = kv.get_bool("pointer_eos", m.pointer_eos);

  TrainConfig& t = rc.train;
  t.epochs = kv.get_size("epochs", t.epochs);
  t.batch_size = kv.get_size("batch_size", t.batch_size);
  rc.lr_explicit = kv.contains("lr");
  t.lr = kv.get_double("lr", TrainConfig::default_lr(m.variant));
  t.clip_lo = kv.get_double("clip_lo", t.clip_lo);
  t.clip_hi = kv.get_double("clip_hi", t.clip_hi);
  t.eval_every = kv.get_size("eval_every", t.eval_every);
  t.max_steps = kv.get_size("max_steps", t.max_steps);
  t.seed = m.seed;
  t.threads = kv.get_size("threads", worker_threads());
  t.validate();

  ProbeConfig& p = rc.probe;
  p.hidden = m.hidden;
  p.layers = m.layers;
  p.embed = m.embed;
  p.init_lo = m.init_lo;
  p.init_hi = m.init_hi;
  p.seed = m.seed;
  p.use_embedding = kv.get_bool("use_embedding", p.use_embedding);
  if (kv.contains("mlp_hidden")) {
    ProbeConfig parsed = ProbeConfig::parse("mlp_hidden=" + kv.get_string("mlp_hidden", ""));
    p.mlp_hidden = parsed.mlp_hidden;
  }

  rc.data_dir = kv.get_string("data_dir", rc.data_dir.string());
  rc.out_dir = kv.get_string("out_dir", rc.out_dir.string());
  rc.checkpoint = kv.get_string("checkpoint", rc.checkpoint.string());
  rc.split = kv.get_string("split", rc.split);
  rc.log_wall_time = kv.get_bool("log_wall_time", rc.log_wall_time);
  return rc;
}

std::string RunConfig::serialize() const {
  KeyValues kv;
  for (const KeyValues& part : {KeyValues::parse(model.serialize()), KeyValues::parse(train.serialize())})
    for (const auto& [k, v] : part.entries())
      if (k != "input_vocab" && k != "output_vocab") kv.set(k, v);
  kv.set("use_embedding", probe.use_embedding ? "true" : "false");
  kv.set("mlp_hidden", KeyValues::parse(probe.serialize()).get_string("mlp_hidden", ""));
  kv.set("data_dir", data_dir.string());
  kv.set("out_dir", out_dir.string());
  kv.set("checkpoint", checkpoint.string());
  kv.set("split", split);
  kv.set("log_wall_time", log_wall_time ? "true" : "false");
  return kv.serialize();
}

}  // namespace sqlseq

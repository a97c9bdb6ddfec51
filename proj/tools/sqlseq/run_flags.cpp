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

#include "run_flags.hpp"

#include "sqlseq/errors.hpp"
#include "sqlseq/io.hpp"

namespace sqlseq::cli {

namespace {

struct FlagSpec {
  const char* flag;
  const char* key;
  const char* help;
};

constexpr FlagSpec kFlags[] = {
    {"--variant", "variant", "vanilla | reversed | bidirectional | attention | pointer"},
    {"--epochs", "epochs", "training epochs"},
    {"--batch-size", "batch_size", "examples per optimizer step"},
    {"--lr", "lr", "Adam learning rate (default 0.01, 0.001 for pointer)"},
    {"--hidden", "hidden", "LSTM hidden size"},
    {"--embed", "embed", "embedding size"},
    {"--cell-size", "cell_size", "static sequence length of the pointer variant"},
    {"--seed", "seed", "seed for every random stream"},
    {"--data-dir", "data_dir", "preprocessed data directory"},
    {"--out-dir", "out_dir", "output directory of this run"},
    {"--checkpoint", "checkpoint", "checkpoint file"},
    {"--max-decode-len", "max_decode_len", "greedy decoding step limit"},
};

}  // namespace

void RunFlags::attach(CLI::App& app) {
  app.add_option("--config", config_path, "key=value settings file");
  for (const FlagSpec& f : kFlags) {
    storage_.push_back(std::make_unique<std::string>());
    options_.emplace_back(f.key, app.add_option(f.flag, *storage_.back(), f.help));
  }
  app.add_option("--set", sets, "extra setting as key=value (repeatable)");
}

KeyValues RunFlags::file() const {
  if (config_path.empty()) return {};
  try {
    return KeyValues::parse(read_text_file(config_path));
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::io) throw;
    raise(ErrorKind::config, "{}: {}", config_path, e.what());
  }
}

KeyValues RunFlags::overrides() const {
  KeyValues kv;
  for (std::size_t i = 0; i < options_.size(); ++i)
    if (options_[i].second->count() > 0) kv.set(options_[i].first, *storage_[i]);
  for (const std::string& s : sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos || eq == 0) raise(ErrorKind::config, "--set expects key=value, got '{}'", s);
    kv.set(s.substr(0, eq), s.substr(eq + 1));
  }
  return kv;
}

}  // namespace sqlseq::cli

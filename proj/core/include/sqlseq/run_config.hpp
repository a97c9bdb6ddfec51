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
#include <filesystem>
#include <string>

#include "sqlseq/keyvalues.hpp"
#include "sqlseq/model.hpp"
#include "sqlseq/probe.hpp"
#include "sqlseq/trainer.hpp"

namespace sqlseq {

// Settings of one command invocation. Model and probe share the encoder
// dimensions and the seed; vocabulary sizes are filled in from the data.
struct RunConfig {
  ModelConfig model;
  TrainConfig train;
  ProbeConfig probe;
  std::filesystem::path data_dir = "data";
  std::filesystem::path out_dir = "runs/default";
  std::filesystem::path checkpoint;
  std::string split = "dev";
  bool log_wall_time = false;
  bool lr_explicit = false;

  // Every setting as key=value lines in a fixed order (threads excluded: it
  // never changes results).
  std::string serialize() const;
};

// Names accepted in config files and as overrides.
const std::vector<std::string>& run_config_keys();

// Applies `file`, then `overrides`, on top of the defaults. Unknown keys and
// malformed values are config errors. The learning rate defaults to
// TrainConfig::default_lr(variant) unless given explicitly.
RunConfig resolve_run_config(const KeyValues& file, const KeyValues& overrides);

}  // namespace sqlseq

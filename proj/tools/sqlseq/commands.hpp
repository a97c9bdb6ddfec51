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

#include <filesystem>
#include <string>

#include "sqlseq/keyvalues.hpp"
#include "sqlseq/synth.hpp"

namespace sqlseq::cli {

struct SynthArgs {
  std::filesystem::path out_dir;
  SynthOptions options;
  std::size_t dev_count = 200;
  std::size_t test_count = 200;
};

struct PreprocessArgs {
  std::filesystem::path raw_dir;
  std::filesystem::path out_dir;
  bool columns_first = false;
};

struct PredictArgs {
  std::filesystem::path checkpoint;
  std::string question;
  std::string header;  // '|'-separated column names
};

int cmd_synth(const SynthArgs& args);
int cmd_preprocess(const PreprocessArgs& args);
int cmd_train(const KeyValues& file, const KeyValues& overrides, bool resume);
int cmd_probe(const KeyValues& file, const KeyValues& overrides, bool shuffled_labels);
int cmd_evaluate(const KeyValues& file, const KeyValues& overrides);
int cmd_predict(const PredictArgs& args);
int cmd_gradcheck();

}  // namespace sqlseq::cli

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

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "sqlseq/keyvalues.hpp"

namespace sqlseq::cli {

// Shared run flags. Each flag that was given becomes an override entry;
// --set key=value covers every other setting.
struct RunFlags {
  std::string config_path;
  std::vector<std::string> sets;

  void attach(CLI::App& app);
  // Config file contents (or empty) and the flag overrides.
  KeyValues file() const;
  KeyValues overrides() const;

 private:
  std::vector<std::pair<std::string, CLI::Option*>> options_;
  std::vector<std::unique_ptr<std::string>> storage_;
};

}  // namespace sqlseq::cli

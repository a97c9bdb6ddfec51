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
#include <string_view>
#include <utility>
#include <vector>

#include "sqlseq/tensor.hpp"

namespace sqlseq {

// Named text blocks plus named tensors.
//
// On disk (little-endian):
//   "SQLSEQCK"  u32 version
//   u32 block count,  per block:  u32 name length, name, u64 size, bytes
//   u32 tensor count, per tensor: u32 name length, name, u32 rank, u64 dims..., f64 values...
//   "END!"
struct Checkpoint {
  static constexpr std::uint32_t kVersion = 1;

  std::vector<std::pair<std::string, std::string>> texts;
  std::vector<std::pair<std::string, Tensor>> tensors;

  void add_text(std::string name, std::string body);
  void add_tensor(std::string name, Tensor tensor);

  const std::string* find_text(std::string_view name) const;
  const Tensor* find_tensor(std::string_view name) const;
  // Throw a data error when the entry is missing.
  const std::string& text(std::string_view name) const;
  const Tensor& tensor(std::string_view name) const;
};

std::string encode_checkpoint(const Checkpoint& ckpt);
// Parses the whole buffer; truncated or corrupted input is a data error.
Checkpoint decode_checkpoint(std::string_view bytes);

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ckpt);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace sqlseq

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
#include <functional>
#include <string>
#include <string_view>

namespace sqlseq {

// Whole-file helpers. Failures raise ErrorKind::io with the path in the message.
std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view contents);
// Writes to a sibling temporary file and renames it over `path`, so readers
// never observe a half-written file.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

// Calls `fn(line, line_number)` for each line (1-based, trailing '\r' removed).
void for_each_line(const std::filesystem::path& path,
                   const std::function<void(std::string_view, std::size_t)>& fn);

void ensure_directory(const std::filesystem::path& dir);

}  // namespace sqlseq

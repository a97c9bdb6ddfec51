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

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace sqlseq {

// Aggregation classes, in dataset index order.
enum class Aggregation : int { none = 0, max = 1, min = 2, count = 3, sum = 4, avg = 5 };
inline constexpr int kAggregationCount = 6;

// "NULL", "MAX", "MIN", "COUNT", "SUM", "AVG".
std::string_view aggregation_name(int agg);
// Lowercase keyword emitted into linearized SQL; empty for agg 0.
std::string_view aggregation_keyword(int agg);

struct Condition {
  std::size_t column = 0;
  std::string op = "=";
  std::string value;
};

struct SqlTarget {
  std::size_t sel = 0;
  int agg = 0;
  std::vector<Condition> conds;
};

// One dataset record: a question over a single table's schema.
struct Example {
  std::string question;
  std::vector<std::string> header;
  std::vector<std::string> types;
  SqlTarget sql;
};

// Throws a data error if the header is empty, header/types lengths differ,
// a column index is out of range, or agg is outside [0, 5].
void validate(const Example& example);

}  // namespace sqlseq

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

#include "sqlseq/synth.hpp"

#include <array>
#include <string>
#include <string_view>

#include "sqlseq/errors.hpp"
#include "sqlseq/rng.hpp"

namespace sqlseq {

namespace {

struct ColumnSpec {
  std::string_view name;
  bool numeric;
  std::vector<std::string_view> values;
};

struct TableSpec {
  std::vector<ColumnSpec> columns;
};

const std::vector<TableSpec>& tables() {
  static const std::vector<TableSpec> specs = {
      {{{"Home team", false, {"geelong", "fitzroy", "carlton", "essendon", "richmond", "collingwood"}},
        {"Venue", false, {"mcg", "kardinia park", "princes park", "windy hill", "junction oval"}},
        {"Crowd", true, {"12000", "15500", "22000", "31000", "8600"}},
        {"Date", false, {"april", "may", "june", "july", "august"}}}},
      {{{"Player", false, {"smith", "jones", "brown", "taylor", "wilson", "walker"}},
        {"School/Club Team", false, {"duke", "kentucky", "ucla", "kansas", "syracuse"}},
        {"No.", true, {"3", "8", "12", "21", "33"}},
        {"Position", false, {"guard", "forward", "center"}}}},
      {{{"Aircraft", false, {"ch-47d", "ch-53e", "mi-26", "uh-60", "cy-8"}},
        {"Description", false, {"heavy-lift", "tandem-rotor", "utility", "transport"}},
        {"Max Gross Weight", true, {"22680", "33300", "56000", "10660"}},
        {"Total disk area", true, {"526", "2800", "4900", "8495"}}}},
      {{{"Driver", false, {"senna", "prost", "mansell", "piquet", "berger"}},
        {"Constructor", false, {"mclaren", "williams", "ferrari", "benetton", "lotus"}},
        {"Laps", true, {"44", "53", "61", "70", "78"}},
        {"Grid", true, {"1", "2", "5", "9", "14"}}}},
      {{{"Country", false, {"france", "italy", "spain", "norway", "chile", "kenya"}},
        {"Capital", false, {"paris", "rome", "madrid", "oslo", "santiago", "nairobi"}},
        {"Population", true, {"4700", "59000", "67000", "19000", "5400"}},
        {"Area", true, {"385", "551", "505", "756", "580"}},
        {"Continent", false, {"europe", "africa", "america"}}}},
      {{{"Episode", false, {"pilot", "finale", "reunion", "homecoming", "crossroads"}},
        {"Directed by", false, {"nolan", "scott", "lynch", "fincher", "burton"}},
        {"Viewers", true, {"7", "9", "11", "13", "15"}},
        {"Season", true, {"1", "2", "3", "4"}}}},
  };
  return specs;
}

// Cue phrases per aggregation class (NULL, MAX, MIN, COUNT, SUM, AVG).
const std::array<std::vector<std::string_view>, kAggregationCount>& cue_phrases() {
  static const std::array<std::vector<std::string_view>, kAggregationCount> cues = {{
      {"what is the", "which", "name the", "tell me the", "what was the"},
      {"what is the highest", "what was the largest", "name the maximum", "which is the most"},
      {"what is the lowest", "what was the smallest", "name the minimum", "which is the least"},
      {"how many", "what is the number of", "count the", "how many different"},
      {"what is the total", "what is the sum of", "what was the combined", "sum the"},
      {"what is the average", "what was the mean", "what is the typical", "average the"},
  }};
  return cues;
}

constexpr std::array<std::string_view, kAggregationCount> kSeparableCues = {"what", "highest", "lowest",
                                                                            "count", "total", "average"};

// Class counts of a skewed corpus: mostly plain selections.
constexpr std::array<double, kAggregationCount> kSkewedShare = {0.72, 0.06, 0.05, 0.09, 0.04, 0.04};

std::string_view pick(const std::vector<std::string_view>& options, Rng& rng) {
  return options[rng.below(options.size())];
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out)
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  return out;
}

int skewed_label(Rng& rng) {
  double u = rng.uniform();
  for (int k = 0; k < kAggregationCount; ++k) {
    if (u < kSkewedShare[static_cast<std::size_t>(k)]) return k;
    u -= kSkewedShare[static_cast<std::size_t>(k)];
  }
  return 0;
}

Example make_example(int agg, const SynthOptions& options, Rng& rng) {
  const TableSpec& table = tables()[rng.below(tables().size())];
  const std::size_t ncol = table.columns.size();

  Example ex;
  for (const ColumnSpec& c : table.columns) {
    ex.header.emplace_back(c.name);
    ex.types.emplace_back(c.numeric ? "real" : "text");
  }
  ex.sql.agg = agg;
  ex.sql.sel = rng.below(ncol);

  std::vector<std::size_t> others;
  for (std::size_t c = 0; c < ncol; ++c)
    if (c != ex.sql.sel) others.push_back(c);
  rng.shuffle(others);
  const std::size_t nconds = !options.separable && rng.uniform() < options.second_condition ? 2 : 1;
  for (std::size_t k = 0; k < nconds; ++k) {
    const ColumnSpec& col = table.columns[others[k]];
    ex.sql.conds.push_back({others[k], "=", std::string(pick(col.values, rng))});
  }

  std::string cue;
  if (options.separable) {
    cue = kSeparableCues[static_cast<std::size_t>(agg)];
  } else {
    int cue_class = agg;
    if (rng.uniform() < options.ambiguity) cue_class = static_cast<int>(rng.below(kAggregationCount));
    cue = pick(cue_phrases()[static_cast<std::size_t>(cue_class)], rng);
  }

  std::string q = cue + " " + lower(table.columns[ex.sql.sel].name);
  for (std::size_t k = 0; k < ex.sql.conds.size(); ++k) {
    const Condition& c = ex.sql.conds[k];
    q += k == 0 ? " when " : " and ";
    q += lower(table.columns[c.column].name) + " is " + c.value;
  }
  ex.question = q + "?";
  return ex;
}

}  // namespace

std::vector<Example> synthesize(const SynthOptions& options) {
  if (options.count == 0) raise(ErrorKind::config, "synthetic example count must be positive");
  if (!(options.ambiguity >= 0.0 && options.ambiguity <= 1.0))
    raise(ErrorKind::config, "ambiguity must lie in [0, 1], got {}", options.ambiguity);
  if (!(options.second_condition >= 0.0 && options.second_condition <= 1.0))
    raise(ErrorKind::config, "second_condition must lie in [0, 1], got {}", options.second_condition);

  Rng rng(options.seed);
  std::vector<int> labels(options.count);
  for (std::size_t i = 0; i < options.count; ++i)
    labels[i] = options.balanced ? static_cast<int>(i % kAggregationCount) : skewed_label(rng);
  if (options.balanced) rng.shuffle(labels);

  std::vector<Example> out;
  out.reserve(options.count);
  for (int agg : labels) out.push_back(make_example(agg, options, rng));
  return out;
}

}  // namespace sqlseq

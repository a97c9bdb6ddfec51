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

#include "sqlseq/dataset.hpp"

#include <array>
#include <cmath>
#include <sstream>

#include <nlohmann/json.hpp>

#include "sqlseq/batching.hpp"
#include "sqlseq/errors.hpp"
#include "sqlseq/io.hpp"

namespace sqlseq {

namespace {

using nlohmann::json;

constexpr std::array<std::string_view, 3> kCondOps = {"=", ">", "<"};

std::string value_to_string(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_number_float()) {
    const double d = v.get<double>();
    if (std::isfinite(d) && d == std::floor(d) && std::abs(d) < 1e15)
      return std::to_string(static_cast<long long>(d));
    return v.dump();
  }
  raise(ErrorKind::data, "condition value must be a string or number");
}

std::vector<TokenId> id_list(const json& j, const char* field) {
  if (!j.is_array()) raise(ErrorKind::data, "field '{}' must be an array", field);
  std::vector<TokenId> out;
  out.reserve(j.size());
  for (const auto& v : j) {
    if (!v.is_number_integer()) raise(ErrorKind::data, "field '{}' must hold integers", field);
    out.push_back(v.get<TokenId>());
  }
  return out;
}

}  // namespace

Example parse_example(std::string_view json_line) {
  json j;
  try {
    j = json::parse(json_line);
  } catch (const json::parse_error& e) {
    raise(ErrorKind::data, "malformed JSON: {}", e.what());
  }
  try {
    Example ex;
    ex.question = j.at("question").get<std::string>();
    ex.header = j.at("header").get<std::vector<std::string>>();
    ex.types = j.contains("types") ? j.at("types").get<std::vector<std::string>>()
                                   : std::vector<std::string>(ex.header.size(), "text");
    const json& sql = j.at("sql");
    const long long sel = sql.at("sel").get<long long>();
    if (sel < 0) raise(ErrorKind::data, "negative select column {}", sel);
    ex.sql.sel = static_cast<std::size_t>(sel);
    ex.sql.agg = sql.at("agg").get<int>();
    for (const json& c : sql.at("conds")) {
      if (!c.is_array() || c.size() != 3) raise(ErrorKind::data, "condition must be [column, op, value]");
      Condition cond;
      const long long col = c[0].get<long long>();
      if (col < 0) raise(ErrorKind::data, "negative condition column {}", col);
      cond.column = static_cast<std::size_t>(col);
      if (c[1].is_number_integer()) {
        const int op = c[1].get<int>();
        if (op < 0 || op >= static_cast<int>(kCondOps.size()))
          raise(ErrorKind::data, "unknown condition operator index {}", op);
        cond.op = kCondOps[static_cast<std::size_t>(op)];
      } else {
        cond.op = c[1].get<std::string>();
      }
      cond.value = value_to_string(c[2]);
      ex.sql.conds.push_back(std::move(cond));
    }
    validate(ex);
    return ex;
  } catch (const json::exception& e) {
    raise(ErrorKind::data, "bad example record: {}", e.what());
  }
}

std::string to_json_line(const Example& example) {
  json conds = json::array();
  for (const auto& c : example.sql.conds) {
    json op = c.op;
    for (std::size_t i = 0; i < kCondOps.size(); ++i)
      if (c.op == kCondOps[i]) op = static_cast<int>(i);
    conds.push_back(json::array({c.column, op, c.value}));
  }
  json j = {{"question", example.question},
            {"header", example.header},
            {"types", example.types},
            {"sql", {{"sel", example.sql.sel}, {"agg", example.sql.agg}, {"conds", conds}}}};
  return j.dump();
}

ExampleFile read_examples(const std::filesystem::path& path) {
  ExampleFile out;
  for_each_line(path, [&](std::string_view line, std::size_t n) {
    if (line.find_first_not_of(" \t") == std::string_view::npos) return;
    Example ex;
    try {
      ex = parse_example(line);
    } catch (const Error& e) {
      raise(ErrorKind::data, "{}:{}: {}", path.string(), n, e.what());
    }
    bool supported = true;
    for (const auto& c : ex.sql.conds) supported = supported && c.op == "=";
    if (supported)
      out.examples.push_back(std::move(ex));
    else
      ++out.skipped_unsupported;
  });
  return out;
}

void write_examples(const std::filesystem::path& path, std::span<const Example> examples) {
  std::string text;
  for (const auto& ex : examples) {
    text += to_json_line(ex);
    text += '\n';
  }
  write_text_file(path, text);
}

PreparedExample prepare_example(const Example& example, AugmentStyle style) {
  validate(example);
  PreparedExample out;
  out.question = align_columns(tokenize_question(example.question), example.header);
  for (auto& tok : augment(out.question, example.header, style)) out.input.push_back(to_lower(tok));
  out.target = linearize_sql(example.sql, example.header);
  out.agg = example.sql.agg;
  return out;
}

PreparedExample prepare_question(std::string_view question, std::span<const std::string> header,
                                 AugmentStyle style) {
  if (header.empty()) raise(ErrorKind::data, "table header is empty");
  PreparedExample out;
  out.question = align_columns(tokenize_question(question), header);
  for (auto& tok : augment(out.question, header, style)) out.input.push_back(to_lower(tok));
  return out;
}

EncodedPair encode_example(const PreparedExample& prepared, const Vocabulary& input_vocab,
                           const Vocabulary& target_vocab) {
  EncodedPair pair;
  pair.input_ids = input_vocab.encode(prepared.input);
  pair.target_ids = target_vocab.encode(prepared.target);
  pair.target_ids.push_back(Vocabulary::kEos);
  pair.question_ids = input_vocab.encode(prepared.question);
  pair.agg = prepared.agg;
  try {
    auto ptr = derive_pointer_targets(prepared.target, prepared.input);
    ptr.push_back(kTerminalPointer);
    pair.pointer_targets = std::move(ptr);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::data) throw;
  }
  return pair;
}

std::string to_json_line(const EncodedPair& pair) {
  json j = {{"input_ids", pair.input_ids},
            {"target_ids", pair.target_ids},
            {"pointer_targets", pair.pointer_targets ? json(*pair.pointer_targets) : json(nullptr)},
            {"question_ids", pair.question_ids},
            {"agg", pair.agg}};
  return j.dump();
}

EncodedPair parse_pair(std::string_view json_line) {
  json j;
  try {
    j = json::parse(json_line);
  } catch (const json::parse_error& e) {
    raise(ErrorKind::data, "malformed JSON: {}", e.what());
  }
  try {
    EncodedPair p;
    p.input_ids = id_list(j.at("input_ids"), "input_ids");
    p.target_ids = id_list(j.at("target_ids"), "target_ids");
    if (j.contains("pointer_targets") && !j.at("pointer_targets").is_null()) {
      p.pointer_targets = id_list(j.at("pointer_targets"), "pointer_targets");
      if (p.pointer_targets->size() != p.target_ids.size())
        raise(ErrorKind::data, "pointer_targets length {} differs from target_ids length {}",
              p.pointer_targets->size(), p.target_ids.size());
      for (TokenId t : *p.pointer_targets)
        if (t != kTerminalPointer && (t < 0 || static_cast<std::size_t>(t) >= p.input_ids.size()))
          raise(ErrorKind::data, "pointer target {} outside input of length {}", t, p.input_ids.size());
    }
    if (j.contains("question_ids")) p.question_ids = id_list(j.at("question_ids"), "question_ids");
    if (j.contains("agg")) p.agg = j.at("agg").get<int>();
    if (p.input_ids.empty() || p.target_ids.empty()) raise(ErrorKind::data, "empty input or target sequence");
    return p;
  } catch (const json::exception& e) {
    raise(ErrorKind::data, "bad pair record: {}", e.what());
  }
}

std::vector<EncodedPair> read_pairs(const std::filesystem::path& path) {
  std::vector<EncodedPair> out;
  for_each_line(path, [&](std::string_view line, std::size_t n) {
    if (line.find_first_not_of(" \t") == std::string_view::npos) return;
    try {
      out.push_back(parse_pair(line));
    } catch (const Error& e) {
      raise(ErrorKind::data, "{}:{}: {}", path.string(), n, e.what());
    }
  });
  return out;
}

void write_pairs(const std::filesystem::path& path, std::span<const EncodedPair> pairs) {
  std::string text;
  for (const auto& p : pairs) {
    text += to_json_line(p);
    text += '\n';
  }
  write_text_file(path, text);
}

}  // namespace sqlseq

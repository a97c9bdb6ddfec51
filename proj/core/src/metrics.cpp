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

#include "sqlseq/metrics.hpp"

#include <algorithm>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "sqlseq/model.hpp"
#include "sqlseq/parallel.hpp"
#include "sqlseq/text.hpp"

namespace sqlseq {

namespace {

std::vector<ParsedCondition> sorted_conds(std::vector<ParsedCondition> conds) {
  std::sort(conds.begin(), conds.end());
  return conds;
}

std::string join(std::span<const std::string> tokens) {
  std::string out;
  for (const auto& t : tokens) {
    if (!out.empty()) out += ' ';
    out += t;
  }
  return out;
}

// a < b for exact fractions; terms are sequence lengths, so the products fit.
bool ratio_less(const Ratio& a, const Ratio& b) { return a.num * b.den < b.num * a.den; }

double rate(std::size_t hits, std::size_t n) { return static_cast<double>(hits) / static_cast<double>(n); }

}  // namespace

ClauseFlags clause_breakdown(std::span<const std::string> pred, std::span<const std::string> ref) {
  const std::optional<ParsedSql> gold = parse_sql(ref);
  if (!gold) raise(ErrorKind::data, "reference query does not parse: '{}'", join(ref));
  const std::optional<ParsedSql> guess = parse_sql(pred);
  ClauseFlags flags;
  if (!guess) return flags;
  flags.parsed = true;
  flags.agg = guess->agg == gold->agg;
  flags.sel = guess->column == gold->column;
  flags.where = sorted_conds(guess->conds) == sorted_conds(gold->conds);
  return flags;
}

MetricsReport evaluate_split(const Seq2SeqModel& model, std::span<const EncodedPair> pairs,
                             const Vocabulary& input_vocab, const Vocabulary& output_vocab,
                             const EvaluateOptions& options) {
  const bool pointer = model.config().variant == Variant::pointer;
  const Vocabulary& pred_vocab = pointer ? input_vocab : output_vocab;

  std::vector<std::optional<ExampleScore>> scored(pairs.size());
  parallel_for(pairs.size(), options.threads, [&](std::size_t i) {
    const EncodedPair& pair = pairs[i];
    if (!model.accepts(pair)) return;
    const Prediction pred = model.greedy_decode(pair.input_ids);

    std::vector<TokenId> ref;
    if (pointer) {
      for (TokenId p : *pair.pointer_targets)
        if (p != kTerminalPointer) ref.push_back(pair.input_ids[static_cast<std::size_t>(p)]);
    } else {
      ref = strip_special(pair.target_ids);
    }
    const std::vector<std::string> pred_tokens = pred_vocab.decode(pred.tokens);
    const std::vector<std::string> ref_tokens = pred_vocab.decode(ref);

    ExampleScore s;
    s.index = i;
    s.question = join(input_vocab.decode(pair.question_ids));
    s.prediction = join(pred_tokens);
    s.gold = join(ref_tokens);
    s.exact = exact_match<TokenId>(pred.tokens, ref);
    s.bow = bow_ratio<TokenId>(pred.tokens, ref);
    s.bow_ref = bow_ratio_ref<TokenId>(pred.tokens, ref);
    s.clauses = clause_breakdown(pred_tokens, ref_tokens);
    if (pointer) {
      const std::vector<double> ones(pair.target_ids.size(), 1.0);
      std::vector<TokenId> gold = model.pointer_gold(pair, ones);
      std::vector<TokenId> guess(pred.positions.begin(), pred.positions.end());
      if (pred.stopped_by == Prediction::Stop::eos)
        guess.push_back(static_cast<TokenId>(pair.input_ids.size()));
      s.positional = positional_ratio<TokenId>(guess, gold);
    }
    scored[i] = std::move(s);
  });

  MetricsReport report;
  std::size_t exact = 0, agg = 0, sel = 0, where = 0;
  double bow = 0.0, bow_ref = 0.0, positional = 0.0;
  for (auto& s : scored) {
    if (!s) {
      ++report.skipped;
      continue;
    }
    exact += s->exact;
    bow += s->bow.value();
    bow_ref += s->bow_ref.value();
    if (s->positional) positional += s->positional->value();
    agg += s->clauses.agg;
    sel += s->clauses.sel;
    where += s->clauses.where;
    if (!s->clauses.parsed) ++report.unparseable;
    report.examples.push_back(std::move(*s));
  }
  const std::size_t n = report.examples.size();
  if (n == 0) raise(ErrorKind::data, "no scorable examples ({} skipped)", report.skipped);
  report.n_examples = n;
  report.exact_match = rate(exact, n);
  report.bow_accuracy = bow / static_cast<double>(n);
  report.bow_accuracy_ref = bow_ref / static_cast<double>(n);
  if (pointer) report.positional_accuracy = positional / static_cast<double>(n);
  report.agg_accuracy = rate(agg, n);
  report.sel_accuracy = rate(sel, n);
  report.where_accuracy = rate(where, n);

  std::vector<const ExampleScore*> order;
  for (const auto& s : report.examples) order.push_back(&s);
  std::stable_sort(order.begin(), order.end(),
                   [](const ExampleScore* a, const ExampleScore* b) { return ratio_less(a->bow, b->bow); });
  for (std::size_t k = 0; k < std::min(options.worst_count, order.size()); ++k) report.worst.push_back(*order[k]);
  return report;
}

namespace {

nlohmann::ordered_json ratio_json(const Ratio& r) {
  return {{"num", r.num}, {"den", r.den}, {"value", r.value()}};
}

nlohmann::ordered_json score_json(const ExampleScore& s) {
  nlohmann::ordered_json j;
  j["index"] = s.index;
  j["question"] = s.question;
  j["prediction"] = s.prediction;
  j["gold"] = s.gold;
  j["exact"] = s.exact;
  j["bow"] = ratio_json(s.bow);
  j["bow_ref"] = ratio_json(s.bow_ref);
  j["positional"] = s.positional ? ratio_json(*s.positional) : nlohmann::ordered_json(nullptr);
  j["parsed"] = s.clauses.parsed;
  j["agg_correct"] = s.clauses.agg;
  j["sel_correct"] = s.clauses.sel;
  j["where_correct"] = s.clauses.where;
  return j;
}

}  // namespace

std::string report_to_json(const MetricsReport& report) {
  nlohmann::ordered_json j;
  j["n_examples"] = report.n_examples;
  j["skipped"] = report.skipped;
  j["exact_match"] = report.exact_match;
  j["bow_accuracy"] = report.bow_accuracy;
  j["bow_accuracy_ref"] = report.bow_accuracy_ref;
  j["positional_accuracy"] =
      report.positional_accuracy ? nlohmann::ordered_json(*report.positional_accuracy) : nlohmann::ordered_json(nullptr);
  j["agg_accuracy"] = report.agg_accuracy;
  j["sel_accuracy"] = report.sel_accuracy;
  j["where_accuracy"] = report.where_accuracy;
  j["unparseable"] = report.unparseable;
  auto& worst = j["worst"] = nlohmann::ordered_json::array();
  for (const auto& s : report.worst) worst.push_back(score_json(s));
  return j.dump(2) + "\n";
}

std::string report_to_text(const MetricsReport& report) {
  std::string out;
  out += fmt::format("examples            {}\n", report.n_examples);
  if (report.skipped) out += fmt::format("skipped             {}\n", report.skipped);
  out += fmt::format("exact match         {:.4f}\n", report.exact_match);
  out += fmt::format("bow accuracy        {:.4f}\n", report.bow_accuracy);
  out += fmt::format("bow accuracy (ref)  {:.4f}\n", report.bow_accuracy_ref);
  if (report.positional_accuracy)
    out += fmt::format("positional accuracy {:.4f}\n", *report.positional_accuracy);
  out += fmt::format("aggregation         {:.4f}\n", report.agg_accuracy);
  out += fmt::format("select column       {:.4f}\n", report.sel_accuracy);
  out += fmt::format("where clause        {:.4f}\n", report.where_accuracy);
  out += fmt::format("unparseable         {}\n", report.unparseable);
  if (!report.worst.empty()) {
    out += "\nworst predictions\n";
    for (const auto& s : report.worst) {
      out += fmt::format("\n#{}  bow {}/{}\n", s.index, s.bow.num, s.bow.den);
      out += fmt::format("  question:   {}\n", s.question);
      out += fmt::format("  prediction: {}\n", s.prediction);
      out += fmt::format("  gold:       {}\n", s.gold);
    }
  }
  return out;
}

std::string report_to_csv(const MetricsReport& report) {
  std::string out = "index,exact,bow_num,bow_den,positional_num,positional_den,agg,sel,where,parsed\n";
  for (const auto& s : report.examples) {
    out += fmt::format("{},{:d},{},{},", s.index, s.exact, s.bow.num, s.bow.den);
    if (s.positional)
      out += fmt::format("{},{},", s.positional->num, s.positional->den);
    else
      out += ",,";
    out += fmt::format("{:d},{:d},{:d},{:d}\n", s.clauses.agg, s.clauses.sel, s.clauses.where, s.clauses.parsed);
  }
  return out;
}

}  // namespace sqlseq

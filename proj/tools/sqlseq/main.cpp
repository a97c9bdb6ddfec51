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

#include <cstdio>
#include <exception>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "commands.hpp"
#include "run_flags.hpp"
#include "sqlseq/errors.hpp"

int main(int argc, char** argv) {
  using namespace sqlseq;
  using namespace sqlseq::cli;

  CLI::App app{"Sequence-to-sequence natural-language-to-SQL experiments"};
  app.require_subcommand(1);

  SynthArgs synth;
  auto* synth_cmd = app.add_subcommand("synth", "Generate templated train/dev/test JSON-lines files");
  synth_cmd->add_option("--out-dir", synth.out_dir, "directory receiving train/dev/test.jsonl")->required();
  synth_cmd->add_option("--count", synth.options.count, "training examples");
  synth_cmd->add_option("--dev-count", synth.dev_count, "dev examples");
  synth_cmd->add_option("--test-count", synth.test_count, "test examples");
  synth_cmd->add_option("--seed", synth.options.seed, "generator seed");
  synth_cmd->add_option("--ambiguity", synth.options.ambiguity, "probability of a misleading cue phrase");
  synth_cmd->add_option("--second-condition", synth.options.second_condition, "probability of a second condition");
  synth_cmd->add_flag("--separable", synth.options.separable, "one keyword per aggregation class");
  bool skewed = false;
  synth_cmd->add_flag("--skewed", skewed, "mostly plain selections instead of balanced classes");

  PreprocessArgs pre;
  auto* pre_cmd = app.add_subcommand("preprocess", "Tokenize, augment and encode raw JSON-lines splits");
  pre_cmd->add_option("--raw-dir", pre.raw_dir, "directory with train/dev/test.jsonl")->required();
  pre_cmd->add_option("--out-dir", pre.out_dir, "preprocessed data directory")->required();
  pre_cmd->add_flag("--columns-first", pre.columns_first, "put header columns before the SQL keywords");

  RunFlags train_flags;
  bool resume = false;
  auto* train_cmd = app.add_subcommand("train", "Train a seq2seq variant");
  train_flags.attach(*train_cmd);
  train_cmd->add_flag("--resume", resume, "continue from the checkpoint in --checkpoint or the output directory");

  RunFlags probe_flags;
  bool shuffled = false;
  auto* probe_cmd = app.add_subcommand("probe", "Train the aggregation-class probe");
  probe_flags.attach(*probe_cmd);
  probe_cmd->add_flag("--shuffle-labels", shuffled, "permute training labels (leakage control)");

  RunFlags eval_flags;
  auto* eval_cmd = app.add_subcommand("evaluate", "Score a checkpoint on a preprocessed split");
  eval_flags.attach(*eval_cmd);

  PredictArgs predict;
  auto* predict_cmd = app.add_subcommand("predict", "Translate one question against a table header");
  predict_cmd->add_option("--checkpoint", predict.checkpoint, "seq2seq checkpoint")->required();
  predict_cmd->add_option("--question", predict.question, "natural-language question")->required();
  predict_cmd->add_option("--header", predict.header, "column names separated by '|'")->required();

  auto* gradcheck_cmd = app.add_subcommand("gradcheck", "Finite-difference check of every layer and variant");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : exit_code(ErrorKind::usage);
  }

  try {
    if (*synth_cmd) {
      synth.options.balanced = !skewed;
      return cmd_synth(synth);
    }
    if (*pre_cmd) return cmd_preprocess(pre);
    if (*train_cmd) return cmd_train(train_flags.file(), train_flags.overrides(), resume);
    if (*probe_cmd) return cmd_probe(probe_flags.file(), probe_flags.overrides(), shuffled);
    if (*eval_cmd) return cmd_evaluate(eval_flags.file(), eval_flags.overrides());
    if (*predict_cmd) return cmd_predict(predict);
    if (*gradcheck_cmd) return cmd_gradcheck();
  } catch (const Error& e) {
    fmt::print(stderr, "error ({}): {}\n", to_string(e.kind()), e.what());
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return exit_code(ErrorKind::data);
  }
  return exit_code(ErrorKind::usage);
}

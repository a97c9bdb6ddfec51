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

#include "commands.hpp"

#include <chrono>
#include <cstdio>
#include <map>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "sqlseq/checkpoint.hpp"
#include "sqlseq/dataset.hpp"
#include "sqlseq/errors.hpp"
#include "sqlseq/gradcheck_suite.hpp"
#include "sqlseq/io.hpp"
#include "sqlseq/metrics.hpp"
#include "sqlseq/pipeline.hpp"
#include "sqlseq/probe.hpp"
#include "sqlseq/rng.hpp"
#include "sqlseq/run_config.hpp"
#include "sqlseq/text.hpp"
#include "sqlseq/trainer.hpp"

namespace sqlseq::cli {

namespace fs = std::filesystem;

namespace {

constexpr const char* kSplits[] = {"train", "dev", "test"};
constexpr const char* kInputVocabFile = "vocab.input.tsv";
constexpr const char* kOutputVocabFile = "vocab.output.tsv";

void warn(std::string_view message) { fmt::print(stderr, "warning: {}\n", message); }

void require_file(const fs::path& path) {
  if (!fs::is_regular_file(path)) raise(ErrorKind::io, "required file '{}' does not exist", path.string());
}

fs::path pairs_path(const fs::path& data_dir, std::string_view split) {
  return data_dir / fmt::format("{}.pairs.jsonl", split);
}

struct DataDir {
  Vocabularies vocabs;
  fs::path root;

  std::vector<EncodedPair> split(std::string_view name) const { return read_pairs(pairs_path(root, name)); }
};

// Checks every file the command will read before any compute starts.
DataDir open_data_dir(const fs::path& root, std::initializer_list<std::string_view> splits) {
  if (!fs::is_directory(root)) raise(ErrorKind::io, "data directory '{}' does not exist", root.string());
  require_file(root / kInputVocabFile);
  require_file(root / kOutputVocabFile);
  for (std::string_view s : splits) require_file(pairs_path(root, s));
  return {{Vocabulary::load(root / kInputVocabFile), Vocabulary::load(root / kOutputVocabFile)}, root};
}

nlohmann::ordered_json histogram_json(const std::map<std::size_t, std::size_t>& hist) {
  auto out = nlohmann::ordered_json::array();
  for (const auto& [len, count] : hist) out.push_back({len, count});
  return out;
}

std::string join(const std::vector<std::string>& tokens) {
  std::string out;
  for (const auto& t : tokens) out += (out.empty() ? "" : " ") + t;
  return out;
}

void print_point(const CurvePoint& p, std::size_t epochs, std::string_view dev_name) {
  std::string line = fmt::format("epoch {}/{}  step {}  loss {:.5f}  acc {:.4f}", p.epoch, epochs, p.step,
                                 p.train_loss, p.train_accuracy);
  if (p.dev_metric) line += fmt::format("  {} {:.4f}", dev_name, *p.dev_metric);
  fmt::print("{}\n", line);
  std::fflush(stdout);
}

}  // namespace

int cmd_synth(const SynthArgs& args) {
  ensure_directory(args.out_dir);
  const std::size_t counts[] = {args.options.count, args.dev_count, args.test_count};
  for (std::size_t i = 0; i < 3; ++i) {
    std::vector<Example> examples;
    if (counts[i] > 0) {
      SynthOptions o = args.options;
      o.count = counts[i];
      o.seed = mix_seed(args.options.seed, i);
      examples = synthesize(o);
    }
    write_examples(args.out_dir / fmt::format("{}.jsonl", kSplits[i]), examples);
    fmt::print("{}: {} examples\n", kSplits[i], examples.size());
  }
  return 0;
}

int cmd_preprocess(const PreprocessArgs& args) {
  if (!fs::is_directory(args.raw_dir)) raise(ErrorKind::io, "raw data directory '{}' does not exist", args.raw_dir.string());
  require_file(args.raw_dir / "train.jsonl");
  require_file(args.raw_dir / "dev.jsonl");
  const bool has_test = fs::is_regular_file(args.raw_dir / "test.jsonl");
  if (!has_test) warn("no test.jsonl; skipping the test split");
  const AugmentStyle style = args.columns_first ? AugmentStyle::columns_first : AugmentStyle::keywords_first;

  std::map<std::string, ExampleFile> raw;
  for (const char* split : kSplits) {
    if (std::string_view(split) == "test" && !has_test) continue;
    raw[split] = read_examples(args.raw_dir / fmt::format("{}.jsonl", split));
  }
  if (raw["train"].examples.empty()) raise(ErrorKind::data, "training split is empty");
  if (raw["dev"].examples.empty()) warn("dev split is empty");

  const std::vector<PreparedExample> train_prepared = prepare_all(raw["train"].examples, style);
  const Vocabularies vocabs = build_vocabularies(train_prepared);
  ensure_directory(args.out_dir);
  vocabs.input.save(args.out_dir / kInputVocabFile);
  vocabs.output.save(args.out_dir / kOutputVocabFile);

  nlohmann::ordered_json stats;
  stats["input_vocab"] = vocabs.input.size();
  stats["output_vocab"] = vocabs.output.size();
  stats["augment_style"] = args.columns_first ? "columns_first" : "keywords_first";
  for (const char* split : kSplits) {
    auto it = raw.find(split);
    if (it == raw.end()) continue;
    const std::vector<PreparedExample> prepared =
        std::string_view(split) == "train" ? train_prepared : prepare_all(it->second.examples, style);
    const std::vector<EncodedPair> pairs = encode_all(prepared, vocabs);
    write_pairs(pairs_path(args.out_dir, split), pairs);

    std::map<std::size_t, std::size_t> input_hist, target_hist, question_hist;
    std::array<std::size_t, kAggregationCount> aggs{};
    std::size_t unpointable = 0;
    for (const EncodedPair& p : pairs) {
      ++input_hist[p.input_ids.size()];
      ++target_hist[p.target_ids.size()];
      ++question_hist[p.question_ids.size()];
      ++aggs[static_cast<std::size_t>(p.agg)];
      if (!p.pointer_targets) ++unpointable;
    }
    auto& s = stats["splits"][split];
    s["examples"] = pairs.size();
    s["skipped_unsupported_operator"] = it->second.skipped_unsupported;
    s["unpointable"] = unpointable;
    s["aggregation_histogram"] = aggs;
    s["question_length_histogram"] = histogram_json(question_hist);
    s["input_length_histogram"] = histogram_json(input_hist);
    s["target_length_histogram"] = histogram_json(target_hist);
    fmt::print("{}: {} pairs ({} unpointable, {} skipped for unsupported operators)\n", split, pairs.size(),
               unpointable, it->second.skipped_unsupported);
  }
  write_text_file(args.out_dir / "stats.json", stats.dump(2) + "\n");
  fmt::print("vocabularies: {} input tokens, {} output tokens\n", vocabs.input.size(), vocabs.output.size());
  return 0;
}

int cmd_train(const KeyValues& file, const KeyValues& overrides, bool resume) {
  RunConfig rc = resolve_run_config(file, overrides);
  {
    // Settings problems are reported before any data is read.
    ModelConfig early = rc.model;
    early.input_vocab = early.output_vocab = Vocabulary::kUnk + 1;
    early.validate();
  }
  const DataDir data = open_data_dir(rc.data_dir, {"train", "dev"});
  rc.model.input_vocab = data.vocabs.input.size();
  rc.model.output_vocab = data.vocabs.output.size();
  rc.model.validate();

  fs::path resume_from;
  if (resume) {
    resume_from = rc.checkpoint.empty() ? rc.out_dir / "checkpoint.bin" : rc.checkpoint;
    require_file(resume_from);
  }
  ensure_directory(rc.out_dir);
  write_text_file(rc.out_dir / "config.txt", rc.serialize());

  const std::vector<EncodedPair> train = data.split("train");
  const std::vector<EncodedPair> dev = data.split("dev");

  std::optional<ModelBundle> bundle;
  if (resume) {
    bundle.emplace(load_model_bundle(load_checkpoint(resume_from)));
    if (!(bundle->input_vocab == data.vocabs.input) || !(bundle->output_vocab == data.vocabs.output))
      raise(ErrorKind::data, "checkpoint '{}' was trained with different vocabularies than '{}'",
            resume_from.string(), rc.data_dir.string());
    if (!(bundle->model.config() == rc.model))
      warn("model settings differ from the checkpoint; continuing with the checkpoint's model");
  } else {
    bundle.emplace(ModelBundle{Seq2SeqModel(rc.model), data.vocabs.input, data.vocabs.output, rc.train, {}, {}});
  }

  Seq2SeqModel& model = bundle->model;
  Trainer trainer(model, rc.train);
  if (resume) {
    if (!bundle->adam) raise(ErrorKind::data, "checkpoint '{}' has no optimizer state to resume from", resume_from.string());
    trainer.resume(bundle->progress, std::move(*bundle->adam));
    fmt::print("resuming after epoch {} (step {})\n", bundle->progress.epoch, bundle->progress.step);
  }

  fmt::print("variant {}  parameters {}  train pairs {}  dev pairs {}\n", to_string(model.config().variant),
             model.params().scalar_count(), train.size(), dev.size());
  TrainOutputs outputs{rc.out_dir, &bundle->input_vocab, &bundle->output_vocab, rc.log_wall_time};
  TrainHooks hooks;
  hooks.on_epoch = [&](const CurvePoint& p) {
    print_point(p, rc.train.epochs, "dev_bow");
    return true;
  };
  const TrainResult result = trainer.run(train, dev, outputs, hooks);
  if (result.skipped_pairs > 0)
    warn(fmt::format("{} training pairs cannot be handled by the {} variant and were skipped", result.skipped_pairs,
                     to_string(model.config().variant)));
  fmt::print("wrote {}\n", (rc.out_dir / "checkpoint.bin").string());
  return 0;
}

int cmd_probe(const KeyValues& file, const KeyValues& overrides, bool shuffled_labels) {
  RunConfig rc = resolve_run_config(file, overrides);
  const DataDir data = open_data_dir(rc.data_dir, {"train", "dev"});
  rc.probe.input_vocab = data.vocabs.input.size();
  rc.probe.validate();
  if (!rc.checkpoint.empty()) require_file(rc.checkpoint);
  ensure_directory(rc.out_dir);
  write_text_file(rc.out_dir / "config.txt", rc.serialize());

  std::vector<ProbeExample> train = probe_examples(data.split("train"));
  const std::vector<ProbeExample> dev = probe_examples(data.split("dev"));
  if (shuffled_labels) train = shuffle_labels(train, mix_seed(rc.train.seed, 0x5eed));

  AggProbe probe(rc.probe);
  if (!rc.checkpoint.empty()) probe.load_encoder(load_checkpoint(rc.checkpoint));

  TrainOutputs outputs{rc.out_dir, &data.vocabs.input, &data.vocabs.output, rc.log_wall_time};
  TrainHooks hooks;
  hooks.on_epoch = [&](const CurvePoint& p) {
    print_point(p, rc.train.epochs, "dev_acc");
    return true;
  };
  const ProbeResult result = train_probe(probe, train, dev, rc.train, outputs, hooks);
  for (const std::string& w : result.warnings) warn(w);

  const auto hist = label_histogram(train);
  nlohmann::ordered_json summary;
  summary["train_examples"] = train.size();
  summary["dev_examples"] = dev.size();
  summary["shuffled_labels"] = shuffled_labels;
  summary["train_label_histogram"] = hist;
  summary["majority_baseline"] = result.majority_baseline;
  summary["final_train_accuracy"] = result.curve.back().train_accuracy;
  summary["final_dev_accuracy"] = result.curve.back().dev_metric ? nlohmann::ordered_json(*result.curve.back().dev_metric)
                                                                   : nlohmann::ordered_json(nullptr);
  summary["warnings"] = result.warnings;
  write_text_file(rc.out_dir / "probe_summary.json", summary.dump(2) + "\n");
  fmt::print("majority-class baseline {:.4f}\n", result.majority_baseline);
  return 0;
}

int cmd_evaluate(const KeyValues& file, const KeyValues& overrides) {
  RunConfig rc = resolve_run_config(file, overrides);
  const fs::path ckpt_path = rc.checkpoint.empty() ? rc.out_dir / "checkpoint.bin" : rc.checkpoint;
  require_file(ckpt_path);
  const DataDir data = open_data_dir(rc.data_dir, {rc.split});

  const ModelBundle bundle = load_model_bundle(load_checkpoint(ckpt_path));
  if (!(bundle.input_vocab == data.vocabs.input) || !(bundle.output_vocab == data.vocabs.output))
    raise(ErrorKind::data, "checkpoint '{}' is incompatible with the vocabularies in '{}'", ckpt_path.string(),
          rc.data_dir.string());
  const std::vector<EncodedPair> pairs = data.split(rc.split);

  EvaluateOptions options;
  options.threads = rc.train.threads;
  const MetricsReport report = evaluate_split(bundle.model, pairs, bundle.input_vocab, bundle.output_vocab, options);
  ensure_directory(rc.out_dir);
  write_text_file(rc.out_dir / fmt::format("report.{}.json", rc.split), report_to_json(report));
  write_text_file(rc.out_dir / fmt::format("report.{}.txt", rc.split), report_to_text(report));
  write_text_file(rc.out_dir / fmt::format("scores.{}.csv", rc.split), report_to_csv(report));
  fmt::print("{}", report_to_text(report));
  return 0;
}

int cmd_predict(const PredictArgs& args) {
  require_file(args.checkpoint);
  const ModelBundle bundle = load_model_bundle(load_checkpoint(args.checkpoint));
  std::vector<std::string> header;
  std::size_t pos = 0;
  while (pos <= args.header.size()) {
    std::size_t end = args.header.find('|', pos);
    if (end == std::string::npos) end = args.header.size();
    std::string col = args.header.substr(pos, end - pos);
    if (!col.empty()) header.push_back(col);
    pos = end + 1;
  }
  if (header.empty()) raise(ErrorKind::data, "--header names no columns");

  const PreparedExample prepared = prepare_question(args.question, header);
  const std::vector<TokenId> input = bundle.input_vocab.encode(prepared.input);
  const Prediction pred = bundle.model.greedy_decode(input);
  const bool pointer = bundle.model.config().variant == Variant::pointer;
  const std::vector<std::string> tokens = (pointer ? bundle.input_vocab : bundle.output_vocab).decode(pred.tokens);
  fmt::print("{}\n", join(tokens));
  if (pointer) {
    std::string positions;
    for (std::size_t p : pred.positions) positions += (positions.empty() ? "" : " ") + fmt::format("{}", p);
    fmt::print("positions: {}\n", positions);
  }
  if (!parse_sql(tokens)) fmt::print("note: prediction does not parse as a query\n");
  return 0;
}

int cmd_gradcheck() {
  const auto started = std::chrono::steady_clock::now();
  const std::vector<ComponentCheck> checks = run_gradcheck_suite();
  bool ok = true;
  for (const ComponentCheck& c : checks) {
    fmt::print("{:<28} max rel error {:.3e}  ({} components, worst {}[{}])  {}\n", c.component,
               c.result.max_rel_error, c.result.checked, c.result.worst_param, c.result.worst_index,
               c.passed ? "PASS" : "FAIL");
    ok = ok && c.passed;
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  fmt::print("{} in {:.2f} s\n", ok ? "all components pass" : "gradient check FAILED", seconds);
  return ok ? 0 : exit_code(ErrorKind::oracle);
}

}  // namespace sqlseq::cli

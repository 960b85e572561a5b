//
// Copyright 2026 The augtool Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

// augtool: subsample | augment | eval | report
//
// Exit codes: 0 success, 2 corpus/config errors, 3 backend/augmentation
// errors, 4 metric/experiment errors.

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "augtool/augment.h"
#include "augtool/config.h"
#include "augtool/corpus.h"
#include "augtool/error.h"
#include "augtool/experiment.h"
#include "augtool/metrics.h"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kVersion = "0.1.0";

enum ExitCode { kOk = 0, kCorpus = 2, kBackend = 3, kMetric = 4 };

struct CommonArgs {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> backend_cmd;
};

struct Loaded {
  augtool::ToolConfig config;
  fs::path out;
};

Loaded Load(const CommonArgs& args) {
  Loaded l{augtool::LoadToolConfig(args.config), {}};
  if (const char* env = std::getenv("AUGTOOL_BACKEND_CMD"); env && *env) {
    l.config.backend.backend_cmd = env;
  }
  if (args.backend_cmd) l.config.backend.backend_cmd = *args.backend_cmd;
  if (args.seed) l.config.master_seed = *args.seed;
  l.out = args.out.empty() ? l.config.output_dir : fs::path(args.out);
  std::error_code ec;
  fs::create_directories(l.out, ec);
  if (ec) throw augtool::IoError("cannot create " + l.out.string());
  return l;
}

std::string UtcNow() {
  const std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

void WriteText(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw augtool::IoError("cannot write " + path.string());
  out << content;
  if (!out) throw augtool::IoError("write failed for " + path.string());
}

void WriteManifest(const CommonArgs& args, const Loaded& l,
                   const std::string& command,
                   const std::vector<std::string>& files) {
  json m = {{"command", command},
            {"config_path", args.config},
            {"output_dir", l.out.string()},
            {"created_at", UtcNow()},
            {"tool_version", kVersion},
            {"master_seed", l.config.master_seed},
            {"files", files}};
  WriteText(l.out / "manifest.json", m.dump(2) + "\n");
}

augtool::DatasetSplit LoadRequired(
    const std::optional<fs::path>& path, const augtool::TaskSpec& task,
    augtool::SplitKind kind, const char* what) {
  if (!path) {
    throw augtool::ConfigError(std::string("config has no data.") + what +
                               " path");
  }
  return augtool::LoadTsv(*path, task, kind);
}

// ---------------------------------------------------------------------------

struct SubsampleArgs {
  std::optional<std::size_t> n;
  std::optional<std::size_t> dev;
  std::string train;
};

int CmdSubsample(const CommonArgs& common, const SubsampleArgs& args) {
  Loaded l = Load(common);
  auto& c = l.config;
  const std::size_t n = args.n.value_or(c.n_per_class);
  const std::size_t dev = args.dev.value_or(c.dev_per_class);
  auto train = args.train.empty()
                   ? LoadRequired(c.train_path, c.task,
                                  augtool::SplitKind::kTrain, "train")
                   : augtool::LoadTsv(args.train, c.task);
  auto sample = augtool::SubsampleLowResource(train, n, dev, c.master_seed);
  augtool::SaveTsv(sample.train, l.out / "train_sub.tsv");
  augtool::SaveTsv(sample.dev, l.out / "dev_sub.tsv");
  WriteManifest(common, l, "subsample", {"train_sub.tsv", "dev_sub.tsv"});
  std::cout << "wrote " << sample.train.size() << " train and "
            << sample.dev.size() << " dev examples to " << l.out << "\n";
  return kOk;
}

// ---------------------------------------------------------------------------

struct AugmentArgs {
  std::string method;
  std::string input;
  std::string dev;
  std::optional<std::size_t> s;
  std::optional<std::size_t> workers;
  bool adversarial = false;
};

void ApplyMethod(augtool::ToolConfig& c, const std::string& method) {
  if (method.empty()) return;
  const std::string cmd = c.backend.backend_cmd;
  c.backend = augtool::BackendConfig::Defaults(augtool::ParseMethod(method));
  c.backend.backend_cmd = cmd;
}

int CmdAugment(const CommonArgs& common, const AugmentArgs& args) {
  Loaded l = Load(common);
  auto& c = l.config;
  ApplyMethod(c, args.method);
  if (args.adversarial) c.resources.mock_adversarial = true;

  const fs::path input =
      args.input.empty() ? l.out / "train_sub.tsv" : fs::path(args.input);
  auto train = augtool::LoadTsv(input, c.task);
  fs::path dev_path =
      args.dev.empty() ? l.out / "dev_sub.tsv" : fs::path(args.dev);
  augtool::DatasetSplit dev(c.task, augtool::SplitKind::kDev);
  if (fs::exists(dev_path)) {
    dev = augtool::LoadTsv(dev_path, c.task, augtool::SplitKind::kDev);
  } else if (!args.dev.empty()) {
    throw augtool::IoError("cannot open " + dev_path.string());
  }

  auto backend = augtool::MakeBackend(c.backend, c.task, c.resources);
  augtool::FineTune(*backend, c.task, train, dev);

  augtool::AugmentOptions options;
  options.s = args.s.value_or(c.s);
  options.master_seed = c.master_seed;
  options.workers = args.workers.value_or(c.workers);
  options.retries = c.backend.retries;
  auto run = augtool::RunAugmentation(*backend, train, options);

  augtool::SaveTsv(run.synthetic, l.out / "synthetic.tsv");
  augtool::SaveRecordsJsonl(run.records, l.out / "records.jsonl");
  WriteManifest(common, l, "augment", {"synthetic.tsv", "records.jsonl"});
  std::cout << "wrote " << run.synthetic.size() << " synthetic examples ("
            << run.failures << " dropped) to " << l.out << "\n";
  return kOk;
}

// ---------------------------------------------------------------------------

struct EvalArgs {
  std::string mode = "intrinsic";
  std::string synthetic;
  std::string method;
  std::optional<std::size_t> trials;
  std::optional<std::size_t> n;
  std::optional<std::size_t> workers;
  bool no_baseline = false;
  bool adversarial = false;
};

int EvalIntrinsic(const CommonArgs& common, Loaded& l, const EvalArgs& args) {
  auto& c = l.config;
  const fs::path path = args.synthetic.empty() ? l.out / "synthetic.tsv"
                                               : fs::path(args.synthetic);
  auto synthetic =
      augtool::LoadTsv(path, c.task, augtool::SplitKind::kSynthetic);
  std::vector<std::string> texts;
  for (const auto& e : synthetic.examples()) texts.push_back(e.text);

  json report = {{"dataset", c.task.name()}, {"synthetic", path.string()}};
  report["diversity"] = json::array();
  std::string table = "n-gram  TTR\n";
  for (std::size_t n : {1, 3}) {
    auto d = augtool::TypeTokenRatio(texts, n);
    report["diversity"].push_back(augtool::ToJson(d));
    char line[64];
    std::snprintf(line, sizeof(line), "%-6zu  %.4f\n", n, d.ttr);
    table += line;
  }

  if (c.train_path && c.test_path && c.dev_path) {
    auto train = augtool::LoadTsv(*c.train_path, c.task);
    auto test = augtool::LoadTsv(*c.test_path, c.task, augtool::SplitKind::kTest);
    auto dev = augtool::LoadTsv(*c.dev_path, c.task, augtool::SplitKind::kDev);
    augtool::ClassifierConfig oracle_config = c.classifier;
    oracle_config.seed = c.master_seed;
    auto oracle = augtool::TrainFidelityOracle(train, test, dev, oracle_config);
    auto f = augtool::SemanticFidelity(synthetic, *oracle);
    report["fidelity"] = augtool::ToJson(f);
    char line[64];
    std::snprintf(line, sizeof(line), "fidelity  %.2f\n", f.accuracy * 100.0);
    table += line;
  } else {
    report["fidelity"] = nullptr;
    std::cerr << "warning: data.train/dev/test not all configured; "
                 "semantic fidelity skipped\n";
  }

  WriteText(l.out / "report.json", report.dump(2) + "\n");
  WriteText(l.out / "table.txt", table);
  WriteManifest(common, l, "eval", {"report.json", "table.txt"});
  std::cout << table;
  return kOk;
}

int EvalExtrinsic(const CommonArgs& common, Loaded& l, const EvalArgs& args) {
  auto& c = l.config;
  ApplyMethod(c, args.method);
  if (args.adversarial) c.resources.mock_adversarial = true;
  if (args.trials) c.trials = *args.trials;
  if (args.n) c.n_per_class = *args.n;
  if (args.workers) c.workers = *args.workers;
  if (args.no_baseline) c.include_no_aug_baseline = false;

  augtool::ExperimentData data{
      LoadRequired(c.train_path, c.task, augtool::SplitKind::kTrain, "train"),
      LoadRequired(c.test_path, c.task, augtool::SplitKind::kTest, "test"),
      std::nullopt};
  if (c.dev_path) {
    data.dev = augtool::LoadTsv(*c.dev_path, c.task, augtool::SplitKind::kDev);
  }
  auto reports =
      augtool::RunExperiment(augtool::MakeExperimentConfig(c), data);

  json out = {{"reports", json::array()}};
  for (const auto& r : reports) out["reports"].push_back(augtool::ToJson(r));
  const std::string table = augtool::FormatReport(reports);
  WriteText(l.out / "report.json", out.dump(2) + "\n");
  WriteText(l.out / "table.txt", table);
  WriteManifest(common, l, "eval", {"report.json", "table.txt"});
  std::cout << table;
  return kOk;
}

int CmdEval(const CommonArgs& common, const EvalArgs& args) {
  Loaded l = Load(common);
  if (args.mode == "intrinsic") return EvalIntrinsic(common, l, args);
  return EvalExtrinsic(common, l, args);
}

// ---------------------------------------------------------------------------

int CmdReport(const std::vector<std::string>& inputs, const std::string& out) {
  std::vector<augtool::ExperimentReport> reports;
  for (const auto& path : inputs) {
    std::ifstream in(path);
    if (!in) throw augtool::MetricError("cannot read report " + path);
    json j;
    try {
      j = json::parse(in);
    } catch (const json::exception& e) {
      throw augtool::MetricError(path + ": " + e.what());
    }
    if (j.contains("reports")) {
      for (const auto& r : j["reports"]) {
        reports.push_back(augtool::ExperimentReportFromJson(r));
      }
    } else {
      reports.push_back(augtool::ExperimentReportFromJson(j));
    }
  }
  if (reports.empty()) throw augtool::MetricError("no reports to format");
  const std::string table = augtool::FormatReport(reports);
  if (!out.empty()) WriteText(out, table);
  std::cout << table;
  return kOk;
}

int ExitFor(const std::exception& e, int fallback) {
  if (dynamic_cast<const augtool::CorpusError*>(&e)) return kCorpus;
  if (dynamic_cast<const augtool::BackendError*>(&e)) return kBackend;
  if (dynamic_cast<const augtool::MetricError*>(&e)) return kMetric;
  return fallback;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Conditional text data augmentation toolkit"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  CommonArgs common;
  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", common.config, "JSON config file")
        ->required();
    cmd->add_option("--out", common.out, "Output directory");
    cmd->add_option("--seed", common.seed, "Master seed");
    cmd->add_option("--backend-cmd", common.backend_cmd,
                    "External backend command");
  };

  SubsampleArgs sub;
  auto* subsample = app.add_subcommand("subsample", "Stratified low-resource split");
  add_common(subsample);
  subsample->add_option("--n", sub.n, "Training examples per class");
  subsample->add_option("--dev", sub.dev, "Dev examples per class");
  subsample->add_option("--train", sub.train, "Training TSV (overrides config)");

  AugmentArgs aug;
  auto* augment = app.add_subcommand("augment", "Generate synthetic examples");
  add_common(augment);
  augment->add_option("--method", aug.method, "Augmentation method");
  augment->add_option("--input", aug.input, "Training TSV");
  augment->add_option("--dev", aug.dev, "Dev TSV used for fine-tuning");
  augment->add_option("--s", aug.s, "Synthetic examples per source example");
  augment->add_option("--workers", aug.workers, "Concurrent generations");
  augment->add_flag("--adversarial", aug.adversarial,
                    "Label-shuffled mock backend");

  EvalArgs ev;
  auto* eval = app.add_subcommand("eval", "Intrinsic or extrinsic evaluation");
  add_common(eval);
  eval->add_option("--mode", ev.mode, "intrinsic | extrinsic")
      ->check(CLI::IsMember({"intrinsic", "extrinsic"}));
  eval->add_option("--synthetic", ev.synthetic, "Synthetic TSV (intrinsic)");
  eval->add_option("--method", ev.method, "Augmentation method (extrinsic)");
  eval->add_option("--trials", ev.trials, "Number of trials");
  eval->add_option("--n", ev.n, "Training examples per class");
  eval->add_option("--workers", ev.workers, "Concurrent trials");
  eval->add_flag("--no-baseline", ev.no_baseline, "Skip the no-aug baseline");
  eval->add_flag("--adversarial", ev.adversarial,
                 "Label-shuffled mock backend");

  std::vector<std::string> report_inputs;
  std::string report_out;
  auto* report = app.add_subcommand("report", "Format report.json files");
  report->add_option("inputs", report_inputs, "report.json files")
      ->required();
  report->add_option("--out", report_out, "Write the table here too");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kCorpus;
  }

  int fallback = kCorpus;
  try {
    if (*subsample) {
      return CmdSubsample(common, sub);
    }
    if (*augment) {
      fallback = kBackend;
      return CmdAugment(common, aug);
    }
    if (*eval) {
      fallback = kMetric;
      return CmdEval(common, ev);
    }
    fallback = kMetric;
    return CmdReport(report_inputs, report_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return ExitFor(e, fallback);
  }
}

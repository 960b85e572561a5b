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

#include "augtool/experiment.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <thread>
#include <variant>

#include "augtool/rng.h"

namespace augtool {

using nlohmann::json;

namespace {

template <typename F>
auto Stage(std::size_t trial, const char* stage, F&& f) {
  try {
    return f();
  } catch (const TrialError&) {
    throw;
  } catch (const std::exception& e) {
    throw TrialError(trial, stage, e.what());
  }
}

}  // namespace

TrialResult RunTrial(const ExperimentConfig& config, const ExperimentData& data,
                     std::size_t trial_index) {
  const std::uint64_t seed = DeriveSeed(config.master_seed, trial_index);
  const TaskSpec& task = data.train.task();

  auto sample = Stage(trial_index, "subsample", [&] {
    return SubsampleLowResource(data.train, config.n_per_class,
                                config.dev_per_class, seed);
  });

  auto backend = Stage(trial_index, "fine_tune", [&] {
    auto b = MakeBackend(config.method, task, config.resources);
    FineTune(*b, task, sample.train, sample.dev);
    return b;
  });

  AugmentOptions options;
  options.s = config.s;
  options.master_seed = seed;
  options.retries = config.method.retries;
  auto run = Stage(trial_index, "augment", [&] {
    return RunAugmentation(*backend, sample.train, options);
  });

  ClassifierConfig classifier = config.classifier;
  classifier.seed = seed;
  const double accuracy = Stage(trial_index, "classify", [&] {
    const DatasetSplit merged = MergeForTraining(sample.train, run.synthetic);
    auto model = TrainClassifier(merged, sample.dev, classifier);
    return Accuracy(*model, data.test);
  });

  std::optional<double> baseline;
  if (config.include_no_aug_baseline) {
    baseline = Stage(trial_index, "baseline", [&] {
      auto model = TrainClassifier(sample.train, sample.dev, classifier);
      return Accuracy(*model, data.test);
    });
  }

  return {trial_index, seed,
          accuracy,    baseline,
          std::move(sample.train), std::move(sample.dev),
          std::move(run)};
}

std::pair<double, double> MeanStd(std::span<const double> values) {
  if (values.empty()) return {0.0, 0.0};
  // Identical values would otherwise pick up rounding noise.
  if (std::adjacent_find(values.begin(), values.end(),
                         std::not_equal_to<>()) == values.end()) {
    return {values.front(), 0.0};
  }
  const double n = static_cast<double>(values.size());
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(ss / (n - 1.0))};
}

std::vector<ExperimentReport> RunExperiment(const ExperimentConfig& config,
                                            const ExperimentData& data) {
  if (config.trials == 0) throw ConfigError("trials must be >= 1");
  ValidateBackendConfig(config.method);

  using Outcome = std::variant<TrialResult, std::string>;
  std::vector<std::optional<Outcome>> outcomes(config.trials);
  auto work = [&](std::size_t t) {
    try {
      outcomes[t] = RunTrial(config, data, t);
    } catch (const std::exception& e) {
      outcomes[t] = std::string(e.what());
    }
  };

  const std::size_t workers =
      std::clamp<std::size_t>(config.workers, 1, config.trials);
  if (workers == 1) {
    for (std::size_t t = 0; t < config.trials; ++t) work(t);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t t; (t = next.fetch_add(1)) < config.trials;) work(t);
      });
    }
    for (auto& th : pool) th.join();
  }

  ExperimentReport report;
  report.dataset = data.train.task().name();
  report.method = std::string(ToString(config.method.method));
  report.n_per_class = config.n_per_class;
  ExperimentReport baseline = report;
  baseline.method = "no_aug";

  const TrialResult* first_ok = nullptr;
  std::size_t matched = 0;
  std::size_t generated = 0;
  for (std::size_t t = 0; t < config.trials; ++t) {
    if (const auto* err = std::get_if<std::string>(&*outcomes[t])) {
      report.failed_trials.push_back({t, *err});
      continue;
    }
    const auto& r = std::get<TrialResult>(*outcomes[t]);
    if (!first_ok) first_ok = &r;
    report.per_trial_accuracy.push_back(r.accuracy);
    if (r.baseline_accuracy) {
      baseline.per_trial_accuracy.push_back(*r.baseline_accuracy);
    }
    for (const auto& rec : r.run.records) {
      if (rec.text.empty()) continue;
      ++generated;
      if (rec.label_match) ++matched;
    }
  }
  baseline.failed_trials = report.failed_trials;

  // More than 20% failed.
  if (report.failed_trials.size() * 5 > config.trials) {
    std::string msg = std::to_string(report.failed_trials.size()) + " of " +
                      std::to_string(config.trials) + " trials failed";
    for (const auto& f : report.failed_trials) msg += "\n  " + f.error;
    throw ExperimentError(msg);
  }

  std::tie(report.mean, report.std) = MeanStd(report.per_trial_accuracy);
  std::tie(baseline.mean, baseline.std) =
      MeanStd(baseline.per_trial_accuracy);
  report.label_match_rate =
      generated ? static_cast<double>(matched) / static_cast<double>(generated)
                : 0.0;

  if (first_ok && !first_ok->run.synthetic.empty()) {
    std::vector<std::string> texts;
    for (const auto& e : first_ok->run.synthetic.examples()) {
      texts.push_back(e.text);
    }
    for (std::size_t n : {1, 3}) {
      try {
        report.diversity.push_back(TypeTokenRatio(texts, n));
      } catch (const MetricError&) {
        // Too short for this order; leave it out.
      }
    }
    if (data.dev) {
      ClassifierConfig oracle_config = config.classifier;
      oracle_config.seed = config.master_seed;
      auto oracle =
          TrainFidelityOracle(data.train, data.test, *data.dev, oracle_config);
      report.fidelity = SemanticFidelity(first_ok->run.synthetic, *oracle);
    }
  }

  std::vector<ExperimentReport> reports{std::move(report)};
  if (config.include_no_aug_baseline) reports.push_back(std::move(baseline));
  return reports;
}

std::string FormatCell(double mean, double std) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.2f (%.2f)", mean * 100.0, std * 100.0);
  return buf;
}

std::string FormatReport(std::span<const ExperimentReport> reports) {
  if (reports.empty()) throw ArgumentError("no reports to format");
  std::vector<std::string> methods;
  std::vector<std::string> datasets;
  auto remember = [](std::vector<std::string>& v, const std::string& s) {
    if (std::find(v.begin(), v.end(), s) == v.end()) v.push_back(s);
  };
  for (const auto& r : reports) {
    remember(methods, r.method);
    remember(datasets, r.dataset);
  }

  std::vector<std::vector<std::string>> grid(
      methods.size() + 1, std::vector<std::string>(datasets.size() + 1, "-"));
  grid[0][0] = "Model";
  for (std::size_t c = 0; c < datasets.size(); ++c) grid[0][c + 1] = datasets[c];
  for (std::size_t r = 0; r < methods.size(); ++r) grid[r + 1][0] = methods[r];
  for (const auto& rep : reports) {
    const auto row = std::find(methods.begin(), methods.end(), rep.method) -
                     methods.begin();
    const auto col = std::find(datasets.begin(), datasets.end(), rep.dataset) -
                     datasets.begin();
    grid[row + 1][col + 1] = FormatCell(rep.mean, rep.std);
  }

  std::vector<std::size_t> width(datasets.size() + 1, 0);
  for (const auto& row : grid) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      width[c] = std::max(width[c], row[c].size());
    }
  }
  std::string out;
  for (const auto& row : grid) {
    std::string line;
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) line += "  ";
      line += row[c];
      if (c + 1 < row.size()) line.append(width[c] - row[c].size(), ' ');
    }
    out += line;
    out += '\n';
  }
  return out;
}

json ToJson(const ExperimentReport& r) {
  json j;
  j["dataset"] = r.dataset;
  j["method"] = r.method;
  j["n_per_class"] = r.n_per_class;
  j["per_trial_accuracy"] = r.per_trial_accuracy;
  j["mean"] = r.mean;
  j["std"] = r.std;
  j["fidelity"] = r.fidelity ? ToJson(*r.fidelity) : json(nullptr);
  j["diversity"] = json::array();
  for (const auto& d : r.diversity) j["diversity"].push_back(ToJson(d));
  j["label_match_rate"] = r.label_match_rate;
  j["failed_trials"] = json::array();
  for (const auto& f : r.failed_trials) {
    j["failed_trials"].push_back({{"trial", f.trial}, {"error", f.error}});
  }
  return j;
}

ExperimentReport ExperimentReportFromJson(const json& j) {
  try {
    ExperimentReport r;
    r.dataset = j.value("dataset", std::string());
    r.method = j.at("method").get<std::string>();
    r.n_per_class = j.value("n_per_class", std::size_t{0});
    r.per_trial_accuracy =
        j.at("per_trial_accuracy").get<std::vector<double>>();
    r.mean = j.at("mean").get<double>();
    r.std = j.at("std").get<double>();
    if (j.contains("fidelity") && !j["fidelity"].is_null()) {
      r.fidelity = FidelityReportFromJson(j["fidelity"]);
    }
    if (j.contains("diversity")) {
      for (const auto& d : j["diversity"]) {
        r.diversity.push_back(DiversityReportFromJson(d));
      }
    }
    r.label_match_rate = j.value("label_match_rate", 0.0);
    if (j.contains("failed_trials")) {
      for (const auto& f : j["failed_trials"]) {
        r.failed_trials.push_back({f.at("trial").get<std::size_t>(),
                                   f.at("error").get<std::string>()});
      }
    }
    return r;
  } catch (const json::exception& e) {
    throw MetricError(std::string("malformed experiment report: ") + e.what());
  }
}

}  // namespace augtool

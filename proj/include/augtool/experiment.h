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

#ifndef AUGTOOL_EXPERIMENT_H_
#define AUGTOOL_EXPERIMENT_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "augtool/augment.h"
#include "augtool/backends.h"
#include "augtool/corpus.h"
#include "augtool/error.h"
#include "augtool/metrics.h"
#include "json.hpp"

namespace augtool {

struct ExperimentData {
  DatasetSplit train;
  DatasetSplit test;
  // Full dev partition; only needed for the fidelity oracle.
  std::optional<DatasetSplit> dev;
};

struct ExperimentConfig {
  BackendConfig method;
  BackendResources resources;
  std::size_t n_per_class = 10;
  std::size_t dev_per_class = 10;
  std::size_t trials = 15;
  std::size_t s = 1;
  std::uint64_t master_seed = 0;
  ClassifierConfig classifier;
  bool include_no_aug_baseline = false;
  // Concurrent trials.
  std::size_t workers = 1;
};

// Raised for a failed trial; the message names the trial and the stage.
class TrialError : public ExperimentError {
 public:
  TrialError(std::size_t trial, std::string stage, const std::string& what)
      : ExperimentError("trial " + std::to_string(trial) + " failed during " +
                        stage + ": " + what),
        trial_(trial),
        stage_(std::move(stage)) {}
  std::size_t trial() const { return trial_; }
  const std::string& stage() const { return stage_; }

 private:
  std::size_t trial_;
  std::string stage_;
};

struct TrialResult {
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  double accuracy = 0.0;
  std::optional<double> baseline_accuracy;
  DatasetSplit train_sub;
  DatasetSplit dev_sub;
  AugmentationRun run;
};

// seed = DeriveSeed(master_seed, trial). Subsample, fine-tune a fresh
// backend, augment, train on the merged data, score the full test split.
// The no-aug baseline (when enabled) trains on train_sub with the same seed.
TrialResult RunTrial(const ExperimentConfig& config, const ExperimentData& data,
                     std::size_t trial_index);

struct FailedTrial {
  std::size_t trial = 0;
  std::string error;
};

struct ExperimentReport {
  std::string dataset;
  std::string method;
  std::size_t n_per_class = 0;
  std::vector<double> per_trial_accuracy;
  double mean = 0.0;
  double std = 0.0;
  std::optional<FidelityReport> fidelity;
  std::vector<DiversityReport> diversity;
  double label_match_rate = 0.0;
  std::vector<FailedTrial> failed_trials;
};

// Arithmetic mean and sample standard deviation (divisor size - 1; zero
// for fewer than two values).
std::pair<double, double> MeanStd(std::span<const double> values);

// Runs every trial (config.workers at a time) and aggregates by trial
// index. The first report is the method; a "no_aug" report follows when
// the baseline is enabled. Intrinsic metrics come from the first
// successful trial. Throws ExperimentError when more than 20% of trials
// fail.
std::vector<ExperimentReport> RunExperiment(const ExperimentConfig& config,
                                            const ExperimentData& data);

// "MM.MM (SS.SS)" in percent.
std::string FormatCell(double mean, double std);
// Rows are methods, columns datasets, both in first-appearance order.
std::string FormatReport(std::span<const ExperimentReport> reports);

nlohmann::json ToJson(const ExperimentReport& report);
ExperimentReport ExperimentReportFromJson(const nlohmann::json& j);

}  // namespace augtool

#endif  // AUGTOOL_EXPERIMENT_H_

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

#ifndef AUGTOOL_METRICS_H_
#define AUGTOOL_METRICS_H_

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "augtool/corpus.h"
#include "augtool/stdio_channel.h"
#include "json.hpp"

namespace augtool {

// ---------------------------------------------------------------------------
// Lexical diversity

struct DiversityReport {
  std::size_t n = 1;
  double ttr = 0.0;
  std::size_t unique = 0;
  std::size_t total = 0;
};

// Distinct n-grams over all n-grams of lower-cased whitespace tokens,
// collected per text and pooled. Throws MetricError when no text has n
// words.
DiversityReport TypeTokenRatio(std::span<const std::string> texts,
                               std::size_t n);

// ---------------------------------------------------------------------------
// Classifiers

enum class ClassifierKind { kBowLinear, kExternal };

std::string_view ToString(ClassifierKind kind);
ClassifierKind ParseClassifierKind(std::string_view s);

struct ClassifierConfig {
  ClassifierKind kind = ClassifierKind::kBowLinear;
  int epochs = 8;
  // Unset means 0.5 for bow_linear and 4e-5 for external.
  std::optional<double> learning_rate;
  // Forwarded to external classifiers only.
  double dropout = 0.1;
  int warmup_steps = 100;
  std::string selection = "best_dev_accuracy";
  std::uint64_t seed = 0;
  std::string backend_cmd;

  double EffectiveLearningRate() const;
};

nlohmann::json ToJson(const ClassifierConfig& config);
ClassifierConfig ClassifierConfigFromJson(const nlohmann::json& j);

class Classifier {
 public:
  virtual ~Classifier() = default;
  virtual const TaskSpec& task() const = 0;
  // One task label per text.
  virtual std::vector<std::string> Predict(
      std::span<const std::string> texts) const = 0;
};

// Multiclass softmax regression over binary bag-of-words features, trained
// by SGD in seeded order; the epoch with the best dev accuracy is kept
// (earliest wins ties).
class BowLinearClassifier : public Classifier {
 public:
  BowLinearClassifier(const DatasetSplit& train, const DatasetSplit& dev,
                      const ClassifierConfig& config);

  const TaskSpec& task() const override { return task_; }
  std::vector<std::string> Predict(
      std::span<const std::string> texts) const override;

  double best_dev_accuracy() const { return best_dev_accuracy_; }
  int best_epoch() const { return best_epoch_; }

 private:
  std::vector<int> Features(std::string_view text) const;
  std::size_t Argmax(const std::vector<int>& features,
                     const std::vector<double>& weights) const;

  TaskSpec task_;
  std::map<std::string, int, std::less<>> vocab_;
  // Row-major: labels x (vocab + 1); the last column is the bias.
  std::vector<double> weights_;
  double best_dev_accuracy_ = -1.0;
  int best_epoch_ = 0;
};

// Classifier behind the stdio JSON protocol:
//   {"op":"train","train":[..],"dev":[..],"config":{..}} -> {"ok":true}
//   {"op":"predict","texts":[..]} -> {"ok":true,"labels":[..]}
class ExternalClassifier : public Classifier {
 public:
  ExternalClassifier(const DatasetSplit& train, const DatasetSplit& dev,
                     const ClassifierConfig& config);

  const TaskSpec& task() const override { return task_; }
  std::vector<std::string> Predict(
      std::span<const std::string> texts) const override;

 private:
  TaskSpec task_;
  mutable StdioJsonChannel channel_;
};

// Throws ArgumentError for empty or mismatched splits, DegenerateDataError
// for single-class training data and ConfigError for an external kind
// without backend_cmd.
std::unique_ptr<Classifier> TrainClassifier(const DatasetSplit& train,
                                            const DatasetSplit& dev,
                                            const ClassifierConfig& config);

// Fraction of examples whose predicted label equals the gold label.
double Accuracy(const Classifier& classifier, const DatasetSplit& split);

// ---------------------------------------------------------------------------
// Semantic fidelity

struct FidelityReport {
  double accuracy = 0.0;
  std::map<std::string, double> per_label_accuracy;
  std::size_t n = 0;
};

FidelityReport FidelityFromPredictions(std::span<const std::string> assigned,
                                       std::span<const std::string> predicted);

// Accuracy of `oracle` on the synthetic texts against their assigned
// labels. Throws MetricError on an empty split.
FidelityReport SemanticFidelity(const DatasetSplit& synthetic,
                                const Classifier& oracle);

// Oracle for fidelity: trained on train + test combined, selected on dev.
std::unique_ptr<Classifier> TrainFidelityOracle(const DatasetSplit& train,
                                                const DatasetSplit& test,
                                                const DatasetSplit& dev,
                                                const ClassifierConfig& config);

nlohmann::json ToJson(const DiversityReport& report);
nlohmann::json ToJson(const FidelityReport& report);
DiversityReport DiversityReportFromJson(const nlohmann::json& j);
FidelityReport FidelityReportFromJson(const nlohmann::json& j);

}  // namespace augtool

#endif  // AUGTOOL_METRICS_H_

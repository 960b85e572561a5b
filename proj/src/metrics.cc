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

#include "augtool/metrics.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <unordered_set>

#include "augtool/backends.h"
#include "augtool/error.h"
#include "augtool/rng.h"
#include "augtool/text.h"

namespace augtool {

using nlohmann::json;

DiversityReport TypeTokenRatio(std::span<const std::string> texts,
                               std::size_t n) {
  if (n == 0) throw ArgumentError("n-gram order must be positive");
  std::unordered_set<std::string> distinct;
  std::size_t total = 0;
  for (const auto& text : texts) {
    const auto words = SplitWords(ToLower(text));
    if (words.size() < n) continue;
    for (std::size_t i = 0; i + n <= words.size(); ++i) {
      // Tokens hold no whitespace, so a space join is injective.
      std::string gram = words[i];
      for (std::size_t k = 1; k < n; ++k) {
        gram += ' ';
        gram += words[i + k];
      }
      distinct.insert(std::move(gram));
      ++total;
    }
  }
  if (total == 0) {
    throw MetricError("type-token ratio undefined: no text has " +
                      std::to_string(n) + " words");
  }
  return {n, static_cast<double>(distinct.size()) / static_cast<double>(total),
          distinct.size(), total};
}

std::string_view ToString(ClassifierKind kind) {
  return kind == ClassifierKind::kExternal ? "external" : "bow_linear";
}

ClassifierKind ParseClassifierKind(std::string_view s) {
  if (s == "bow_linear") return ClassifierKind::kBowLinear;
  if (s == "external") return ClassifierKind::kExternal;
  throw ConfigError("unknown classifier kind '" + std::string(s) + "'");
}

double ClassifierConfig::EffectiveLearningRate() const {
  if (learning_rate) return *learning_rate;
  return kind == ClassifierKind::kBowLinear ? 0.5 : 4e-5;
}

json ToJson(const ClassifierConfig& c) {
  return {{"kind", ToString(c.kind)},
          {"epochs", c.epochs},
          {"learning_rate", c.EffectiveLearningRate()},
          {"dropout", c.dropout},
          {"warmup_steps", c.warmup_steps},
          {"selection", c.selection},
          {"seed", c.seed}};
}

ClassifierConfig ClassifierConfigFromJson(const json& j) {
  try {
    ClassifierConfig c;
    if (j.contains("kind")) {
      c.kind = ParseClassifierKind(j["kind"].get<std::string>());
    }
    c.epochs = j.value("epochs", c.epochs);
    if (j.contains("learning_rate") && !j["learning_rate"].is_null()) {
      c.learning_rate = j["learning_rate"].get<double>();
    }
    c.dropout = j.value("dropout", c.dropout);
    c.warmup_steps = j.value("warmup_steps", c.warmup_steps);
    c.selection = j.value("selection", c.selection);
    c.seed = j.value("seed", c.seed);
    c.backend_cmd = j.value("backend_cmd", c.backend_cmd);
    if (c.epochs < 1 || !(c.EffectiveLearningRate() > 0.0) ||
        c.dropout < 0.0 || c.dropout >= 1.0 || c.warmup_steps < 0) {
      throw ConfigError("classifier config out of range");
    }
    return c;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("classifier config: ") + e.what());
  }
}

// ---------------------------------------------------------------------------

namespace {

std::vector<std::string> Texts(const DatasetSplit& split) {
  std::vector<std::string> texts;
  texts.reserve(split.size());
  for (const auto& e : split.examples()) texts.push_back(e.text);
  return texts;
}

}  // namespace

BowLinearClassifier::BowLinearClassifier(const DatasetSplit& train,
                                         const DatasetSplit& dev,
                                         const ClassifierConfig& config)
    : task_(train.task()) {
  for (const auto& e : train.examples()) {
    for (auto& w : SplitWords(ToLower(e.text))) {
      vocab_.emplace(std::move(w), static_cast<int>(vocab_.size()));
    }
  }
  const std::size_t labels = task_.labels().size();
  const std::size_t width = vocab_.size() + 1;
  std::vector<double> weights(labels * width, 0.0);

  std::vector<std::vector<int>> train_features;
  std::vector<std::size_t> gold;
  for (const auto& e : train.examples()) {
    train_features.push_back(Features(e.text));
    gold.push_back(static_cast<std::size_t>(task_.IndexOf(e.label)));
  }
  std::vector<std::vector<int>> dev_features;
  for (const auto& e : dev.examples()) dev_features.push_back(Features(e.text));

  const double lr = config.EffectiveLearningRate();
  Rng rng(config.seed);
  std::vector<std::size_t> order(train.size());
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> probs(labels);

  weights_ = weights;
  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    rng.Shuffle(std::span(order));
    for (std::size_t idx : order) {
      const auto& f = train_features[idx];
      double max_score = -INFINITY;
      for (std::size_t c = 0; c < labels; ++c) {
        const double* row = &weights[c * width];
        double s = row[width - 1];
        for (int k : f) s += row[k];
        probs[c] = s;
        max_score = std::max(max_score, s);
      }
      double z = 0.0;
      for (double& p : probs) {
        p = std::exp(p - max_score);
        z += p;
      }
      for (std::size_t c = 0; c < labels; ++c) {
        const double grad = probs[c] / z - (c == gold[idx] ? 1.0 : 0.0);
        double* row = &weights[c * width];
        row[width - 1] -= lr * grad;
        for (int k : f) row[k] -= lr * grad;
      }
    }

    std::size_t correct = 0;
    for (std::size_t i = 0; i < dev.size(); ++i) {
      if (task_.labels()[Argmax(dev_features[i], weights)] == dev[i].label) {
        ++correct;
      }
    }
    const double acc =
        static_cast<double>(correct) / static_cast<double>(dev.size());
    if (acc > best_dev_accuracy_) {
      best_dev_accuracy_ = acc;
      best_epoch_ = epoch;
      weights_ = weights;
    }
  }
}

std::vector<int> BowLinearClassifier::Features(std::string_view text) const {
  std::vector<int> f;
  for (const auto& w : SplitWords(ToLower(text))) {
    auto it = vocab_.find(w);
    if (it != vocab_.end()) f.push_back(it->second);
  }
  std::sort(f.begin(), f.end());
  f.erase(std::unique(f.begin(), f.end()), f.end());
  return f;
}

std::size_t BowLinearClassifier::Argmax(
    const std::vector<int>& features, const std::vector<double>& weights) const {
  const std::size_t width = vocab_.size() + 1;
  std::size_t best = 0;
  double best_score = -INFINITY;
  for (std::size_t c = 0; c < task_.labels().size(); ++c) {
    const double* row = &weights[c * width];
    double s = row[width - 1];
    for (int k : features) s += row[k];
    if (s > best_score) {
      best_score = s;
      best = c;
    }
  }
  return best;
}

std::vector<std::string> BowLinearClassifier::Predict(
    std::span<const std::string> texts) const {
  std::vector<std::string> out;
  out.reserve(texts.size());
  for (const auto& t : texts) {
    out.push_back(task_.labels()[Argmax(Features(t), weights_)]);
  }
  return out;
}

ExternalClassifier::ExternalClassifier(const DatasetSplit& train,
                                       const DatasetSplit& dev,
                                       const ClassifierConfig& config)
    : task_(train.task()), channel_(config.backend_cmd) {
  json cfg = ToJson(config);
  cfg["labels"] = task_.labels();
  channel_.Request({{"op", "train"},
                    {"train", ExamplesToJson(train)},
                    {"dev", ExamplesToJson(dev)},
                    {"config", cfg}});
}

std::vector<std::string> ExternalClassifier::Predict(
    std::span<const std::string> texts) const {
  if (texts.empty()) return {};
  json reply = channel_.Request(
      {{"op", "predict"}, {"texts", std::vector<std::string>(texts.begin(),
                                                             texts.end())}});
  if (!reply.contains("labels") || !reply["labels"].is_array() ||
      reply["labels"].size() != texts.size()) {
    throw BackendError("classifier '" + channel_.command() +
                       "' answered op 'predict' with a wrong label list");
  }
  std::vector<std::string> labels;
  for (const auto& l : reply["labels"]) {
    std::string label = ToLower(l.get<std::string>());
    if (!task_.HasLabel(label)) {
      throw BackendError("classifier predicted unknown label '" + label + "'");
    }
    labels.push_back(std::move(label));
  }
  return labels;
}

std::unique_ptr<Classifier> TrainClassifier(const DatasetSplit& train,
                                            const DatasetSplit& dev,
                                            const ClassifierConfig& config) {
  if (train.empty()) throw ArgumentError("training split is empty");
  if (dev.empty()) throw ArgumentError("dev split is empty");
  if (train.task() != dev.task()) {
    throw ArgumentError("train and dev splits have different tasks");
  }
  if (train.LabelHistogram().size() < 2) {
    throw DegenerateDataError("training data has a single class");
  }
  if (config.epochs < 1) throw ConfigError("classifier epochs must be >= 1");
  if (config.kind == ClassifierKind::kExternal) {
    if (config.backend_cmd.empty()) {
      throw ConfigError("external classifier requires backend_cmd");
    }
    return std::make_unique<ExternalClassifier>(train, dev, config);
  }
  return std::make_unique<BowLinearClassifier>(train, dev, config);
}

double Accuracy(const Classifier& classifier, const DatasetSplit& split) {
  if (split.empty()) throw MetricError("accuracy of an empty split");
  const auto predicted = classifier.Predict(Texts(split));
  std::size_t correct = 0;
  for (std::size_t i = 0; i < split.size(); ++i) {
    if (predicted[i] == split[i].label) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(split.size());
}

FidelityReport FidelityFromPredictions(std::span<const std::string> assigned,
                                       std::span<const std::string> predicted) {
  if (assigned.empty()) {
    throw MetricError("semantic fidelity undefined for empty data");
  }
  if (assigned.size() != predicted.size()) {
    throw ArgumentError("prediction count does not match example count");
  }
  std::map<std::string, std::pair<std::size_t, std::size_t>> counts;
  std::size_t correct = 0;
  for (std::size_t i = 0; i < assigned.size(); ++i) {
    auto& [hit, seen] = counts[assigned[i]];
    ++seen;
    if (assigned[i] == predicted[i]) {
      ++hit;
      ++correct;
    }
  }
  FidelityReport report;
  report.n = assigned.size();
  report.accuracy =
      static_cast<double>(correct) / static_cast<double>(assigned.size());
  for (const auto& [label, c] : counts) {
    report.per_label_accuracy[label] =
        static_cast<double>(c.first) / static_cast<double>(c.second);
  }
  return report;
}

FidelityReport SemanticFidelity(const DatasetSplit& synthetic,
                                const Classifier& oracle) {
  if (synthetic.empty()) {
    throw MetricError("semantic fidelity undefined for empty data");
  }
  if (synthetic.task() != oracle.task()) {
    throw ArgumentError("fidelity oracle was trained on another task");
  }
  std::vector<std::string> assigned;
  for (const auto& e : synthetic.examples()) assigned.push_back(e.label);
  const auto predicted = oracle.Predict(Texts(synthetic));
  return FidelityFromPredictions(assigned, predicted);
}

std::unique_ptr<Classifier> TrainFidelityOracle(
    const DatasetSplit& train, const DatasetSplit& test,
    const DatasetSplit& dev, const ClassifierConfig& config) {
  DatasetSplit combined(train.task(), SplitKind::kTrain);
  for (const auto& e : train.examples()) {
    combined.Add({"train-" + e.id, e.text, e.label});
  }
  for (const auto& e : test.examples()) {
    combined.Add({"test-" + e.id, e.text, e.label});
  }
  return TrainClassifier(combined, dev, config);
}

json ToJson(const DiversityReport& r) {
  return {{"n", r.n}, {"ttr", r.ttr}, {"unique", r.unique}, {"total", r.total}};
}

json ToJson(const FidelityReport& r) {
  return {{"accuracy", r.accuracy},
          {"per_label_accuracy", r.per_label_accuracy},
          {"n", r.n}};
}

DiversityReport DiversityReportFromJson(const json& j) {
  return {j.at("n").get<std::size_t>(), j.at("ttr").get<double>(),
          j.value("unique", std::size_t{0}), j.value("total", std::size_t{0})};
}

FidelityReport FidelityReportFromJson(const json& j) {
  FidelityReport r;
  r.accuracy = j.at("accuracy").get<double>();
  r.per_label_accuracy =
      j.at("per_label_accuracy").get<std::map<std::string, double>>();
  r.n = j.at("n").get<std::size_t>();
  return r;
}

}  // namespace augtool

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

#ifndef AUGTOOL_CORPUS_H_
#define AUGTOOL_CORPUS_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace augtool {

// One (text, label) pair. Texts are TSV-safe: no tab, CR or LF, and
// non-empty after trimming.
struct LabeledExample {
  std::string id;
  std::string text;
  std::string label;

  friend bool operator==(const LabeledExample&,
                         const LabeledExample&) = default;
};

// Throws ArgumentError when the text breaks the invariants above.
void ValidateText(std::string_view text);

// Dataset identity and its ordered, lower-case class vocabulary.
class TaskSpec {
 public:
  TaskSpec() = default;
  // Throws LabelError unless labels are unique, non-empty, lower-case and
  // whitespace-free.
  TaskSpec(std::string name, std::vector<std::string> labels);

  const std::string& name() const { return name_; }
  const std::vector<std::string>& labels() const { return labels_; }
  bool HasLabel(std::string_view label) const;
  // Position of `label` in labels(), or -1.
  int IndexOf(std::string_view label) const;

  friend bool operator==(const TaskSpec&, const TaskSpec&) = default;

 private:
  std::string name_;
  std::vector<std::string> labels_;
};

enum class SplitKind { kTrain, kDev, kTest, kSynthetic };

std::string_view ToString(SplitKind kind);

// An ordered list of examples over one task. Ids are unique.
class DatasetSplit {
 public:
  DatasetSplit(TaskSpec task, SplitKind kind);
  // Validates every example; throws ArgumentError/LabelError.
  DatasetSplit(TaskSpec task, SplitKind kind,
               std::vector<LabeledExample> examples);

  const TaskSpec& task() const { return task_; }
  SplitKind kind() const { return kind_; }
  const std::vector<LabeledExample>& examples() const { return examples_; }
  std::size_t size() const { return examples_.size(); }
  bool empty() const { return examples_.empty(); }
  const LabeledExample& operator[](std::size_t i) const {
    return examples_[i];
  }

  void Add(LabeledExample example);
  bool ContainsId(std::string_view id) const;
  std::map<std::string, std::size_t> LabelHistogram() const;

 private:
  TaskSpec task_;
  SplitKind kind_;
  std::vector<LabeledExample> examples_;
  std::map<std::string, std::size_t, std::less<>> id_index_;
};

// `label<TAB>text` per line, UTF-8, no header. Labels are lower-cased
// before the membership check; ids are zero-based line indices.
DatasetSplit LoadTsv(const std::filesystem::path& path, const TaskSpec& task,
                     SplitKind kind = SplitKind::kTrain);
DatasetSplit ParseTsv(std::string_view content, const TaskSpec& task,
                      SplitKind kind = SplitKind::kTrain);

void SaveTsv(const DatasetSplit& split, const std::filesystem::path& path);
std::string FormatTsv(const DatasetSplit& split);

struct LowResourceSample {
  DatasetSplit train;
  DatasetSplit dev;
};

// Stratified selection of `n_per_class` training and `dev_per_class`
// validation examples per class. Per class: candidate ids sorted
// lexicographically, shuffled by an RNG keyed on (seed, label), first n go
// to train, the next dev_per_class to dev. Independent of input order.
LowResourceSample SubsampleLowResource(const DatasetSplit& train,
                                       std::size_t n_per_class,
                                       std::size_t dev_per_class,
                                       std::uint64_t seed);

}  // namespace augtool

#endif  // AUGTOOL_CORPUS_H_

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

#include "augtool/corpus.h"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "augtool/error.h"
#include "augtool/rng.h"
#include "augtool/text.h"

namespace augtool {

void ValidateText(std::string_view text) {
  if (text.find_first_of("\t\r\n") != std::string_view::npos) {
    throw ArgumentError("example text contains a tab or line break");
  }
  if (Trim(text).empty()) {
    throw ArgumentError("example text is empty");
  }
}

TaskSpec::TaskSpec(std::string name, std::vector<std::string> labels)
    : name_(std::move(name)), labels_(std::move(labels)) {
  std::set<std::string_view> seen;
  for (const auto& label : labels_) {
    if (label.empty()) throw LabelError("empty label in task " + name_);
    if (label != ToLower(label)) {
      throw LabelError("label '" + label + "' is not lower-case");
    }
    if (std::any_of(label.begin(), label.end(), IsSpace)) {
      throw LabelError("label '" + label + "' contains whitespace");
    }
    if (!seen.insert(label).second) {
      throw LabelError("duplicate label '" + label + "'");
    }
  }
}

bool TaskSpec::HasLabel(std::string_view label) const {
  return IndexOf(label) >= 0;
}

int TaskSpec::IndexOf(std::string_view label) const {
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i] == label) return static_cast<int>(i);
  }
  return -1;
}

std::string_view ToString(SplitKind kind) {
  switch (kind) {
    case SplitKind::kTrain:
      return "train";
    case SplitKind::kDev:
      return "dev";
    case SplitKind::kTest:
      return "test";
    case SplitKind::kSynthetic:
      return "synthetic";
  }
  return "unknown";
}

DatasetSplit::DatasetSplit(TaskSpec task, SplitKind kind)
    : task_(std::move(task)), kind_(kind) {}

DatasetSplit::DatasetSplit(TaskSpec task, SplitKind kind,
                           std::vector<LabeledExample> examples)
    : DatasetSplit(std::move(task), kind) {
  examples_.reserve(examples.size());
  for (auto& e : examples) Add(std::move(e));
}

void DatasetSplit::Add(LabeledExample example) {
  ValidateText(example.text);
  if (!task_.HasLabel(example.label)) {
    throw LabelError("label '" + example.label + "' not in task " +
                     task_.name());
  }
  if (id_index_.contains(example.id)) {
    throw ArgumentError("duplicate example id '" + example.id + "'");
  }
  id_index_.emplace(example.id, examples_.size());
  examples_.push_back(std::move(example));
}

bool DatasetSplit::ContainsId(std::string_view id) const {
  return id_index_.find(id) != id_index_.end();
}

std::map<std::string, std::size_t> DatasetSplit::LabelHistogram() const {
  std::map<std::string, std::size_t> hist;
  for (const auto& e : examples_) ++hist[e.label];
  return hist;
}

DatasetSplit ParseTsv(std::string_view content, const TaskSpec& task,
                      SplitKind kind) {
  DatasetSplit split(task, kind);
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < content.size()) {
    std::size_t end = content.find('\n', pos);
    if (end == std::string_view::npos) end = content.size();
    std::string_view line = content.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

    const std::size_t tab = line.find('\t');
    if (tab == std::string_view::npos ||
        line.find('\t', tab + 1) != std::string_view::npos) {
      throw ParseError("expected 'label<TAB>text'", line_no);
    }
    std::string label = ToLower(Trim(line.substr(0, tab)));
    std::string_view text = line.substr(tab + 1);
    if (!task.HasLabel(label)) {
      throw LabelError("line " + std::to_string(line_no) + ": label '" +
                       label + "' not in task " + task.name());
    }
    if (Trim(text).empty()) throw ParseError("empty text", line_no);
    split.Add({std::to_string(line_no - 1), std::string(text), label});
  }
  return split;
}

DatasetSplit LoadTsv(const std::filesystem::path& path, const TaskSpec& task,
                     SplitKind kind) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return ParseTsv(buffer.str(), task, kind);
}

std::string FormatTsv(const DatasetSplit& split) {
  std::string out;
  for (const auto& e : split.examples()) {
    ValidateText(e.text);
    out += e.label;
    out += '\t';
    out += e.text;
    out += '\n';
  }
  return out;
}

void SaveTsv(const DatasetSplit& split, const std::filesystem::path& path) {
  const std::string content = FormatTsv(split);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << content;
  out.flush();
  if (!out) throw IoError("write failed for " + path.string());
}

LowResourceSample SubsampleLowResource(const DatasetSplit& train,
                                       std::size_t n_per_class,
                                       std::size_t dev_per_class,
                                       std::uint64_t seed) {
  if (n_per_class == 0 || dev_per_class == 0) {
    throw ArgumentError("per-class counts must be positive");
  }
  const TaskSpec& task = train.task();
  std::map<std::string, std::vector<const LabeledExample*>> by_label;
  for (const auto& e : train.examples()) by_label[e.label].push_back(&e);

  LowResourceSample out{DatasetSplit(task, SplitKind::kTrain),
                        DatasetSplit(task, SplitKind::kDev)};
  const std::size_t needed = n_per_class + dev_per_class;
  for (const auto& label : task.labels()) {
    auto& pool = by_label[label];
    if (pool.size() < needed) {
      throw CapacityError("class '" + label + "' has " +
                          std::to_string(pool.size()) + " examples, needs " +
                          std::to_string(needed));
    }
    std::sort(pool.begin(), pool.end(),
              [](const LabeledExample* a, const LabeledExample* b) {
                return a->id < b->id;
              });
    Rng rng(DeriveSeed(seed, HashString(label)));
    rng.Shuffle(std::span(pool));
    for (std::size_t i = 0; i < n_per_class; ++i) out.train.Add(*pool[i]);
    for (std::size_t i = n_per_class; i < needed; ++i) out.dev.Add(*pool[i]);
  }
  return out;
}

}  // namespace augtool

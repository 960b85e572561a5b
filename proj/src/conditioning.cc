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

#include "augtool/conditioning.h"

#include <algorithm>

#include "augtool/error.h"
#include "augtool/text.h"

namespace augtool {

std::string_view ToString(ConditioningMode mode) {
  return mode == ConditioningMode::kExpand ? "expand" : "prepend";
}

ConditioningMode ParseConditioningMode(std::string_view s) {
  if (s == "prepend") return ConditioningMode::kPrepend;
  if (s == "expand") return ConditioningMode::kExpand;
  throw ConfigError("unknown conditioning mode '" + std::string(s) + "'");
}

void ValidateMarkers(const ArMarkers& markers, const TaskSpec& task) {
  for (const std::string* m : {&markers.sep, &markers.eos}) {
    if (m->empty() || std::any_of(m->begin(), m->end(), IsSpace)) {
      throw ConfigError("AR marker '" + *m + "' must be one non-empty token");
    }
    for (const auto& label : task.labels()) {
      if (label.find(*m) != std::string::npos) {
        throw ConfigError("AR marker '" + *m + "' occurs in label '" +
                          label + "'");
      }
    }
  }
  if (markers.sep == markers.eos) {
    throw ConfigError("AR sep and eos markers must differ");
  }
}

std::string PrependEncode(const LabeledExample& example) {
  ValidateText(example.text);
  return example.label + " " + example.text;
}

StrippedLabel StripLabel(std::string_view generated, const TaskSpec& task) {
  std::string_view rest = generated;
  std::size_t start = 0;
  while (start < rest.size() && IsSpace(rest[start])) ++start;
  std::size_t end = start;
  while (end < rest.size() && !IsSpace(rest[end])) ++end;
  std::string first = ToLower(rest.substr(start, end - start));
  if (first.empty() || !task.HasLabel(first)) {
    return {std::nullopt, std::string(generated)};
  }
  while (end < rest.size() && IsSpace(rest[end])) ++end;
  return {std::move(first), std::string(rest.substr(end))};
}

std::string ArCorpusEncode(const DatasetSplit& train,
                           const ArMarkers& markers) {
  std::string out;
  for (const auto& e : train.examples()) {
    if (!out.empty()) out += ' ';
    out += e.label;
    out += ' ';
    out += markers.sep;
    for (const auto& w : SplitWords(e.text)) {
      out += ' ';
      out += w;
    }
    out += ' ';
    out += markers.eos;
  }
  return out;
}

std::string ArPrompt(std::string_view label, std::string_view source_text,
                     std::size_t k, const ArMarkers& markers) {
  std::string out(label);
  out += ' ';
  out += markers.sep;
  const auto words = SplitWords(source_text);
  const std::size_t j = std::min(k, words.size());
  for (std::size_t i = 0; i < j; ++i) {
    out += ' ';
    out += words[i];
  }
  return out;
}

}  // namespace augtool

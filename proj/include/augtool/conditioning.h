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

#ifndef AUGTOOL_CONDITIONING_H_
#define AUGTOOL_CONDITIONING_H_

#include <optional>
#include <string>
#include <string_view>

#include "augtool/corpus.h"

namespace augtool {

// prepend: the label is plain text in front of the sequence.
// expand: same layout, but the backend adds each label as one new token.
enum class ConditioningMode { kPrepend, kExpand };

std::string_view ToString(ConditioningMode mode);
ConditioningMode ParseConditioningMode(std::string_view s);

struct ArMarkers {
  std::string sep = "SEP";
  std::string eos = "EOS";
};

// Throws ConfigError if sep == eos, a marker is empty or has whitespace, or
// a marker occurs inside any task label.
void ValidateMarkers(const ArMarkers& markers, const TaskSpec& task);

// "<label> <text>".
std::string PrependEncode(const LabeledExample& example);

struct StrippedLabel {
  std::optional<std::string> label;
  std::string text;
};

// If the first whitespace token, lower-cased, is a task label, splits it
// off; otherwise returns the input unchanged with no label.
StrippedLabel StripLabel(std::string_view generated, const TaskSpec& task);

// "y_1 SEP x_1 EOS y_2 SEP x_2 EOS ...", single spaces, split order.
std::string ArCorpusEncode(const DatasetSplit& train,
                           const ArMarkers& markers = {});

// "label SEP w_1 ... w_j" with j = min(k, words in source_text).
std::string ArPrompt(std::string_view label, std::string_view source_text,
                     std::size_t k, const ArMarkers& markers = {});

}  // namespace augtool

#endif  // AUGTOOL_CONDITIONING_H_

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

#ifndef AUGTOOL_CORRUPTION_H_
#define AUGTOOL_CORRUPTION_H_

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "augtool/rng.h"

namespace augtool {

enum class MaskScheme { kWord, kSpan, kMlm };

std::string_view ToString(MaskScheme scheme);
MaskScheme ParseMaskScheme(std::string_view s);

struct MaskPlan {
  MaskScheme scheme = MaskScheme::kWord;
  double rate = 0.40;
  std::string mask_token = "<mask>";

  static MaskPlan Word(std::string mask_token = "<mask>");
  static MaskPlan Span(std::string mask_token = "<mask>");
  // AE default masking rate.
  static MaskPlan Mlm(std::string mask_token = "[MASK]");
};

// Throws ArgumentError unless rate is in (0, 1].
void ValidateMaskPlan(const MaskPlan& plan);

// max(1, round_half_up(rate * m)), clamped to m.
std::size_t MaskCount(double rate, std::size_t m);

struct CorruptionResult {
  std::vector<std::string> corrupted_tokens;
  // Indices into original_tokens, strictly increasing.
  std::vector<std::size_t> masked_positions;
  std::vector<std::string> original_tokens;
};

// Replaces MaskCount(rate, m) distinct positions, chosen uniformly without
// replacement, by the mask token. Throws ArgumentError on empty input.
CorruptionResult MaskWords(std::span<const std::string> tokens,
                           const MaskPlan& plan, Rng& rng);

// Replaces one contiguous span of MaskCount(rate, m) tokens, start uniform
// in [0, m - c], by a single mask token.
CorruptionResult MaskSpan(std::span<const std::string> tokens,
                          const MaskPlan& plan, Rng& rng);

// MaskWords at the AE default rate (plan.rate, 0.15 by default).
CorruptionResult MaskMlm(std::span<const std::string> tokens,
                         const MaskPlan& plan, Rng& rng);

// Dispatches on plan.scheme.
CorruptionResult Corrupt(std::span<const std::string> tokens,
                         const MaskPlan& plan, Rng& rng);

// Corrupts `text_tokens` and prepends `label`; the label is never masked
// and masked_positions index into {label} + text_tokens.
CorruptionResult CorruptConditioned(const std::string& label,
                                    std::span<const std::string> text_tokens,
                                    const MaskPlan& plan, Rng& rng);

// Rebuilds the original sequence from corrupted_tokens and the record of
// masked positions; throws ArgumentError if the record is inconsistent.
std::vector<std::string> Reconstruct(const CorruptionResult& result);

}  // namespace augtool

#endif  // AUGTOOL_CORRUPTION_H_

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

#include "augtool/corruption.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "augtool/error.h"

namespace augtool {

std::string_view ToString(MaskScheme scheme) {
  switch (scheme) {
    case MaskScheme::kWord:
      return "word";
    case MaskScheme::kSpan:
      return "span";
    case MaskScheme::kMlm:
      return "mlm";
  }
  return "word";
}

MaskScheme ParseMaskScheme(std::string_view s) {
  if (s == "word") return MaskScheme::kWord;
  if (s == "span") return MaskScheme::kSpan;
  if (s == "mlm") return MaskScheme::kMlm;
  throw ConfigError("unknown mask scheme '" + std::string(s) + "'");
}

MaskPlan MaskPlan::Word(std::string mask_token) {
  return {MaskScheme::kWord, 0.40, std::move(mask_token)};
}

MaskPlan MaskPlan::Span(std::string mask_token) {
  return {MaskScheme::kSpan, 0.40, std::move(mask_token)};
}

MaskPlan MaskPlan::Mlm(std::string mask_token) {
  return {MaskScheme::kMlm, 0.15, std::move(mask_token)};
}

void ValidateMaskPlan(const MaskPlan& plan) {
  if (!(plan.rate > 0.0 && plan.rate <= 1.0)) {
    throw ArgumentError("mask rate must be in (0, 1]");
  }
  if (plan.mask_token.empty()) throw ArgumentError("empty mask token");
}

std::size_t MaskCount(double rate, std::size_t m) {
  // The epsilon absorbs representation error in rates like 0.15.
  const double scaled = rate * static_cast<double>(m);
  auto c = static_cast<std::size_t>(std::floor(scaled + 0.5 + 1e-9));
  return std::clamp<std::size_t>(c, 1, m);
}

namespace {

void CheckInput(std::span<const std::string> tokens, const MaskPlan& plan) {
  if (tokens.empty()) throw ArgumentError("cannot mask an empty sequence");
  ValidateMaskPlan(plan);
}

std::vector<std::size_t> ChoosePositions(std::size_t m, std::size_t c,
                                         Rng& rng) {
  std::vector<std::size_t> idx(m);
  std::iota(idx.begin(), idx.end(), 0);
  // Partial Fisher-Yates: the first c slots are a uniform c-subset.
  for (std::size_t i = 0; i < c; ++i) {
    std::size_t j = i + rng.Uniform(m - i);
    std::swap(idx[i], idx[j]);
  }
  idx.resize(c);
  std::sort(idx.begin(), idx.end());
  return idx;
}

}  // namespace

CorruptionResult MaskWords(std::span<const std::string> tokens,
                           const MaskPlan& plan, Rng& rng) {
  CheckInput(tokens, plan);
  CorruptionResult r;
  r.original_tokens.assign(tokens.begin(), tokens.end());
  r.corrupted_tokens = r.original_tokens;
  r.masked_positions =
      ChoosePositions(tokens.size(), MaskCount(plan.rate, tokens.size()), rng);
  for (std::size_t p : r.masked_positions) {
    r.corrupted_tokens[p] = plan.mask_token;
  }
  return r;
}

CorruptionResult MaskSpan(std::span<const std::string> tokens,
                          const MaskPlan& plan, Rng& rng) {
  CheckInput(tokens, plan);
  const std::size_t m = tokens.size();
  const std::size_t c = MaskCount(plan.rate, m);
  const std::size_t start = rng.Uniform(m - c + 1);

  CorruptionResult r;
  r.original_tokens.assign(tokens.begin(), tokens.end());
  r.corrupted_tokens.assign(tokens.begin(), tokens.begin() + start);
  r.corrupted_tokens.push_back(plan.mask_token);
  r.corrupted_tokens.insert(r.corrupted_tokens.end(),
                            tokens.begin() + start + c, tokens.end());
  r.masked_positions.resize(c);
  std::iota(r.masked_positions.begin(), r.masked_positions.end(), start);
  return r;
}

CorruptionResult MaskMlm(std::span<const std::string> tokens,
                         const MaskPlan& plan, Rng& rng) {
  return MaskWords(tokens, plan, rng);
}

CorruptionResult Corrupt(std::span<const std::string> tokens,
                         const MaskPlan& plan, Rng& rng) {
  switch (plan.scheme) {
    case MaskScheme::kSpan:
      return MaskSpan(tokens, plan, rng);
    case MaskScheme::kMlm:
      return MaskMlm(tokens, plan, rng);
    case MaskScheme::kWord:
      break;
  }
  return MaskWords(tokens, plan, rng);
}

CorruptionResult CorruptConditioned(const std::string& label,
                                    std::span<const std::string> text_tokens,
                                    const MaskPlan& plan, Rng& rng) {
  CorruptionResult inner = Corrupt(text_tokens, plan, rng);
  CorruptionResult r;
  r.original_tokens.reserve(text_tokens.size() + 1);
  r.original_tokens.push_back(label);
  r.original_tokens.insert(r.original_tokens.end(), text_tokens.begin(),
                           text_tokens.end());
  r.corrupted_tokens.reserve(inner.corrupted_tokens.size() + 1);
  r.corrupted_tokens.push_back(label);
  r.corrupted_tokens.insert(r.corrupted_tokens.end(),
                            inner.corrupted_tokens.begin(),
                            inner.corrupted_tokens.end());
  r.masked_positions.reserve(inner.masked_positions.size());
  for (std::size_t p : inner.masked_positions) {
    r.masked_positions.push_back(p + 1);
  }
  return r;
}

std::vector<std::string> Reconstruct(const CorruptionResult& result) {
  const auto& orig = result.original_tokens;
  const auto& corrupted = result.corrupted_tokens;
  const auto& masked = result.masked_positions;
  if (!std::is_sorted(masked.begin(), masked.end()) ||
      std::adjacent_find(masked.begin(), masked.end()) != masked.end() ||
      (!masked.empty() && masked.back() >= orig.size())) {
    throw ArgumentError("masked positions are not a valid index set");
  }

  const bool span = corrupted.size() != orig.size();
  if (span && (masked.empty() ||
               corrupted.size() + masked.size() != orig.size() + 1 ||
               masked.back() - masked.front() + 1 != masked.size())) {
    throw ArgumentError("corruption record is inconsistent");
  }

  std::vector<std::string> out;
  out.reserve(orig.size());
  std::size_t c = 0;
  std::size_t k = 0;
  for (std::size_t o = 0; o < orig.size(); ++o) {
    if (k < masked.size() && masked[k] == o) {
      out.push_back(orig[o]);
      ++k;
      // A span collapses into one corrupted token at its last position.
      if (!span || k == masked.size()) ++c;
      continue;
    }
    if (c >= corrupted.size() || corrupted[c] != orig[o]) {
      throw ArgumentError("unmasked token differs from original");
    }
    out.push_back(corrupted[c++]);
  }
  return out;
}

}  // namespace augtool

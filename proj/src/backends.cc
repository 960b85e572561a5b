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

#include "augtool/backends.h"

#include <algorithm>
#include <set>

#include "augtool/error.h"
#include "augtool/text.h"

namespace augtool {

using nlohmann::json;

namespace {

constexpr std::pair<Method, std::string_view> kMethodNames[] = {
    {Method::kAePrepend, "ae_prepend"},
    {Method::kAeExpand, "ae_expand"},
    {Method::kAr, "ar"},
    {Method::kArContext, "ar_context"},
    {Method::kS2sWord, "s2s_word"},
    {Method::kS2sSpan, "s2s_span"},
    {Method::kEda, "eda"},
    {Method::kBacktranslation, "backtranslation"},
    {Method::kMock, "mock"},
};

std::string NormalizeSpaces(std::string_view text) {
  return JoinWords(SplitWords(text));
}

}  // namespace

std::string_view ToString(Method method) {
  for (const auto& [m, name] : kMethodNames) {
    if (m == method) return name;
  }
  return "unknown";
}

Method ParseMethod(std::string_view s) {
  for (const auto& [m, name] : kMethodNames) {
    if (name == s) return m;
  }
  throw ConfigError("unknown method '" + std::string(s) + "'");
}

bool NeedsModel(Method method) {
  return method != Method::kEda && method != Method::kBacktranslation &&
         method != Method::kMock;
}

bool IsAr(Method method) {
  return method == Method::kAr || method == Method::kArContext;
}

std::string_view ToString(DecodeStrategy strategy) {
  switch (strategy) {
    case DecodeStrategy::kNucleus:
      return "nucleus";
    case DecodeStrategy::kBeam:
      return "beam";
    case DecodeStrategy::kDeterministic:
      return "deterministic";
  }
  return "nucleus";
}

DecodeStrategy ParseDecodeStrategy(std::string_view s) {
  if (s == "nucleus") return DecodeStrategy::kNucleus;
  if (s == "beam") return DecodeStrategy::kBeam;
  if (s == "deterministic") return DecodeStrategy::kDeterministic;
  throw ConfigError("unknown decode strategy '" + std::string(s) + "'");
}

BackendConfig BackendConfig::Defaults(Method method) {
  BackendConfig c;
  c.method = method;
  switch (method) {
    case Method::kAePrepend:
      c.mask_plan = MaskPlan::Mlm();
      c.decode.strategy = DecodeStrategy::kDeterministic;
      c.tune = {10, 4e-5, 0.0, "dev_loss"};
      break;
    case Method::kAeExpand:
      c.conditioning = ConditioningMode::kExpand;
      c.mask_plan = MaskPlan::Mlm();
      c.decode.strategy = DecodeStrategy::kDeterministic;
      c.tune = {150, 1.5e-4, 0.0, "dev_loss"};
      break;
    case Method::kAr:
    case Method::kArContext:
      c.markers = ArMarkers{};
      c.k_context = method == Method::kArContext ? 3 : 0;
      c.decode = {DecodeStrategy::kNucleus, 0.9, 0, 5};
      c.tune = {1, 5e-5, 0.0, "dev_loss"};
      break;
    case Method::kS2sWord:
    case Method::kS2sSpan:
      c.mask_plan = method == Method::kS2sWord ? MaskPlan::Word()
                                               : MaskPlan::Span();
      c.decode = {DecodeStrategy::kBeam, 0.9, 0, 5};
      c.tune = {10, 1e-5, 0.1, "dev_loss"};
      break;
    case Method::kEda:
    case Method::kBacktranslation:
    case Method::kMock:
      c.decode.strategy = DecodeStrategy::kDeterministic;
      break;
  }
  return c;
}

void ValidateBackendConfig(const BackendConfig& c) {
  const std::string name(ToString(c.method));
  if (c.method == Method::kS2sWord || c.method == Method::kS2sSpan) {
    if (!c.mask_plan) throw ConfigError(name + " requires a mask_plan");
    const MaskScheme want = c.method == Method::kS2sWord ? MaskScheme::kWord
                                                         : MaskScheme::kSpan;
    if (c.mask_plan->scheme != want) {
      throw ConfigError(name + " requires mask scheme '" +
                        std::string(ToString(want)) + "'");
    }
  }
  if (IsAr(c.method) && !c.markers) {
    throw ConfigError(name + " requires AR markers");
  }
  if (c.mask_plan) {
    try {
      ValidateMaskPlan(*c.mask_plan);
    } catch (const ArgumentError& e) {
      throw ConfigError(e.what());
    }
  }
  if (c.decode.strategy == DecodeStrategy::kNucleus &&
      !(c.decode.top_p > 0.0 && c.decode.top_p <= 1.0)) {
    throw ConfigError("top_p must be in (0, 1]");
  }
  if (c.decode.strategy == DecodeStrategy::kBeam && c.decode.beam_size < 1) {
    throw ConfigError("beam_size must be >= 1");
  }
  if (c.decode.top_k < 0) throw ConfigError("top_k must be >= 0");
  if (c.tune.epochs < 1 || !(c.tune.learning_rate > 0.0)) {
    throw ConfigError("tune epochs and learning_rate must be positive");
  }
  if (c.tune.label_smoothing < 0.0 || c.tune.label_smoothing >= 1.0) {
    throw ConfigError("label_smoothing must be in [0, 1)");
  }
  if (c.max_length < 1) throw ConfigError("max_length must be >= 1");
  if (c.retries < 0) throw ConfigError("retries must be >= 0");
}

json ToJson(const DecodeConfig& d) {
  return {{"strategy", ToString(d.strategy)},
          {"top_p", d.top_p},
          {"top_k", d.top_k},
          {"beam_size", d.beam_size}};
}

json ToJson(const BackendConfig& c) {
  json j;
  j["method"] = ToString(c.method);
  j["conditioning"] = ToString(c.conditioning);
  if (c.mask_plan) {
    j["mask_plan"] = {{"scheme", ToString(c.mask_plan->scheme)},
                      {"rate", c.mask_plan->rate},
                      {"mask_token", c.mask_plan->mask_token}};
  } else {
    j["mask_plan"] = nullptr;
  }
  j["k_context"] = c.k_context;
  if (c.markers) {
    j["markers"] = {{"sep", c.markers->sep}, {"eos", c.markers->eos}};
  } else {
    j["markers"] = nullptr;
  }
  j["decode"] = ToJson(c.decode);
  j["tune"] = {{"epochs", c.tune.epochs},
               {"learning_rate", c.tune.learning_rate},
               {"label_smoothing", c.tune.label_smoothing},
               {"selection", c.tune.selection}};
  j["max_length"] = c.max_length;
  j["retries"] = c.retries;
  j["backend_cmd"] = c.backend_cmd;
  return j;
}

BackendConfig BackendConfigFromJson(const json& j) {
  try {
    BackendConfig c =
        BackendConfig::Defaults(ParseMethod(j.at("method").get<std::string>()));
    if (j.contains("conditioning")) {
      c.conditioning =
          ParseConditioningMode(j["conditioning"].get<std::string>());
    }
    if (j.contains("mask_plan")) {
      const json& mp = j["mask_plan"];
      if (mp.is_null()) {
        c.mask_plan.reset();
      } else {
        MaskPlan plan = c.mask_plan.value_or(MaskPlan{});
        if (mp.contains("scheme")) {
          plan.scheme = ParseMaskScheme(mp["scheme"].get<std::string>());
        }
        plan.rate = mp.value("rate", plan.rate);
        plan.mask_token = mp.value("mask_token", plan.mask_token);
        c.mask_plan = plan;
      }
    }
    c.k_context = j.value("k_context", c.k_context);
    if (j.contains("markers")) {
      const json& mk = j["markers"];
      if (mk.is_null()) {
        c.markers.reset();
      } else {
        ArMarkers markers = c.markers.value_or(ArMarkers{});
        markers.sep = mk.value("sep", markers.sep);
        markers.eos = mk.value("eos", markers.eos);
        c.markers = markers;
      }
    }
    if (j.contains("decode")) {
      const json& d = j["decode"];
      if (d.contains("strategy")) {
        c.decode.strategy =
            ParseDecodeStrategy(d["strategy"].get<std::string>());
      }
      c.decode.top_p = d.value("top_p", c.decode.top_p);
      c.decode.top_k = d.value("top_k", c.decode.top_k);
      c.decode.beam_size = d.value("beam_size", c.decode.beam_size);
    }
    if (j.contains("tune")) {
      const json& t = j["tune"];
      c.tune.epochs = t.value("epochs", c.tune.epochs);
      c.tune.learning_rate = t.value("learning_rate", c.tune.learning_rate);
      c.tune.label_smoothing =
          t.value("label_smoothing", c.tune.label_smoothing);
      c.tune.selection = t.value("selection", c.tune.selection);
    }
    c.max_length = j.value("max_length", c.max_length);
    c.retries = j.value("retries", c.retries);
    c.backend_cmd = j.value("backend_cmd", c.backend_cmd);
    ValidateBackendConfig(c);
    return c;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("backend config: ") + e.what());
  }
}

json ToJson(const GenerationRecord& r) {
  json j;
  j["source_id"] = r.source_id;
  j["method"] = r.method;
  j["label_assigned"] = r.label_assigned;
  j["text"] = r.text;
  j["raw_output"] = r.raw_output;
  j["label_emitted"] = r.label_emitted ? json(*r.label_emitted) : json(nullptr);
  j["label_match"] = r.label_match;
  j["seed"] = r.seed;
  return j;
}

GenerationRecord GenerationRecordFromJson(const json& j) {
  GenerationRecord r;
  r.source_id = j.at("source_id").get<std::string>();
  r.method = j.at("method").get<std::string>();
  r.label_assigned = j.at("label_assigned").get<std::string>();
  r.text = j.at("text").get<std::string>();
  r.raw_output = j.at("raw_output").get<std::string>();
  if (!j.at("label_emitted").is_null()) {
    r.label_emitted = j["label_emitted"].get<std::string>();
  }
  r.label_match = j.at("label_match").get<bool>();
  r.seed = j.at("seed").get<std::uint64_t>();
  return r;
}

GenerationRecord MakeRecord(const LabeledExample& source, std::string method,
                            std::string raw_output, StrippedLabel stripped,
                            std::uint64_t seed) {
  GenerationRecord r;
  r.source_id = source.id;
  r.method = std::move(method);
  r.label_assigned = source.label;
  r.text = NormalizeSpaces(stripped.text);
  r.raw_output = std::move(raw_output);
  r.label_emitted = std::move(stripped.label);
  r.label_match = r.label_emitted && *r.label_emitted == r.label_assigned;
  r.seed = seed;
  if (r.text.empty()) {
    throw GenerationError(r.method + " produced empty text for example '" +
                          source.id + "'");
  }
  return r;
}

void FineTune(GeneratorBackend& backend, const TaskSpec& task,
              const DatasetSplit& train, const DatasetSplit& dev) {
  if (train.task() != task || dev.task() != task) {
    throw ArgumentError("fine-tuning splits do not share the backend task");
  }
  backend.FineTune(train, dev);
}

// ---------------------------------------------------------------------------
// Mock

Lexicon DefaultMockLexicon(const TaskSpec& task) {
  Lexicon lex;
  for (const auto& label : task.labels()) {
    auto& words = lex[label];
    for (int i = 0; i < 8; ++i) {
      words.push_back(label + "_lex" + std::to_string(i));
    }
  }
  return lex;
}

std::string MockSynthesize(const LabeledExample& example, std::uint64_t seed,
                           std::span<const std::string> vocabulary) {
  if (vocabulary.empty()) throw ArgumentError("mock vocabulary is empty");
  auto words = SplitWords(example.text);
  if (words.empty()) throw ArgumentError("mock input text is empty");
  Rng rng(seed);
  const std::size_t pos = rng.Uniform(words.size());
  std::size_t pick = rng.Uniform(vocabulary.size());
  if (vocabulary[pick] == words[pos] && vocabulary.size() > 1) {
    pick = (pick + 1) % vocabulary.size();
  }
  words[pos] = vocabulary[pick];
  return JoinWords(words);
}

MockBackend::MockBackend(TaskSpec task, Lexicon lexicon, bool adversarial)
    : task_(std::move(task)),
      lexicon_(lexicon.empty() ? DefaultMockLexicon(task_)
                               : std::move(lexicon)),
      adversarial_(adversarial) {
  std::map<std::string, std::string> owner;
  for (const auto& label : task_.labels()) {
    auto it = lexicon_.find(label);
    if (it == lexicon_.end() || it->second.empty()) {
      throw ConfigError("mock lexicon has no words for label '" + label + "'");
    }
    for (const auto& w : it->second) {
      if (w.empty() || std::any_of(w.begin(), w.end(), IsSpace)) {
        throw ConfigError("mock lexicon word '" + w + "' is not one token");
      }
      auto [pos, inserted] = owner.emplace(w, label);
      if (!inserted && pos->second != label) {
        throw ConfigError("mock lexicon word '" + w +
                          "' is shared by two labels");
      }
    }
  }
}

GenerationRecord MockBackend::Synthesize(const LabeledExample& example,
                                         std::uint64_t seed) {
  int idx = task_.IndexOf(example.label);
  if (idx < 0) throw ArgumentError("label '" + example.label + "' not in task");
  if (adversarial_) {
    idx = (idx + 1) % static_cast<int>(task_.labels().size());
  }
  const std::string& emitted = task_.labels()[static_cast<std::size_t>(idx)];
  std::string text = MockSynthesize(example, seed, lexicon_.at(emitted));
  std::string raw = emitted + " " + text;
  return MakeRecord(example, "mock", std::move(raw), {emitted, std::move(text)},
                    seed);
}

// ---------------------------------------------------------------------------
// EDA

std::vector<std::string> EdaSwap(std::vector<std::string> words,
                                 std::size_t i, std::size_t j) {
  if (i >= words.size() || j >= words.size()) {
    throw ArgumentError("swap position out of range");
  }
  std::swap(words[i], words[j]);
  return words;
}

std::vector<std::string> EdaDelete(std::vector<std::string> words,
                                   std::size_t i) {
  if (i >= words.size()) throw ArgumentError("delete position out of range");
  if (words.size() > 1) words.erase(words.begin() + static_cast<long>(i));
  return words;
}

std::vector<std::string> EdaInsertDuplicate(std::vector<std::string> words,
                                            std::size_t source,
                                            std::size_t at) {
  if (source >= words.size() || at > words.size()) {
    throw ArgumentError("insert position out of range");
  }
  std::string copy = words[source];
  words.insert(words.begin() + static_cast<long>(at), std::move(copy));
  return words;
}

std::vector<std::string> EdaReplace(std::vector<std::string> words,
                                    std::size_t i, std::string replacement) {
  if (i >= words.size()) throw ArgumentError("replace position out of range");
  words[i] = std::move(replacement);
  return words;
}

std::string EdaApply(std::string_view text, EdaOp op, Rng& rng,
                     const SynonymMap* lexicon) {
  auto words = SplitWords(text);
  if (words.empty()) throw ArgumentError("EDA input text is empty");
  const std::size_t m = words.size();
  switch (op) {
    case EdaOp::kSwap:
      if (m >= 2) {
        const std::size_t i = rng.Uniform(m);
        std::size_t j = rng.Uniform(m - 1);
        if (j >= i) ++j;
        words = EdaSwap(std::move(words), i, j);
      }
      break;
    case EdaOp::kDelete:
      words = EdaDelete(std::move(words), rng.Uniform(m));
      break;
    case EdaOp::kInsert: {
      const std::size_t source = rng.Uniform(m);
      const std::size_t at = rng.Uniform(m + 1);
      words = EdaInsertDuplicate(std::move(words), source, at);
      break;
    }
    case EdaOp::kSynonym: {
      if (!lexicon) break;
      std::vector<std::size_t> candidates;
      for (std::size_t i = 0; i < m; ++i) {
        auto it = lexicon->find(ToLower(words[i]));
        if (it != lexicon->end() && !it->second.empty()) {
          candidates.push_back(i);
        }
      }
      if (candidates.empty()) break;
      const std::size_t pos = candidates[rng.Uniform(candidates.size())];
      const auto& synonyms = lexicon->at(ToLower(words[pos]));
      words = EdaReplace(std::move(words), pos,
                         synonyms[rng.Uniform(synonyms.size())]);
      break;
    }
  }
  return JoinWords(words);
}

std::string EdaPerturb(std::string_view text, Rng& rng,
                       const SynonymMap* lexicon) {
  static constexpr EdaOp kWithLexicon[] = {EdaOp::kSynonym, EdaOp::kSwap,
                                           EdaOp::kDelete, EdaOp::kInsert};
  static constexpr EdaOp kWithout[] = {EdaOp::kSwap, EdaOp::kDelete,
                                       EdaOp::kInsert};
  const bool has_lexicon = lexicon && !lexicon->empty();
  const EdaOp op = has_lexicon ? kWithLexicon[rng.Uniform(4)]
                               : kWithout[rng.Uniform(3)];
  return EdaApply(text, op, rng, has_lexicon ? lexicon : nullptr);
}

EdaBackend::EdaBackend(std::optional<SynonymMap> lexicon)
    : lexicon_(std::move(lexicon)) {}

GenerationRecord EdaBackend::Synthesize(const LabeledExample& example,
                                        std::uint64_t seed) {
  Rng rng(seed);
  std::string text =
      EdaPerturb(example.text, rng, lexicon_ ? &*lexicon_ : nullptr);
  return MakeRecord(example, "eda", text, {std::nullopt, text}, seed);
}

// ---------------------------------------------------------------------------
// Backtranslation

std::string Backtranslate(const std::string& text, const Translator& fwd,
                          const Translator& bwd) {
  auto run = [](const Translator& t, const std::string& in,
                std::string_view stage) {
    if (!t) {
      throw BackendError("backtranslation " + std::string(stage) +
                         " translator is missing");
    }
    try {
      return t(in);
    } catch (const std::exception& e) {
      throw BackendError("backtranslation " + std::string(stage) +
                         " failed: " + e.what());
    }
  };
  return run(bwd, run(fwd, text, "fwd"), "bwd");
}

BacktranslationBackend::BacktranslationBackend(Translator fwd, Translator bwd)
    : fwd_(std::move(fwd)), bwd_(std::move(bwd)) {
  if (!fwd_ || !bwd_) {
    throw BackendError("backtranslation needs both translators");
  }
}

GenerationRecord BacktranslationBackend::Synthesize(
    const LabeledExample& example, std::uint64_t seed) {
  std::string text = Backtranslate(example.text, fwd_, bwd_);
  return MakeRecord(example, "backtranslation", text, {std::nullopt, text},
                    seed);
}

namespace {

Translator ChannelTranslator(std::shared_ptr<StdioJsonChannel> channel,
                             std::string direction) {
  return [channel = std::move(channel),
          direction = std::move(direction)](const std::string& text) {
    json reply = channel->Request(
        {{"op", "translate"}, {"direction", direction}, {"text", text}});
    if (!reply.contains("text") || !reply["text"].is_string()) {
      throw BackendError("translator reply has no text");
    }
    return reply["text"].get<std::string>();
  };
}

}  // namespace

Translator MakeProcessTranslator(std::string command, std::string direction) {
  return ChannelTranslator(
      std::make_shared<StdioJsonChannel>(std::move(command)),
      std::move(direction));
}

// ---------------------------------------------------------------------------
// Model adapters

FunctionAdapter::FunctionAdapter(TuneFn tune, GenerateFn generate)
    : tune_(std::move(tune)), generate_(std::move(generate)) {}

void FunctionAdapter::FineTune(const DatasetSplit& train,
                               const DatasetSplit& dev, const json& config) {
  if (tune_) tune_(train, dev, config);
}

std::string FunctionAdapter::Generate(const std::string& input,
                                      const DecodeConfig& decode,
                                      std::uint64_t seed) {
  if (!generate_) throw BackendError("function adapter has no generator");
  return generate_(input, decode, seed);
}

std::unique_ptr<ModelAdapter> MakeEchoFillAdapter(std::string mask_token,
                                                  std::string filler,
                                                  std::string eos) {
  return std::make_unique<FunctionAdapter>(
      nullptr, [mask_token = std::move(mask_token), filler = std::move(filler),
                eos = std::move(eos)](const std::string& input,
                                      const DecodeConfig&, std::uint64_t) {
        auto words = SplitWords(input);
        for (auto& w : words) {
          if (w == mask_token) w = filler;
        }
        if (!eos.empty()) words.push_back(eos);
        return JoinWords(words);
      });
}

json ExamplesToJson(const DatasetSplit& split) {
  json arr = json::array();
  for (const auto& e : split.examples()) {
    arr.push_back({{"label", e.label}, {"text", e.text}});
  }
  return arr;
}

ExternalProcessAdapter::ExternalProcessAdapter(std::string command)
    : channel_(std::move(command)) {}

void ExternalProcessAdapter::FineTune(const DatasetSplit& train,
                                      const DatasetSplit& dev,
                                      const json& config) {
  channel_.Request({{"op", "fine_tune"},
                    {"train", ExamplesToJson(train)},
                    {"dev", ExamplesToJson(dev)},
                    {"config", config}});
}

std::string ExternalProcessAdapter::Generate(const std::string& input,
                                             const DecodeConfig& decode,
                                             std::uint64_t seed) {
  json reply = channel_.Request({{"op", "synthesize"},
                                 {"input", input},
                                 {"decode", ToJson(decode)},
                                 {"seed", seed}});
  if (!reply.contains("text") || !reply["text"].is_string()) {
    throw BackendError("backend '" + channel_.command() +
                       "' answered op 'synthesize' without text");
  }
  return reply["text"].get<std::string>();
}

// ---------------------------------------------------------------------------
// Pre-trained backend

PretrainedBackend::PretrainedBackend(TaskSpec task, BackendConfig config,
                                     std::unique_ptr<ModelAdapter> adapter)
    : task_(std::move(task)),
      config_(std::move(config)),
      markers_(config_.markers.value_or(ArMarkers{})),
      adapter_(std::move(adapter)) {
  if (!NeedsModel(config_.method)) {
    throw ConfigError("method '" + std::string(ToString(config_.method)) +
                      "' does not use a model adapter");
  }
  if (!adapter_) throw BackendError("no model adapter given");
  ValidateBackendConfig(config_);
  plan_ = config_.mask_plan.value_or(MaskPlan::Mlm());
  if (IsAr(config_.method)) ValidateMarkers(markers_, task_);
}

json PretrainedBackend::TuneMessageConfig() const {
  json j = ToJson(config_);
  j.erase("backend_cmd");
  j["labels"] = task_.labels();
  j["new_tokens"] = config_.conditioning == ConditioningMode::kExpand
                        ? json(task_.labels())
                        : json::array();
  return j;
}

void PretrainedBackend::FineTune(const DatasetSplit& train,
                                 const DatasetSplit& dev) {
  json config = TuneMessageConfig();
  if (IsAr(config_.method)) {
    config["train_stream"] = ArCorpusEncode(train, markers_);
    config["dev_stream"] = ArCorpusEncode(dev, markers_);
  } else {
    json encoded = json::array();
    for (const auto& e : train.examples()) encoded.push_back(PrependEncode(e));
    config["train_encoded"] = std::move(encoded);
  }
  adapter_->FineTune(train, dev, config);
  tuned_ = true;
}

std::string PretrainedBackend::BuildInput(const LabeledExample& example,
                                          Rng& rng) const {
  if (IsAr(config_.method)) {
    return ArPrompt(example.label, example.text, config_.k_context, markers_);
  }
  const auto words = SplitWords(example.text);
  return JoinWords(
      CorruptConditioned(example.label, words, plan_, rng).corrupted_tokens);
}

StrippedLabel PretrainedBackend::ParseOutput(std::string_view raw) const {
  if (!IsAr(config_.method)) return StripLabel(raw, task_);

  const auto words = SplitWords(raw);
  StrippedLabel out;
  std::size_t i = 0;
  if (i < words.size() && task_.HasLabel(ToLower(words[i]))) {
    out.label = ToLower(words[i]);
    ++i;
  }
  if (i < words.size() && words[i] == markers_.sep) ++i;
  std::vector<std::string> kept;
  for (; i < words.size() && kept.size() < config_.max_length; ++i) {
    if (words[i] == markers_.eos) break;
    kept.push_back(words[i]);
  }
  out.text = JoinWords(kept);
  return out;
}

GenerationRecord PretrainedBackend::Synthesize(const LabeledExample& example,
                                               std::uint64_t seed) {
  if (!tuned_) {
    throw BackendError("backend '" + std::string(method()) +
                       "' used before fine-tuning");
  }
  Rng rng(seed);
  const std::string input = BuildInput(example, rng);
  std::string raw = adapter_->Generate(input, config_.decode, seed);
  StrippedLabel stripped = ParseOutput(raw);
  return MakeRecord(example, std::string(method()), std::move(raw),
                    std::move(stripped), seed);
}

std::unique_ptr<GeneratorBackend> MakeBackend(const BackendConfig& config,
                                              const TaskSpec& task,
                                              const BackendResources& res) {
  ValidateBackendConfig(config);
  switch (config.method) {
    case Method::kMock:
      return std::make_unique<MockBackend>(task, res.mock_lexicon,
                                           res.mock_adversarial);
    case Method::kEda:
      return std::make_unique<EdaBackend>(res.eda_lexicon);
    case Method::kBacktranslation: {
      if (res.translate_fwd && res.translate_bwd) {
        return std::make_unique<BacktranslationBackend>(res.translate_fwd,
                                                        res.translate_bwd);
      }
      if (config.backend_cmd.empty()) {
        throw BackendError(
            "backtranslation requires translators or backend_cmd");
      }
      auto channel = std::make_shared<StdioJsonChannel>(config.backend_cmd);
      return std::make_unique<BacktranslationBackend>(
          ChannelTranslator(channel, "fwd"), ChannelTranslator(channel, "bwd"));
    }
    default:
      break;
  }
  std::unique_ptr<ModelAdapter> adapter;
  if (res.adapter_factory) {
    adapter = res.adapter_factory();
  } else if (!config.backend_cmd.empty()) {
    adapter = std::make_unique<ExternalProcessAdapter>(config.backend_cmd);
  } else {
    throw BackendError("method '" + std::string(ToString(config.method)) +
                       "' requires an external generator (backend_cmd)");
  }
  return std::make_unique<PretrainedBackend>(task, config, std::move(adapter));
}

}  // namespace augtool

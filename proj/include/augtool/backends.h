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

#ifndef AUGTOOL_BACKENDS_H_
#define AUGTOOL_BACKENDS_H_

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "augtool/conditioning.h"
#include "augtool/corpus.h"
#include "augtool/corruption.h"
#include "augtool/rng.h"
#include "augtool/stdio_channel.h"
#include "json.hpp"

namespace augtool {

enum class Method {
  kAePrepend,
  kAeExpand,
  kAr,
  kArContext,
  kS2sWord,
  kS2sSpan,
  kEda,
  kBacktranslation,
  kMock,
};

std::string_view ToString(Method method);
Method ParseMethod(std::string_view s);
// AE, AR and seq2seq methods need a model adapter.
bool NeedsModel(Method method);
bool IsAr(Method method);

enum class DecodeStrategy { kNucleus, kBeam, kDeterministic };

std::string_view ToString(DecodeStrategy strategy);
DecodeStrategy ParseDecodeStrategy(std::string_view s);

struct DecodeConfig {
  DecodeStrategy strategy = DecodeStrategy::kNucleus;
  double top_p = 0.9;
  int top_k = 0;
  int beam_size = 5;
};

struct TuneConfig {
  int epochs = 10;
  double learning_rate = 4e-5;
  double label_smoothing = 0.0;
  std::string selection = "dev_loss";
};

struct BackendConfig {
  Method method = Method::kMock;
  ConditioningMode conditioning = ConditioningMode::kPrepend;
  std::optional<MaskPlan> mask_plan;
  std::size_t k_context = 0;
  std::optional<ArMarkers> markers;
  DecodeConfig decode;
  TuneConfig tune;
  // AR output is cut at EOS, or at this many words when EOS never comes.
  std::size_t max_length = 64;
  // Attempts per record after the first before it is dropped.
  int retries = 3;
  std::string backend_cmd;

  // Per-method defaults:
  //   ae_prepend  10 epochs, lr 4e-5, MLM masking 0.15
  //   ae_expand   150 epochs, lr 1.5e-4, labels added as tokens
  //   ar          nucleus top_p 0.9 top_k 0, k_context 0
  //   ar_context  as ar with k_context 3
  //   s2s_*       40% word/span masking, lr 1e-5, smoothing 0.1, beam 5
  static BackendConfig Defaults(Method method);
};

// Throws ConfigError on a broken combination (e.g. s2s without a mask plan).
void ValidateBackendConfig(const BackendConfig& config);

nlohmann::json ToJson(const DecodeConfig& decode);
nlohmann::json ToJson(const BackendConfig& config);
BackendConfig BackendConfigFromJson(const nlohmann::json& j);

// One synthetic example with provenance.
struct GenerationRecord {
  std::string source_id;
  std::string method;
  std::string label_assigned;
  std::string text;
  std::string raw_output;
  std::optional<std::string> label_emitted;
  bool label_match = false;
  std::uint64_t seed = 0;

  friend bool operator==(const GenerationRecord&,
                         const GenerationRecord&) = default;
};

nlohmann::json ToJson(const GenerationRecord& record);
GenerationRecord GenerationRecordFromJson(const nlohmann::json& j);

// Fills label_match from label_emitted and label_assigned.
GenerationRecord MakeRecord(const LabeledExample& source, std::string method,
                            std::string raw_output, StrippedLabel stripped,
                            std::uint64_t seed);

class GeneratorBackend {
 public:
  virtual ~GeneratorBackend() = default;

  virtual std::string_view method() const = 0;

  // Tune-free backends return immediately.
  virtual void FineTune(const DatasetSplit& train, const DatasetSplit& dev) = 0;
  virtual bool tuned() const = 0;

  // Throws GenerationError when the backend produced no text.
  virtual GenerationRecord Synthesize(const LabeledExample& example,
                                      std::uint64_t seed) = 0;

  // True when Synthesize may be called from several threads at once.
  virtual bool shareable() const { return false; }
};

// Checks that both splits share the backend's task, then tunes.
void FineTune(GeneratorBackend& backend, const TaskSpec& task,
              const DatasetSplit& train, const DatasetSplit& dev);

// ---------------------------------------------------------------------------
// Mock backend

using Lexicon = std::map<std::string, std::vector<std::string>>;

// Eight words per label, "<label>_lex<i>". Label-disjoint by construction.
Lexicon DefaultMockLexicon(const TaskSpec& task);

// Source text with one seed-selected word replaced by a seed-selected word
// of `vocabulary`. Exactly one word changes whenever the vocabulary offers
// a word different from the one replaced.
std::string MockSynthesize(const LabeledExample& example, std::uint64_t seed,
                           std::span<const std::string> vocabulary);

// Deterministic stand-in for a tuned generator. Emits "<label> <text>".
// The adversarial variant draws vocabulary from (and emits) the next label
// in task order instead of the source label.
class MockBackend : public GeneratorBackend {
 public:
  explicit MockBackend(TaskSpec task, Lexicon lexicon = {},
                       bool adversarial = false);

  std::string_view method() const override { return "mock"; }
  void FineTune(const DatasetSplit&, const DatasetSplit&) override {}
  bool tuned() const override { return true; }
  GenerationRecord Synthesize(const LabeledExample& example,
                              std::uint64_t seed) override;
  bool shareable() const override { return true; }

  const Lexicon& lexicon() const { return lexicon_; }

 private:
  TaskSpec task_;
  Lexicon lexicon_;
  bool adversarial_;
};

// ---------------------------------------------------------------------------
// EDA

using SynonymMap = std::map<std::string, std::vector<std::string>>;

enum class EdaOp { kSynonym, kSwap, kDelete, kInsert };

std::vector<std::string> EdaSwap(std::vector<std::string> words,
                                 std::size_t i, std::size_t j);
// Never removes the last remaining word.
std::vector<std::string> EdaDelete(std::vector<std::string> words,
                                   std::size_t i);
// Inserts a copy of words[source] before position `at` (at <= size).
std::vector<std::string> EdaInsertDuplicate(std::vector<std::string> words,
                                            std::size_t source,
                                            std::size_t at);
std::vector<std::string> EdaReplace(std::vector<std::string> words,
                                    std::size_t i, std::string replacement);

// Applies `op` at rng-chosen positions. Synonym replacement without a
// usable lexicon entry leaves the text unchanged.
std::string EdaApply(std::string_view text, EdaOp op, Rng& rng,
                     const SynonymMap* lexicon = nullptr);

// One operation chosen uniformly from {synonym (only with a lexicon), swap,
// deletion, duplicate insertion}. Output is never empty.
std::string EdaPerturb(std::string_view text, Rng& rng,
                       const SynonymMap* lexicon = nullptr);

class EdaBackend : public GeneratorBackend {
 public:
  explicit EdaBackend(std::optional<SynonymMap> lexicon = std::nullopt);

  std::string_view method() const override { return "eda"; }
  void FineTune(const DatasetSplit&, const DatasetSplit&) override {}
  bool tuned() const override { return true; }
  GenerationRecord Synthesize(const LabeledExample& example,
                              std::uint64_t seed) override;
  bool shareable() const override { return true; }

 private:
  std::optional<SynonymMap> lexicon_;
};

// ---------------------------------------------------------------------------
// Backtranslation

using Translator = std::function<std::string(const std::string&)>;

// bwd(fwd(text)). Translator failures become BackendError tagged with the
// stage ("fwd" or "bwd").
std::string Backtranslate(const std::string& text, const Translator& fwd,
                          const Translator& bwd);

class BacktranslationBackend : public GeneratorBackend {
 public:
  BacktranslationBackend(Translator fwd, Translator bwd);

  std::string_view method() const override { return "backtranslation"; }
  void FineTune(const DatasetSplit&, const DatasetSplit&) override {}
  bool tuned() const override { return true; }
  GenerationRecord Synthesize(const LabeledExample& example,
                              std::uint64_t seed) override;

 private:
  Translator fwd_;
  Translator bwd_;
};

// Translator backed by an external process answering
// {"op":"translate","direction":"fwd"|"bwd","text":..} with
// {"ok":true,"text":..}.
Translator MakeProcessTranslator(std::string command,
                                 std::string direction = "fwd");

// ---------------------------------------------------------------------------
// Pre-trained model adapters

// What a pre-trained generator must provide. `config` is ToJson of the
// backend config plus the fields the conditioning mode adds.
class ModelAdapter {
 public:
  virtual ~ModelAdapter() = default;
  virtual void FineTune(const DatasetSplit& train, const DatasetSplit& dev,
                        const nlohmann::json& config) = 0;
  // Returns the full output sequence, any prompt included.
  virtual std::string Generate(const std::string& input,
                               const DecodeConfig& decode,
                               std::uint64_t seed) = 0;
};

// In-process adapter over plain callables.
class FunctionAdapter : public ModelAdapter {
 public:
  using TuneFn = std::function<void(const DatasetSplit&, const DatasetSplit&,
                                    const nlohmann::json&)>;
  using GenerateFn = std::function<std::string(
      const std::string&, const DecodeConfig&, std::uint64_t)>;

  FunctionAdapter(TuneFn tune, GenerateFn generate);
  void FineTune(const DatasetSplit& train, const DatasetSplit& dev,
                const nlohmann::json& config) override;
  std::string Generate(const std::string& input, const DecodeConfig& decode,
                       std::uint64_t seed) override;

 private:
  TuneFn tune_;
  GenerateFn generate_;
};

// Deterministic test decoder: replaces every mask token with `filler` and
// appends `eos` when one is given. Unmasked words pass through.
std::unique_ptr<ModelAdapter> MakeEchoFillAdapter(std::string mask_token,
                                                  std::string filler = "filled",
                                                  std::string eos = "");

// Adapter speaking the stdio JSON protocol:
//   {"op":"fine_tune","train":[{"label","text"}..],"dev":[..],"config":{..}}
//   {"op":"synthesize","input":"..","decode":{..},"seed":N} -> {"text":..}
class ExternalProcessAdapter : public ModelAdapter {
 public:
  explicit ExternalProcessAdapter(std::string command);
  void FineTune(const DatasetSplit& train, const DatasetSplit& dev,
                const nlohmann::json& config) override;
  std::string Generate(const std::string& input, const DecodeConfig& decode,
                       std::uint64_t seed) override;

 private:
  StdioJsonChannel channel_;
};

nlohmann::json ExamplesToJson(const DatasetSplit& split);

// AE / AR / seq2seq generator behind a ModelAdapter. Builds the
// method-specific input (masked label-prepended sequence, or AR prompt),
// then strips the label from the output.
class PretrainedBackend : public GeneratorBackend {
 public:
  PretrainedBackend(TaskSpec task, BackendConfig config,
                    std::unique_ptr<ModelAdapter> adapter);

  std::string_view method() const override { return ToString(config_.method); }
  void FineTune(const DatasetSplit& train, const DatasetSplit& dev) override;
  bool tuned() const override { return tuned_; }
  GenerationRecord Synthesize(const LabeledExample& example,
                              std::uint64_t seed) override;

  // The exact string the adapter receives for `example`.
  std::string BuildInput(const LabeledExample& example, Rng& rng) const;
  // Splits adapter output into emitted label and clean text.
  StrippedLabel ParseOutput(std::string_view raw) const;
  // Message body handed to ModelAdapter::FineTune.
  nlohmann::json TuneMessageConfig() const;

 private:
  TaskSpec task_;
  BackendConfig config_;
  MaskPlan plan_;
  ArMarkers markers_;
  std::unique_ptr<ModelAdapter> adapter_;
  bool tuned_ = false;
};

// Everything MakeBackend may need beyond the config.
struct BackendResources {
  Lexicon mock_lexicon;
  bool mock_adversarial = false;
  std::optional<SynonymMap> eda_lexicon;
  Translator translate_fwd;
  Translator translate_bwd;
  // Overrides backend_cmd for model methods.
  std::function<std::unique_ptr<ModelAdapter>()> adapter_factory;
};

// Throws BackendError when a model method has neither an adapter factory
// nor a backend_cmd, or backtranslation has no translators.
std::unique_ptr<GeneratorBackend> MakeBackend(const BackendConfig& config,
                                              const TaskSpec& task,
                                              const BackendResources& res = {});

}  // namespace augtool

#endif  // AUGTOOL_BACKENDS_H_

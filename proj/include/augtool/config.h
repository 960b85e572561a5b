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

#ifndef AUGTOOL_CONFIG_H_
#define AUGTOOL_CONFIG_H_

#include <filesystem>
#include <optional>

#include "augtool/backends.h"
#include "augtool/corpus.h"
#include "augtool/experiment.h"
#include "augtool/metrics.h"
#include "json.hpp"

namespace augtool {

// The single JSON config consumed by the CLI:
//
//   {
//     "task":       {"name": "sst2", "labels": ["Positive", "Negative"]},
//     "data":       {"train": "train.tsv", "dev": "dev.tsv",
//                    "test": "test.tsv"},
//     "backend":    {"method": "mock", "backend_cmd": "...", ...,
//                    "mock_lexicon": {...}, "adversarial": false,
//                    "eda_lexicon": {...}},
//     "classifier": {"kind": "bow_linear", "epochs": 8, ...},
//     "experiment": {"n_per_class": 10, "dev_per_class": 10,
//                    "trials": 15, "s": 1, "master_seed": 0,
//                    "include_no_aug_baseline": true, "workers": 1},
//     "output_dir": "out"
//   }
//
// Labels are lower-cased. Relative paths resolve against the config file.
struct ToolConfig {
  TaskSpec task;
  std::optional<std::filesystem::path> train_path;
  std::optional<std::filesystem::path> dev_path;
  std::optional<std::filesystem::path> test_path;
  BackendConfig backend;
  BackendResources resources;
  ClassifierConfig classifier;
  std::size_t n_per_class = 10;
  std::size_t dev_per_class = 10;
  std::size_t trials = 15;
  std::size_t s = 1;
  std::uint64_t master_seed = 0;
  bool include_no_aug_baseline = true;
  std::size_t workers = 1;
  std::filesystem::path output_dir = "out";
};

// Throws ConfigError (or IoError for an unreadable file).
ToolConfig ParseToolConfig(const nlohmann::json& j,
                           const std::filesystem::path& base_dir = {});
ToolConfig LoadToolConfig(const std::filesystem::path& path);

ExperimentConfig MakeExperimentConfig(const ToolConfig& config);

}  // namespace augtool

#endif  // AUGTOOL_CONFIG_H_

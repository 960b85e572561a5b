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

#include "augtool/config.h"

#include <fstream>

#include "augtool/error.h"
#include "augtool/text.h"

namespace augtool {

using nlohmann::json;

namespace {

std::filesystem::path Resolve(const std::filesystem::path& base,
                              const std::string& p) {
  std::filesystem::path path(p);
  if (path.is_relative() && !base.empty()) return base / path;
  return path;
}

std::size_t PositiveCount(const json& j, const char* key, std::size_t dflt) {
  if (!j.contains(key)) return dflt;
  const auto v = j[key].get<long long>();
  if (v < 1) throw ConfigError(std::string(key) + " must be positive");
  return static_cast<std::size_t>(v);
}

}  // namespace

ToolConfig ParseToolConfig(const json& j, const std::filesystem::path& base) {
  try {
    ToolConfig c;
    const json& task = j.at("task");
    std::vector<std::string> labels;
    for (const auto& l : task.at("labels")) {
      labels.push_back(ToLower(l.get<std::string>()));
    }
    try {
      c.task = TaskSpec(task.value("name", std::string("task")),
                        std::move(labels));
    } catch (const LabelError& e) {
      throw ConfigError(e.what());
    }

    if (j.contains("data")) {
      const json& d = j["data"];
      if (d.contains("train")) c.train_path = Resolve(base, d["train"]);
      if (d.contains("dev")) c.dev_path = Resolve(base, d["dev"]);
      if (d.contains("test")) c.test_path = Resolve(base, d["test"]);
    }

    json backend = j.value("backend", json::object());
    if (!backend.contains("method")) backend["method"] = "mock";
    c.backend = BackendConfigFromJson(backend);
    if (backend.contains("mock_lexicon")) {
      c.resources.mock_lexicon = backend["mock_lexicon"].get<Lexicon>();
    }
    c.resources.mock_adversarial = backend.value("adversarial", false);
    if (backend.contains("eda_lexicon")) {
      c.resources.eda_lexicon = backend["eda_lexicon"].get<SynonymMap>();
    }
    if (c.backend.markers) ValidateMarkers(*c.backend.markers, c.task);

    c.classifier =
        ClassifierConfigFromJson(j.value("classifier", json::object()));

    const json e = j.value("experiment", json::object());
    c.n_per_class = PositiveCount(e, "n_per_class", c.n_per_class);
    c.dev_per_class = PositiveCount(e, "dev_per_class", c.dev_per_class);
    c.trials = PositiveCount(e, "trials", c.trials);
    c.s = PositiveCount(e, "s", c.s);
    c.workers = PositiveCount(e, "workers", c.workers);
    c.master_seed = e.value("master_seed", c.master_seed);
    c.include_no_aug_baseline =
        e.value("include_no_aug_baseline", c.include_no_aug_baseline);

    c.output_dir = Resolve(base, j.value("output_dir", std::string("out")));
    return c;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

ToolConfig LoadToolConfig(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("config " + path.string() + ": " + e.what());
  }
  return ParseToolConfig(j, path.parent_path());
}

ExperimentConfig MakeExperimentConfig(const ToolConfig& c) {
  ExperimentConfig e;
  e.method = c.backend;
  e.resources = c.resources;
  e.n_per_class = c.n_per_class;
  e.dev_per_class = c.dev_per_class;
  e.trials = c.trials;
  e.s = c.s;
  e.master_seed = c.master_seed;
  e.classifier = c.classifier;
  e.include_no_aug_baseline = c.include_no_aug_baseline;
  e.workers = c.workers;
  return e;
}

}  // namespace augtool

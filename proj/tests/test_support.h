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

#ifndef AUGTOOL_TESTS_TEST_SUPPORT_H_
#define AUGTOOL_TESTS_TEST_SUPPORT_H_

#include <unistd.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "augtool/backends.h"
#include "augtool/corpus.h"
#include "augtool/metrics.h"
#include "augtool/text.h"

namespace augtool::testing {

inline std::string FakeBackend(const std::string& mode,
                               const std::string& log = "") {
  std::string cmd = std::string(AUGTOOL_FAKE_BACKEND) + " " + mode;
  if (!log.empty()) cmd += " " + log;
  return cmd;
}

// Scratch directory removed on destruction.
class TempDir {
 public:
  TempDir() {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("augtool-test-" + std::to_string(::getpid()) + "-" +
             std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const {
    return path_ / name;
  }

 private:
  std::filesystem::path path_;
};

inline std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

inline void WriteFile(const std::filesystem::path& path,
                      const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << content;
}

inline TaskSpec Sst2() { return TaskSpec("sst2", {"positive", "negative"}); }

// Random dataset over `labels`, `per_class` examples each, ids "0".."N-1"
// in interleaved order, 3-8 words from a small alphabet.
inline DatasetSplit RandomDataset(const TaskSpec& task, std::size_t per_class,
                                  std::mt19937_64& gen) {
  static const char* kWords[] = {"the", "a",   "movie", "was", "good",
                                 "bad", "fun", "long",  "plot", "ride"};
  std::vector<LabeledExample> examples;
  std::size_t id = 0;
  for (std::size_t i = 0; i < per_class; ++i) {
    for (const auto& label : task.labels()) {
      const std::size_t m = 3 + gen() % 6;
      std::vector<std::string> words;
      for (std::size_t k = 0; k < m; ++k) words.push_back(kWords[gen() % 10]);
      examples.push_back({std::to_string(id++), JoinWords(words), label});
    }
  }
  return DatasetSplit(task, SplitKind::kTrain, std::move(examples));
}

// Separable toy task. Every "alpha" text holds one indicator from
// aa0..aa{family-1}, every "beta" text one from bb0..; the remaining five
// words come from a shared noise vocabulary.
struct ToyTask {
  TaskSpec task{"toy", {"alpha", "beta"}};
  DatasetSplit train{task, SplitKind::kTrain};
  DatasetSplit test{task, SplitKind::kTest};
  Lexicon lexicon;
};

inline ToyTask MakeToyTask(std::size_t per_class, std::size_t family = 20,
                           std::uint64_t seed = 2024) {
  ToyTask toy;
  for (std::size_t i = 0; i < family; ++i) {
    toy.lexicon["alpha"].push_back("aa" + std::to_string(i));
    toy.lexicon["beta"].push_back("bb" + std::to_string(i));
  }
  std::mt19937_64 gen(seed);
  auto make = [&](DatasetSplit& split, std::size_t n) {
    std::size_t id = 0;
    for (std::size_t i = 0; i < n; ++i) {
      for (const auto& label : toy.task.labels()) {
        std::vector<std::string> words;
        for (int k = 0; k < 5; ++k) {
          words.push_back("n" + std::to_string(gen() % 30));
        }
        const auto& fam = toy.lexicon[label];
        words.insert(words.begin() + static_cast<long>(gen() % 6),
                     fam[gen() % fam.size()]);
        split.Add({std::to_string(id++), JoinWords(words), label});
      }
    }
  };
  make(toy.train, per_class);
  make(toy.test, per_class);
  return toy;
}

// Predicts the label whose lexicon contains a token of the text.
class LexiconLookupClassifier : public Classifier {
 public:
  LexiconLookupClassifier(TaskSpec task, Lexicon lexicon)
      : task_(std::move(task)), lexicon_(std::move(lexicon)) {}
  const TaskSpec& task() const override { return task_; }
  std::vector<std::string> Predict(
      std::span<const std::string> texts) const override {
    std::vector<std::string> out;
    for (const auto& t : texts) {
      std::string found = task_.labels().front();
      for (const auto& w : SplitWords(t)) {
        for (const auto& [label, words] : lexicon_) {
          if (std::find(words.begin(), words.end(), w) != words.end()) {
            found = label;
          }
        }
      }
      out.push_back(found);
    }
    return out;
  }

 private:
  TaskSpec task_;
  Lexicon lexicon_;
};

}  // namespace augtool::testing

#endif  // AUGTOOL_TESTS_TEST_SUPPORT_H_

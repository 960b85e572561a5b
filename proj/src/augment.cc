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

#include "augtool/augment.h"

#include <atomic>
#include <exception>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>

#include "augtool/error.h"
#include "augtool/rng.h"

namespace augtool {

namespace {

struct Slot {
  GenerationRecord record;
  bool ok = false;
  std::string error;
};

Slot SynthesizeOne(GeneratorBackend& backend, const LabeledExample& example,
                   std::uint64_t seed, int retries) {
  Slot slot;
  for (int attempt = 0; attempt <= retries; ++attempt) {
    const std::uint64_t s = attempt == 0 ? seed : DeriveSeed(seed, attempt);
    try {
      slot.record = backend.Synthesize(example, s);
      slot.ok = true;
      return slot;
    } catch (const GenerationError& e) {
      slot.error = e.what();
    }
  }
  // Failed record keeps its provenance with empty text.
  slot.record.source_id = example.id;
  slot.record.method = std::string(backend.method());
  slot.record.label_assigned = example.label;
  slot.record.seed = seed;
  return slot;
}

}  // namespace

AugmentationRun RunAugmentation(GeneratorBackend& backend,
                                const DatasetSplit& train,
                                const AugmentOptions& options) {
  if (options.s == 0) throw ArgumentError("s must be positive");
  if (!backend.tuned()) {
    throw BackendError("backend '" + std::string(backend.method()) +
                       "' is not tuned");
  }
  const std::size_t n = train.size();
  const std::size_t total = n * options.s;
  std::vector<Slot> slots(total);

  auto work = [&](std::size_t k) {
    const std::size_t i = k / options.s;
    const std::size_t j = k % options.s;
    slots[k] = SynthesizeOne(backend, train[i],
                             DeriveSeed(options.master_seed, i, j),
                             options.retries);
  };

  const std::size_t workers =
      backend.shareable() ? std::max<std::size_t>(1, options.workers) : 1;
  if (workers == 1 || total < 2) {
    for (std::size_t k = 0; k < total; ++k) work(k);
  } else {
    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < std::min(workers, total); ++w) {
      pool.emplace_back([&] {
        for (std::size_t k; (k = next.fetch_add(1)) < total;) {
          try {
            work(k);
          } catch (...) {
            std::lock_guard lock(error_mutex);
            if (!first_error) first_error = std::current_exception();
            next = total;
          }
        }
      });
    }
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
  }

  AugmentationRun run{options.s, {},
                      DatasetSplit(train.task(), SplitKind::kSynthetic), 0};
  run.records.reserve(total);
  for (std::size_t k = 0; k < total; ++k) {
    Slot& slot = slots[k];
    if (slot.ok) {
      const std::size_t i = k / options.s;
      const std::size_t j = k % options.s;
      run.synthetic.Add({"syn-" + train[i].id + "-" + std::to_string(j),
                         slot.record.text, train[i].label});
    } else {
      ++run.failures;
      std::cerr << "warning: dropped generation for example '"
                << slot.record.source_id << "': " << slot.error << "\n";
    }
    run.records.push_back(std::move(slot.record));
  }
  if (total > 0 && run.failures == total) {
    throw AugmentationError("all " + std::to_string(total) +
                            " generations failed");
  }
  return run;
}

DatasetSplit MergeForTraining(const DatasetSplit& train,
                              const DatasetSplit& synthetic) {
  if (train.task() != synthetic.task()) {
    throw MergeError("cannot merge splits of different tasks");
  }
  DatasetSplit merged(train.task(), SplitKind::kTrain, train.examples());
  for (const auto& e : synthetic.examples()) {
    if (merged.ContainsId(e.id)) {
      throw MergeError("id collision on '" + e.id + "'");
    }
    merged.Add(e);
  }
  return merged;
}

std::string FormatRecordsJsonl(const std::vector<GenerationRecord>& records) {
  std::string out;
  for (const auto& r : records) {
    out += ToJson(r).dump();
    out += '\n';
  }
  return out;
}

void SaveRecordsJsonl(const std::vector<GenerationRecord>& records,
                      const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << FormatRecordsJsonl(records);
  if (!out) throw IoError("write failed for " + path.string());
}

std::vector<GenerationRecord> LoadRecordsJsonl(
    const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<GenerationRecord> records;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      records.push_back(GenerationRecordFromJson(nlohmann::json::parse(line)));
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(e.what(), line_no);
    }
  }
  return records;
}

}  // namespace augtool

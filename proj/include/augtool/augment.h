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

#ifndef AUGTOOL_AUGMENT_H_
#define AUGTOOL_AUGMENT_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "augtool/backends.h"
#include "augtool/corpus.h"

namespace augtool {

struct AugmentOptions {
  std::size_t s = 1;
  std::uint64_t master_seed = 0;
  // Concurrent synthesize calls; only honoured for shareable backends.
  std::size_t workers = 1;
  // Extra attempts after a GenerationError. Attempt a > 0 uses seed
  // DeriveSeed(seed, a).
  int retries = 3;
};

// One run of the augmentation loop. `records` holds one entry per
// attempted (example, replica) in source order; entries whose generation
// failed have empty text and are absent from `synthetic`.
struct AugmentationRun {
  std::size_t s = 1;
  std::vector<GenerationRecord> records;
  DatasetSplit synthetic;
  std::size_t failures = 0;
};

// For example i and replica j the record seed is DeriveSeed(master, i, j);
// synthetic ids are "syn-<source_id>-<j>" and labels copy the source label.
// BackendError other than GenerationError propagates. Throws
// AugmentationError when every attempt failed.
AugmentationRun RunAugmentation(GeneratorBackend& backend,
                                const DatasetSplit& train,
                                const AugmentOptions& options = {});

// Originals first, then synthetic; throws MergeError on an id collision.
DatasetSplit MergeForTraining(const DatasetSplit& train,
                              const DatasetSplit& synthetic);

std::string FormatRecordsJsonl(const std::vector<GenerationRecord>& records);
void SaveRecordsJsonl(const std::vector<GenerationRecord>& records,
                      const std::filesystem::path& path);
std::vector<GenerationRecord> LoadRecordsJsonl(
    const std::filesystem::path& path);

}  // namespace augtool

#endif  // AUGTOOL_AUGMENT_H_

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

#ifndef AUGTOOL_ERROR_H_
#define AUGTOOL_ERROR_H_

#include <stdexcept>
#include <string>

namespace augtool {

// Root of every error raised by the library. The CLI maps the three
// families below onto its exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Corpus and configuration problems (exit code 2).
class CorpusError : public Error {
 public:
  using Error::Error;
};

class ParseError : public CorpusError {
 public:
  ParseError(const std::string& what, std::size_t line)
      : CorpusError("line " + std::to_string(line) + ": " + what),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class LabelError : public CorpusError {
 public:
  using CorpusError::CorpusError;
};

class CapacityError : public CorpusError {
 public:
  using CorpusError::CorpusError;
};

class IoError : public CorpusError {
 public:
  using CorpusError::CorpusError;
};

class ConfigError : public CorpusError {
 public:
  using CorpusError::CorpusError;
};

class ArgumentError : public Error {
 public:
  using Error::Error;
};

// Generation-side problems (exit code 3).
class BackendError : public Error {
 public:
  using Error::Error;
};

class GenerationError : public BackendError {
 public:
  using BackendError::BackendError;
};

class AugmentationError : public BackendError {
 public:
  using BackendError::BackendError;
};

class MergeError : public AugmentationError {
 public:
  using AugmentationError::AugmentationError;
};

// Evaluation problems (exit code 4).
class MetricError : public Error {
 public:
  using Error::Error;
};

class DegenerateDataError : public MetricError {
 public:
  using MetricError::MetricError;
};

class ExperimentError : public MetricError {
 public:
  using MetricError::MetricError;
};

}  // namespace augtool

#endif  // AUGTOOL_ERROR_H_

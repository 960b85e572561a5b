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

#ifndef AUGTOOL_STDIO_CHANNEL_H_
#define AUGTOOL_STDIO_CHANNEL_H_

#include <string>

#include "json.hpp"

namespace augtool {

// Line-delimited JSON request/response over a child process's stdin and
// stdout. The child is started with `/bin/sh -c <command>` on the first
// request and terminated when the channel is destroyed.
//
// Every request carries an "op" field. A reply of {"ok":false,"error":..}
// or a dead child raises BackendError naming the op and the command.
class StdioJsonChannel {
 public:
  explicit StdioJsonChannel(std::string command);
  ~StdioJsonChannel();

  StdioJsonChannel(const StdioJsonChannel&) = delete;
  StdioJsonChannel& operator=(const StdioJsonChannel&) = delete;

  nlohmann::json Request(const nlohmann::json& message);

  const std::string& command() const { return command_; }

 private:
  void Start();
  void Stop();
  void WriteLine(const std::string& line, const std::string& op);
  bool ReadLine(std::string& line);

  std::string command_;
  int pid_ = -1;
  int to_child_ = -1;
  int from_child_ = -1;
  std::string buffer_;
};

}  // namespace augtool

#endif  // AUGTOOL_STDIO_CHANNEL_H_

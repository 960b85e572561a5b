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

#include "augtool/stdio_channel.h"

#include <fcntl.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstring>
#include <thread>

#include "augtool/error.h"

namespace augtool {

namespace {

void CloseFd(int& fd) {
  if (fd >= 0) {
    ::close(fd);
    fd = -1;
  }
}

}  // namespace

StdioJsonChannel::StdioJsonChannel(std::string command)
    : command_(std::move(command)) {}

StdioJsonChannel::~StdioJsonChannel() { Stop(); }

void StdioJsonChannel::Start() {
  if (command_.empty()) throw BackendError("backend command is empty");
  // A child that dies mid-write must surface as EPIPE, not kill us.
  ::signal(SIGPIPE, SIG_IGN);

  int in_pipe[2];
  int out_pipe[2];
  if (::pipe2(in_pipe, O_CLOEXEC) != 0) {
    throw BackendError("pipe failed for backend '" + command_ + "'");
  }
  if (::pipe2(out_pipe, O_CLOEXEC) != 0) {
    ::close(in_pipe[0]);
    ::close(in_pipe[1]);
    throw BackendError("pipe failed for backend '" + command_ + "'");
  }

  const pid_t pid = ::fork();
  if (pid < 0) {
    for (int fd : {in_pipe[0], in_pipe[1], out_pipe[0], out_pipe[1]}) {
      ::close(fd);
    }
    throw BackendError("fork failed for backend '" + command_ + "'");
  }
  if (pid == 0) {
    ::dup2(in_pipe[0], STDIN_FILENO);
    ::dup2(out_pipe[1], STDOUT_FILENO);
    ::execl("/bin/sh", "sh", "-c", command_.c_str(),
            static_cast<char*>(nullptr));
    ::_exit(127);
  }
  ::close(in_pipe[0]);
  ::close(out_pipe[1]);
  pid_ = pid;
  to_child_ = in_pipe[1];
  from_child_ = out_pipe[0];
}

void StdioJsonChannel::Stop() {
  CloseFd(to_child_);
  CloseFd(from_child_);
  if (pid_ <= 0) return;
  using namespace std::chrono_literals;
  int status = 0;
  for (int i = 0; i < 100; ++i) {
    if (::waitpid(pid_, &status, WNOHANG) == pid_) {
      pid_ = -1;
      return;
    }
    std::this_thread::sleep_for(10ms);
  }
  ::kill(pid_, SIGKILL);
  ::waitpid(pid_, &status, 0);
  pid_ = -1;
}

void StdioJsonChannel::WriteLine(const std::string& line,
                                 const std::string& op) {
  std::size_t written = 0;
  while (written < line.size()) {
    ssize_t n = ::write(to_child_, line.data() + written, line.size() - written);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw BackendError("backend '" + command_ + "' closed its input during op '" +
                         op + "': " + std::strerror(errno));
    }
    written += static_cast<std::size_t>(n);
  }
}

bool StdioJsonChannel::ReadLine(std::string& line) {
  for (;;) {
    const std::size_t nl = buffer_.find('\n');
    if (nl != std::string::npos) {
      line = buffer_.substr(0, nl);
      buffer_.erase(0, nl + 1);
      return true;
    }
    char chunk[4096];
    ssize_t n = ::read(from_child_, chunk, sizeof(chunk));
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) return false;
    buffer_.append(chunk, static_cast<std::size_t>(n));
  }
}

nlohmann::json StdioJsonChannel::Request(const nlohmann::json& message) {
  const std::string op = message.value("op", std::string("?"));
  if (pid_ < 0) Start();
  WriteLine(message.dump() + "\n", op);

  std::string line;
  if (!ReadLine(line)) {
    Stop();
    throw BackendError("backend '" + command_ +
                       "' exited without answering op '" + op + "'");
  }
  nlohmann::json reply;
  try {
    reply = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw BackendError("backend '" + command_ + "' sent invalid JSON for op '" +
                       op + "': " + e.what());
  }
  if (!reply.is_object() || !reply.value("ok", false)) {
    std::string detail = "no detail";
    if (reply.is_object() && reply.contains("error") &&
        reply["error"].is_string()) {
      detail = reply["error"].get<std::string>();
    }
    throw BackendError("backend '" + command_ + "' failed op '" + op +
                       "': " + detail);
  }
  return reply;
}

}  // namespace augtool

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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>

#include <cstdio>

#include "augtool/augment.h"
#include "augtool/config.h"
#include "augtool/error.h"
#include "json.hpp"
#include "test_support.h"

using namespace augtool;
using augtool::testing::FakeBackend;
using augtool::testing::ReadFile;
using augtool::testing::TempDir;
using augtool::testing::WriteFile;
using nlohmann::json;

namespace {

struct Result {
  int code = -1;
  std::string output;
};

Result Run(const std::string& args, const std::string& env = "") {
  const std::string cmd =
      env + " " + std::string(AUGTOOL_CLI) + " " + args + " 2>&1";
  Result r;
  FILE* pipe = ::popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  while (std::size_t n = std::fread(buf, 1, sizeof(buf), pipe)) {
    r.output.append(buf, n);
  }
  const int status = ::pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

// Toy corpus on disk plus a config pointing at it.
struct Workspace {
  TempDir dir;
  std::string config;

  explicit Workspace(json overrides = json::object()) {
    auto toy = testing::MakeToyTask(30);
    SaveTsv(toy.train, dir / "train.tsv");
    SaveTsv(toy.test, dir / "test.tsv");
    SaveTsv(testing::MakeToyTask(10, 20, 7).train, dir / "dev.tsv");
    json c = {
        {"task", {{"name", "toy"}, {"labels", {"Alpha", "Beta"}}}},
        {"data",
         {{"train", "train.tsv"}, {"dev", "dev.tsv"}, {"test", "test.tsv"}}},
        {"backend", {{"method", "mock"}, {"mock_lexicon", toy.lexicon}}},
        {"experiment", {{"trials", 3}, {"master_seed", 7}}},
        {"output_dir", "out"}};
    c.merge_patch(overrides);
    config = (dir / "config.json").string();
    WriteFile(config, c.dump(2));
  }
  std::filesystem::path out() const { return dir / "out"; }
  std::string Common() const { return "--config " + config; }
};

std::size_t Lines(const std::string& s) {
  return std::count(s.begin(), s.end(), '\n');
}

}  // namespace

TEST_CASE("config parsing resolves paths and lower-cases labels") {
  Workspace ws;
  auto c = LoadToolConfig(ws.config);
  CHECK(c.task.labels() == std::vector<std::string>{"alpha", "beta"});
  CHECK(*c.train_path == ws.dir / "train.tsv");
  CHECK(c.output_dir == ws.dir / "out");
  CHECK(c.trials == 3);
  CHECK(c.master_seed == 7);
  CHECK(c.backend.method == Method::kMock);
  CHECK_THROWS_AS(LoadToolConfig(ws.dir / "missing.json"), ConfigError);
  CHECK_THROWS_AS(ParseToolConfig(json{{"task", {{"name", "x"}}}}),
                  ConfigError);
}

TEST_CASE("subsample writes per-class splits and a manifest") {
  Workspace ws;
  auto r = Run("subsample " + ws.Common() + " --n 10 --seed 7");
  REQUIRE_MESSAGE(r.code == 0, r.output);
  auto train = LoadTsv(ws.out() / "train_sub.tsv", LoadToolConfig(ws.config).task);
  auto dev = LoadTsv(ws.out() / "dev_sub.tsv", train.task());
  CHECK(train.LabelHistogram()["alpha"] == 10);
  CHECK(train.LabelHistogram()["beta"] == 10);
  CHECK(dev.size() == 20);
  auto manifest = json::parse(ReadFile(ws.out() / "manifest.json"));
  CHECK(manifest["master_seed"] == 7);
  CHECK(manifest["command"] == "subsample");
  CHECK(manifest["tool_version"] == "0.1.0");
  CHECK(manifest.contains("created_at"));
  CHECK(manifest["files"] == json({"train_sub.tsv", "dev_sub.tsv"}));
}

TEST_CASE("subsample errors exit with code 2") {
  Workspace ws;
  CHECK(Run("subsample --config " + (ws.dir / "nope.json").string()).code == 2);
  CHECK(Run("subsample").code == 2);
  CHECK(Run("subsample " + ws.Common() + " --n 25").code == 2);
  WriteFile(ws.dir / "train.tsv", "alpha\tok\nbroken line\n");
  auto r = Run("subsample " + ws.Common());
  CHECK(r.code == 2);
  CHECK(r.output.find("line 2") != std::string::npos);
}

TEST_CASE("augment is reproducible from the same seed") {
  Workspace ws;
  REQUIRE(Run("subsample " + ws.Common()).code == 0);
  auto a = Run("augment " + ws.Common() + " --s 2");
  REQUIRE_MESSAGE(a.code == 0, a.output);
  const std::string tsv = ReadFile(ws.out() / "synthetic.tsv");
  const std::string jsonl = ReadFile(ws.out() / "records.jsonl");
  CHECK(Lines(tsv) == 40);
  CHECK(Lines(jsonl) == 40);
  REQUIRE(Run("augment " + ws.Common() + " --s 2 --workers 4").code == 0);
  CHECK(ReadFile(ws.out() / "synthetic.tsv") == tsv);
  CHECK(ReadFile(ws.out() / "records.jsonl") == jsonl);
  REQUIRE(Run("augment " + ws.Common() + " --s 2 --seed 8").code == 0);
  CHECK(ReadFile(ws.out() / "synthetic.tsv") != tsv);
}

TEST_CASE("augment without a generator for a model method exits 3") {
  Workspace ws;
  REQUIRE(Run("subsample " + ws.Common()).code == 0);
  auto r = Run("augment " + ws.Common() + " --method s2s_span");
  CHECK(r.code == 3);
  CHECK(r.output.find("backend_cmd") != std::string::npos);
}

TEST_CASE("backend command precedence is flag over env over config") {
  Workspace ws(json{{"backend", {{"method", "s2s_word"},
                                 {"backend_cmd", "/nonexistent/config"}}}});
  REQUIRE(Run("subsample " + ws.Common()).code == 0);
  const std::string log = (ws.dir / "log.jsonl").string();

  auto r = Run("augment " + ws.Common(),
               "AUGTOOL_BACKEND_CMD='" + FakeBackend("generator", log) + "'");
  REQUIRE_MESSAGE(r.code == 0, r.output);
  CHECK(Lines(ReadFile(log)) == 21);

  r = Run("augment " + ws.Common() + " --backend-cmd '" +
              FakeBackend("fail-synthesize") + "'",
          "AUGTOOL_BACKEND_CMD='" + FakeBackend("generator", log) + "'");
  CHECK(r.code == 3);
  CHECK(r.output.find("model exploded") != std::string::npos);

  r = Run("augment " + ws.Common());
  CHECK(r.code == 3);
  CHECK(r.output.find("/nonexistent/config") != std::string::npos);
}

TEST_CASE("intrinsic eval reports TTR and fidelity") {
  Workspace ws;
  REQUIRE(Run("subsample " + ws.Common()).code == 0);
  REQUIRE(Run("augment " + ws.Common()).code == 0);
  auto r = Run("eval " + ws.Common() + " --mode intrinsic");
  REQUIRE_MESSAGE(r.code == 0, r.output);
  auto report = json::parse(ReadFile(ws.out() / "report.json"));
  REQUIRE(report["diversity"].size() == 2);
  CHECK(report["diversity"][0]["n"] == 1);
  CHECK(report["diversity"][1]["n"] == 3);
  CHECK(report["fidelity"]["n"] == 20);
  CHECK(std::filesystem::exists(ws.out() / "table.txt"));
}

TEST_CASE("intrinsic eval on a missing synthetic file exits 2") {
  Workspace ws;
  CHECK(Run("eval " + ws.Common() + " --mode intrinsic").code == 2);
}

TEST_CASE("extrinsic eval and report") {
  Workspace ws;
  auto r = Run("eval " + ws.Common() + " --mode extrinsic --trials 2");
  REQUIRE_MESSAGE(r.code == 0, r.output);
  auto report = json::parse(ReadFile(ws.out() / "report.json"));
  REQUIRE(report["reports"].size() == 2);
  const auto& mock = report["reports"][0];
  CHECK(mock["method"] == "mock");
  CHECK(mock["per_trial_accuracy"].size() == 2);
  CHECK(mock.contains("mean"));
  CHECK(mock.contains("std"));
  const std::string table = ReadFile(ws.out() / "table.txt");
  CHECK(table.find("no_aug") != std::string::npos);

  auto formatted = Run("report " + (ws.out() / "report.json").string() +
                       " --out " + (ws.dir / "t.txt").string());
  REQUIRE(formatted.code == 0);
  CHECK(formatted.output == table);
  CHECK(ReadFile(ws.dir / "t.txt") == table);

  CHECK(Run("report " + (ws.dir / "none.json").string()).code == 4);
}

TEST_CASE("extrinsic eval with a failing backend exits 4") {
  Workspace ws(json{{"backend", {{"method", "s2s_word"},
                                 {"backend_cmd", FakeBackend("fail-synthesize")}}}});
  auto r = Run("eval " + ws.Common() + " --mode extrinsic --trials 2");
  CHECK(r.code == 4);
  CHECK(r.output.find("synthesize") != std::string::npos);
}

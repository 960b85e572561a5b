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

#include <chrono>
#include <cmath>

#include "augtool/error.h"
#include "augtool/experiment.h"
#include "test_support.h"

using namespace augtool;
using augtool::testing::FakeBackend;

namespace {

ExperimentConfig ToyConfig(const testing::ToyTask& toy, std::uint64_t seed,
                           bool adversarial = false) {
  ExperimentConfig c;
  c.method = BackendConfig::Defaults(Method::kMock);
  c.resources.mock_lexicon = toy.lexicon;
  c.resources.mock_adversarial = adversarial;
  c.n_per_class = 10;
  c.dev_per_class = 10;
  c.trials = 5;
  c.master_seed = seed;
  c.include_no_aug_baseline = true;
  return c;
}

ExperimentReport Report(std::vector<double> acc) {
  ExperimentReport r;
  r.dataset = "sst2";
  r.method = "no_aug";
  r.per_trial_accuracy = acc;
  std::tie(r.mean, r.std) = MeanStd(acc);
  return r;
}

}  // namespace

TEST_CASE("MeanStd uses the sample divisor") {
  std::vector<double> two{0.5, 0.7};
  auto [mean, sd] = MeanStd(two);
  CHECK(mean == doctest::Approx(0.6));
  CHECK(sd == doctest::Approx(std::sqrt(0.02)).epsilon(1e-12));
  std::vector<double> same{0.8, 0.8, 0.8};
  CHECK(MeanStd(same).second == 0.0);
  std::vector<double> one{0.3};
  CHECK(MeanStd(one) == std::pair<double, double>{0.3, 0.0});
}

TEST_CASE("FormatCell renders percent with two decimals") {
  CHECK(FormatCell(0.5293, 0.0501) == "52.93 (5.01)");
  CHECK(FormatCell(1.0, 0.0) == "100.00 (0.00)");
  CHECK(FormatCell(0.8724, 0.0139) == "87.24 (1.39)");
}

TEST_CASE("FormatReport lays out methods by datasets") {
  auto a = Report({0.5293});
  a.mean = 0.5293;
  a.std = 0.0501;
  std::vector<ExperimentReport> one{a};
  auto table = FormatReport(one);
  CHECK(table.find("Model") != std::string::npos);
  CHECK(table.find("sst2") != std::string::npos);
  CHECK(table.find("no_aug") != std::string::npos);
  CHECK(table.find("52.93 (5.01)") != std::string::npos);
  CHECK(std::count(table.begin(), table.end(), '\n') == 2);

  auto b = a;
  b.dataset = "snips";
  auto c = a;
  c.method = "mock";
  std::vector<ExperimentReport> grid{a, b, c};
  auto big = FormatReport(grid);
  CHECK(std::count(big.begin(), big.end(), '\n') == 3);
  CHECK(big.find(" -") != std::string::npos);
  std::vector<ExperimentReport> none;
  CHECK_THROWS_AS(FormatReport(none), ArgumentError);
}

TEST_CASE("ExperimentReport JSON round-trips") {
  auto r = Report({0.5, 0.7});
  r.diversity = {{1, 0.5, 2, 4}, {3, 1.0, 1, 1}};
  r.fidelity = FidelityReport{1.0, {{"a", 1.0}}, 3};
  r.failed_trials = {{2, "trial 2 failed during augment: x"}};
  r.label_match_rate = 0.25;
  auto back = ExperimentReportFromJson(ToJson(r));
  CHECK(back.per_trial_accuracy == r.per_trial_accuracy);
  CHECK(back.mean == r.mean);
  CHECK(back.std == r.std);
  CHECK(back.diversity.size() == 2);
  CHECK(back.fidelity->accuracy == 1.0);
  CHECK(back.failed_trials[0].trial == 2);
  CHECK(back.label_match_rate == 0.25);
}

TEST_CASE("a trial runs the whole pipeline on the toy task") {
  auto toy = testing::MakeToyTask(60);
  ExperimentData data{toy.train, toy.test, std::nullopt};
  auto config = ToyConfig(toy, 1);
  const auto start = std::chrono::steady_clock::now();
  auto result = RunTrial(config, data, 0);
  const auto elapsed = std::chrono::steady_clock::now() - start;
  CHECK(elapsed < std::chrono::seconds(5));
  CHECK(result.seed == DeriveSeed(1, 0));
  CHECK(result.train_sub.size() == 20);
  CHECK(result.dev_sub.size() == 20);
  CHECK(result.run.synthetic.size() == 20);
  CHECK(result.accuracy >= 0.0);
  CHECK(result.accuracy <= 1.0);
  REQUIRE(result.baseline_accuracy.has_value());
}

TEST_CASE("experiments are reproducible and worker-invariant") {
  auto toy = testing::MakeToyTask(60);
  ExperimentData data{toy.train, toy.test, toy.train};
  auto config = ToyConfig(toy, 5);
  auto a = RunExperiment(config, data);
  config.workers = 3;
  auto b = RunExperiment(config, data);
  REQUIRE(a.size() == 2);
  CHECK(a[0].method == "mock");
  CHECK(a[1].method == "no_aug");
  CHECK(a[0].per_trial_accuracy.size() == 5);
  CHECK(a[0].per_trial_accuracy == b[0].per_trial_accuracy);
  CHECK(a[1].per_trial_accuracy == b[1].per_trial_accuracy);
  auto [mean, sd] = MeanStd(a[0].per_trial_accuracy);
  CHECK(a[0].mean == mean);
  CHECK(a[0].std == sd);
  CHECK(a[0].diversity.size() == 2);
  CHECK(a[0].diversity[0].n == 1);
  CHECK(a[0].diversity[1].n == 3);
  REQUIRE(a[0].fidelity.has_value());
  CHECK(a[0].label_match_rate == 1.0);
  CHECK(a[0].dataset == "toy");
}

TEST_CASE("augmentation direction follows label consistency") {
  auto toy = testing::MakeToyTask(60);
  ExperimentData data{toy.train, toy.test, std::nullopt};
  auto good = RunExperiment(ToyConfig(toy, 11), data);
  auto bad = RunExperiment(ToyConfig(toy, 11, true), data);
  CHECK(good[0].mean >= good[1].mean);
  CHECK(bad[0].mean <= bad[1].mean);
  CHECK(bad[0].label_match_rate == 0.0);
  // The baseline only depends on the seed tree.
  CHECK(good[1].per_trial_accuracy == bad[1].per_trial_accuracy);
}

TEST_CASE("failing trials are named and abort the experiment") {
  auto toy = testing::MakeToyTask(20);
  ExperimentData data{toy.train, toy.test, std::nullopt};
  ExperimentConfig config = ToyConfig(toy, 2);
  config.trials = 2;
  config.method = BackendConfig::Defaults(Method::kS2sWord);
  config.method.backend_cmd = FakeBackend("fail-synthesize");
  try {
    RunTrial(config, data, 1);
    FAIL("expected a trial error");
  } catch (const TrialError& e) {
    CHECK(e.trial() == 1);
    CHECK(e.stage() == "augment");
    CHECK(std::string(e.what()).find("'synthesize'") != std::string::npos);
  }
  try {
    RunExperiment(config, data);
    FAIL("expected an experiment error");
  } catch (const ExperimentError& e) {
    std::string what = e.what();
    CHECK(what.find("trial 0") != std::string::npos);
    CHECK(what.find("trial 1") != std::string::npos);
  }

  config.method.backend_cmd = FakeBackend("fail-fine_tune");
  try {
    RunTrial(config, data, 0);
    FAIL("expected a trial error");
  } catch (const TrialError& e) {
    CHECK(e.stage() == "fine_tune");
    CHECK(std::string(e.what()).find("'fine_tune'") != std::string::npos);
  }
}

TEST_CASE("too-small data fails in the subsample stage") {
  auto toy = testing::MakeToyTask(5);
  ExperimentData data{toy.train, toy.test, std::nullopt};
  try {
    RunTrial(ToyConfig(toy, 0), data, 0);
    FAIL("expected a trial error");
  } catch (const TrialError& e) {
    CHECK(e.stage() == "subsample");
  }
}

TEST_CASE("external generator completes an experiment") {
  auto toy = testing::MakeToyTask(20);
  ExperimentData data{toy.train, toy.test, std::nullopt};
  ExperimentConfig config = ToyConfig(toy, 3);
  config.trials = 2;
  config.method = BackendConfig::Defaults(Method::kS2sSpan);
  config.method.backend_cmd = FakeBackend("generator");
  auto reports = RunExperiment(config, data);
  CHECK(reports[0].method == "s2s_span");
  CHECK(reports[0].per_trial_accuracy.size() == 2);
  CHECK(reports[0].failed_trials.empty());
}

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

#include <map>
#include <random>
#include <set>

#include "augtool/corruption.h"
#include "augtool/error.h"

using namespace augtool;

namespace {

std::vector<std::string> Tokens(std::size_t m) {
  std::vector<std::string> t;
  for (std::size_t i = 0; i < m; ++i) t.push_back("w" + std::to_string(i));
  return t;
}

std::size_t CountMask(const CorruptionResult& r, const std::string& mask) {
  return std::count(r.corrupted_tokens.begin(), r.corrupted_tokens.end(), mask);
}

}  // namespace

TEST_CASE("MaskCount applies round-half-up with a floor of one") {
  CHECK(MaskCount(0.4, 10) == 4);
  CHECK(MaskCount(0.4, 1) == 1);
  CHECK(MaskCount(0.4, 2) == 1);
  CHECK(MaskCount(0.15, 20) == 3);
  CHECK(MaskCount(0.15, 3) == 1);
  CHECK(MaskCount(0.25, 10) == 3);  // 2.5 rounds up
  CHECK(MaskCount(0.5, 5) == 3);
  CHECK(MaskCount(1.0, 7) == 7);
}

TEST_CASE("MaskWords on the worked examples") {
  Rng rng(1);
  auto r = MaskWords(Tokens(10), MaskPlan::Word(), rng);
  CHECK(r.masked_positions.size() == 4);
  CHECK(r.corrupted_tokens.size() == 10);
  CHECK(CountMask(r, "<mask>") == 4);

  auto one = MaskWords(Tokens(1), MaskPlan::Word(), rng);
  CHECK(one.corrupted_tokens == std::vector<std::string>{"<mask>"});
}

TEST_CASE("MaskSpan on the worked examples") {
  Rng rng(2);
  auto r = MaskSpan(Tokens(10), MaskPlan::Span(), rng);
  CHECK(r.masked_positions.size() == 4);
  CHECK(r.corrupted_tokens.size() == 7);
  CHECK(r.masked_positions.front() <= 6);
  auto two = MaskSpan(Tokens(2), MaskPlan::Span(), rng);
  CHECK(two.masked_positions.size() == 1);
  CHECK(two.corrupted_tokens.size() == 2);
}

TEST_CASE("MaskMlm uses the 0.15 default") {
  Rng rng(3);
  CHECK(MaskMlm(Tokens(20), MaskPlan::Mlm(), rng).masked_positions.size() == 3);
  CHECK(MaskMlm(Tokens(3), MaskPlan::Mlm(), rng).masked_positions.size() == 1);
  CHECK(CountMask(MaskMlm(Tokens(20), MaskPlan::Mlm(), rng), "[MASK]") == 3);
}

TEST_CASE("masking rejects bad input") {
  Rng rng(4);
  std::vector<std::string> none;
  CHECK_THROWS_AS(MaskWords(none, MaskPlan::Word(), rng), ArgumentError);
  MaskPlan zero = MaskPlan::Word();
  zero.rate = 0.0;
  CHECK_THROWS_AS(MaskWords(Tokens(4), zero, rng), ArgumentError);
  MaskPlan big = MaskPlan::Word();
  big.rate = 1.5;
  CHECK_THROWS_AS(ValidateMaskPlan(big), ArgumentError);
  CHECK_THROWS_AS(ParseMaskScheme("gap"), ConfigError);
}

TEST_CASE("CorruptConditioned never masks the label") {
  Rng rng(5);
  MaskPlan all = MaskPlan::Word();
  all.rate = 1.0;
  auto tokens = Tokens(6);
  auto r = CorruptConditioned("positive", tokens, all, rng);
  CHECK(r.corrupted_tokens.front() == "positive");
  CHECK(r.masked_positions.size() == 6);
  CHECK(r.masked_positions.front() == 1);
  CHECK(Reconstruct(r).front() == "positive");
}

TEST_CASE("Reconstruct rejects inconsistent records") {
  CorruptionResult r{{"a", "x"}, {1}, {"a", "b"}};
  CHECK(Reconstruct(r) == std::vector<std::string>{"a", "b"});
  CorruptionResult wrong{{"z", "x"}, {1}, {"a", "b"}};
  CHECK_THROWS_AS(Reconstruct(wrong), ArgumentError);
  CorruptionResult unsorted{{"x", "x"}, {1, 0}, {"a", "b"}};
  CHECK_THROWS_AS(Reconstruct(unsorted), ArgumentError);
  CorruptionResult out_of_range{{"a", "x"}, {2}, {"a", "b"}};
  CHECK_THROWS_AS(Reconstruct(out_of_range), ArgumentError);
}

TEST_CASE("masking is deterministic per seed") {
  auto tokens = Tokens(30);
  Rng a(42), b(42), c(43);
  auto ra = MaskWords(tokens, MaskPlan::Word(), a);
  auto rb = MaskWords(tokens, MaskPlan::Word(), b);
  auto rc = MaskWords(tokens, MaskPlan::Word(), c);
  CHECK(ra.masked_positions == rb.masked_positions);
  CHECK(ra.masked_positions != rc.masked_positions);
}

TEST_CASE("masking budget and reconstruction hold (property)") {
  std::mt19937_64 gen(9);
  for (int round = 0; round < 500; ++round) {
    const std::size_t m = 1 + gen() % 60;
    const double rate = 0.01 + (gen() % 100) / 100.0;
    auto tokens = Tokens(m);
    for (auto plan : {MaskPlan::Word(), MaskPlan::Span(), MaskPlan::Mlm()}) {
      plan.rate = std::min(rate, 1.0);
      Rng rng(gen());
      auto r = Corrupt(tokens, plan, rng);
      const std::size_t c = MaskCount(plan.rate, m);
      REQUIRE(r.masked_positions.size() == c);
      std::set<std::size_t> distinct(r.masked_positions.begin(),
                                     r.masked_positions.end());
      CHECK(distinct.size() == c);
      if (plan.scheme == MaskScheme::kSpan) {
        CHECK(r.corrupted_tokens.size() == m - c + 1);
        CHECK(r.masked_positions.back() - r.masked_positions.front() + 1 == c);
      } else {
        CHECK(r.corrupted_tokens.size() == m);
      }
      CHECK(Reconstruct(r) == tokens);
    }
  }
}

TEST_CASE("word masking covers positions evenly") {
  std::map<std::size_t, int> hits;
  Rng rng(10);
  auto tokens = Tokens(5);
  for (int i = 0; i < 5000; ++i) {
    for (auto p : MaskWords(tokens, MaskPlan::Word(), rng).masked_positions) {
      ++hits[p];
    }
  }
  // Each position is masked with probability 2/5.
  for (std::size_t p = 0; p < 5; ++p) {
    CHECK(hits[p] == doctest::Approx(2000).epsilon(0.08));
  }
}

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

// Scripted stand-in for an external model speaking the stdio JSON protocol.
//
//   fake_backend <mode> [log-file]
//
// Modes:
//   generator        fine_tune ok; synthesize fills mask tokens with
//                    "filled" and appends EOS to AR prompts
//   fail-synthesize  synthesize answers {"ok":false}
//   fail-fine_tune   fine_tune answers {"ok":false}
//   empty            synthesize answers an empty text
//   classifier       train/predict with a token-vote memorizer
//   translator       translate: fwd upper-cases, bwd lower-cases
//
// Every received line is appended to log-file when given.

#include <cctype>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

using nlohmann::json;

namespace {

std::vector<std::string> Words(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

std::string Join(const std::vector<std::string>& words) {
  std::string out;
  for (const auto& w : words) {
    if (!out.empty()) out += ' ';
    out += w;
  }
  return out;
}

std::string Lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(c));
  return s;
}

std::string Upper(std::string s) {
  for (char& c : s) c = static_cast<char>(std::toupper(c));
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  const std::string mode = argc > 1 ? argv[1] : "generator";
  std::ofstream log;
  if (argc > 2) log.open(argv[2], std::ios::app);

  std::string eos = "EOS";
  std::string sep = "SEP";
  std::vector<std::string> labels;
  std::map<std::string, std::map<std::string, int>> votes;

  for (std::string line; std::getline(std::cin, line);) {
    if (log.is_open()) log << line << std::endl;
    json msg = json::parse(line, nullptr, false);
    json reply;
    const std::string op = msg.is_object() ? msg.value("op", "") : "";

    if (op == "fine_tune") {
      if (mode == "fail-fine_tune") {
        reply = {{"ok", false}, {"error", "cannot tune"}};
      } else {
        const json& cfg = msg["config"];
        if (cfg.contains("markers") && cfg["markers"].is_object()) {
          eos = cfg["markers"].value("eos", eos);
          sep = cfg["markers"].value("sep", sep);
        }
        reply = {{"ok", true}};
      }
    } else if (op == "synthesize") {
      if (mode == "fail-synthesize") {
        reply = {{"ok", false}, {"error", "model exploded"}};
      } else if (mode == "empty") {
        reply = {{"ok", true}, {"text", ""}};
      } else {
        auto words = Words(msg.value("input", ""));
        bool ar = false;
        for (auto& w : words) {
          if (w == "<mask>" || w == "[MASK]") w = "filled";
          if (w == sep) ar = true;
        }
        if (ar) {
          words.push_back("more");
          words.push_back(eos);
          words.push_back("trailing");
        }
        reply = {{"ok", true}, {"text", Join(words)}};
      }
    } else if (op == "train") {
      labels = msg["config"].value("labels", std::vector<std::string>{});
      for (const auto& e : msg["train"]) {
        for (const auto& w : Words(Lower(e["text"].get<std::string>()))) {
          ++votes[w][e["label"].get<std::string>()];
        }
      }
      reply = {{"ok", true}};
    } else if (op == "predict") {
      json out = json::array();
      for (const auto& t : msg["texts"]) {
        std::map<std::string, int> tally;
        for (const auto& w : Words(Lower(t.get<std::string>()))) {
          for (const auto& [label, n] : votes[w]) tally[label] += n;
        }
        std::string best = labels.empty() ? "" : labels.front();
        int best_n = -1;
        for (const auto& label : labels) {
          if (tally[label] > best_n) {
            best_n = tally[label];
            best = label;
          }
        }
        out.push_back(best);
      }
      reply = {{"ok", true}, {"labels", out}};
    } else if (op == "translate") {
      const std::string text = msg.value("text", "");
      const bool fwd = msg.value("direction", "fwd") == "fwd";
      reply = {{"ok", true}, {"text", fwd ? Upper(text) : Lower(text)}};
    } else {
      reply = {{"ok", false}, {"error", "unknown op '" + op + "'"}};
    }
    std::cout << reply.dump() << std::endl;
  }
  return 0;
}

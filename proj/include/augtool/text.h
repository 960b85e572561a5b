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

#ifndef AUGTOOL_TEXT_H_
#define AUGTOOL_TEXT_H_

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace augtool {

// A "word" everywhere in the toolkit is a maximal run of non-whitespace
// bytes (space, tab, CR, LF, VT, FF).
bool IsSpace(char c);
std::string_view Trim(std::string_view s);
std::vector<std::string> SplitWords(std::string_view s);
std::string JoinWords(std::span<const std::string> words);
// ASCII lower-casing; non-ASCII bytes pass through untouched.
std::string ToLower(std::string_view s);

}  // namespace augtool

#endif  // AUGTOOL_TEXT_H_

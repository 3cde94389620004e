/* Copyright 2026 The detoxaudit Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#ifndef DETOXAUDIT_TEXT_HPP_
#define DETOXAUDIT_TEXT_HPP_

#include <string>
#include <string_view>
#include <vector>

namespace detoxaudit {

// Lowercases, maps typographic apostrophes to '\'', turns every character
// other than letters, digits, apostrophes and '*' into a separator, trims
// apostrophes at token edges and drops tokens without a letter or digit.
// Non-ASCII UTF-8 sequences other than common punctuation count as letters.
std::vector<std::string> Tokenize(std::string_view text);

std::vector<std::string> SplitLines(std::string_view text);

std::string_view TrimView(std::string_view s);

}  // namespace detoxaudit

#endif  // DETOXAUDIT_TEXT_HPP_

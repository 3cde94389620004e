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

#ifndef DETOXAUDIT_STOPWORDS_HPP_
#define DETOXAUDIT_STOPWORDS_HPP_

#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_set>

namespace detoxaudit {

using StopwordSet = std::unordered_set<std::string>;

// Identifier of the bundled list, recorded in report provenance.
inline constexpr std::string_view kStopwordListId = "en-basic-179/v1";

// Bundled English list (lowercase, apostrophes kept).
const StopwordSet& DefaultStopwords();

// One word per line; blank lines and '#' comments skipped; words lowercased.
StopwordSet ParseStopwords(std::string_view text);
StopwordSet LoadStopwords(const std::filesystem::path& path);

}  // namespace detoxaudit

#endif  // DETOXAUDIT_STOPWORDS_HPP_

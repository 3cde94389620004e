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

#include "section_label.hpp"

#include <algorithm>
#include <cctype>

namespace detoxaudit {

std::string SectionName(SectionLabel label) {
  switch (label) {
    case SectionLabel::kIntro:
      return "intro";
    case SectionLabel::kVerse:
      return "verse";
    case SectionLabel::kChorus:
      return "chorus";
    case SectionLabel::kBridge:
      return "bridge";
    case SectionLabel::kOutro:
      return "outro";
    case SectionLabel::kUnknown:
      return "unknown";
  }
  return "unknown";
}

std::optional<SectionLabel> ParseSectionLabel(std::string_view text) {
  std::string s(text.substr(0, text.find(':')));
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  auto is_trim = [](unsigned char c) {
    return std::isspace(c) || std::isdigit(c) || c == '#' || c == '.';
  };
  while (!s.empty() && is_trim(static_cast<unsigned char>(s.back()))) s.pop_back();
  std::size_t b = 0;
  while (b < s.size() && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  s.erase(0, b);

  if (s == "intro") return SectionLabel::kIntro;
  if (s == "verse") return SectionLabel::kVerse;
  if (s == "chorus" || s == "hook" || s == "refrain") return SectionLabel::kChorus;
  if (s == "bridge") return SectionLabel::kBridge;
  if (s == "outro") return SectionLabel::kOutro;
  if (s == "unknown") return SectionLabel::kUnknown;
  return std::nullopt;
}

}  // namespace detoxaudit

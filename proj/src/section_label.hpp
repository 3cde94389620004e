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

#ifndef DETOXAUDIT_SECTION_LABEL_HPP_
#define DETOXAUDIT_SECTION_LABEL_HPP_

#include <array>
#include <optional>
#include <string>
#include <string_view>

namespace detoxaudit {

enum class SectionLabel { kIntro, kVerse, kChorus, kBridge, kOutro, kUnknown };

inline constexpr std::array<SectionLabel, 5> kSongSections = {
    SectionLabel::kIntro, SectionLabel::kVerse, SectionLabel::kChorus,
    SectionLabel::kBridge, SectionLabel::kOutro};

std::string SectionName(SectionLabel label);

// Case-insensitive; drops anything after ':' and trailing numbering, so
// "Verse 2" and "Chorus: Artist" fold to their base label. Returns nullopt for
// anything outside the closed set.
std::optional<SectionLabel> ParseSectionLabel(std::string_view text);

}  // namespace detoxaudit

#endif  // DETOXAUDIT_SECTION_LABEL_HPP_

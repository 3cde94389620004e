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

// The synthetic original/transformed vocal stem pair used by the acceptance
// suite, the pipeline tests and the README walkthrough.

#ifndef DETOXAUDIT_TOOLS_SYNTH_FIXTURES_HPP_
#define DETOXAUDIT_TOOLS_SYNTH_FIXTURES_HPP_

#include <filesystem>

#include "synth/synth.hpp"

namespace detoxaudit::synth {

inline constexpr double kFixtureRate = 22050.0;
inline constexpr const char* kOriginalStemName = "original_vocals.wav";
inline constexpr const char* kTransformedStemName = "transformed_vocals.wav";

// Rough, loud delivery.
VoiceSpec OriginalFixtureSpec();
// Cleaner, quieter delivery of the same line.
VoiceSpec TransformedFixtureSpec();

struct FixturePaths {
  std::filesystem::path original;
  std::filesystem::path transformed;
};

// Writes both stems as 16-bit PCM into `dir` (created if needed).
FixturePaths WriteFixtureStems(const std::filesystem::path& dir);

}  // namespace detoxaudit::synth

#endif  // DETOXAUDIT_TOOLS_SYNTH_FIXTURES_HPP_

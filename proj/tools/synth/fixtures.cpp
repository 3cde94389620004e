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

#include "synth/fixtures.hpp"

#include <cstdint>

#include "wav.hpp"

namespace detoxaudit::synth {

VoiceSpec OriginalFixtureSpec() {
  VoiceSpec s;
  s.f0 = 140.0;
  s.hnr_db = 6.0;
  s.jitter = 0.02;
  s.shimmer = 0.12;
  s.level = 0.9;
  s.seed = 11;
  return s;
}

VoiceSpec TransformedFixtureSpec() {
  VoiceSpec s;
  s.f0 = 140.0;
  s.hnr_db = 20.0;
  s.jitter = 0.004;
  s.shimmer = 0.03;
  s.level = 0.5;
  s.seed = 12;
  return s;
}

FixturePaths WriteFixtureStems(const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const auto rate = static_cast<std::uint32_t>(kFixtureRate);
  FixturePaths paths{dir / kOriginalStemName, dir / kTransformedStemName};
  WriteWav(paths.original, VoiceLike(OriginalFixtureSpec(), kFixtureRate), rate, 1,
           WavEncoding::kPcm16);
  WriteWav(paths.transformed, VoiceLike(TransformedFixtureSpec(), kFixtureRate), rate, 1,
           WavEncoding::kPcm16);
  return paths;
}

}  // namespace detoxaudit::synth

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

// Run configuration: one JSON document with a section per stage. Keys can be
// overridden individually with dotted paths such as "preprocess.target_rate".

#ifndef DETOXAUDIT_CONFIG_HPP_
#define DETOXAUDIT_CONFIG_HPP_

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "audio_io.hpp"
#include "json.hpp"
#include "providers.hpp"
#include "spectral.hpp"
#include "voice_quality.hpp"

namespace detoxaudit {

struct FeatureConfig {
  std::size_t frame_length = kDefaultFrameLength;
  std::size_t hop = kDefaultHop;
  WindowKind window = WindowKind::kHann;
  // Report-side spectrogram reduction (plot payload size).
  std::size_t spectrogram_max_columns = 256;
  std::size_t spectrogram_bands = 128;
  // Waveform envelope points stored per track.
  std::size_t waveform_points = 1000;

  void Validate() const;
};

struct LyricsConfig {
  std::string stopwords_path;  // empty: bundled list
  std::vector<std::size_t> ngram_orders = {1, 2, 3};
  std::size_t top_k = 10;
  std::size_t similarity_window = 5;

  void Validate() const;
};

struct AppConfig {
  PreprocessConfig preprocess;
  VoiceConfig voice;
  FeatureConfig features;
  LyricsConfig lyrics;
  ProvidersConfig providers;
  // Shell command run on each input stem before analysis; "{in}" and "{out}"
  // are replaced with the input path and the expected vocal stem path.
  std::string separator_cmd;

  void Validate() const;

  // With `redact`, auth tokens are replaced by "<set>" / "".
  nlohmann::ordered_json ToJson(bool redact = false) const;
  // Unknown keys are rejected. Missing keys keep their defaults.
  static AppConfig FromJson(const nlohmann::json& doc);

  // Dotted-path override. `value` is parsed as JSON when possible, otherwise
  // taken as a string.
  void Set(std::string_view dotted_key, std::string_view value);
  void SetValue(std::string_view dotted_key, const nlohmann::json& value);

  // FNV-1a of the redacted canonical JSON, as 16 hex digits.
  std::string Hash() const;
};

AppConfig LoadConfig(const std::filesystem::path& path);

}  // namespace detoxaudit

#endif  // DETOXAUDIT_CONFIG_HPP_

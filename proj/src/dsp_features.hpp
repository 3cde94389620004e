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

// Frame-level spectral and energy features.

#ifndef DETOXAUDIT_DSP_FEATURES_HPP_
#define DETOXAUDIT_DSP_FEATURES_HPP_

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "audio_io.hpp"
#include "section_label.hpp"
#include "spectral.hpp"

namespace detoxaudit {

inline constexpr std::size_t kDefaultFrameLength = 2048;
inline constexpr std::size_t kDefaultHop = 512;

struct Spectrogram {
  std::size_t frames = 0;
  std::size_t bins = 0;  // frame_length / 2 + 1
  std::vector<double> magnitudes;  // row-major, frames x bins
  std::vector<double> frame_times;  // seconds, frame centers
  std::size_t frame_length = 0;
  std::size_t hop = 0;
  double sample_rate = 0.0;
  WindowKind window = WindowKind::kHann;

  std::span<const double> frame(std::size_t f) const {
    return std::span<const double>(magnitudes).subspan(f * bins, bins);
  }
  double at(std::size_t f, std::size_t b) const { return magnitudes[f * bins + b]; }
  double bin_frequency(std::size_t b) const {
    return static_cast<double>(b) * sample_rate / static_cast<double>(frame_length);
  }
};

// Magnitude STFT without centering: frame k covers samples [k*hop, k*hop+L).
Spectrogram Stft(const AudioBuffer& buf, std::size_t frame_length = kDefaultFrameLength,
                 std::size_t hop = kDefaultHop, WindowKind window = WindowKind::kHann);

struct RmsSeries {
  std::vector<double> values;
  std::vector<double> frame_times;  // seconds, frame centers
};

// A buffer shorter than one frame yields a single frame over all samples.
RmsSeries FrameRms(const AudioBuffer& buf, std::size_t frame_length = kDefaultFrameLength,
                   std::size_t hop = kDefaultHop);

struct RmsStats {
  double avg = 0.0;
  double max = 0.0;
  double min = 0.0;
};

RmsStats ComputeRmsStats(const RmsSeries& series);

struct SectionEntry {
  SectionLabel label = SectionLabel::kVerse;
  double start = 0.0;  // seconds
  double end = 0.0;
};

struct SectionMap {
  std::vector<SectionEntry> entries;
};

// Sidecar format: one `label<TAB>mm:ss<TAB>mm:ss` entry per line. Blank lines
// and lines starting with '#' are ignored. Validates the closed label set,
// start < end, and that entries do not overlap.
SectionMap ParseSectionMap(std::string_view text);
SectionMap LoadSectionMap(const std::filesystem::path& path);

// "m:ss", "m:ss.fff", or plain seconds.
double ParseTimestamp(std::string_view text);

struct SlicedSection {
  SectionLabel label = SectionLabel::kVerse;
  double start = 0.0;
  double end = 0.0;
  AudioBuffer audio;
};

struct SliceResult {
  std::vector<SlicedSection> sections;
  std::vector<std::string> warnings;
};

// Copies one sub-buffer per map entry, in map order. Entries reaching past
// the buffer are clipped and reported in `warnings`.
SliceResult SliceSections(const AudioBuffer& buf, const SectionMap& map);

}  // namespace detoxaudit

#endif  // DETOXAUDIT_DSP_FEATURES_HPP_

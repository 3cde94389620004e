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

// Orchestration of the audio and lyric frameworks over a song pair.

#ifndef DETOXAUDIT_PIPELINE_HPP_
#define DETOXAUDIT_PIPELINE_HPP_

#include <filesystem>
#include <memory>
#include <optional>
#include <string>

#include "config.hpp"
#include "lyrics.hpp"
#include "providers.hpp"
#include "report.hpp"
#include "stopwords.hpp"

namespace detoxaudit {

struct TrackBundle {
  std::filesystem::path vocal_stem;
  std::filesystem::path lyrics;
  std::optional<std::filesystem::path> sections;
  std::string artist_id;

  void Validate() const;
};

// Envelope with at most `points` columns.
WaveformEnvelope ComputeWaveformEnvelope(const AudioBuffer& buf, std::size_t points);

// Averages STFT magnitudes over groups of frames and of bins, then converts
// to dB.
SpectrogramSummary SummarizeSpectrogram(const Spectrogram& spec, std::size_t max_columns,
                                        std::size_t bands);

// Analysis of an already preprocessed buffer (waveform, spectrogram, voice
// metrics, per-section loudness).
AudioAnalysis AnalyzePreprocessed(const AudioBuffer& buf, const SectionMap* sections,
                                  const AppConfig& cfg);

class Pipeline {
 public:
  explicit Pipeline(AppConfig cfg, std::shared_ptr<HttpTransport> transport = nullptr);

  const AppConfig& config() const { return cfg_; }
  const ProviderSet& providers() const { return providers_; }

  // Errors carry the track role and the failing stage.
  AudioAnalysis AnalyzeAudio(const std::filesystem::path& stem,
                             const std::optional<std::filesystem::path>& sections,
                             const std::string& role = "audio") const;
  LyricAnalysis AnalyzeLyrics(const std::filesystem::path& lyrics, LyricDoc* doc_out = nullptr,
                              const std::string& role = "lyrics") const;
  RewriteResult Rewrite(const std::filesystem::path& lyrics) const;

  // All four track analyses run concurrently.
  ComparisonReport Compare(const TrackBundle& original, const TrackBundle& transformed) const;

 private:
  std::filesystem::path Separate(const std::filesystem::path& stem) const;

  AppConfig cfg_;
  ProviderSet providers_;
  StopwordSet stopwords_;
  std::string stopwords_id_;
};

// Content hash of a file as 16 hex digits.
std::string HashFile(const std::filesystem::path& path);

// Current UTC time, ISO 8601 with milliseconds.
std::string UtcTimestamp();

}  // namespace detoxaudit

#endif  // DETOXAUDIT_PIPELINE_HPP_

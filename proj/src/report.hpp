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

// Comparison report: data model, JSON serialization and plot-data export.

#ifndef DETOXAUDIT_REPORT_HPP_
#define DETOXAUDIT_REPORT_HPP_

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dsp_features.hpp"
#include "json.hpp"
#include "lyrics.hpp"
#include "voice_quality.hpp"

namespace detoxaudit {

inline constexpr std::string_view kReportFormat = "detoxaudit-report/1";
inline constexpr std::string_view kToolVersion = "0.1.0";

// Per-column min/max of the preprocessed waveform.
struct WaveformEnvelope {
  std::vector<double> times;  // column centers, seconds
  std::vector<double> min;
  std::vector<double> max;
};

// Spectrogram reduced to a plot-sized grid of mean magnitudes in dB.
struct SpectrogramSummary {
  std::vector<double> times;        // seconds
  std::vector<double> frequencies;  // band centers, Hz
  std::vector<double> db;           // row-major, times x frequencies

  double at(std::size_t t, std::size_t f) const { return db[t * frequencies.size() + f]; }
};

struct SectionAudioStats {
  SectionLabel label = SectionLabel::kVerse;
  double start = 0.0;
  double end = 0.0;
  RmsStats rms;
};

struct AudioAnalysis {
  std::string source;
  double sample_rate = 0.0;
  double duration = 0.0;
  bool silent = false;
  VoiceMetrics metrics;
  std::optional<double> median_f0;
  std::vector<SectionAudioStats> sections;
  WaveformEnvelope waveform;
  SpectrogramSummary spectrogram;
  std::vector<std::string> warnings;
};

struct NgramTop {
  std::size_t n = 1;
  std::vector<std::pair<Ngram, std::size_t>> rows;
};

struct LyricAnalysis {
  std::string source;
  std::vector<SectionLabel> line_sections;
  std::vector<SentimentScore> line_scores;
  SentimentTable sentiment;
  std::vector<NgramTop> ngrams;
};

struct TrackAnalysis {
  std::string artist_id;
  AudioAnalysis audio;
  LyricAnalysis lyrics;
};

struct InputRecord {
  std::string role;
  std::string path;
  std::string fnv1a64;
};

struct Provenance {
  std::string tool_version = std::string(kToolVersion);
  std::string config_hash;
  nlohmann::ordered_json config = nlohmann::ordered_json::object();
  std::string sentiment_provider;
  std::string embedding_provider;
  std::string stopwords;
  bool offline = false;
  std::vector<InputRecord> inputs;
  // The only run-dependent fields.
  std::string started_at;
  std::string finished_at;
};

struct ComparisonReport {
  std::string artist_id;
  TrackAnalysis original;
  TrackAnalysis transformed;
  std::optional<double> percent_decrease;  // per-line sentiment mean
  SimilaritySeries similarity;
  std::optional<RadarPair> radar;
  std::vector<std::string> warnings;
  Provenance provenance;
};

// Pairs two analyzed tracks. Throws InputError when artist ids differ.
// Unmeasurable quantities stay absent and add a warning.
ComparisonReport BuildComparison(TrackAnalysis original, TrackAnalysis transformed,
                                 SimilaritySeries similarity);

nlohmann::ordered_json AudioToJson(const AudioAnalysis& audio);
AudioAnalysis AudioFromJson(const nlohmann::ordered_json& j);
nlohmann::ordered_json LyricsToJson(const LyricAnalysis& lyrics);
LyricAnalysis LyricsFromJson(const nlohmann::ordered_json& j);

// Deltas are written as transformed - original and recomputed on load.
nlohmann::ordered_json ReportToJson(const ComparisonReport& report);
ComparisonReport ReportFromJson(const nlohmann::ordered_json& j);

std::string SerializeReport(const ComparisonReport& report);
ComparisonReport ParseReport(std::string_view text);
ComparisonReport LoadReport(const std::filesystem::path& path);

// Writes to a sibling temporary file, then renames over `path`.
void WriteFileAtomic(const std::filesystem::path& path, std::string_view content);

enum class PlotKind { kWaveform, kSpectrogram, kNgram, kRadar, kSimilarity, kSentimentSections };

PlotKind ParsePlotKind(std::string_view name);
std::string PlotKindName(PlotKind kind);
std::vector<PlotKind> AllPlotKinds();

// CSV text for one plot. Every number is copied from the report.
std::string PlotCsv(const ComparisonReport& report, PlotKind kind);
void EmitPlotData(const ComparisonReport& report, PlotKind kind, const std::filesystem::path& path);

// Shortest decimal text that parses back to the same double.
std::string FormatDouble(double value);

}  // namespace detoxaudit

#endif  // DETOXAUDIT_REPORT_HPP_

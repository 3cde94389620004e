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

#include "pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <future>
#include <limits>
#include <sstream>

#include "error.hpp"
#include "text.hpp"

namespace detoxaudit {
namespace {

// Re-throws any error from `fn` prefixed with where it happened.
template <typename Fn>
auto Stage(const std::string& role, int stage, const char* name, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const Error& e) {
    throw Error(e.kind(), role + ", stage " + std::to_string(stage) + " (" + name + "): " +
                              e.what());
  } catch (const std::exception& e) {
    throw InternalError(role + ", stage " + std::to_string(stage) + " (" + name + "): " +
                        e.what());
  }
}

std::string ShellQuote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'') {
      out += "'\\''";
    } else {
      out += c;
    }
  }
  return out + "'";
}

void ReplaceAll(std::string& s, std::string_view from, const std::string& to) {
  for (std::size_t pos = s.find(from); pos != std::string::npos; pos = s.find(from, pos + to.size())) {
    s.replace(pos, from.size(), to);
  }
}

std::string ReadText(const std::filesystem::path& path, const char* what) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(std::string("cannot read ") + what + ": " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

void TrackBundle::Validate() const {
  if (vocal_stem.empty()) throw InputError("track bundle has no vocal stem");
  if (lyrics.empty()) throw InputError("track bundle has no lyrics file");
}

std::string HashFile(const std::filesystem::path& path) {
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016llx",
                static_cast<unsigned long long>(Fnv1a64(ReadText(path, "input file"))));
  return hex;
}

std::string UtcTimestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(now.time_since_epoch()) %
                  1000;
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%S", &tm);
  char out[40];
  std::snprintf(out, sizeof out, "%s.%03dZ", buf, static_cast<int>(ms.count()));
  return out;
}

WaveformEnvelope ComputeWaveformEnvelope(const AudioBuffer& buf, std::size_t points) {
  WaveformEnvelope env;
  const std::size_t n = buf.samples.size();
  if (n == 0 || points == 0) return env;
  const std::size_t cols = std::min(points, n);
  for (std::size_t c = 0; c < cols; ++c) {
    const std::size_t b = c * n / cols;
    const std::size_t e = (c + 1) * n / cols;
    const auto [lo, hi] = std::minmax_element(buf.samples.begin() + b, buf.samples.begin() + e);
    env.times.push_back(0.5 * static_cast<double>(b + e) / buf.sample_rate);
    env.min.push_back(*lo);
    env.max.push_back(*hi);
  }
  return env;
}

SpectrogramSummary SummarizeSpectrogram(const Spectrogram& spec, std::size_t max_columns,
                                        std::size_t bands) {
  SpectrogramSummary out;
  if (spec.frames == 0 || spec.bins == 0) return out;
  const std::size_t cols = std::min(max_columns, spec.frames);
  const std::size_t rows = std::min(bands, spec.bins);
  for (std::size_t r = 0; r < rows; ++r) {
    const std::size_t b0 = r * spec.bins / rows;
    const std::size_t b1 = (r + 1) * spec.bins / rows;
    out.frequencies.push_back(0.5 * (spec.bin_frequency(b0) + spec.bin_frequency(b1 - 1)));
  }
  out.db.reserve(cols * rows);
  for (std::size_t c = 0; c < cols; ++c) {
    const std::size_t f0 = c * spec.frames / cols;
    const std::size_t f1 = (c + 1) * spec.frames / cols;
    out.times.push_back(0.5 * (spec.frame_times[f0] + spec.frame_times[f1 - 1]));
    for (std::size_t r = 0; r < rows; ++r) {
      const std::size_t b0 = r * spec.bins / rows;
      const std::size_t b1 = (r + 1) * spec.bins / rows;
      double sum = 0.0;
      for (std::size_t f = f0; f < f1; ++f) {
        for (std::size_t b = b0; b < b1; ++b) sum += spec.at(f, b);
      }
      out.db.push_back(MagnitudeToDb(sum / static_cast<double>((f1 - f0) * (b1 - b0))));
    }
  }
  return out;
}

AudioAnalysis AnalyzePreprocessed(const AudioBuffer& buf, const SectionMap* sections,
                                  const AppConfig& cfg) {
  AudioAnalysis a;
  a.source = buf.source_id;
  a.sample_rate = buf.sample_rate;
  a.duration = buf.duration();
  a.silent = buf.silent;
  a.waveform = ComputeWaveformEnvelope(buf, cfg.features.waveform_points);
  if (buf.samples.size() >= cfg.features.frame_length) {
    a.spectrogram = SummarizeSpectrogram(
        Stft(buf, cfg.features.frame_length, cfg.features.hop, cfg.features.window),
        cfg.features.spectrogram_max_columns, cfg.features.spectrogram_bands);
  } else {
    a.warnings.push_back("track shorter than one spectrogram frame");
  }
  a.metrics = VoiceReport(buf, cfg.voice);
  a.median_f0 = EstimateF0(buf, cfg.voice).median_f0();
  if (buf.silent) a.warnings.push_back("track is silent");
  if (sections != nullptr) {
    SliceResult sliced = SliceSections(buf, *sections);
    for (std::string& w : sliced.warnings) a.warnings.push_back(std::move(w));
    for (const SlicedSection& s : sliced.sections) {
      a.sections.push_back({s.label, s.start, s.end,
                            ComputeRmsStats(FrameRms(s.audio, cfg.voice.rms_frame,
                                                     cfg.voice.rms_hop))});
    }
  }
  return a;
}

Pipeline::Pipeline(AppConfig cfg, std::shared_ptr<HttpTransport> transport)
    : cfg_(std::move(cfg)) {
  cfg_.Validate();
  providers_ = MakeProviders(cfg_.providers, std::move(transport));
  if (cfg_.lyrics.stopwords_path.empty()) {
    stopwords_ = DefaultStopwords();
    stopwords_id_ = std::string(kStopwordListId);
  } else {
    stopwords_ = LoadStopwords(cfg_.lyrics.stopwords_path);
    stopwords_id_ = "file:" + HashFile(cfg_.lyrics.stopwords_path);
  }
}

std::filesystem::path Pipeline::Separate(const std::filesystem::path& stem) const {
  char name[64];
  std::snprintf(name, sizeof name, "detoxaudit-vocals-%016llx.wav",
                static_cast<unsigned long long>(Fnv1a64(std::filesystem::absolute(stem).string())));
  const std::filesystem::path out = std::filesystem::temp_directory_path() / name;
  std::string cmd = cfg_.separator_cmd;
  ReplaceAll(cmd, "{in}", ShellQuote(stem.string()));
  ReplaceAll(cmd, "{out}", ShellQuote(out.string()));
  const int rc = std::system(cmd.c_str());
  if (rc != 0) {
    throw InputError("separator command exited with status " + std::to_string(rc));
  }
  if (!std::filesystem::exists(out)) {
    throw InputError("separator command did not produce " + out.string());
  }
  return out;
}

AudioAnalysis Pipeline::AnalyzeAudio(const std::filesystem::path& stem,
                                     const std::optional<std::filesystem::path>& sections,
                                     const std::string& role) const {
  std::optional<SectionMap> map;
  AudioBuffer raw = Stage(role, 1, "collection", [&] {
    if (sections) map = LoadSectionMap(*sections);
    if (cfg_.separator_cmd.empty()) return LoadTrack(stem);
    if (!std::filesystem::is_regular_file(stem)) throw InputError("unreadable file: " + stem.string());
    return AudioBuffer{};
  });
  if (!cfg_.separator_cmd.empty()) {
    raw = Stage(role, 2, "separation", [&] {
      const std::filesystem::path vocals = Separate(stem);
      AudioBuffer b = LoadTrack(vocals);
      std::error_code ec;
      std::filesystem::remove(vocals, ec);
      b.source_id = stem.string();
      return b;
    });
  }
  const AudioBuffer clean =
      Stage(role, 3, "preprocess", [&] { return Preprocess(raw, cfg_.preprocess); });
  AudioAnalysis analysis = Stage(role, 4, "analysis", [&] {
    return AnalyzePreprocessed(clean, map ? &*map : nullptr, cfg_);
  });
  analysis.source = stem.string();
  return analysis;
}

LyricAnalysis Pipeline::AnalyzeLyrics(const std::filesystem::path& lyrics, LyricDoc* doc_out,
                                      const std::string& role) const {
  const std::string text =
      Stage(role, 1, "lyric collection", [&] { return ReadText(lyrics, "lyrics file"); });
  LyricAnalysis out;
  out.source = lyrics.string();
  const LyricDoc doc = Stage(role, 2, "preprocess", [&] {
    LyricDoc d = ParseLyrics(text, stopwords_);
    if (d.line_count() == 0) throw InputError("lyrics file has no lines");
    for (std::size_t n : cfg_.lyrics.ngram_orders) {
      out.ngrams.push_back({n, NgramCounts(d, n).Top(cfg_.lyrics.top_k)});
    }
    return d;
  });
  Stage(role, 3, "sentiment", [&] {
    out.line_sections = doc.line_labels();
    out.line_scores =
        ScoreDocument(doc, *providers_.sentiment, cfg_.providers.max_concurrency);
    out.sentiment = BuildSentimentTable(out.line_scores, doc);
    return 0;
  });
  if (doc_out != nullptr) *doc_out = doc;
  return out;
}

RewriteResult Pipeline::Rewrite(const std::filesystem::path& lyrics) const {
  const std::string text =
      Stage("rewrite", 1, "lyric collection", [&] { return ReadText(lyrics, "lyrics file"); });
  return Stage("rewrite", 3, "rewrite", [&] {
    RewriteRequest req{text, cfg_.providers.prompt_template};
    return providers_.rewrite->Rewrite(req);
  });
}

ComparisonReport Pipeline::Compare(const TrackBundle& original,
                                   const TrackBundle& transformed) const {
  const std::string started = UtcTimestamp();
  original.Validate();
  transformed.Validate();
  if (original.artist_id != transformed.artist_id) {
    throw InputError("artist_id mismatch: '" + original.artist_id + "' vs '" +
                     transformed.artist_id + "'");
  }

  LyricDoc doc_a, doc_b;
  auto audio_a = std::async(std::launch::async, [&] {
    return AnalyzeAudio(original.vocal_stem, original.sections, "original audio");
  });
  auto audio_b = std::async(std::launch::async, [&] {
    return AnalyzeAudio(transformed.vocal_stem, transformed.sections, "transformed audio");
  });
  auto lyrics_a = std::async(std::launch::async, [&] {
    return AnalyzeLyrics(original.lyrics, &doc_a, "original lyrics");
  });
  auto lyrics_b = std::async(std::launch::async, [&] {
    return AnalyzeLyrics(transformed.lyrics, &doc_b, "transformed lyrics");
  });

  // Join everything before rethrowing so no task outlives its captures.
  std::exception_ptr first_error;
  auto take = [&](auto& fut) {
    using T = decltype(fut.get());
    try {
      return std::optional<T>(fut.get());
    } catch (...) {
      if (!first_error) first_error = std::current_exception();
      return std::optional<T>();
    }
  };
  auto oa = take(audio_a);
  auto ob = take(audio_b);
  auto la = take(lyrics_a);
  auto lb = take(lyrics_b);
  if (first_error) std::rethrow_exception(first_error);

  SimilaritySeries similarity = Stage("lyrics", 4, "similarity", [&] {
    return LineSimilarity(doc_a, doc_b, *providers_.embedding, cfg_.lyrics.similarity_window,
                          cfg_.providers.max_concurrency);
  });

  TrackAnalysis ta{original.artist_id, std::move(*oa), std::move(*la)};
  TrackAnalysis tb{transformed.artist_id, std::move(*ob), std::move(*lb)};
  ComparisonReport report = BuildComparison(std::move(ta), std::move(tb), std::move(similarity));

  Provenance& p = report.provenance;
  p.config_hash = cfg_.Hash();
  p.config = cfg_.ToJson(/*redact=*/true);
  p.sentiment_provider = providers_.sentiment->identity();
  p.embedding_provider = providers_.embedding->identity();
  p.stopwords = stopwords_id_;
  p.offline = cfg_.providers.offline;
  auto record = [&](const std::string& role, const std::filesystem::path& path) {
    p.inputs.push_back({role, path.string(), HashFile(path)});
  };
  record("original.vocal_stem", original.vocal_stem);
  record("original.lyrics", original.lyrics);
  if (original.sections) record("original.sections", *original.sections);
  record("transformed.vocal_stem", transformed.vocal_stem);
  record("transformed.lyrics", transformed.lyrics);
  if (transformed.sections) record("transformed.sections", *transformed.sections);
  p.started_at = started;
  p.finished_at = UtcTimestamp();
  return report;
}

}  // namespace detoxaudit

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

// Lyric parsing, token cleaning, n-gram counts, sentiment aggregation and
// line-level semantic similarity.

#ifndef DETOXAUDIT_LYRICS_HPP_
#define DETOXAUDIT_LYRICS_HPP_

#include <array>
#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "error.hpp"
#include "providers.hpp"
#include "section_label.hpp"
#include "stopwords.hpp"

namespace detoxaudit {

struct LyricSection {
  SectionLabel label = SectionLabel::kUnknown;
  std::vector<std::string> lines;
};

struct LyricDoc {
  std::vector<LyricSection> sections;
  // Cleaned tokens for every line, in document order.
  std::vector<std::vector<std::string>> tokens;

  std::size_t line_count() const { return tokens.size(); }
  // Raw lines in document order.
  std::vector<std::string> lines() const;
  // Section label of every line, in document order.
  std::vector<SectionLabel> line_labels() const;
};

// Lowercase tokens with stopwords removed; see Tokenize for the character
// rules.
std::vector<std::string> CleanTokens(std::string_view line, const StopwordSet& stopwords);

// A line consisting of a bracketed header starts a new section. Headers that
// do not name a known section start an "unknown" section. Lines before the
// first header belong to "unknown". Blank lines are dropped.
LyricDoc ParseLyrics(std::string_view text, const StopwordSet& stopwords = DefaultStopwords());
LyricDoc LoadLyrics(const std::filesystem::path& path,
                    const StopwordSet& stopwords = DefaultStopwords());

using Ngram = std::vector<std::string>;

struct NgramTable {
  std::size_t n = 1;
  std::map<Ngram, std::size_t> counts;

  std::size_t total() const;
  // Highest counts first, equal counts in lexicographic order.
  std::vector<std::pair<Ngram, std::size_t>> Top(std::size_t k) const;
};

// Grams never span two lines.
NgramTable NgramCounts(std::span<const std::vector<std::string>> token_lines, std::size_t n);
NgramTable NgramCounts(const LyricDoc& doc, std::size_t n);

// Maps (label, confidence) onto one negativity axis: POSITIVE lands in
// [0, 0.5], NEGATIVE in [0.5, 1].
double StandardizeSentiment(SentimentLabel label, double score);

struct SentimentScore {
  SentimentLabel label = SentimentLabel::kPositive;
  double score = 0.0;
  double standardized = 0.5;
};

SentimentScore MakeSentimentScore(const SentimentResult& result);

// Raised when some provider calls failed. Carries what did succeed.
class PartialResultError : public Error {
 public:
  PartialResultError(ErrorKind kind, const std::string& message,
                     std::vector<std::size_t> failed_lines)
      : Error(kind, message), failed_lines_(std::move(failed_lines)) {}
  const std::vector<std::size_t>& failed_lines() const { return failed_lines_; }

 private:
  std::vector<std::size_t> failed_lines_;
};

// One score per line, in order. Each distinct line text is sent once; at most
// `max_concurrency` requests are in flight.
std::vector<SentimentScore> ScoreDocument(const LyricDoc& doc, SentimentProvider& provider,
                                          std::size_t max_concurrency = 4);

inline constexpr std::size_t kSectionLabelCount = 6;

struct SentimentTable {
  // Indexed by SectionLabel; empty where the song has no such section.
  std::array<std::optional<double>, kSectionLabelCount> section_means;
  std::optional<double> per_line_mean;
  std::size_t lines = 0;

  std::optional<double> mean(SectionLabel label) const {
    return section_means[static_cast<std::size_t>(label)];
  }
};

// Section means average the standardized scores of the lines in each section.
SentimentTable BuildSentimentTable(std::span<const SentimentScore> scores, const LyricDoc& doc);

// 100 * (original - transformed) / original. Requires original > 0.
double PercentDecrease(double original_mean, double transformed_mean);

// Half-away-from-zero rounding to `decimals` places, for display.
double RoundTo(double value, int decimals);

// Throws InputError on dimension mismatch or a zero vector.
double CosineSimilarity(std::span<const double> a, std::span<const double> b);

// Windowed means without edge padding; length max(n - window + 1, 0).
std::vector<double> RollingMean(std::span<const double> series, std::size_t window);

inline constexpr std::size_t kDefaultSimilarityWindow = 5;

struct SimilaritySeries {
  std::vector<double> per_line;
  std::vector<double> rolling;
  std::size_t window = kDefaultSimilarityWindow;
  double mean = 0.0;
  std::size_t unpaired = 0;  // lines beyond the shorter document
};

// Pairs lines by index and compares their embeddings.
SimilaritySeries LineSimilarity(const LyricDoc& original, const LyricDoc& transformed,
                                EmbeddingProvider& embedder,
                                std::size_t window = kDefaultSimilarityWindow,
                                std::size_t max_concurrency = 4);

}  // namespace detoxaudit

#endif  // DETOXAUDIT_LYRICS_HPP_

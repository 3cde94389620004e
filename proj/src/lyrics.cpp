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

#include "lyrics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>
#include <thread>
#include <unordered_map>

#include "text.hpp"

namespace detoxaudit {
namespace {

// Runs fn(i) for i in [0, n) on up to `workers` threads. Exceptions are
// captured per index.
std::vector<std::exception_ptr> BoundedParallelFor(std::size_t n, std::size_t workers,
                                                   const std::function<void(std::size_t)>& fn) {
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto run = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  workers = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(n, 1));
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(run);
  run();
  for (std::thread& t : pool) t.join();
  return errors;
}

// Unique texts plus, for every input, the index of its unique entry.
std::pair<std::vector<std::string>, std::vector<std::size_t>> Dedupe(
    const std::vector<std::string>& texts) {
  std::vector<std::string> unique;
  std::vector<std::size_t> index(texts.size());
  std::unordered_map<std::string, std::size_t> seen;
  for (std::size_t i = 0; i < texts.size(); ++i) {
    auto [it, inserted] = seen.emplace(texts[i], unique.size());
    if (inserted) unique.push_back(texts[i]);
    index[i] = it->second;
  }
  return {std::move(unique), std::move(index)};
}

// Summarizes failed unique requests as failed line numbers (1-based).
[[noreturn]] void ThrowPartial(std::string_view what, const std::vector<std::exception_ptr>& errors,
                               const std::vector<std::size_t>& index, std::size_t total) {
  std::vector<std::size_t> failed;
  for (std::size_t i = 0; i < index.size(); ++i) {
    if (errors[index[i]]) failed.push_back(i + 1);
  }
  ErrorKind kind = ErrorKind::kProvider;
  std::string first;
  for (const std::exception_ptr& e : errors) {
    if (!e) continue;
    try {
      std::rethrow_exception(e);
    } catch (const Error& err) {
      kind = err.kind();
      first = err.what();
    } catch (const std::exception& err) {
      kind = ErrorKind::kInternal;
      first = err.what();
    }
    break;
  }
  std::ostringstream msg;
  msg << what << " failed for " << failed.size() << " of " << total << " lines (lines";
  for (std::size_t k = 0; k < failed.size() && k < 20; ++k) msg << ' ' << failed[k];
  if (failed.size() > 20) msg << " ...";
  msg << "): " << first;
  throw PartialResultError(kind, msg.str(), std::move(failed));
}

bool IsHeader(std::string_view line) {
  return line.size() >= 2 && line.front() == '[' && line.back() == ']';
}

}  // namespace

std::vector<std::string> LyricDoc::lines() const {
  std::vector<std::string> out;
  for (const LyricSection& s : sections) out.insert(out.end(), s.lines.begin(), s.lines.end());
  return out;
}

std::vector<SectionLabel> LyricDoc::line_labels() const {
  std::vector<SectionLabel> out;
  for (const LyricSection& s : sections) out.insert(out.end(), s.lines.size(), s.label);
  return out;
}

std::vector<std::string> CleanTokens(std::string_view line, const StopwordSet& stopwords) {
  std::vector<std::string> tokens = Tokenize(line);
  std::erase_if(tokens, [&](const std::string& t) { return stopwords.count(t) != 0; });
  return tokens;
}

LyricDoc ParseLyrics(std::string_view text, const StopwordSet& stopwords) {
  LyricDoc doc;
  bool open = false;
  for (const std::string& raw : SplitLines(text)) {
    const std::string_view line = TrimView(raw);
    if (line.empty()) continue;
    if (IsHeader(line)) {
      const auto label = ParseSectionLabel(line.substr(1, line.size() - 2));
      doc.sections.push_back({label.value_or(SectionLabel::kUnknown), {}});
      open = true;
      continue;
    }
    if (!open) {
      doc.sections.push_back({SectionLabel::kUnknown, {}});
      open = true;
    }
    doc.sections.back().lines.emplace_back(line);
    doc.tokens.push_back(CleanTokens(line, stopwords));
  }
  std::erase_if(doc.sections, [](const LyricSection& s) { return s.lines.empty(); });
  return doc;
}

LyricDoc LoadLyrics(const std::filesystem::path& path, const StopwordSet& stopwords) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read lyrics file: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ParseLyrics(ss.str(), stopwords);
}

std::size_t NgramTable::total() const {
  std::size_t sum = 0;
  for (const auto& [gram, count] : counts) sum += count;
  return sum;
}

std::vector<std::pair<Ngram, std::size_t>> NgramTable::Top(std::size_t k) const {
  std::vector<std::pair<Ngram, std::size_t>> rows(counts.begin(), counts.end());
  // counts is already lexicographic, so a stable sort on count keeps ties in order.
  std::stable_sort(rows.begin(), rows.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  if (rows.size() > k) rows.resize(k);
  return rows;
}

NgramTable NgramCounts(std::span<const std::vector<std::string>> token_lines, std::size_t n) {
  if (n < 1) throw InputError("n-gram order must be at least 1");
  NgramTable table;
  table.n = n;
  for (const std::vector<std::string>& tokens : token_lines) {
    for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
      ++table.counts[Ngram(tokens.begin() + i, tokens.begin() + i + n)];
    }
  }
  return table;
}

NgramTable NgramCounts(const LyricDoc& doc, std::size_t n) {
  return NgramCounts(std::span<const std::vector<std::string>>(doc.tokens), n);
}

double StandardizeSentiment(SentimentLabel label, double score) {
  if (!(score >= 0.0 && score <= 1.0)) {
    throw InputError("sentiment score outside [0, 1]: " + std::to_string(score));
  }
  return label == SentimentLabel::kPositive ? 0.5 - (score - 0.5) : 0.5 + (score - 0.5);
}

SentimentScore MakeSentimentScore(const SentimentResult& result) {
  return {result.label, result.score, StandardizeSentiment(result.label, result.score)};
}

std::vector<SentimentScore> ScoreDocument(const LyricDoc& doc, SentimentProvider& provider,
                                          std::size_t max_concurrency) {
  const std::vector<std::string> lines = doc.lines();
  auto [unique, index] = Dedupe(lines);
  std::vector<SentimentScore> unique_scores(unique.size());
  const auto errors = BoundedParallelFor(unique.size(), max_concurrency, [&](std::size_t i) {
    unique_scores[i] = MakeSentimentScore(provider.Classify(unique[i]));
  });
  if (std::any_of(errors.begin(), errors.end(), [](const auto& e) { return e != nullptr; })) {
    ThrowPartial("sentiment scoring", errors, index, lines.size());
  }
  std::vector<SentimentScore> scores(lines.size());
  for (std::size_t i = 0; i < lines.size(); ++i) scores[i] = unique_scores[index[i]];
  return scores;
}

SentimentTable BuildSentimentTable(std::span<const SentimentScore> scores, const LyricDoc& doc) {
  const std::vector<SectionLabel> labels = doc.line_labels();
  if (labels.size() != scores.size()) {
    throw InputError("sentiment scores do not align with lyric lines");
  }
  std::array<double, kSectionLabelCount> sums{};
  std::array<std::size_t, kSectionLabelCount> counts{};
  double total = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const auto s = static_cast<std::size_t>(labels[i]);
    sums[s] += scores[i].standardized;
    ++counts[s];
    total += scores[i].standardized;
  }
  SentimentTable table;
  table.lines = scores.size();
  for (std::size_t s = 0; s < kSectionLabelCount; ++s) {
    if (counts[s] > 0) table.section_means[s] = sums[s] / static_cast<double>(counts[s]);
  }
  if (!scores.empty()) table.per_line_mean = total / static_cast<double>(scores.size());
  return table;
}

double PercentDecrease(double original_mean, double transformed_mean) {
  if (!(original_mean > 0.0)) {
    throw InputError("percent decrease needs a positive original mean");
  }
  return 100.0 * (original_mean - transformed_mean) / original_mean;
}

double RoundTo(double value, int decimals) {
  const double scale = std::pow(10.0, decimals);
  // Nudge by a few ulps so values like 63.25 stored as 63.2499999 round up.
  const double scaled = value * scale;
  const double nudged = scaled + std::copysign(std::abs(scaled) * 4e-16, scaled);
  return std::round(nudged) / scale;
}

double CosineSimilarity(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw InputError("embedding dimensions differ");
  if (std::equal(a.begin(), a.end(), b.begin(), b.end()) && !a.empty()) {
    bool nonzero = std::any_of(a.begin(), a.end(), [](double x) { return x != 0.0; });
    if (nonzero) return 1.0;
  }
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (!(na > 0.0) || !(nb > 0.0)) throw InputError("cosine similarity of a zero vector");
  return std::clamp(dot / std::sqrt(na * nb), -1.0, 1.0);
}

std::vector<double> RollingMean(std::span<const double> series, std::size_t window) {
  if (window < 1) throw InputError("rolling window must be at least 1");
  std::vector<double> out;
  if (series.size() < window) return out;
  out.reserve(series.size() - window + 1);
  for (std::size_t i = 0; i + window <= series.size(); ++i) {
    double sum = 0.0;
    for (std::size_t j = i; j < i + window; ++j) sum += series[j];
    out.push_back(sum / static_cast<double>(window));
  }
  return out;
}

SimilaritySeries LineSimilarity(const LyricDoc& original, const LyricDoc& transformed,
                                EmbeddingProvider& embedder, std::size_t window,
                                std::size_t max_concurrency) {
  if (original.line_count() == 0 || transformed.line_count() == 0) {
    throw InputError("line similarity needs two non-empty lyric documents");
  }
  const std::vector<std::string> a = original.lines();
  const std::vector<std::string> b = transformed.lines();
  const std::size_t pairs = std::min(a.size(), b.size());

  std::vector<std::string> texts(a.begin(), a.begin() + pairs);
  texts.insert(texts.end(), b.begin(), b.begin() + pairs);
  auto [unique, index] = Dedupe(texts);
  std::vector<EmbeddingVector> vectors(unique.size());
  const auto errors = BoundedParallelFor(unique.size(), max_concurrency, [&](std::size_t i) {
    vectors[i] = embedder.Embed(unique[i]);
  });
  if (std::any_of(errors.begin(), errors.end(), [](const auto& e) { return e != nullptr; })) {
    // Report in terms of pair index, not the concatenated list.
    std::vector<std::size_t> pair_index(pairs);
    std::vector<std::exception_ptr> pair_errors(pairs);
    for (std::size_t i = 0; i < pairs; ++i) {
      pair_index[i] = i;
      pair_errors[i] = errors[index[i]] ? errors[index[i]] : errors[index[pairs + i]];
    }
    ThrowPartial("embedding", pair_errors, pair_index, pairs);
  }

  SimilaritySeries series;
  series.window = window;
  series.unpaired = std::max(a.size(), b.size()) - pairs;
  series.per_line.reserve(pairs);
  for (std::size_t i = 0; i < pairs; ++i) {
    series.per_line.push_back(CosineSimilarity(vectors[index[i]].components,
                                               vectors[index[pairs + i]].components));
  }
  double sum = 0.0;
  for (double v : series.per_line) sum += v;
  series.mean = sum / static_cast<double>(pairs);
  series.rolling = RollingMean(series.per_line, window);
  return series;
}

}  // namespace detoxaudit

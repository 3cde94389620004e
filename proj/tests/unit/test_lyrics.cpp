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

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <mutex>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "doctest.h"
#include "error.hpp"
#include "lyrics.hpp"
#include "providers.hpp"
#include "test_util.hpp"

using namespace detoxaudit;

namespace {

class CountingSentiment : public SentimentProvider {
 public:
  explicit CountingSentiment(SentimentResult fixed) : fixed_(fixed) {}
  std::string identity() const override { return "counting"; }
  SentimentResult Classify(std::string_view text) override {
    std::lock_guard<std::mutex> lock(mu_);
    ++calls_[std::string(text)];
    return fixed_;
  }
  std::size_t calls(const std::string& text) {
    std::lock_guard<std::mutex> lock(mu_);
    return calls_[text];
  }
  std::size_t total() {
    std::lock_guard<std::mutex> lock(mu_);
    std::size_t n = 0;
    for (const auto& [k, v] : calls_) n += v;
    return n;
  }

 private:
  SentimentResult fixed_;
  std::mutex mu_;
  std::map<std::string, std::size_t> calls_;
};

class FailingOn : public SentimentProvider {
 public:
  explicit FailingOn(std::string bad) : bad_(std::move(bad)) {}
  std::string identity() const override { return "failing"; }
  SentimentResult Classify(std::string_view text) override {
    if (text.find(bad_) != std::string_view::npos) throw ProviderError("boom");
    return {SentimentLabel::kPositive, 0.9};
  }

 private:
  std::string bad_;
};

// Every distinct text gets its own basis vector.
class OrthogonalEmbedder : public EmbeddingProvider {
 public:
  std::string identity() const override { return "orthogonal"; }
  EmbeddingVector Embed(std::string_view text) override {
    std::lock_guard<std::mutex> lock(mu_);
    const auto [it, inserted] = index_.emplace(std::string(text), index_.size());
    EmbeddingVector v;
    v.components.assign(64, 0.0);
    v.components[it->second % 64] = 1.0;
    return v;
  }

 private:
  std::mutex mu_;
  std::map<std::string, std::size_t> index_;
};

std::vector<double> BruteRolling(const std::vector<double>& s, std::size_t w) {
  std::vector<double> out;
  for (std::size_t i = 0; i + w <= s.size(); ++i) {
    double acc = 0.0;
    for (std::size_t j = i; j < i + w; ++j) acc += s[j];
    out.push_back(acc / static_cast<double>(w));
  }
  return out;
}

}  // namespace

TEST_SUITE("lyrics") {

TEST_CASE("headers start sections") {
  const LyricDoc a = ParseLyrics("[Chorus]\nhello world");
  REQUIRE(a.sections.size() == 1);
  CHECK(a.sections[0].label == SectionLabel::kChorus);
  CHECK(a.sections[0].lines == std::vector<std::string>{"hello world"});
  CHECK(a.line_count() == 1);

  const LyricDoc b = ParseLyrics("[Verse 2]\na\n[Outro]\nb");
  REQUIRE(b.sections.size() == 2);
  CHECK(b.sections[0].label == SectionLabel::kVerse);
  CHECK(b.sections[0].lines == std::vector<std::string>{"a"});
  CHECK(b.sections[1].label == SectionLabel::kOutro);
  CHECK(b.sections[1].lines == std::vector<std::string>{"b"});
}

TEST_CASE("every song-section label parses; others become unknown") {
  const LyricDoc d = ParseLyrics(
      "before\n[Intro]\ni\n[Verse 1: Someone]\nv\n[Chorus]\nc\n[Bridge]\nbr\n[Outro]\no\n"
      "[Skit]\ns\n\n\n");
  const std::vector<SectionLabel> want = {SectionLabel::kUnknown, SectionLabel::kIntro,
                                          SectionLabel::kVerse,   SectionLabel::kChorus,
                                          SectionLabel::kBridge,  SectionLabel::kOutro,
                                          SectionLabel::kUnknown};
  REQUIRE(d.sections.size() == want.size());
  for (std::size_t i = 0; i < want.size(); ++i) CHECK(d.sections[i].label == want[i]);
  CHECK(d.line_count() == 7);
  CHECK(d.line_labels().back() == SectionLabel::kUnknown);
}

TEST_CASE("token cleaning") {
  StopwordSet the{"the"};
  CHECK(CleanTokens("The Quick, Fox!", the) == std::vector<std::string>{"quick", "fox"});
  CHECK(CleanTokens("wet-*ss p*ssy", {}) == std::vector<std::string>{"wet", "*ss", "p*ssy"});
  CHECK(CleanTokens("", the).empty());
  CHECK(CleanTokens("don’t stop", {}) == std::vector<std::string>{"don't", "stop"});
}

TEST_CASE("property: token cleaning is idempotent") {
  const std::vector<std::string> lines = {
      "The Quick, Fox!", "wet-*ss p*ssy", "I'm 'bout to GO -- now...", "  ", "Ça va? Très bien",
      "n*gga heil hitler", "'quoted' words' here'"};
  for (const auto& line : lines) {
    const auto once = CleanTokens(line, DefaultStopwords());
    std::string joined;
    for (const auto& t : once) joined += t + " ";
    CHECK(CleanTokens(joined, DefaultStopwords()) == once);
  }
}

TEST_CASE("stopword lists") {
  CHECK(DefaultStopwords().count("the") == 1);
  CHECK(DefaultStopwords().count("a") == 1);
  const StopwordSet s = ParseStopwords("# comment\nFoo\n\n bar \n");
  CHECK(s == StopwordSet{"foo", "bar"});
}

TEST_CASE("n-gram counts") {
  const std::vector<std::vector<std::string>> lines = {{"heil", "hitler", "heil", "hitler"}};
  const NgramTable t = NgramCounts(lines, 2);
  CHECK(t.counts.size() == 2);
  CHECK(t.counts.at({"heil", "hitler"}) == 2);
  CHECK(t.counts.at({"hitler", "heil"}) == 1);
  CHECK(NgramCounts(LyricDoc{}, 1).counts.empty());
  CHECK_THROWS_AS(NgramCounts(lines, 0), Error);
}

TEST_CASE("grams never cross lines and ties sort lexicographically") {
  const LyricDoc d = ParseLyrics("b a\nc d\nb a\nz y\n", StopwordSet{});
  const NgramTable t = NgramCounts(d, 2);
  CHECK(t.counts.count({"a", "c"}) == 0);
  const auto top = t.Top(10);
  REQUIRE(top.size() == 3);
  CHECK(top[0].first == Ngram{"b", "a"});
  CHECK(top[0].second == 2);
  CHECK(top[1].first == Ngram{"c", "d"});
  CHECK(top[2].first == Ngram{"z", "y"});
  CHECK(t.Top(1).size() == 1);
}

TEST_CASE("property: n-gram total matches the per-line count formula") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> len(0, 9);
  std::uniform_int_distribution<int> word(0, 4);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<std::vector<std::string>> lines(6);
    for (auto& l : lines) {
      const int n = len(rng);
      for (int i = 0; i < n; ++i) l.push_back(std::string(1, static_cast<char>('a' + word(rng))));
    }
    for (std::size_t n = 1; n <= 4; ++n) {
      std::size_t expected = 0;
      for (const auto& l : lines) expected += l.size() >= n ? l.size() - n + 1 : 0;
      CHECK(NgramCounts(lines, n).total() == expected);
    }
  }
}

TEST_CASE("sentiment standardization worked examples") {
  CHECK(std::abs(StandardizeSentiment(SentimentLabel::kPositive, 0.999) - 0.001) <= 1e-12);
  CHECK(std::abs(StandardizeSentiment(SentimentLabel::kNegative, 0.992) - 0.992) <= 1e-12);
  CHECK(StandardizeSentiment(SentimentLabel::kPositive, 0.5) == 0.5);
  CHECK(StandardizeSentiment(SentimentLabel::kNegative, 0.5) == 0.5);
  CHECK_THROWS_AS(StandardizeSentiment(SentimentLabel::kNegative, 1.5), Error);
}

TEST_CASE("property: standardization splits [0, 1] by label") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.5, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const double s = u(rng);
    const double pos = StandardizeSentiment(SentimentLabel::kPositive, s);
    const double neg = StandardizeSentiment(SentimentLabel::kNegative, s);
    CHECK(pos >= 0.0);
    CHECK(pos <= 0.5);
    CHECK(neg >= 0.5);
    CHECK(neg <= 1.0);
    CHECK(pos + neg == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("scores come back in line order") {
  StubSentimentProvider stub;
  const LyricDoc d = ParseLyrics("thank you\nwhat the hell\nsunny day\n");
  const auto scores = ScoreDocument(d, stub);
  REQUIRE(scores.size() == 3);
  CHECK(scores[0].label == SentimentLabel::kPositive);
  CHECK(scores[1].label == SentimentLabel::kNegative);
  CHECK(scores[1].score == 0.99);
  CHECK(scores[1].standardized == doctest::Approx(0.99));
  CHECK(scores[2].label == SentimentLabel::kPositive);
}

TEST_CASE("repeated lines are sent once") {
  CountingSentiment counting({SentimentLabel::kPositive, 0.7});
  const LyricDoc d = ParseLyrics("same line\nother\nsame line\nsame line\n");
  const auto scores = ScoreDocument(d, counting, 3);
  CHECK(scores.size() == 4);
  CHECK(counting.calls("same line") == 1);
  CHECK(counting.total() == 2);
}

TEST_CASE("failed lines are reported by number") {
  FailingOn failing("bad");
  const LyricDoc d = ParseLyrics("good\nbad one\nfine\nbad two\n");
  try {
    ScoreDocument(d, failing);
    FAIL("expected partial result");
  } catch (const PartialResultError& e) {
    CHECK(e.kind() == ErrorKind::kProvider);
    CHECK(e.failed_lines() == std::vector<std::size_t>{2, 4});
  }
}

TEST_CASE("sentiment table") {
  CountingSentiment half({SentimentLabel::kPositive, 0.5});
  const LyricDoc d = ParseLyrics("[Intro]\na\n[Verse]\nb\nc\n[Chorus]\nd\n[Outro]\ne\n");
  const auto scores = ScoreDocument(d, half);
  const SentimentTable t = BuildSentimentTable(scores, d);
  for (SectionLabel l : {SectionLabel::kIntro, SectionLabel::kVerse, SectionLabel::kChorus,
                         SectionLabel::kOutro}) {
    REQUIRE(t.mean(l).has_value());
    CHECK(*t.mean(l) == 0.5);
  }
  CHECK_FALSE(t.mean(SectionLabel::kBridge).has_value());
  CHECK(*t.per_line_mean == 0.5);
  CHECK(t.lines == 5);
}

TEST_CASE("section means average their lines") {
  const LyricDoc d = ParseLyrics("[Verse]\nx\ny\n[Chorus]\nz\n");
  std::vector<SentimentScore> s = {MakeSentimentScore({SentimentLabel::kNegative, 0.9}),
                                   MakeSentimentScore({SentimentLabel::kPositive, 0.9}),
                                   MakeSentimentScore({SentimentLabel::kNegative, 0.6})};
  const SentimentTable t = BuildSentimentTable(s, d);
  CHECK(*t.mean(SectionLabel::kVerse) == doctest::Approx((0.9 + 0.1) / 2));
  CHECK(*t.mean(SectionLabel::kChorus) == doctest::Approx(0.6));
  CHECK(*t.per_line_mean == doctest::Approx((0.9 + 0.1 + 0.6) / 3));
  s.pop_back();
  CHECK_THROWS_AS(BuildSentimentTable(s, d), Error);
}

TEST_CASE("percent decrease reproduces the per-line table") {
  const std::vector<std::tuple<double, double, double>> rows = {
      {0.938, 0.344, 63.3}, {0.744, 0.107, 85.6}, {0.235, 0.063, 73.2}, {0.685, 0.250, 63.5}};
  for (const auto& [o, t, want] : rows) {
    CHECK(std::abs(PercentDecrease(o, t) - want) <= 0.1);
    CHECK(RoundTo(PercentDecrease(o, t), 1) == want);
  }
  CHECK(PercentDecrease(0.4, 0.4) == 0.0);
  CHECK_THROWS_AS(PercentDecrease(0.0, 0.1), Error);
}

TEST_CASE("property: percent decrease inverts") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.001, 1.0);
  for (int i = 0; i < 500; ++i) {
    const double a = u(rng);
    const double b = u(rng);
    const double d = PercentDecrease(a, b);
    CHECK(a * (1.0 - d / 100.0) == doctest::Approx(b).epsilon(1e-12));
  }
}

TEST_CASE("rounding") {
  CHECK(RoundTo(63.349, 1) == 63.3);
  CHECK(RoundTo(0.125, 2) == 0.13);
  CHECK(RoundTo(-0.125, 2) == -0.13);
  CHECK(RoundTo(2.5, 0) == 3.0);
}

TEST_CASE("cosine similarity") {
  const std::vector<double> a = {1.0, 2.0, 3.0};
  const std::vector<double> b = {-2.0, 1.0, 0.0};
  CHECK(CosineSimilarity(a, a) == 1.0);
  CHECK(CosineSimilarity(a, b) == 0.0);
  const std::vector<double> neg = {-1.0, -2.0, -3.0};
  CHECK(CosineSimilarity(a, neg) == doctest::Approx(-1.0));
  const std::vector<double> zero = {0.0, 0.0, 0.0};
  CHECK_THROWS_AS(CosineSimilarity(a, zero), Error);
  const std::vector<double> shorter = {1.0};
  CHECK_THROWS_AS(CosineSimilarity(a, shorter), Error);
}

TEST_CASE("rolling mean") {
  CHECK(RollingMean(std::vector<double>(8, 0.4), 5) == std::vector<double>(4, 0.4));
  CHECK(RollingMean(std::vector<double>{1, 2, 3, 4, 5}, 5) == std::vector<double>{3});
  const std::vector<double> s = {0.3, 0.1, 0.7, 0.2};
  CHECK(RollingMean(s, 1) == s);
  CHECK(RollingMean(s, 5).empty());
  CHECK_THROWS_AS(RollingMean(s, 0), Error);
}

TEST_CASE("property: rolling mean equals brute force and stays within range") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> s(5 + trial);
    for (double& v : s) v = u(rng);
    for (std::size_t w : {1u, 2u, 5u, 7u}) {
      const auto got = RollingMean(s, w);
      CHECK(got == BruteRolling(s, w));
      const auto [lo, hi] = std::minmax_element(s.begin(), s.end());
      for (double v : got) {
        CHECK(v >= *lo);
        CHECK(v <= *hi);
      }
    }
  }
}

TEST_CASE("identical documents are fully similar") {
  const LyricDoc d = LoadLyrics(detoxaudit::testing::FixturesDir() / "original_lyrics.txt");
  StubEmbeddingProvider stub;
  const SimilaritySeries s = LineSimilarity(d, d, stub);
  REQUIRE(s.per_line.size() == d.line_count());
  for (double c : s.per_line) CHECK(c == 1.0);
  CHECK(s.mean == 1.0);
  CHECK(s.rolling.size() == d.line_count() - 4);
  for (double r : s.rolling) CHECK(r == 1.0);
  CHECK(s.unpaired == 0);
}

TEST_CASE("orthogonal embeddings give zero similarity") {
  OrthogonalEmbedder ortho;
  const LyricDoc a = ParseLyrics("one\ntwo\nthree\n");
  const LyricDoc b = ParseLyrics("four\nfive\nsix\n");
  const SimilaritySeries s = LineSimilarity(a, b, ortho, 1);
  CHECK(s.per_line == std::vector<double>{0.0, 0.0, 0.0});
  CHECK(s.mean == 0.0);
}

TEST_CASE("unequal documents pair by index") {
  StubEmbeddingProvider stub;
  const LyricDoc a = ParseLyrics("one\ntwo\nthree\nfour\n");
  const LyricDoc b = ParseLyrics("one\ntwo\n");
  const SimilaritySeries s = LineSimilarity(a, b, stub, 1);
  CHECK(s.per_line.size() == 2);
  CHECK(s.unpaired == 2);
}

TEST_CASE("property: similarity rolling column is the brute-force window mean") {
  StubEmbeddingProvider stub;
  const LyricDoc a = LoadLyrics(detoxaudit::testing::FixturesDir() / "original_lyrics.txt");
  const LyricDoc b = LoadLyrics(detoxaudit::testing::FixturesDir() / "transformed_lyrics.txt");
  const SimilaritySeries s = LineSimilarity(a, b, stub);
  CHECK(s.rolling == BruteRolling(s.per_line, 5));
  for (double c : s.per_line) {
    CHECK(c >= -1.0);
    CHECK(c <= 1.0);
  }
}

}  // TEST_SUITE

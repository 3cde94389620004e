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

#include <charconv>
#include <cmath>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "error.hpp"
#include "json.hpp"
#include "lyrics.hpp"
#include "providers.hpp"
#include "report.hpp"
#include "test_util.hpp"

using namespace detoxaudit;
using detoxaudit::testing::TempDir;
using nlohmann::ordered_json;

namespace {

VoiceMetrics Metrics(double hnr, double cpp, double jitter, double shimmer) {
  VoiceMetrics m;
  m.hnr_db = hnr;
  m.cpp = cpp;
  m.jitter = jitter;
  m.shimmer = shimmer;
  m.voiced_fraction = 0.8;
  m.rms = {0.213035, 0.524201, 0.0};
  return m;
}

LyricAnalysis Lyrics(const std::string& text) {
  StubSentimentProvider stub;
  const LyricDoc doc = ParseLyrics(text);
  LyricAnalysis a;
  a.source = "lyrics.txt";
  a.line_sections = doc.line_labels();
  a.line_scores = ScoreDocument(doc, stub);
  a.sentiment = BuildSentimentTable(a.line_scores, doc);
  for (std::size_t n : {1u, 2u}) a.ngrams.push_back({n, NgramCounts(doc, n).Top(10)});
  return a;
}

TrackAnalysis Track(const VoiceMetrics& m, const std::string& lyrics) {
  TrackAnalysis t;
  t.artist_id = "artist";
  t.audio.source = "stem.wav";
  t.audio.sample_rate = 22050.0;
  t.audio.duration = 2.0;
  t.audio.metrics = m;
  t.audio.median_f0 = 141.5;
  t.audio.sections = {{SectionLabel::kVerse, 0.0, 1.0, {0.2, 0.3, 0.1}},
                      {SectionLabel::kChorus, 1.0, 2.0, {0.25, 0.5, 0.05}}};
  t.audio.waveform = {{0.25, 0.75, 1.25, 1.75}, {-0.5, -1.0, -0.25, -0.125}, {0.5, 1.0, 0.3, 0.1}};
  t.audio.spectrogram = {{0.5, 1.5}, {100.0, 200.0, 300.0}, {-10.0, -20.0, -30.5, -11.0, -21.0, -31.0}};
  t.lyrics = Lyrics(lyrics);
  return t;
}

const char* kOriginal = "[Verse]\ndamn this hell\nsunny day\n[Chorus]\nheil hitler heil\nsunny day\n"
                        "[Outro]\nbye now\nf*ck off\n";
const char* kTransformed = "[Verse]\ndarn this heaven\nsunny day\n[Chorus]\nrise higher rise\nsunny day\n"
                           "[Outro]\nbye now\nla off\n";

ComparisonReport Sample() {
  StubEmbeddingProvider embed;
  const SimilaritySeries sim =
      LineSimilarity(ParseLyrics(kOriginal), ParseLyrics(kTransformed), embed);
  ComparisonReport r = BuildComparison(Track(Metrics(3.06, 19.50, 0.0168, 0.131), kOriginal),
                                       Track(Metrics(8.43, 24.61, 0.0178, 0.122), kTransformed),
                                       sim);
  r.provenance.config_hash = "0123456789abcdef";
  r.provenance.config = {{"k", 1}};
  r.provenance.sentiment_provider = "stub-sentiment/lexicon-v1";
  r.provenance.embedding_provider = "stub-embedding/token-hash-v1";
  r.provenance.stopwords = std::string(kStopwordListId);
  r.provenance.offline = true;
  r.provenance.inputs = {{"original.stem", "a.wav", "00000000000000aa"}};
  r.provenance.started_at = "2026-01-01T00:00:00.000Z";
  r.provenance.finished_at = "2026-01-01T00:00:01.000Z";
  return r;
}

void CollectNumbers(const ordered_json& j, std::set<double>& out) {
  if (j.is_number()) {
    out.insert(j.get<double>());
  } else if (j.is_structured()) {
    for (const auto& v : j) CollectNumbers(v, out);
  }
}

std::vector<std::vector<std::string>> SplitCsv(const std::string& csv) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(csv);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::string cell;
    bool quoted = false;
    for (char c : line) {
      if (c == '"') {
        quoted = !quoted;
      } else if (c == ',' && !quoted) {
        cells.push_back(cell);
        cell.clear();
      } else {
        cell.push_back(c);
      }
    }
    cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

}  // namespace

TEST_SUITE("report") {

TEST_CASE("deltas and percent decrease") {
  const ComparisonReport r = Sample();
  const ordered_json j = ReportToJson(r);
  CHECK(j["format"] == kReportFormat);
  CHECK(std::abs(j["deltas"]["hnr_db"].get<double>() - 5.37) <= 1e-12);
  CHECK(std::abs(j["deltas"]["cpp"].get<double>() - 5.11) <= 1e-12);
  REQUIRE(r.percent_decrease.has_value());
  const double o = *r.original.lyrics.sentiment.per_line_mean;
  const double t = *r.transformed.lyrics.sentiment.per_line_mean;
  CHECK(*r.percent_decrease == doctest::Approx(100.0 * (o - t) / o).epsilon(1e-12));
}

TEST_CASE("percent decrease of the table row through the report") {
  TrackAnalysis a = Track(Metrics(1, 1, 0.01, 0.1), "x");
  TrackAnalysis b = Track(Metrics(2, 2, 0.02, 0.2), "x");
  a.lyrics.sentiment.per_line_mean = 0.938;
  b.lyrics.sentiment.per_line_mean = 0.344;
  const ComparisonReport r = BuildComparison(a, b, {});
  CHECK(ReportToJson(r)["sentiment"]["percent_decrease_display"].get<double>() == 63.3);
}

TEST_CASE("identical tracks have zero deltas") {
  const TrackAnalysis t = Track(Metrics(3.0, 20.0, 0.02, 0.1), kOriginal);
  const ordered_json d = ReportToJson(BuildComparison(t, t, {}))["deltas"];
  for (const auto& [key, value] : d.items()) {
    if (value.is_number()) {
      CHECK(value.get<double>() == 0.0);
    } else if (value.is_object()) {
      for (const auto& [k2, v2] : value.items()) CHECK((v2.is_null() || v2.get<double>() == 0.0));
    }
  }
}

TEST_CASE("artist mismatch is an input error") {
  TrackAnalysis a = Track(Metrics(1, 1, 0.01, 0.1), "x");
  TrackAnalysis b = a;
  b.artist_id = "someone else";
  CHECK_THROWS_AS(BuildComparison(a, b, {}), Error);
}

TEST_CASE("absent metrics stay absent and skip the radar") {
  VoiceMetrics m = Metrics(3.0, 20.0, 0.02, 0.1);
  m.jitter.reset();
  const ComparisonReport r =
      BuildComparison(Track(m, kOriginal), Track(Metrics(4, 21, 0.01, 0.1), kTransformed), {});
  CHECK_FALSE(r.radar.has_value());
  CHECK_FALSE(r.warnings.empty());
  const ordered_json j = ReportToJson(r);
  CHECK(j["deltas"]["jitter"].is_null());
  CHECK(j["original"]["audio"]["metrics"]["jitter"].is_null());
  CHECK_THROWS_AS(PlotCsv(r, PlotKind::kRadar), Error);
}

TEST_CASE("property: serialize, parse, serialize is byte-identical") {
  const std::string once = SerializeReport(Sample());
  const std::string twice = SerializeReport(ParseReport(once));
  CHECK(once == twice);

  VoiceMetrics m = Metrics(3.0, 20.0, 0.02, 0.1);
  m.cpp.reset();
  ComparisonReport sparse = BuildComparison(Track(m, "x"), Track(m, "y"), {});
  const std::string s1 = SerializeReport(sparse);
  CHECK(SerializeReport(ParseReport(s1)) == s1);
}

TEST_CASE("reports are written atomically and load back") {
  TempDir dir;
  const auto path = dir / "report.json";
  const ComparisonReport r = Sample();
  WriteFileAtomic(path, SerializeReport(r));
  CHECK(SerializeReport(LoadReport(path)) == SerializeReport(r));
  std::size_t files = 0;
  for (const auto& e : std::filesystem::directory_iterator(dir.path())) {
    (void)e;
    ++files;
  }
  CHECK(files == 1);
  CHECK_THROWS_AS(ParseReport("{}"), Error);
  CHECK_THROWS_AS(ParseReport(R"({"format": "other/9"})"), Error);
}

TEST_CASE("radar plot rows") {
  const auto rows = SplitCsv(PlotCsv(Sample(), PlotKind::kRadar));
  REQUIRE(rows.size() == 5);
  CHECK(rows[0] == std::vector<std::string>{"metric", "original_norm", "transformed_norm"});
  const std::vector<std::string> metrics = {"hnr", "cpp", "jitter", "shimmer"};
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(rows[i + 1][0] == metrics[i]);
    for (std::size_t c = 1; c <= 2; ++c) {
      const double v = std::stod(rows[i + 1][c]);
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
    }
  }
}

TEST_CASE("similarity plot rows") {
  const ComparisonReport r = Sample();
  const auto rows = SplitCsv(PlotCsv(r, PlotKind::kSimilarity));
  REQUIRE(rows.size() == r.similarity.per_line.size() + 1);
  std::size_t rolling = 0;
  for (std::size_t i = 1; i < rows.size(); ++i) rolling += !rows[i][2].empty();
  CHECK(rolling == r.similarity.per_line.size() - 4);
}

TEST_CASE("n-gram plot: top ten by count, ties lexicographic") {
  TrackAnalysis t = Track(Metrics(1, 1, 0.01, 0.1), "x");
  std::string text;
  for (char c = 'a'; c <= 'p'; ++c) text += std::string(1, c) + "word " + std::string(1, c) + "word\n";
  text += "zword zword zword\n";
  StopwordSet none;
  const LyricDoc doc = ParseLyrics(text, none);
  t.lyrics.ngrams = {{1, NgramCounts(doc, 1).Top(10)}};
  const ComparisonReport r = BuildComparison(t, t, {});
  const auto rows = SplitCsv(PlotCsv(r, PlotKind::kNgram));
  std::vector<std::string> original_rows;
  for (const auto& row : rows) {
    if (row[0] == "original") original_rows.push_back(row[3] + ":" + row[4]);
  }
  REQUIRE(original_rows.size() == 10);
  CHECK(original_rows[0] == "zword:3");
  CHECK(original_rows[1] == "aword:2");
  CHECK(original_rows[9] == "iword:2");
}

TEST_CASE("property: every plotted number comes from the report") {
  const ComparisonReport r = Sample();
  std::set<double> numbers;
  CollectNumbers(ReportToJson(r), numbers);
  for (PlotKind kind : AllPlotKinds()) {
    const auto rows = SplitCsv(PlotCsv(r, kind));
    REQUIRE(rows.size() > 1);
    for (std::size_t i = 1; i < rows.size(); ++i) {
      for (const std::string& cell : rows[i]) {
        if (cell.find_first_of(".e") == std::string::npos) continue;  // labels and ordinals
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
        if (ec != std::errc() || ptr != cell.data() + cell.size()) continue;
        CHECK_MESSAGE(numbers.count(v) == 1, PlotKindName(kind) << " cell " << cell);
      }
    }
  }
}

TEST_CASE("sentiment section plot marks missing sections") {
  const auto rows = SplitCsv(PlotCsv(Sample(), PlotKind::kSentimentSections));
  bool saw_bridge = false;
  for (const auto& row : rows) {
    if (row[0] == "bridge") {
      saw_bridge = true;
      CHECK(row[1] == "-");
    }
  }
  CHECK(saw_bridge);
  CHECK(rows.back()[0] == "per_line_mean");
}

TEST_CASE("plot kinds") {
  for (PlotKind k : AllPlotKinds()) CHECK(ParsePlotKind(PlotKindName(k)) == k);
  CHECK(AllPlotKinds().size() == 6);
  CHECK_THROWS_AS(ParsePlotKind("pie"), Error);
  TempDir dir;
  EmitPlotData(Sample(), PlotKind::kWaveform, dir / "w.csv");
  CHECK(detoxaudit::testing::ReadText(dir / "w.csv") == PlotCsv(Sample(), PlotKind::kWaveform));
}

TEST_CASE("property: formatted doubles parse back exactly") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int i = 0; i < 2000; ++i) {
    const double v = i % 3 ? u(rng) : u(rng) * 1e-9;
    const std::string s = FormatDouble(v);
    CHECK(std::stod(s) == v);
  }
  CHECK(FormatDouble(0.5) == "0.5");
}

}  // TEST_SUITE

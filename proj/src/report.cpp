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

#include "report.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>
#include <unistd.h>

#include "error.hpp"

namespace detoxaudit {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

ordered_json Opt(const std::optional<double>& v) {
  return v ? ordered_json(*v) : ordered_json(nullptr);
}

std::optional<double> OptFrom(const ordered_json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<double>();
}

std::optional<double> Delta(const std::optional<double>& a, const std::optional<double>& b) {
  if (!a || !b) return std::nullopt;
  return *b - *a;
}

ordered_json RmsJson(const RmsStats& r) {
  ordered_json j;
  j["avg"] = r.avg;
  j["max"] = r.max;
  j["min"] = r.min;
  return j;
}

RmsStats RmsFrom(const ordered_json& j) {
  return {j.at("avg").get<double>(), j.at("max").get<double>(), j.at("min").get<double>()};
}

SectionLabel SectionFrom(const ordered_json& j) {
  const std::string name = j.get<std::string>();
  if (name == "unknown") return SectionLabel::kUnknown;
  auto label = ParseSectionLabel(name);
  if (!label) throw InputError("report has an unknown section label: " + name);
  return *label;
}

const std::array<SectionLabel, kSectionLabelCount>& AllLabels() {
  static const std::array<SectionLabel, kSectionLabelCount> kLabels = {
      SectionLabel::kIntro, SectionLabel::kVerse, SectionLabel::kChorus,
      SectionLabel::kBridge, SectionLabel::kOutro, SectionLabel::kUnknown};
  return kLabels;
}

ordered_json TrackToJson(const TrackAnalysis& t) {
  ordered_json j;
  j["artist_id"] = t.artist_id;
  j["audio"] = AudioToJson(t.audio);
  j["lyrics"] = LyricsToJson(t.lyrics);
  return j;
}

TrackAnalysis TrackFromJson(const ordered_json& j) {
  TrackAnalysis t;
  t.artist_id = j.at("artist_id").get<std::string>();
  t.audio = AudioFromJson(j.at("audio"));
  t.lyrics = LyricsFromJson(j.at("lyrics"));
  return t;
}

ordered_json RadarPointJson(const RadarPoint& p) {
  ordered_json j;
  j["hnr"] = p.hnr;
  j["cpp"] = p.cpp;
  j["jitter"] = p.jitter;
  j["shimmer"] = p.shimmer;
  return j;
}

RadarPoint RadarPointFrom(const ordered_json& j) {
  return {j.at("hnr").get<double>(), j.at("cpp").get<double>(), j.at("jitter").get<double>(),
          j.at("shimmer").get<double>()};
}

std::string CsvField(std::string_view s) {
  if (s.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

std::string Cell(const std::optional<double>& v) { return v ? FormatDouble(*v) : "-"; }

void RequireData(bool present, std::string_view what) {
  if (!present) throw InputError("report has no " + std::string(what) + " data");
}

std::optional<SectionLabel> SectionAt(const std::vector<SectionAudioStats>& sections, double t) {
  for (const SectionAudioStats& s : sections) {
    if (t >= s.start && t < s.end) return s.label;
  }
  return std::nullopt;
}

}  // namespace

std::string FormatDouble(double value) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc()) throw InternalError("number formatting failed");
  return std::string(buf, end);
}

ComparisonReport BuildComparison(TrackAnalysis original, TrackAnalysis transformed,
                                 SimilaritySeries similarity) {
  if (original.artist_id != transformed.artist_id) {
    throw InputError("artist_id mismatch: '" + original.artist_id + "' vs '" +
                     transformed.artist_id + "'");
  }
  ComparisonReport r;
  r.artist_id = original.artist_id;

  const auto& a = original.lyrics.sentiment.per_line_mean;
  const auto& b = transformed.lyrics.sentiment.per_line_mean;
  if (a && b && *a > 0.0) {
    r.percent_decrease = PercentDecrease(*a, *b);
  } else {
    r.warnings.push_back("sentiment percent decrease unavailable");
  }

  const std::pair<VoiceMetrics, VoiceMetrics> pair{original.audio.metrics,
                                                   transformed.audio.metrics};
  try {
    r.radar = RadarNormalize(std::span(&pair, 1)).front();
  } catch (const Error& e) {
    r.warnings.push_back(std::string("radar normalization skipped: ") + e.what());
  }
  for (const auto* track : {&original, &transformed}) {
    const char* role = track == &original ? "original" : "transformed";
    for (const std::string& w : track->audio.warnings) {
      r.warnings.push_back(std::string(role) + " audio: " + w);
    }
  }
  if (similarity.unpaired > 0) {
    r.warnings.push_back(std::to_string(similarity.unpaired) +
                         " lyric lines have no counterpart and were not compared");
  }
  r.original = std::move(original);
  r.transformed = std::move(transformed);
  r.similarity = std::move(similarity);
  return r;
}

ordered_json AudioToJson(const AudioAnalysis& audio) {
  ordered_json j;
  j["source"] = audio.source;
  j["sample_rate"] = audio.sample_rate;
  j["duration"] = audio.duration;
  j["silent"] = audio.silent;
  ordered_json m;
  m["hnr_db"] = Opt(audio.metrics.hnr_db);
  m["cpp"] = Opt(audio.metrics.cpp);
  m["jitter"] = Opt(audio.metrics.jitter);
  m["shimmer"] = Opt(audio.metrics.shimmer);
  m["voiced_fraction"] = audio.metrics.voiced_fraction;
  m["median_f0"] = Opt(audio.median_f0);
  m["rms"] = RmsJson(audio.metrics.rms);
  j["metrics"] = std::move(m);
  ordered_json sections = ordered_json::array();
  for (const SectionAudioStats& s : audio.sections) {
    ordered_json e;
    e["label"] = SectionName(s.label);
    e["start"] = s.start;
    e["end"] = s.end;
    e["rms"] = RmsJson(s.rms);
    sections.push_back(std::move(e));
  }
  j["sections"] = std::move(sections);
  j["waveform"] = {{"times", audio.waveform.times},
                   {"min", audio.waveform.min},
                   {"max", audio.waveform.max}};
  j["spectrogram"] = {{"times", audio.spectrogram.times},
                      {"frequencies", audio.spectrogram.frequencies},
                      {"db", audio.spectrogram.db}};
  j["warnings"] = audio.warnings;
  return j;
}

AudioAnalysis AudioFromJson(const ordered_json& j) {
  AudioAnalysis a;
  a.source = j.at("source").get<std::string>();
  a.sample_rate = j.at("sample_rate").get<double>();
  a.duration = j.at("duration").get<double>();
  a.silent = j.at("silent").get<bool>();
  const ordered_json& m = j.at("metrics");
  a.metrics.hnr_db = OptFrom(m, "hnr_db");
  a.metrics.cpp = OptFrom(m, "cpp");
  a.metrics.jitter = OptFrom(m, "jitter");
  a.metrics.shimmer = OptFrom(m, "shimmer");
  a.metrics.voiced_fraction = m.at("voiced_fraction").get<double>();
  a.median_f0 = OptFrom(m, "median_f0");
  a.metrics.rms = RmsFrom(m.at("rms"));
  for (const ordered_json& e : j.at("sections")) {
    a.sections.push_back({SectionFrom(e.at("label")), e.at("start").get<double>(),
                          e.at("end").get<double>(), RmsFrom(e.at("rms"))});
  }
  const ordered_json& w = j.at("waveform");
  a.waveform = {w.at("times").get<std::vector<double>>(), w.at("min").get<std::vector<double>>(),
                w.at("max").get<std::vector<double>>()};
  const ordered_json& s = j.at("spectrogram");
  a.spectrogram = {s.at("times").get<std::vector<double>>(),
                   s.at("frequencies").get<std::vector<double>>(),
                   s.at("db").get<std::vector<double>>()};
  a.warnings = j.at("warnings").get<std::vector<std::string>>();
  return a;
}

ordered_json LyricsToJson(const LyricAnalysis& lyrics) {
  ordered_json j;
  j["source"] = lyrics.source;
  j["lines"] = lyrics.line_scores.size();
  ordered_json per_line = ordered_json::array();
  for (std::size_t i = 0; i < lyrics.line_scores.size(); ++i) {
    const SentimentScore& s = lyrics.line_scores[i];
    ordered_json e;
    e["section"] = i < lyrics.line_sections.size() ? SectionName(lyrics.line_sections[i])
                                                   : std::string("unknown");
    e["label"] = SentimentLabelName(s.label);
    e["score"] = s.score;
    e["standardized"] = s.standardized;
    per_line.push_back(std::move(e));
  }
  ordered_json sentiment;
  sentiment["per_line"] = std::move(per_line);
  ordered_json sections;
  for (SectionLabel label : AllLabels()) {
    sections[SectionName(label)] = Opt(lyrics.sentiment.mean(label));
  }
  sentiment["sections"] = std::move(sections);
  sentiment["per_line_mean"] = Opt(lyrics.sentiment.per_line_mean);
  j["sentiment"] = std::move(sentiment);
  ordered_json ngrams = ordered_json::array();
  for (const NgramTop& top : lyrics.ngrams) {
    ordered_json rows = ordered_json::array();
    for (const auto& [gram, count] : top.rows) {
      rows.push_back(ordered_json{{"gram", gram}, {"count", count}});
    }
    ngrams.push_back(ordered_json{{"n", top.n}, {"top", std::move(rows)}});
  }
  j["ngrams"] = std::move(ngrams);
  return j;
}

LyricAnalysis LyricsFromJson(const ordered_json& j) {
  LyricAnalysis l;
  l.source = j.at("source").get<std::string>();
  const ordered_json& sentiment = j.at("sentiment");
  for (const ordered_json& e : sentiment.at("per_line")) {
    l.line_sections.push_back(SectionFrom(e.at("section")));
    SentimentScore s;
    s.label = ParseSentimentLabel(e.at("label").get<std::string>());
    s.score = e.at("score").get<double>();
    s.standardized = e.at("standardized").get<double>();
    l.line_scores.push_back(s);
  }
  l.sentiment.lines = l.line_scores.size();
  const ordered_json& sections = sentiment.at("sections");
  for (SectionLabel label : AllLabels()) {
    l.sentiment.section_means[static_cast<std::size_t>(label)] =
        OptFrom(sections, SectionName(label).c_str());
  }
  l.sentiment.per_line_mean = OptFrom(sentiment, "per_line_mean");
  for (const ordered_json& top : j.at("ngrams")) {
    NgramTop t;
    t.n = top.at("n").get<std::size_t>();
    for (const ordered_json& row : top.at("top")) {
      t.rows.emplace_back(row.at("gram").get<Ngram>(), row.at("count").get<std::size_t>());
    }
    l.ngrams.push_back(std::move(t));
  }
  return l;
}

ordered_json ReportToJson(const ComparisonReport& r) {
  ordered_json j;
  j["format"] = kReportFormat;
  j["artist_id"] = r.artist_id;
  j["original"] = TrackToJson(r.original);
  j["transformed"] = TrackToJson(r.transformed);

  const VoiceMetrics& a = r.original.audio.metrics;
  const VoiceMetrics& b = r.transformed.audio.metrics;
  ordered_json d;
  d["hnr_db"] = Opt(Delta(a.hnr_db, b.hnr_db));
  d["cpp"] = Opt(Delta(a.cpp, b.cpp));
  d["jitter"] = Opt(Delta(a.jitter, b.jitter));
  d["shimmer"] = Opt(Delta(a.shimmer, b.shimmer));
  d["voiced_fraction"] = b.voiced_fraction - a.voiced_fraction;
  d["rms_avg"] = b.rms.avg - a.rms.avg;
  d["rms_max"] = b.rms.max - a.rms.max;
  d["rms_min"] = b.rms.min - a.rms.min;
  const SentimentTable& sa = r.original.lyrics.sentiment;
  const SentimentTable& sb = r.transformed.lyrics.sentiment;
  d["sentiment_per_line_mean"] = Opt(Delta(sa.per_line_mean, sb.per_line_mean));
  ordered_json ds;
  for (SectionLabel label : AllLabels()) {
    ds[SectionName(label)] = Opt(Delta(sa.mean(label), sb.mean(label)));
  }
  d["sentiment_sections"] = std::move(ds);
  j["deltas"] = std::move(d);

  ordered_json sentiment;
  sentiment["percent_decrease"] = Opt(r.percent_decrease);
  sentiment["percent_decrease_display"] =
      Opt(r.percent_decrease ? std::optional<double>(RoundTo(*r.percent_decrease, 1))
                             : std::nullopt);
  j["sentiment"] = std::move(sentiment);

  ordered_json sim;
  sim["window"] = r.similarity.window;
  sim["per_line"] = r.similarity.per_line;
  sim["rolling"] = r.similarity.rolling;
  sim["mean"] = r.similarity.mean;
  sim["unpaired"] = r.similarity.unpaired;
  j["similarity"] = std::move(sim);

  if (r.radar) {
    j["radar"] = {{"original", RadarPointJson(r.radar->original)},
                  {"transformed", RadarPointJson(r.radar->transformed)}};
  } else {
    j["radar"] = nullptr;
  }
  j["warnings"] = r.warnings;

  const Provenance& p = r.provenance;
  ordered_json pj;
  pj["tool_version"] = p.tool_version;
  pj["config_hash"] = p.config_hash;
  pj["config"] = p.config;
  pj["providers"] = {{"sentiment", p.sentiment_provider}, {"embedding", p.embedding_provider}};
  pj["stopwords"] = p.stopwords;
  pj["offline"] = p.offline;
  ordered_json inputs = ordered_json::array();
  for (const InputRecord& in : p.inputs) {
    inputs.push_back(ordered_json{{"role", in.role}, {"path", in.path}, {"fnv1a64", in.fnv1a64}});
  }
  pj["inputs"] = std::move(inputs);
  pj["timestamps"] = {{"started", p.started_at}, {"finished", p.finished_at}};
  j["provenance"] = std::move(pj);
  return j;
}

ComparisonReport ReportFromJson(const ordered_json& j) {
  try {
    if (j.at("format").get<std::string>() != kReportFormat) {
      throw InputError("unsupported report format: " + j.at("format").dump());
    }
    ComparisonReport r;
    r.artist_id = j.at("artist_id").get<std::string>();
    r.original = TrackFromJson(j.at("original"));
    r.transformed = TrackFromJson(j.at("transformed"));
    r.percent_decrease = OptFrom(j.at("sentiment"), "percent_decrease");
    const ordered_json& sim = j.at("similarity");
    r.similarity.window = sim.at("window").get<std::size_t>();
    r.similarity.per_line = sim.at("per_line").get<std::vector<double>>();
    r.similarity.rolling = sim.at("rolling").get<std::vector<double>>();
    r.similarity.mean = sim.at("mean").get<double>();
    r.similarity.unpaired = sim.at("unpaired").get<std::size_t>();
    if (!j.at("radar").is_null()) {
      r.radar = RadarPair{RadarPointFrom(j["radar"].at("original")),
                          RadarPointFrom(j["radar"].at("transformed"))};
    }
    r.warnings = j.at("warnings").get<std::vector<std::string>>();
    const ordered_json& pj = j.at("provenance");
    Provenance& p = r.provenance;
    p.tool_version = pj.at("tool_version").get<std::string>();
    p.config_hash = pj.at("config_hash").get<std::string>();
    p.config = pj.at("config");
    p.sentiment_provider = pj.at("providers").at("sentiment").get<std::string>();
    p.embedding_provider = pj.at("providers").at("embedding").get<std::string>();
    p.stopwords = pj.at("stopwords").get<std::string>();
    p.offline = pj.at("offline").get<bool>();
    for (const ordered_json& in : pj.at("inputs")) {
      p.inputs.push_back({in.at("role").get<std::string>(), in.at("path").get<std::string>(),
                          in.at("fnv1a64").get<std::string>()});
    }
    p.started_at = pj.at("timestamps").at("started").get<std::string>();
    p.finished_at = pj.at("timestamps").at("finished").get<std::string>();
    return r;
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed report: ") + e.what());
  }
}

std::string SerializeReport(const ComparisonReport& report) {
  return ReportToJson(report).dump(2) + "\n";
}

ComparisonReport ParseReport(std::string_view text) {
  ordered_json j = ordered_json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) throw InputError("report is not valid JSON");
  return ReportFromJson(j);
}

ComparisonReport LoadReport(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read report: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ParseReport(ss.str());
}

void WriteFileAtomic(const std::filesystem::path& path, std::string_view content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write output file: " + path.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw InputError("write failed: " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw InputError("cannot replace output file: " + path.string());
  }
}

PlotKind ParsePlotKind(std::string_view name) {
  for (PlotKind k : AllPlotKinds()) {
    if (PlotKindName(k) == name) return k;
  }
  throw InputError("unknown plot kind: " + std::string(name));
}

std::string PlotKindName(PlotKind kind) {
  switch (kind) {
    case PlotKind::kWaveform: return "waveform";
    case PlotKind::kSpectrogram: return "spectrogram";
    case PlotKind::kNgram: return "ngram";
    case PlotKind::kRadar: return "radar";
    case PlotKind::kSimilarity: return "similarity";
    case PlotKind::kSentimentSections: return "sentiment_sections";
  }
  return "unknown";
}

std::vector<PlotKind> AllPlotKinds() {
  return {PlotKind::kWaveform, PlotKind::kSpectrogram, PlotKind::kNgram,
          PlotKind::kRadar,    PlotKind::kSimilarity,  PlotKind::kSentimentSections};
}

std::string PlotCsv(const ComparisonReport& r, PlotKind kind) {
  std::ostringstream out;
  const std::pair<const char*, const TrackAnalysis*> tracks[] = {{"original", &r.original},
                                                                 {"transformed", &r.transformed}};
  switch (kind) {
    case PlotKind::kWaveform: {
      RequireData(!r.original.audio.waveform.times.empty() ||
                      !r.transformed.audio.waveform.times.empty(),
                  "waveform");
      out << "track,time,min,max,section\n";
      for (const auto& [name, t] : tracks) {
        const WaveformEnvelope& w = t->audio.waveform;
        for (std::size_t i = 0; i < w.times.size(); ++i) {
          const auto section = SectionAt(t->audio.sections, w.times[i]);
          out << name << ',' << FormatDouble(w.times[i]) << ',' << FormatDouble(w.min[i]) << ','
              << FormatDouble(w.max[i]) << ',' << (section ? SectionName(*section) : "") << '\n';
        }
      }
      break;
    }
    case PlotKind::kSpectrogram: {
      RequireData(!r.original.audio.spectrogram.db.empty() ||
                      !r.transformed.audio.spectrogram.db.empty(),
                  "spectrogram");
      out << "track,time,frequency,db\n";
      for (const auto& [name, t] : tracks) {
        const SpectrogramSummary& s = t->audio.spectrogram;
        for (std::size_t ti = 0; ti < s.times.size(); ++ti) {
          for (std::size_t fi = 0; fi < s.frequencies.size(); ++fi) {
            out << name << ',' << FormatDouble(s.times[ti]) << ','
                << FormatDouble(s.frequencies[fi]) << ',' << FormatDouble(s.at(ti, fi)) << '\n';
          }
        }
      }
      break;
    }
    case PlotKind::kNgram: {
      RequireData(!r.original.lyrics.ngrams.empty() || !r.transformed.lyrics.ngrams.empty(),
                  "n-gram");
      out << "track,n,rank,gram,count\n";
      for (const auto& [name, t] : tracks) {
        for (const NgramTop& top : t->lyrics.ngrams) {
          for (std::size_t i = 0; i < top.rows.size(); ++i) {
            std::string gram;
            for (const std::string& w : top.rows[i].first) gram += (gram.empty() ? "" : " ") + w;
            out << name << ',' << top.n << ',' << i + 1 << ',' << CsvField(gram) << ','
                << top.rows[i].second << '\n';
          }
        }
      }
      break;
    }
    case PlotKind::kRadar: {
      RequireData(r.radar.has_value(), "radar");
      const RadarPoint& a = r.radar->original;
      const RadarPoint& b = r.radar->transformed;
      out << "metric,original_norm,transformed_norm\n";
      out << "hnr," << FormatDouble(a.hnr) << ',' << FormatDouble(b.hnr) << '\n';
      out << "cpp," << FormatDouble(a.cpp) << ',' << FormatDouble(b.cpp) << '\n';
      out << "jitter," << FormatDouble(a.jitter) << ',' << FormatDouble(b.jitter) << '\n';
      out << "shimmer," << FormatDouble(a.shimmer) << ',' << FormatDouble(b.shimmer) << '\n';
      break;
    }
    case PlotKind::kSimilarity: {
      RequireData(!r.similarity.per_line.empty(), "similarity");
      out << "line,cosine,rolling\n";
      for (std::size_t i = 0; i < r.similarity.per_line.size(); ++i) {
        out << i + 1 << ',' << FormatDouble(r.similarity.per_line[i]) << ','
            << (i < r.similarity.rolling.size() ? FormatDouble(r.similarity.rolling[i]) : "")
            << '\n';
      }
      break;
    }
    case PlotKind::kSentimentSections: {
      RequireData(r.original.lyrics.sentiment.lines > 0 || r.transformed.lyrics.sentiment.lines > 0,
                  "sentiment");
      out << "section,original,transformed\n";
      for (SectionLabel label : AllLabels()) {
        out << SectionName(label) << ',' << Cell(r.original.lyrics.sentiment.mean(label)) << ','
            << Cell(r.transformed.lyrics.sentiment.mean(label)) << '\n';
      }
      out << "per_line_mean," << Cell(r.original.lyrics.sentiment.per_line_mean) << ','
          << Cell(r.transformed.lyrics.sentiment.per_line_mean) << '\n';
      break;
    }
  }
  return out.str();
}

void EmitPlotData(const ComparisonReport& report, PlotKind kind,
                  const std::filesystem::path& path) {
  WriteFileAtomic(path, PlotCsv(report, kind));
}

}  // namespace detoxaudit

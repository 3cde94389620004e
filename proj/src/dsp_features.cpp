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

#include "dsp_features.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <complex>
#include <fstream>
#include <numeric>
#include <sstream>

#include "error.hpp"
#include "fft.hpp"

namespace detoxaudit {
namespace {

std::string_view Trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

double ParseNumber(std::string_view s) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw InputError("malformed number in timestamp: '" + std::string(s) + "'");
  }
  return v;
}

std::string FormatSeconds(double s) {
  std::ostringstream os;
  os << s;
  return os.str();
}

}  // namespace

Spectrogram Stft(const AudioBuffer& buf, std::size_t frame_length, std::size_t hop,
                 WindowKind window) {
  if (frame_length == 0 || hop == 0 || hop > frame_length) {
    throw InputError("stft requires 0 < hop <= frame_length");
  }
  if (buf.samples.size() < frame_length) {
    throw InputError("buffer shorter than one STFT frame");
  }
  Spectrogram spec;
  spec.frame_length = frame_length;
  spec.hop = hop;
  spec.sample_rate = buf.sample_rate;
  spec.window = window;
  spec.bins = frame_length / 2 + 1;
  spec.frames = 1 + (buf.samples.size() - frame_length) / hop;
  spec.magnitudes.resize(spec.frames * spec.bins);
  spec.frame_times.resize(spec.frames);

  const std::vector<double> w = MakeWindow(window, frame_length);
  RealFft fft(frame_length);
  std::vector<double> seg(frame_length);
  std::vector<std::complex<double>> out(spec.bins);
  for (std::size_t f = 0; f < spec.frames; ++f) {
    const std::size_t start = f * hop;
    for (std::size_t i = 0; i < frame_length; ++i) seg[i] = buf.samples[start + i] * w[i];
    fft.Forward(seg, out);
    double* row = spec.magnitudes.data() + f * spec.bins;
    for (std::size_t b = 0; b < spec.bins; ++b) row[b] = std::abs(out[b]);
    spec.frame_times[f] =
        (static_cast<double>(start) + static_cast<double>(frame_length) / 2.0) / buf.sample_rate;
  }
  return spec;
}

RmsSeries FrameRms(const AudioBuffer& buf, std::size_t frame_length, std::size_t hop) {
  if (frame_length == 0 || hop == 0) throw InputError("frame_rms requires positive frame and hop");
  const std::size_t n = buf.samples.size();
  if (n == 0) throw InputError("frame_rms of an empty buffer");
  RmsSeries series;
  const std::size_t len = std::min(frame_length, n);
  const std::size_t frames = 1 + (n - len) / hop;
  series.values.reserve(frames);
  series.frame_times.reserve(frames);
  for (std::size_t f = 0; f < frames; ++f) {
    const std::size_t start = f * hop;
    double acc = 0.0;
    for (std::size_t i = start; i < start + len; ++i) acc += buf.samples[i] * buf.samples[i];
    series.values.push_back(std::sqrt(acc / static_cast<double>(len)));
    series.frame_times.push_back(
        (static_cast<double>(start) + static_cast<double>(len) / 2.0) / buf.sample_rate);
  }
  return series;
}

RmsStats ComputeRmsStats(const RmsSeries& series) {
  if (series.values.empty()) throw InputError("rms statistics of an empty series");
  RmsStats stats;
  const auto [lo, hi] = std::minmax_element(series.values.begin(), series.values.end());
  stats.min = *lo;
  stats.max = *hi;
  stats.avg = std::accumulate(series.values.begin(), series.values.end(), 0.0) /
              static_cast<double>(series.values.size());
  // Rounding in the mean can step outside [min, max] for constant series.
  stats.avg = std::clamp(stats.avg, stats.min, stats.max);
  return stats;
}

double ParseTimestamp(std::string_view text) {
  const std::string_view s = Trim(text);
  if (s.empty()) throw InputError("empty timestamp");
  double total = 0.0;
  std::size_t pos = 0;
  while (true) {
    const std::size_t colon = s.find(':', pos);
    const std::string_view part = s.substr(pos, colon == std::string_view::npos
                                                    ? std::string_view::npos
                                                    : colon - pos);
    total = total * 60.0 + ParseNumber(part);
    if (colon == std::string_view::npos) break;
    pos = colon + 1;
  }
  if (total < 0) throw InputError("negative timestamp: " + std::string(s));
  return total;
}

SectionMap ParseSectionMap(std::string_view text) {
  SectionMap map;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    std::string_view line =
        text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (Trim(line).empty() || Trim(line).front() == '#') continue;

    std::vector<std::string_view> fields;
    std::size_t p = 0;
    while (true) {
      const std::size_t tab = line.find('\t', p);
      fields.push_back(line.substr(p, tab == std::string_view::npos ? std::string_view::npos
                                                                     : tab - p));
      if (tab == std::string_view::npos) break;
      p = tab + 1;
    }
    const std::string where = "section map line " + std::to_string(line_no);
    if (fields.size() != 3) throw InputError(where + ": expected label<TAB>start<TAB>end");
    const auto label = ParseSectionLabel(Trim(fields[0]));
    if (!label || *label == SectionLabel::kUnknown) {
      throw InputError(where + ": unknown section label '" + std::string(Trim(fields[0])) + "'");
    }
    SectionEntry entry{*label, ParseTimestamp(fields[1]), ParseTimestamp(fields[2])};
    if (!(entry.start < entry.end)) throw InputError(where + ": start must precede end");
    map.entries.push_back(entry);
  }

  std::vector<SectionEntry> sorted = map.entries;
  std::sort(sorted.begin(), sorted.end(),
            [](const SectionEntry& a, const SectionEntry& b) { return a.start < b.start; });
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (sorted[i].start < sorted[i - 1].end) {
      throw InputError("section map entries overlap at " + FormatSeconds(sorted[i].start) + " s");
    }
  }
  return map;
}

SectionMap LoadSectionMap(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read section map: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ParseSectionMap(ss.str());
}

SliceResult SliceSections(const AudioBuffer& buf, const SectionMap& map) {
  if (map.entries.empty()) throw InputError("section map is empty");
  SliceResult result;
  const double duration = buf.duration();
  for (const SectionEntry& e : map.entries) {
    double start = e.start;
    double end = e.end;
    if (start >= duration) {
      result.warnings.push_back(SectionName(e.label) + " section starting at " +
                                FormatSeconds(start) + " s lies past the end of the audio (" +
                                FormatSeconds(duration) + " s); skipped");
      continue;
    }
    if (end > duration) {
      result.warnings.push_back(SectionName(e.label) + " section end " + FormatSeconds(end) +
                                " s clipped to " + FormatSeconds(duration) + " s");
      end = duration;
    }
    const auto first = static_cast<std::size_t>(std::llround(start * buf.sample_rate));
    const auto last = std::min(buf.samples.size(),
                               static_cast<std::size_t>(std::llround(end * buf.sample_rate)));
    SlicedSection section;
    section.label = e.label;
    section.start = start;
    section.end = end;
    section.audio.sample_rate = buf.sample_rate;
    section.audio.source_id = buf.source_id + "#" + SectionName(e.label);
    section.audio.preprocessed = buf.preprocessed;
    section.audio.samples.assign(buf.samples.begin() + static_cast<std::ptrdiff_t>(first),
                                 buf.samples.begin() + static_cast<std::ptrdiff_t>(last));
    result.sections.push_back(std::move(section));
  }
  return result;
}

}  // namespace detoxaudit

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

#include "voice_quality.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <complex>
#include <limits>
#include <numeric>
#include <string>

#include "error.hpp"
#include "fft.hpp"
#include "spectral.hpp"

namespace detoxaudit {
namespace {

// Among candidate autocorrelation peaks, the shortest lag within this factor
// of the best one wins. Guards against picking 2T when r(T) ~ r(2T).
constexpr double kOctavePreference = 0.95;
// Relative f0 search span for per-frame harmonic refinement.
constexpr double kHarmonicSearchSpan = 0.03;
// Period tracking splits a voiced run where f0 jumps by more than this ratio
// and ignores pieces shorter than kMinRunFrames.
constexpr double kMaxF0Step = 1.15;
constexpr std::size_t kMinRunFrames = 3;
// Half-width, in periods, of the raw-peak search around each marker.
constexpr double kMarkerSnap = 0.1;

std::size_t ToSamples(double seconds, double rate) {
  return static_cast<std::size_t>(std::llround(seconds * rate));
}

// Parabolic vertex through (-1, a), (0, b), (1, c). Returns {offset, value}.
std::pair<double, double> ParabolicPeak(double a, double b, double c) {
  const double denom = a - 2.0 * b + c;
  if (denom == 0.0) return {0.0, b};
  double offset = 0.5 * (a - c) / denom;
  offset = std::clamp(offset, -0.5, 0.5);
  return {offset, b - 0.25 * (a - c) * offset};
}

std::optional<double> NearestVoicedF0(const PitchTrack& track, double time) {
  if (track.size() == 0 || track.hop == 0) return std::nullopt;
  const double first = track.frame_times.front();
  const double step = static_cast<double>(track.hop) / track.sample_rate;
  const double pos = std::round((time - first) / step);
  const auto idx = static_cast<std::size_t>(
      std::clamp(pos, 0.0, static_cast<double>(track.size() - 1)));
  return track.voiced[idx] ? track.f0[idx] : std::nullopt;
}

double Mean(std::span<const double> v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

// Relative mean absolute first difference: (1/(N-1)) sum |v_i - v_{i+1}| / mean(v).
double RelativeVariability(std::span<const double> v, double mean) {
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < v.size(); ++i) acc += std::abs(v[i] - v[i + 1]);
  return acc / static_cast<double>(v.size() - 1) / mean;
}

std::vector<double> MeanRemoved(std::span<const double> frame) {
  std::vector<double> out(frame.begin(), frame.end());
  const double m = Mean(out);
  for (double& v : out) v -= m;
  return out;
}

double Rms(std::span<const double> v) {
  double acc = 0.0;
  for (double x : v) acc += x * x;
  return std::sqrt(acc / static_cast<double>(v.size()));
}

double RefineF0(std::span<const double> power, double f0, double bin_hz) {
  const double nyquist = bin_hz * static_cast<double>(power.size() - 1);
  const double harmonics = std::max(1.0, std::floor(nyquist / f0));
  const double rel_step = 0.2 * bin_hz / (harmonics * f0);
  const int steps = std::min(2000, static_cast<int>(std::ceil(kHarmonicSearchSpan / rel_step)));
  double best_f0 = f0;
  double best_score = -1.0;
  for (int s = -steps; s <= steps; ++s) {
    const double cand = f0 * (1.0 + kHarmonicSearchSpan * s / std::max(steps, 1));
    double score = 0.0;
    for (double h = 1.0; h * cand < nyquist; h += 1.0) {
      const auto k = static_cast<std::size_t>(std::llround(h * cand / bin_hz));
      if (k < power.size()) score += power[k];
    }
    if (score > best_score) {
      best_score = score;
      best_f0 = cand;
    }
  }
  return best_f0;
}

}  // namespace

void VoiceConfig::Validate() const {
  if (!(fmin > 0 && fmin < fmax)) throw InputError("pitch range requires 0 < fmin < fmax");
  if (pitch_lowpass != 0.0 && !(pitch_lowpass > fmax)) {
    throw InputError("pitch_lowpass must be 0 (off) or above fmax");
  }
  if (period_lowpass_ratio != 0.0 && !(period_lowpass_ratio > 1.0)) {
    throw InputError("period_lowpass_ratio must be 0 (off) or above 1");
  }
  if (period_snap_ratio != 0.0 && !(period_snap_ratio >= period_lowpass_ratio)) {
    throw InputError("period_snap_ratio must be 0 (raw) or at least period_lowpass_ratio");
  }
  if (!(pitch_frame > 0 && pitch_hop > 0)) throw InputError("pitch frame and hop must be positive");
  if (!(voicing_threshold > 0 && voicing_threshold < 1)) {
    throw InputError("voicing_threshold must lie in (0, 1)");
  }
  if (hnr_frame < 16 || hnr_hop == 0 || cpp_frame < 16 || cpp_hop == 0) {
    throw InputError("analysis frames must hold at least 16 samples");
  }
  if (!(harmonic_half_bandwidth > 0)) throw InputError("harmonic bandwidth must be positive");
  if (!(cpp_fmin > 0 && cpp_fmin < cpp_fmax)) {
    throw InputError("cepstral search range requires 0 < cpp_fmin < cpp_fmax");
  }
  if (rms_frame == 0 || rms_hop == 0) throw InputError("rms frame and hop must be positive");
}

double PitchTrack::voiced_fraction() const {
  if (voiced.empty()) return 0.0;
  const auto n = std::count(voiced.begin(), voiced.end(), true);
  return static_cast<double>(n) / static_cast<double>(voiced.size());
}

std::optional<double> PitchTrack::median_f0() const {
  std::vector<double> v;
  for (const auto& f : f0) {
    if (f) v.push_back(*f);
  }
  if (v.empty()) return std::nullopt;
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

PitchTrack EstimateF0(const AudioBuffer& buf, double fmin, double fmax) {
  VoiceConfig cfg;
  cfg.fmin = fmin;
  cfg.fmax = fmax;
  // Keep the correlation low-pass clear of the requested range.
  if (cfg.pitch_lowpass <= fmax) {
    cfg.pitch_lowpass = 2.0 * fmax < buf.sample_rate / 2.0 ? 2.0 * fmax : 0.0;
  }
  return EstimateF0(buf, cfg);
}

PitchTrack EstimateF0(const AudioBuffer& buf, const VoiceConfig& cfg) {
  cfg.Validate();
  const double sr = buf.sample_rate;
  if (!(cfg.fmax < sr / 2.0)) throw InputError("fmax must be below Nyquist");

  PitchTrack track;
  track.sample_rate = sr;
  track.frame_length = ToSamples(cfg.pitch_frame, sr);
  track.hop = std::max<std::size_t>(1, ToSamples(cfg.pitch_hop, sr));
  const std::size_t len = track.frame_length;
  const auto min_lag = static_cast<std::size_t>(std::floor(sr / cfg.fmax));
  const auto max_lag = static_cast<std::size_t>(std::ceil(sr / cfg.fmin));
  if (max_lag + 2 >= len) throw InputError("pitch frame too short for fmin");
  if (buf.samples.size() < len) return track;

  // Correlation runs on a low-passed copy so that a tilted or noisy top end
  // cannot mask the fundamental; the silence gate still sees the input.
  const AudioBuffer analysis = cfg.pitch_lowpass > 0.0 && cfg.pitch_lowpass < sr / 2.0
                                   ? Lowpass(buf, cfg.pitch_lowpass)
                                   : buf;
  const std::size_t frames = 1 + (buf.samples.size() - len) / track.hop;
  const std::size_t fft_size = std::bit_ceil(2 * len);
  RealFft fft(fft_size);
  std::vector<std::complex<double>> spec(fft.bins());
  std::vector<double> acf(fft_size);
  std::vector<double> prefix(len + 1);
  std::vector<double> r(max_lag + 2, 0.0);

  for (std::size_t f = 0; f < frames; ++f) {
    const std::size_t start = f * track.hop;
    const std::vector<double> raw =
        MeanRemoved(std::span<const double>(buf.samples).subspan(start, len));
    const std::vector<double> x =
        MeanRemoved(std::span<const double>(analysis.samples).subspan(start, len));
    track.frame_times.push_back((static_cast<double>(start) + len / 2.0) / sr);

    bool voiced = false;
    double f0 = 0.0;
    double confidence = 0.0;
    if (Rms(raw) >= cfg.silence_gate && Rms(x) > 0.0) {
      fft.Forward(x, spec);
      for (auto& c : spec) c = std::norm(c);
      fft.Inverse(spec, acf);
      prefix[0] = 0.0;
      for (std::size_t i = 0; i < len; ++i) prefix[i + 1] = prefix[i] + x[i] * x[i];
      const double total = prefix[len];
      for (std::size_t lag = min_lag - 1; lag <= max_lag + 1; ++lag) {
        const double head = prefix[len - lag];
        const double tail = total - prefix[lag];
        const double denom = std::sqrt(head * tail);
        r[lag] = denom > 0 ? acf[lag] / static_cast<double>(fft_size) / denom : 0.0;
      }

      double best = -1.0;
      for (std::size_t lag = min_lag; lag <= max_lag; ++lag) {
        if (r[lag] >= r[lag - 1] && r[lag] > r[lag + 1]) best = std::max(best, r[lag]);
      }
      for (std::size_t lag = min_lag; lag <= max_lag && best > 0; ++lag) {
        if (r[lag] >= r[lag - 1] && r[lag] > r[lag + 1] && r[lag] >= kOctavePreference * best) {
          const auto [offset, value] = ParabolicPeak(r[lag - 1], r[lag], r[lag + 1]);
          confidence = std::clamp(value, 0.0, 1.0);
          f0 = sr / (static_cast<double>(lag) + offset);
          voiced = value >= cfg.voicing_threshold && f0 >= cfg.fmin && f0 <= cfg.fmax;
          break;
        }
      }
    }
    track.voiced.push_back(voiced);
    track.f0.push_back(voiced ? std::optional<double>(f0) : std::nullopt);
    track.confidence.push_back(confidence);
  }
  return track;
}

PeriodSequence ExtractPeriods(const AudioBuffer& buf, const PitchTrack& track,
                              const VoiceConfig& cfg) {
  const auto voiced_frames = std::count(track.voiced.begin(), track.voiced.end(), true);
  if (voiced_frames < 2) throw InputError("insufficient voicing for period extraction");

  const std::vector<double>& x = buf.samples;
  const double sr = buf.sample_rate;
  const auto n = static_cast<std::ptrdiff_t>(x.size());
  PeriodSequence seq;

  std::size_t f = 0;
  while (f < track.size()) {
    if (!track.voiced[f]) {
      ++f;
      continue;
    }
    std::size_t g = f;
    while (g + 1 < track.size() && track.voiced[g + 1]) {
      const double step = *track.f0[g + 1] / *track.f0[g];
      if (step > kMaxF0Step || step < 1.0 / kMaxF0Step) break;
      ++g;
    }
    if (g - f + 1 < kMinRunFrames) {
      f = g + 1;
      continue;
    }
    const auto region_start = static_cast<std::ptrdiff_t>(f * track.hop);
    const auto region_end =
        std::min(n, static_cast<std::ptrdiff_t>(g * track.hop + track.frame_length));
    std::vector<double> region_f0;
    for (std::size_t k = f; k <= g; ++k) region_f0.push_back(*track.f0[k]);
    const double t0 = sr / *track.f0[f];
    const std::size_t first_frame = f;
    const std::size_t last_frame = g;
    f = g + 1;
    if (region_end - region_start < 4) continue;

    // Markers come from a copy band-limited just above the region's f0, which
    // leaves one dominant peak per cycle.
    AudioBuffer marker_buf;
    marker_buf.sample_rate = sr;
    marker_buf.samples.assign(x.begin() + region_start, x.begin() + region_end);
    std::nth_element(region_f0.begin(), region_f0.begin() + region_f0.size() / 2, region_f0.end());
    const double cutoff = cfg.period_lowpass_ratio * region_f0[region_f0.size() / 2];
    if (cfg.period_lowpass_ratio > 0.0 && cutoff < sr / 2.0) {
      marker_buf = Lowpass(marker_buf, cutoff);
    }
    const std::vector<double>& m = marker_buf.samples;
    const auto len = static_cast<std::ptrdiff_t>(m.size());

    auto refine = [&](std::ptrdiff_t i) {
      if (i <= 0 || i + 1 >= len) return static_cast<double>(i);
      return static_cast<double>(i) + ParabolicPeak(m[i - 1], m[i], m[i + 1]).first;
    };
    auto argmax = [&](std::ptrdiff_t lo, std::ptrdiff_t hi) {
      std::ptrdiff_t best = lo;
      for (std::ptrdiff_t i = lo + 1; i <= hi; ++i) {
        if (m[i] > m[best]) best = i;
      }
      return best;
    };

    // Final marker: peak of a wider-band copy near the band-limited one.
    AudioBuffer snap_buf;
    snap_buf.sample_rate = sr;
    snap_buf.samples.assign(x.begin() + region_start, x.begin() + region_end);
    const double snap_cutoff = cfg.period_snap_ratio * region_f0[region_f0.size() / 2];
    if (cfg.period_snap_ratio > 0.0 && snap_cutoff < sr / 2.0) snap_buf = Lowpass(snap_buf, snap_cutoff);
    const std::span<const double> raw(snap_buf.samples);
    auto snap = [&](double coarse, double period) {
      const auto c = std::lround(coarse);
      const auto reach = static_cast<std::ptrdiff_t>(std::lround(kMarkerSnap * period));
      const auto lo = std::max<std::ptrdiff_t>(0, c - reach);
      const auto hi = std::min<std::ptrdiff_t>(len - 1, c + reach);
      std::ptrdiff_t best = lo;
      for (std::ptrdiff_t i = lo + 1; i <= hi; ++i) {
        if (raw[i] > raw[best]) best = i;
      }
      if (best <= 0 || best + 1 >= len) return static_cast<double>(best);
      return static_cast<double>(best) + ParabolicPeak(raw[best - 1], raw[best], raw[best + 1]).first;
    };

    const auto first_hi = std::min(len - 1, static_cast<std::ptrdiff_t>(t0));
    if (first_hi <= 0) continue;
    double pos = refine(argmax(0, first_hi));
    double mark = snap(pos, t0);

    // Frame whose centre is nearest the marker, held inside this region.
    const double half_frame = 0.5 * static_cast<double>(track.frame_length);
    auto frame_f0 = [&](double p) {
      const double idx = std::round((static_cast<double>(region_start) + p - half_frame) /
                                    static_cast<double>(track.hop));
      const auto k = static_cast<std::size_t>(std::clamp(
          idx, static_cast<double>(first_frame), static_cast<double>(last_frame)));
      return *track.f0[k];
    };

    while (true) {
      const double period = sr / frame_f0(pos);
      const double predicted = pos + period;
      const auto lo = static_cast<std::ptrdiff_t>(std::ceil(predicted - 0.25 * period));
      const auto hi = static_cast<std::ptrdiff_t>(std::floor(predicted + 0.25 * period));
      if (hi >= len - 1 || lo <= static_cast<std::ptrdiff_t>(pos)) break;
      const double next_pos = refine(argmax(lo, hi));
      const double next_mark = snap(next_pos, period);
      if (next_mark <= mark) break;

      // This cycle's own peak (near its marker) down to the trough before the
      // next marker; the next cycle's rising edge stays out of the maximum.
      const auto reach = static_cast<std::ptrdiff_t>(std::lround(kMarkerSnap * period));
      const auto start = std::max<std::ptrdiff_t>(0, std::lround(mark));
      const auto peak_lo = region_start + std::max<std::ptrdiff_t>(0, start - reach);
      const auto peak_hi = region_start + std::min<std::ptrdiff_t>(len, start + reach + 1);
      const auto cycle_lo = region_start + start;
      const auto cycle_hi = region_start + std::lround(next_mark);
      const double mx = *std::max_element(x.begin() + peak_lo, x.begin() + peak_hi);
      const double mn = *std::min_element(x.begin() + cycle_lo, x.begin() + cycle_hi);

      seq.periods.push_back((next_mark - mark) / sr);
      seq.amplitudes.push_back(mx - mn);
      pos = next_pos;
      mark = next_mark;
    }
  }

  if (seq.size() < 2) throw InputError("insufficient voicing for period extraction");
  return seq;
}

double HarmonicDecomposition::harmonic_energy() const {
  return std::accumulate(harmonic_energies.begin(), harmonic_energies.end(), 0.0);
}

HarmonicDecomposition DecomposeHarmonics(std::span<const double> power, double f0,
                                         double bin_hz, double half_bandwidth_bins) {
  if (!(f0 > 0 && bin_hz > 0)) throw InputError("harmonic decomposition needs f0 > 0");
  const std::size_t last = power.size() - 1;
  const double spacing = f0 / bin_hz;

  // owner[k] = harmonic index (1-based) claiming bin k, 0 for residual.
  std::vector<std::size_t> owner(power.size(), 0);
  std::size_t harmonics = 0;
  for (std::size_t h = 1;; ++h) {
    const double center = static_cast<double>(h) * spacing;
    if (center + half_bandwidth_bins > static_cast<double>(last)) break;
    harmonics = h;
    const auto lo = static_cast<std::size_t>(std::max(1.0, std::ceil(center - half_bandwidth_bins)));
    const auto hi = static_cast<std::size_t>(std::floor(center + half_bandwidth_bins));
    for (std::size_t k = lo; k <= hi; ++k) {
      const double d_new = std::abs(static_cast<double>(k) - center);
      if (owner[k] == 0 ||
          d_new < std::abs(static_cast<double>(k) - static_cast<double>(owner[k]) * spacing)) {
        owner[k] = h;
      }
    }
  }

  HarmonicDecomposition out;
  if (harmonics == 0) throw InputError("f0 leaves no harmonic below Nyquist");
  std::vector<double> band_energy(harmonics + 1, 0.0);
  std::vector<std::size_t> band_bins(harmonics + 1, 0);
  double total = 0.0;
  for (std::size_t k = 1; k <= last; ++k) {
    band_energy[owner[k]] += power[k];
    ++band_bins[owner[k]];
    total += power[k];
  }
  const double density =
      band_bins[0] > 0 ? band_energy[0] / static_cast<double>(band_bins[0]) : 0.0;
  out.harmonic_energies.resize(harmonics);
  for (std::size_t h = 1; h <= harmonics; ++h) {
    out.harmonic_energies[h - 1] =
        std::max(0.0, band_energy[h] - density * static_cast<double>(band_bins[h]));
  }
  out.noise_energy = std::max(0.0, total - out.harmonic_energy());
  return out;
}

std::optional<double> Hnr(const AudioBuffer& buf, const PitchTrack& track,
                          const VoiceConfig& cfg) {
  const std::size_t len = cfg.hnr_frame;
  if (track.voiced_fraction() == 0.0 || buf.samples.size() < len) return std::nullopt;
  const double sr = buf.sample_rate;
  const double bin_hz = sr / static_cast<double>(len);
  const std::vector<double> window = MakeWindow(WindowKind::kHann, len);
  RealFft fft(len);
  std::vector<std::complex<double>> spec(fft.bins());
  std::vector<double> power(fft.bins());

  double acc = 0.0;
  std::size_t count = 0;
  const std::size_t frames = 1 + (buf.samples.size() - len) / cfg.hnr_hop;
  for (std::size_t f = 0; f < frames; ++f) {
    const std::size_t start = f * cfg.hnr_hop;
    const double center = (static_cast<double>(start) + len / 2.0) / sr;
    const auto f0 = NearestVoicedF0(track, center);
    if (!f0) continue;
    std::vector<double> x = MeanRemoved(std::span<const double>(buf.samples).subspan(start, len));
    for (std::size_t i = 0; i < len; ++i) x[i] *= window[i];
    fft.Forward(x, spec);
    for (std::size_t k = 0; k < spec.size(); ++k) power[k] = std::norm(spec[k]);

    const double refined = RefineF0(power, *f0, bin_hz);
    const HarmonicDecomposition d =
        DecomposeHarmonics(power, refined, bin_hz, cfg.harmonic_half_bandwidth);
    const double harmonic = d.harmonic_energy();
    double frame_db;
    if (d.noise_energy <= 0.0) {
      frame_db = cfg.hnr_cap;
    } else if (harmonic <= 0.0) {
      frame_db = -cfg.hnr_cap;
    } else {
      frame_db = std::clamp(10.0 * std::log10(harmonic / d.noise_energy), -cfg.hnr_cap, cfg.hnr_cap);
    }
    acc += frame_db;
    ++count;
  }
  if (count == 0) return std::nullopt;
  return acc / static_cast<double>(count);
}

Cepstrum RealCepstrum(std::span<const double> frame, double sample_rate) {
  const std::size_t len = frame.size();
  if (len < 4) throw InputError("cepstrum frame too short");
  RealFft fft(len);
  std::vector<std::complex<double>> spec(fft.bins());
  fft.Forward(frame, spec);
  double peak = 0.0;
  for (const auto& c : spec) peak = std::max(peak, std::norm(c));
  const double floor = peak > 0 ? peak * 1e-10 : std::numeric_limits<double>::min();
  for (auto& c : spec) c = 10.0 * std::log10(std::max(std::norm(c), floor));
  std::vector<double> full(len);
  fft.Inverse(spec, full);
  Cepstrum out;
  out.quefrency_rate = 1.0 / sample_rate;
  out.values.assign(full.begin(), full.begin() + static_cast<std::ptrdiff_t>(len / 2 + 1));
  for (double& v : out.values) v /= static_cast<double>(len);
  return out;
}

std::optional<double> Cpp(const AudioBuffer& buf, const VoiceConfig& cfg) {
  const std::size_t len = cfg.cpp_frame;
  if (buf.samples.size() < len) throw InputError("buffer shorter than one cepstral frame");
  const double sr = buf.sample_rate;
  const auto q_lo = static_cast<std::size_t>(std::ceil(sr / cfg.cpp_fmax));
  const auto q_hi = static_cast<std::size_t>(std::floor(sr / cfg.cpp_fmin));
  if (q_hi >= len / 2 || q_lo < 1 || q_lo >= q_hi) {
    throw InputError("cepstral search range does not fit the analysis frame");
  }
  const std::vector<double> window = MakeWindow(WindowKind::kHann, len);

  double acc = 0.0;
  std::size_t count = 0;
  const std::size_t frames = 1 + (buf.samples.size() - len) / cfg.cpp_hop;
  for (std::size_t f = 0; f < frames; ++f) {
    std::vector<double> x =
        MeanRemoved(std::span<const double>(buf.samples).subspan(f * cfg.cpp_hop, len));
    if (Rms(x) < cfg.cpp_energy_gate) continue;
    for (std::size_t i = 0; i < len; ++i) x[i] *= window[i];
    const Cepstrum c = RealCepstrum(x, sr);

    std::size_t peak_q = q_lo;
    for (std::size_t q = q_lo; q <= q_hi; ++q) {
      if (c.values[q] > c.values[peak_q]) peak_q = q;
    }
    double baseline;
    if (cfg.cpp_baseline == CppBaseline::kRegression) {
      const double m = static_cast<double>(q_hi - q_lo + 1);
      double sq = 0, sc = 0, sqq = 0, sqc = 0;
      for (std::size_t q = q_lo; q <= q_hi; ++q) {
        const double qd = static_cast<double>(q);
        sq += qd;
        sc += c.values[q];
        sqq += qd * qd;
        sqc += qd * c.values[q];
      }
      const double slope = (m * sqc - sq * sc) / (m * sqq - sq * sq);
      const double intercept = (sc - slope * sq) / m;
      baseline = intercept + slope * static_cast<double>(peak_q);
    } else {
      baseline = std::accumulate(c.values.begin() + 1, c.values.end(), 0.0) /
                 static_cast<double>(c.bins());
    }
    acc += c.values[peak_q] - baseline;
    ++count;
  }
  if (count == 0) return std::nullopt;
  return acc / static_cast<double>(count);
}

double Jitter(const PeriodSequence& seq) {
  if (seq.periods.size() < 2) throw InputError("jitter needs at least two periods");
  const double mean = Mean(seq.periods);
  if (!(mean > 0)) throw InputError("jitter needs a positive mean period");
  return RelativeVariability(seq.periods, mean);
}

double Shimmer(const PeriodSequence& seq) {
  if (seq.amplitudes.size() < 2) throw InputError("shimmer needs at least two periods");
  const double mean = Mean(seq.amplitudes);
  if (mean == 0.0) throw InputError("shimmer undefined for zero mean amplitude");
  return RelativeVariability(seq.amplitudes, mean);
}

VoiceMetrics VoiceReport(const AudioBuffer& buf, const VoiceConfig& cfg) {
  cfg.Validate();
  VoiceMetrics m;
  m.rms = ComputeRmsStats(FrameRms(buf, cfg.rms_frame, cfg.rms_hop));
  const PitchTrack track = EstimateF0(buf, cfg);
  m.voiced_fraction = track.voiced_fraction();
  if (m.voiced_fraction > 0.0) m.hnr_db = Hnr(buf, track, cfg);
  if (buf.samples.size() >= cfg.cpp_frame) m.cpp = Cpp(buf, cfg);
  try {
    const PeriodSequence seq = ExtractPeriods(buf, track, cfg);
    m.jitter = Jitter(seq);
    if (Mean(seq.amplitudes) != 0.0) m.shimmer = Shimmer(seq);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::kInput) throw;
  }
  return m;
}

std::vector<RadarPair> RadarNormalize(
    std::span<const std::pair<VoiceMetrics, VoiceMetrics>> pairs) {
  if (pairs.empty()) throw InputError("radar normalization needs at least one pair");
  using Getter = std::optional<double> VoiceMetrics::*;
  using Setter = double RadarPoint::*;
  const std::array<std::pair<Getter, Setter>, 4> axes = {{
      {&VoiceMetrics::hnr_db, &RadarPoint::hnr},
      {&VoiceMetrics::cpp, &RadarPoint::cpp},
      {&VoiceMetrics::jitter, &RadarPoint::jitter},
      {&VoiceMetrics::shimmer, &RadarPoint::shimmer},
  }};
  const std::array<const char*, 4> names = {"hnr", "cpp", "jitter", "shimmer"};

  std::vector<RadarPair> out(pairs.size());
  for (std::size_t a = 0; a < axes.size(); ++a) {
    const auto [get, set] = axes[a];
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const auto& [orig, trans] : pairs) {
      if (!(orig.*get) || !(trans.*get)) {
        throw InputError(std::string("radar normalization: ") + names[a] + " is absent");
      }
      lo = std::min({lo, *(orig.*get), *(trans.*get)});
      hi = std::max({hi, *(orig.*get), *(trans.*get)});
    }
    auto scale = [&](double v) { return hi > lo ? (v - lo) / (hi - lo) : 0.5; };
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      out[i].original.*set = scale(*(pairs[i].first.*get));
      out[i].transformed.*set = scale(*(pairs[i].second.*get));
    }
  }
  return out;
}

}  // namespace detoxaudit

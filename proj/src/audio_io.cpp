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

#include "audio_io.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <numeric>

#include "error.hpp"
#include "fft.hpp"
#include "spectral.hpp"
#include "wav.hpp"

namespace detoxaudit {
namespace {

// Resampler design: Kaiser-windowed sinc, 16 zero crossings per side at the
// output band edge, cutoff at 95% of the lower Nyquist.
constexpr double kResampleZeroCrossings = 16.0;
constexpr double kResampleRolloff = 0.95;
constexpr double kKaiserBeta = 8.6;
constexpr std::int64_t kMaxPhaseTable = 4096;

double Sinc(double x) {
  if (std::abs(x) < 1e-12) return 1.0;
  const double px = std::numbers::pi * x;
  return std::sin(px) / px;
}

double Kaiser(double x, double beta) {
  if (std::abs(x) >= 1.0) return 0.0;
  return std::cyl_bessel_i(0.0, beta * std::sqrt(1.0 - x * x)) /
         std::cyl_bessel_i(0.0, beta);
}

// Fills `taps` for an output sample positioned `frac` in [0, 1) past input
// index idx; tap t multiplies input idx - half + 1 + t.
void DesignTaps(double frac, double cutoff, int half, std::span<double> taps) {
  double sum = 0.0;
  for (int t = 0; t < 2 * half; ++t) {
    const double offset = static_cast<double>(t - half + 1);
    const double d = frac - offset;
    const double w = cutoff * Sinc(cutoff * d) * Kaiser(d / half, kKaiserBeta);
    taps[t] = w;
    sum += w;
  }
  if (sum != 0.0) {
    for (double& w : taps) w /= sum;
  }
}

double ApplyTaps(std::span<const double> x, std::int64_t idx, int half,
                 std::span<const double> taps) {
  const std::int64_t first = idx - half + 1;
  const auto n = static_cast<std::int64_t>(x.size());
  double acc = 0.0;
  if (first >= 0 && first + 2 * half <= n) {
    const double* p = x.data() + first;
    for (int t = 0; t < 2 * half; ++t) acc += p[t] * taps[t];
    return acc;
  }
  for (int t = 0; t < 2 * half; ++t) {
    const std::int64_t j = first + t;
    if (j >= 0 && j < n) acc += x[static_cast<std::size_t>(j)] * taps[t];
  }
  return acc;
}

bool IsIntegral(double v) {
  return v == std::floor(v) && v < 9.0e15;
}

struct Biquad {
  double b0, b1, b2, a1, a2;
};

std::array<Biquad, 2> Butterworth(double cutoff, double rate, bool highpass) {
  // 4th-order Butterworth as two sections with Q = 1 / (2 cos(k pi / 8)).
  const std::array<double, 2> qs = {1.0 / (2.0 * std::cos(std::numbers::pi / 8.0)),
                                    1.0 / (2.0 * std::cos(3.0 * std::numbers::pi / 8.0))};
  const double w0 = 2.0 * std::numbers::pi * cutoff / rate;
  const double cw = std::cos(w0);
  const double edge = highpass ? (1.0 + cw) / 2.0 : (1.0 - cw) / 2.0;
  const double mid = highpass ? -(1.0 + cw) : (1.0 - cw);
  std::array<Biquad, 2> sections{};
  for (std::size_t i = 0; i < 2; ++i) {
    const double alpha = std::sin(w0) / (2.0 * qs[i]);
    const double a0 = 1.0 + alpha;
    sections[i] = {edge / a0, mid / a0, edge / a0, -2.0 * cw / a0, (1.0 - alpha) / a0};
  }
  return sections;
}

void RunCascade(const std::array<Biquad, 2>& sections, std::vector<double>& x) {
  for (const Biquad& s : sections) {
    double z1 = 0.0, z2 = 0.0;
    for (double& v : x) {
      const double in = v;
      const double out = s.b0 * in + z1;
      z1 = s.b1 * in - s.a1 * out + z2;
      z2 = s.b2 * in - s.a2 * out;
      v = out;
    }
  }
}

std::vector<double> MeanMagnitude(std::span<const double> padded,
                                  std::span<const std::size_t> frames,
                                  std::span<const double> window, RealFft& fft) {
  const std::size_t frame_length = window.size();
  std::vector<double> profile(fft.bins(), 0.0);
  std::vector<double> seg(frame_length);
  std::vector<std::complex<double>> spec(fft.bins());
  for (std::size_t k : frames) {
    const std::size_t start = k * kDenoiseHop;
    for (std::size_t i = 0; i < frame_length; ++i) seg[i] = padded[start + i] * window[i];
    fft.Forward(seg, spec);
    for (std::size_t b = 0; b < spec.size(); ++b) profile[b] += std::abs(spec[b]);
  }
  if (!frames.empty()) {
    for (double& v : profile) v /= static_cast<double>(frames.size());
  }
  return profile;
}

AudioBuffer ZeroPhaseButterworth(const AudioBuffer& buf, double cutoff, bool highpass) {
  const std::size_t n = buf.samples.size();
  AudioBuffer out = buf;
  if (n < 2) return out;

  // Odd extension keeps start-up transients out of the signal region.
  const auto pad = std::min<std::size_t>(
      n - 1, static_cast<std::size_t>(std::lround(3.0 * buf.sample_rate / cutoff)));
  const std::vector<double>& x = buf.samples;
  std::vector<double> ext;
  ext.reserve(n + 2 * pad);
  for (std::size_t i = pad; i >= 1; --i) ext.push_back(2.0 * x[0] - x[i]);
  ext.insert(ext.end(), x.begin(), x.end());
  for (std::size_t i = 1; i <= pad; ++i) ext.push_back(2.0 * x[n - 1] - x[n - 1 - i]);

  const auto sections = Butterworth(cutoff, buf.sample_rate, highpass);
  RunCascade(sections, ext);
  std::reverse(ext.begin(), ext.end());
  RunCascade(sections, ext);
  std::reverse(ext.begin(), ext.end());
  std::copy(ext.begin() + static_cast<std::ptrdiff_t>(pad),
            ext.begin() + static_cast<std::ptrdiff_t>(pad + n), out.samples.begin());
  return out;
}

}  // namespace

void PreprocessConfig::Validate() const {
  if (!(target_rate > 0)) throw InputError("target_rate must be positive");
  if (!(max_duration > 0)) throw InputError("max_duration must be positive");
  if (!(preemphasis_alpha >= 0.0 && preemphasis_alpha < 1.0)) {
    throw InputError("preemphasis_alpha must lie in [0, 1)");
  }
  if (!(highpass_cutoff > 0 && highpass_cutoff < target_rate / 2.0)) {
    throw InputError("highpass_cutoff must lie in (0, target_rate/2)");
  }
  if (!(noise_profile_window * target_rate >= static_cast<double>(kDenoiseFrameLength))) {
    throw InputError("noise_profile_window must hold at least one STFT frame");
  }
  if (!(subtraction_floor >= 0.0 && subtraction_floor <= 1.0)) {
    throw InputError("subtraction_floor must lie in [0, 1]");
  }
}

AudioBuffer LoadTrack(const std::filesystem::path& path) {
  const WavData wav = ReadWav(path);
  AudioBuffer buf;
  buf.sample_rate = wav.sample_rate;
  buf.source_id = path.filename().string();
  const std::size_t frames = wav.interleaved.size() / wav.channels;
  buf.samples.resize(frames);
  for (std::size_t i = 0; i < frames; ++i) {
    double acc = 0.0;
    for (std::size_t c = 0; c < wav.channels; ++c) acc += wav.interleaved[i * wav.channels + c];
    buf.samples[i] = acc / wav.channels;
  }
  return buf;
}

AudioBuffer Resample(const AudioBuffer& buf, double target_rate) {
  if (!(target_rate > 0)) throw InputError("target_rate must be positive");
  if (!(buf.sample_rate > 0)) throw InputError("buffer has no sample rate");
  if (buf.sample_rate == target_rate) return buf;

  const double ratio = target_rate / buf.sample_rate;
  const double cutoff = kResampleRolloff * std::min(1.0, ratio);
  const int half = static_cast<int>(std::ceil(kResampleZeroCrossings / cutoff));
  const auto out_n = static_cast<std::size_t>(
      std::llround(static_cast<double>(buf.samples.size()) * ratio));

  AudioBuffer out = buf;
  out.sample_rate = target_rate;
  out.samples.assign(out_n, 0.0);
  std::span<const double> x = buf.samples;
  std::vector<double> taps(2 * half);

  if (IsIntegral(buf.sample_rate) && IsIntegral(target_rate)) {
    const auto src = static_cast<std::int64_t>(buf.sample_rate);
    const auto dst = static_cast<std::int64_t>(target_rate);
    const std::int64_t g = std::gcd(src, dst);
    const std::int64_t up = dst / g;    // output steps per cycle
    const std::int64_t down = src / g;  // input steps per cycle
    if (up <= kMaxPhaseTable) {
      std::vector<double> table(static_cast<std::size_t>(up) * 2 * half);
      for (std::int64_t p = 0; p < up; ++p) {
        DesignTaps(static_cast<double>(p) / up, cutoff, half,
                   std::span<double>(table).subspan(p * 2 * half, 2 * half));
      }
      for (std::size_t n = 0; n < out_n; ++n) {
        const std::int64_t num = static_cast<std::int64_t>(n) * down;
        const std::int64_t idx = num / up;
        const std::int64_t phase = num % up;
        out.samples[n] = ApplyTaps(
            x, idx, half, std::span<const double>(table).subspan(phase * 2 * half, 2 * half));
      }
      return out;
    }
  }

  for (std::size_t n = 0; n < out_n; ++n) {
    const double t = static_cast<double>(n) / ratio;
    const double base = std::floor(t);
    DesignTaps(t - base, cutoff, half, taps);
    out.samples[n] = ApplyTaps(x, static_cast<std::int64_t>(base), half, taps);
  }
  return out;
}

AudioBuffer Truncate(const AudioBuffer& buf, double max_duration) {
  if (!(max_duration > 0)) throw InputError("max_duration must be positive");
  const auto limit = static_cast<std::size_t>(std::floor(max_duration * buf.sample_rate));
  AudioBuffer out = buf;
  if (out.samples.size() > limit) out.samples.resize(limit);
  return out;
}

AudioBuffer Preemphasis(const AudioBuffer& buf, double alpha) {
  if (!(alpha >= 0.0 && alpha < 1.0)) {
    throw InputError("pre-emphasis coefficient must lie in [0, 1)");
  }
  AudioBuffer out = buf;
  for (std::size_t n = 1; n < buf.samples.size(); ++n) {
    out.samples[n] = buf.samples[n] - alpha * buf.samples[n - 1];
  }
  return out;
}

AudioBuffer Highpass(const AudioBuffer& buf, double cutoff) {
  if (!(cutoff > 0)) throw InputError("high-pass cutoff must be positive");
  if (cutoff >= buf.sample_rate / 2.0) {
    throw InputError("high-pass cutoff must be below Nyquist");
  }
  return ZeroPhaseButterworth(buf, cutoff, /*highpass=*/true);
}

AudioBuffer Lowpass(const AudioBuffer& buf, double cutoff) {
  if (!(cutoff > 0)) throw InputError("low-pass cutoff must be positive");
  if (cutoff >= buf.sample_rate / 2.0) {
    throw InputError("low-pass cutoff must be below Nyquist");
  }
  return ZeroPhaseButterworth(buf, cutoff, /*highpass=*/false);
}

AudioBuffer SpectralSubtract(const AudioBuffer& buf, const PreprocessConfig& cfg) {
  constexpr std::size_t kFrame = kDenoiseFrameLength;
  constexpr std::size_t kPad = kFrame / 2;
  if (!(cfg.subtraction_floor >= 0.0 && cfg.subtraction_floor <= 1.0)) {
    throw InputError("subtraction_floor must lie in [0, 1]");
  }
  const std::size_t n = buf.samples.size();
  const auto window_samples =
      static_cast<std::size_t>(std::llround(cfg.noise_profile_window * buf.sample_rate));
  if (window_samples < kFrame) {
    throw InputError("noise profile window is shorter than one STFT frame");
  }
  if (n <= window_samples) throw InputError("buffer shorter than noise window");

  const std::size_t frames = 1 + (n + kDenoiseHop - 1) / kDenoiseHop;
  std::vector<double> padded((frames - 1) * kDenoiseHop + kFrame, 0.0);
  std::copy(buf.samples.begin(), buf.samples.end(), padded.begin() + kPad);

  const std::vector<double> window = MakeWindow(WindowKind::kHann, kFrame);
  RealFft fft(kFrame);

  // Frames lying entirely inside the original signal, by index.
  const std::size_t first_full = (kPad + kDenoiseHop - 1) / kDenoiseHop;
  std::vector<std::size_t> leading;
  for (std::size_t k = first_full; k < frames; ++k) {
    const std::size_t start = k * kDenoiseHop - kPad;
    if (start + kFrame > window_samples) break;
    leading.push_back(k);
  }

  std::vector<std::size_t> profile_frames;
  if (cfg.noise_mode == NoiseProfileMode::kLeadingWindow) {
    profile_frames = leading;
  } else {
    std::vector<std::pair<double, std::size_t>> energies;
    for (std::size_t k = first_full; k < frames; ++k) {
      const std::size_t start = k * kDenoiseHop - kPad;
      if (start + kFrame > n) break;
      double e = 0.0;
      for (std::size_t i = 0; i < kFrame; ++i) {
        const double v = padded[k * kDenoiseHop + i] * window[i];
        e += v * v;
      }
      energies.emplace_back(e, k);
    }
    const std::size_t count = std::min(std::max<std::size_t>(leading.size(), 1), energies.size());
    std::partial_sort(energies.begin(), energies.begin() + static_cast<std::ptrdiff_t>(count),
                      energies.end());
    for (std::size_t i = 0; i < count; ++i) profile_frames.push_back(energies[i].second);
    std::sort(profile_frames.begin(), profile_frames.end());
  }
  const std::vector<double> noise = MeanMagnitude(padded, profile_frames, window, fft);

  std::vector<double> acc(padded.size(), 0.0);
  std::vector<double> weight(padded.size(), 0.0);
  std::vector<double> seg(kFrame);
  std::vector<std::complex<double>> spec(fft.bins());
  const double floor = cfg.subtraction_floor;
  for (std::size_t k = 0; k < frames; ++k) {
    const std::size_t start = k * kDenoiseHop;
    for (std::size_t i = 0; i < kFrame; ++i) seg[i] = padded[start + i] * window[i];
    fft.Forward(seg, spec);
    for (std::size_t b = 0; b < spec.size(); ++b) {
      const double mag = std::abs(spec[b]);
      const double cleaned = std::max(mag - noise[b], floor * noise[b]);
      spec[b] = mag > 0.0 ? spec[b] * (cleaned / mag) : std::complex<double>(cleaned, 0.0);
    }
    fft.Inverse(spec, seg);
    for (std::size_t i = 0; i < kFrame; ++i) {
      acc[start + i] += seg[i] / static_cast<double>(kFrame) * window[i];
      weight[start + i] += window[i] * window[i];
    }
  }

  AudioBuffer out = buf;
  for (std::size_t i = 0; i < n; ++i) {
    const double w = weight[kPad + i];
    out.samples[i] = w > 1e-8 ? acc[kPad + i] / w : 0.0;
  }
  return out;
}

AudioBuffer Normalize(const AudioBuffer& buf) {
  AudioBuffer out = buf;
  double peak = 0.0;
  for (double v : buf.samples) peak = std::max(peak, std::abs(v));
  if (peak == 0.0) {
    out.silent = true;
    return out;
  }
  out.silent = false;
  for (double& v : out.samples) v /= peak;
  return out;
}

AudioBuffer Preprocess(const AudioBuffer& buf, const PreprocessConfig& cfg) {
  if (buf.preprocessed) return buf;
  cfg.Validate();
  AudioBuffer out = Resample(buf, cfg.target_rate);
  out = Truncate(out, cfg.max_duration);
  out = Preemphasis(out, cfg.preemphasis_alpha);
  if (cfg.denoise) out = SpectralSubtract(out, cfg);
  out = Highpass(out, cfg.highpass_cutoff);
  out = Normalize(out);
  out.preprocessed = true;
  return out;
}

}  // namespace detoxaudit

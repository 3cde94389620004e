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

#include "synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace detoxaudit::synth {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::size_t Samples(double sample_rate, double seconds) {
  return static_cast<std::size_t>(std::llround(sample_rate * seconds));
}

// Renders cycles back to back on the continuous time axis. shape(phase) is
// evaluated with phase in [0, 2*pi).
template <typename Shape>
std::vector<double> RenderCycles(const std::vector<double>& periods,
                                 const std::vector<double>& gains, double sample_rate,
                                 Shape shape) {
  double total = 0.0;
  for (double p : periods) total += p;
  const auto n = static_cast<std::size_t>(std::floor(total * sample_rate));
  std::vector<double> out(n, 0.0);
  double start = 0.0;
  std::size_t c = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / sample_rate;
    while (c + 1 < periods.size() && t >= start + periods[c]) start += periods[c++];
    const double phase = kTwoPi * (t - start) / periods[c];
    out[i] = gains[c] * shape(phase);
  }
  return out;
}

}  // namespace

std::vector<double> Sine(double freq, double sample_rate, double seconds, double amplitude,
                         double phase) {
  std::vector<double> x(Samples(sample_rate, seconds));
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] = amplitude * std::sin(kTwoPi * freq * static_cast<double>(i) / sample_rate + phase);
  }
  return x;
}

std::vector<double> HarmonicTone(double f0, double sample_rate, double seconds, int harmonics) {
  std::vector<double> x(Samples(sample_rate, seconds), 0.0);
  for (int h = 1; h <= harmonics; ++h) {
    if (h * f0 >= sample_rate / 2) break;
    for (std::size_t i = 0; i < x.size(); ++i) {
      x[i] += std::sin(kTwoPi * h * f0 * static_cast<double>(i) / sample_rate + h) / h;
    }
  }
  return x;
}

std::vector<double> WhiteNoise(std::size_t n, double rms, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> dist(0.0, rms);
  std::vector<double> x(n);
  for (double& v : x) v = dist(rng);
  return x;
}

std::vector<double> HarmonicPlusNoise(double f0, double sample_rate, double seconds,
                                      double hnr_db, std::uint64_t seed, int harmonics) {
  std::vector<double> x = HarmonicTone(f0, sample_rate, seconds, harmonics);
  std::vector<double> noise = WhiteNoise(x.size(), 1.0, seed);
  ScaleToRms(noise, Rms(x) / std::pow(10.0, hnr_db / 20.0));
  for (std::size_t i = 0; i < x.size(); ++i) x[i] += noise[i];
  return x;
}

std::vector<double> PulseTrain(double f0, double sample_rate, double seconds) {
  std::vector<double> x(Samples(sample_rate, seconds), 0.0);
  const auto step = static_cast<std::size_t>(std::llround(sample_rate / f0));
  for (std::size_t i = 0; i < x.size(); i += step) x[i] = 1.0;
  return x;
}

double Rms(const std::vector<double>& x) {
  if (x.empty()) return 0.0;
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s / static_cast<double>(x.size()));
}

void ScaleToRms(std::vector<double>& x, double rms) {
  const double current = Rms(x);
  if (current <= 0.0) return;
  for (double& v : x) v *= rms / current;
}

CycleSignal JitteredCosine(double f0, double sample_rate, std::size_t cycles,
                           double perturbation, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-perturbation, perturbation);
  CycleSignal s;
  for (std::size_t i = 0; i < cycles; ++i) s.periods.push_back((1.0 + u(rng)) / f0);
  s.amplitudes.assign(cycles, 2.0);
  const std::vector<double> gains(cycles, 1.0);
  s.samples = RenderCycles(s.periods, gains, sample_rate, [](double p) { return std::cos(p); });
  return s;
}

CycleSignal AmplitudePatternSine(double f0, double sample_rate, std::size_t cycles,
                                 const std::vector<double>& amplitudes) {
  CycleSignal s;
  s.periods.assign(cycles, 1.0 / f0);
  std::vector<double> gains;
  for (std::size_t i = 0; i < cycles; ++i) {
    gains.push_back(amplitudes[i % amplitudes.size()]);
    s.amplitudes.push_back(2.0 * gains.back());
  }
  s.samples = RenderCycles(s.periods, gains, sample_rate, [](double p) { return std::sin(p); });
  return s;
}

std::vector<double> VoiceLike(const VoiceSpec& spec, double sample_rate) {
  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> periods, gains;
  double t = 0.0;
  while (t < spec.seconds) {
    const double vibrato = 1.0 + 0.01 * std::sin(kTwoPi * 5.0 * t);
    const double period = (1.0 + spec.jitter * u(rng)) / (spec.f0 * vibrato);
    periods.push_back(period);
    gains.push_back(1.0 + spec.shimmer * u(rng));
    t += period;
  }
  std::vector<double> voiced = RenderCycles(periods, gains, sample_rate, [](double p) {
    double v = 0.0;
    for (int h = 1; h <= 12; ++h) v += std::sin(h * p + h) / h;
    return v;
  });
  std::vector<double> noise = WhiteNoise(voiced.size(), 1.0, spec.seed ^ 0x5eedull);
  ScaleToRms(noise, Rms(voiced) / std::pow(10.0, spec.hnr_db / 20.0));
  for (std::size_t i = 0; i < voiced.size(); ++i) voiced[i] += noise[i];
  const double peak = *std::max_element(voiced.begin(), voiced.end(),
                                        [](double a, double b) { return std::abs(a) < std::abs(b); });
  for (double& v : voiced) v *= spec.level / std::abs(peak);

  std::vector<double> out =
      WhiteNoise(Samples(sample_rate, spec.lead_seconds), spec.lead_noise_rms, spec.seed + 7);
  out.insert(out.end(), voiced.begin(), voiced.end());
  return out;
}

}  // namespace detoxaudit::synth

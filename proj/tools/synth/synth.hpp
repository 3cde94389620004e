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

// Synthetic test signals with known acoustic properties. Shared by the unit
// tests, the acceptance suite and the fixture generator.

#ifndef DETOXAUDIT_TOOLS_SYNTH_SYNTH_HPP_
#define DETOXAUDIT_TOOLS_SYNTH_SYNTH_HPP_

#include <cstddef>
#include <cstdint>
#include <vector>

namespace detoxaudit::synth {

std::vector<double> Sine(double freq, double sample_rate, double seconds, double amplitude = 1.0,
                         double phase = 0.0);

// Sum of sin(2*pi*h*f0*t + h) / h for h = 1..harmonics.
std::vector<double> HarmonicTone(double f0, double sample_rate, double seconds,
                                 int harmonics = 7);

std::vector<double> WhiteNoise(std::size_t n, double rms, std::uint64_t seed);

// HarmonicTone plus white noise whose energy is hnr_db below the tone's.
std::vector<double> HarmonicPlusNoise(double f0, double sample_rate, double seconds,
                                      double hnr_db, std::uint64_t seed, int harmonics = 7);

// Unit impulses every round(sample_rate / f0) samples.
std::vector<double> PulseTrain(double f0, double sample_rate, double seconds);

double Rms(const std::vector<double>& x);
void ScaleToRms(std::vector<double>& x, double rms);

struct CycleSignal {
  std::vector<double> samples;
  std::vector<double> periods;     // seconds, as constructed
  std::vector<double> amplitudes;  // peak-to-peak, as constructed
};

// Whole cosine cycles, each starting at its peak, with periods drawn
// uniformly from T0 * (1 +/- perturbation). Period lengths are fractional;
// each cycle is rendered on the continuous time axis.
CycleSignal JitteredCosine(double f0, double sample_rate, std::size_t cycles,
                           double perturbation, std::uint64_t seed);

// Whole sine cycles with peak amplitudes cycling through `amplitudes`.
CycleSignal AmplitudePatternSine(double f0, double sample_rate, std::size_t cycles,
                                 const std::vector<double>& amplitudes);

// A voice-like test track: `lead_seconds` of low noise, then a harmonic tone
// with slow vibrato, per-cycle jitter and additive noise at `hnr_db`.
struct VoiceSpec {
  double f0 = 150.0;
  double seconds = 4.0;
  double lead_seconds = 0.6;
  double hnr_db = 15.0;
  double jitter = 0.005;       // relative period perturbation
  double shimmer = 0.03;       // relative amplitude perturbation
  double level = 0.5;          // peak-ish amplitude of the voiced part
  double lead_noise_rms = 0.002;
  std::uint64_t seed = 1;
};
std::vector<double> VoiceLike(const VoiceSpec& spec, double sample_rate);

}  // namespace detoxaudit::synth

#endif  // DETOXAUDIT_TOOLS_SYNTH_SYNTH_HPP_

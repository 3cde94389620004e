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

// Pitch tracking and voice-quality metrics: harmonics-to-noise ratio,
// cepstral peak prominence, jitter and shimmer.

#ifndef DETOXAUDIT_VOICE_QUALITY_HPP_
#define DETOXAUDIT_VOICE_QUALITY_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "audio_io.hpp"
#include "dsp_features.hpp"

namespace detoxaudit {

enum class CppBaseline {
  // Least-squares line over the quefrency search range, evaluated at the peak.
  kRegression,
  // Mean of c[q] over q = 1..Q (all positive quefrency bins).
  kFlatMean,
};

struct VoiceConfig {
  double fmin = 65.0;  // Hz
  double fmax = 400.0;
  double pitch_frame = 0.040;  // seconds
  double pitch_hop = 0.010;
  double voicing_threshold = 0.45;  // normalized autocorrelation peak
  double silence_gate = 1e-3;       // frame RMS below this is unvoiced
  double pitch_lowpass = 1000.0;    // Hz, applied before correlation; 0 = off
  double period_lowpass_ratio = 1.75;  // marker band edge as a multiple of f0; 0 = off
  double period_snap_ratio = 6.0;      // band edge of the copy markers snap to; 0 = raw input

  std::size_t hnr_frame = 2048;  // samples
  std::size_t hnr_hop = 512;
  double harmonic_half_bandwidth = 2.5;  // bins either side of h*f0
  double hnr_cap = 40.0;                 // dB, applied symmetrically per frame

  std::size_t cpp_frame = 2048;
  std::size_t cpp_hop = 512;
  double cpp_fmin = 60.0;  // quefrency search range, as frequencies
  double cpp_fmax = 330.0;
  CppBaseline cpp_baseline = CppBaseline::kRegression;
  double cpp_energy_gate = 1e-3;  // frame RMS after mean removal

  std::size_t rms_frame = kDefaultFrameLength;
  std::size_t rms_hop = kDefaultHop;

  void Validate() const;
};

struct PitchTrack {
  std::vector<double> frame_times;         // seconds, frame centers
  std::vector<std::optional<double>> f0;   // Hz, present iff voiced
  std::vector<bool> voiced;
  std::vector<double> confidence;          // [0, 1]
  std::size_t frame_length = 0;            // samples
  std::size_t hop = 0;
  double sample_rate = 0.0;

  std::size_t size() const { return frame_times.size(); }
  double voiced_fraction() const;
  std::optional<double> median_f0() const;
};

// Normalized autocorrelation per frame with parabolic peak interpolation.
// Frames below the silence gate or whose peak correlation falls under the
// voicing threshold are unvoiced.
PitchTrack EstimateF0(const AudioBuffer& buf, const VoiceConfig& cfg = {});
// Defaults elsewhere; the correlation low-pass moves to 2 * fmax (or off) when
// fmax reaches it.
PitchTrack EstimateF0(const AudioBuffer& buf, double fmin, double fmax);

struct PeriodSequence {
  std::vector<double> periods;     // seconds
  std::vector<double> amplitudes;  // cycle peak down to the following trough

  std::size_t size() const { return periods.size(); }
};

// Voiced runs are split at f0 jumps and very short pieces are skipped. Within
// each run, markers are positive peaks one predicted period apart in a copy
// low-passed at period_lowpass_ratio x median f0, then moved to the nearest
// peak of a wider copy (period_snap_ratio) with parabolic refinement.
// T_i is the gap between markers i and i+1; A_i is the peak-to-peak amplitude
// of the input between them.
PeriodSequence ExtractPeriods(const AudioBuffer& buf, const PitchTrack& track,
                              const VoiceConfig& cfg = {});

struct HarmonicDecomposition {
  std::vector<double> harmonic_energies;  // E_h, h = 1..H
  double noise_energy = 0.0;

  std::size_t harmonics() const { return harmonic_energies.size(); }
  double harmonic_energy() const;
};

// Splits a one-sided power spectrum (bins 0..L/2, DC ignored) into energy
// around h*f0 and the residual. The noise floor measured in the residual bins
// is removed from each harmonic band before the split.
HarmonicDecomposition DecomposeHarmonics(std::span<const double> power, double f0,
                                         double bin_hz, double half_bandwidth_bins);

// Mean per-frame HNR over voiced frames; nullopt when nothing is voiced.
std::optional<double> Hnr(const AudioBuffer& buf, const PitchTrack& track,
                          const VoiceConfig& cfg = {});

struct Cepstrum {
  std::vector<double> values;  // c[q], q = 0..L/2
  double quefrency_rate = 0.0;  // seconds per bin

  std::size_t bins() const { return values.empty() ? 0 : values.size() - 1; }
};

// c = IDFT(10*log10(|DFT(frame)|^2)); the power spectrum is floored 100 dB
// under its maximum before the log.
Cepstrum RealCepstrum(std::span<const double> frame, double sample_rate);

// Mean per-frame cepstral peak prominence; nullopt when every frame falls
// under the energy gate.
std::optional<double> Cpp(const AudioBuffer& buf, const VoiceConfig& cfg = {});

// Mean absolute difference of consecutive periods over the mean period, as a
// fraction. Requires N >= 2.
double Jitter(const PeriodSequence& seq);

// Same ratio over amplitudes. Requires N >= 2 and a non-zero mean amplitude.
double Shimmer(const PeriodSequence& seq);

struct VoiceMetrics {
  std::optional<double> hnr_db;
  std::optional<double> cpp;
  std::optional<double> jitter;   // fraction
  std::optional<double> shimmer;  // fraction
  double voiced_fraction = 0.0;
  RmsStats rms;
};

// EstimateF0 -> ExtractPeriods -> HNR / CPP / jitter / shimmer -> RMS stats.
// A metric that cannot be measured is left empty, never zero.
VoiceMetrics VoiceReport(const AudioBuffer& buf, const VoiceConfig& cfg = {});

struct RadarPoint {
  double hnr = 0.0;
  double cpp = 0.0;
  double jitter = 0.0;
  double shimmer = 0.0;
};

struct RadarPair {
  RadarPoint original;
  RadarPoint transformed;
};

// Per axis, min-max scaling over every original and transformed value. A
// constant axis maps to 0.5. Throws InputError if any metric is absent.
std::vector<RadarPair> RadarNormalize(
    std::span<const std::pair<VoiceMetrics, VoiceMetrics>> pairs);

}  // namespace detoxaudit

#endif  // DETOXAUDIT_VOICE_QUALITY_HPP_

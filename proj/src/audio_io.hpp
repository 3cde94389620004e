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

// Loading and preprocessing of vocal stems. Every operation is a pure function
// of its inputs and returns a new buffer.

#ifndef DETOXAUDIT_AUDIO_IO_HPP_
#define DETOXAUDIT_AUDIO_IO_HPP_

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

namespace detoxaudit {

struct AudioBuffer {
  std::vector<double> samples;
  double sample_rate = 0.0;  // Hz
  std::string source_id;
  // Set by Normalize when the input had no non-zero sample.
  bool silent = false;
  // Set by Preprocess. Preprocess returns marked buffers unchanged so the
  // pre-emphasis tilt is applied exactly once.
  bool preprocessed = false;

  double duration() const {
    return sample_rate > 0 ? static_cast<double>(samples.size()) / sample_rate : 0.0;
  }
};

enum class NoiseProfileMode {
  // Mean magnitude of the frames inside the first `noise_profile_window`
  // seconds.
  kLeadingWindow,
  // Mean magnitude of the lowest-energy frames anywhere in the track; the
  // number of frames equals what the leading window would hold.
  kQuietestFrames,
};

struct PreprocessConfig {
  double target_rate = 22050.0;       // Hz
  double max_duration = 360.0;        // seconds
  double preemphasis_alpha = 0.97;
  double highpass_cutoff = 100.0;     // Hz
  double noise_profile_window = 0.5;  // seconds
  double subtraction_floor = 0.02;    // fraction of noise magnitude kept
  bool denoise = true;
  NoiseProfileMode noise_mode = NoiseProfileMode::kLeadingWindow;

  // Throws InputError when any invariant is violated.
  void Validate() const;
};

// Spectral subtraction framing.
inline constexpr std::size_t kDenoiseFrameLength = 2048;
inline constexpr std::size_t kDenoiseHop = 512;

// Loads a WAV file and averages all channels to mono. The file's sample rate
// is preserved.
AudioBuffer LoadTrack(const std::filesystem::path& path);

// Band-limited (Kaiser-windowed sinc) sample-rate conversion. Output length is
// round(N * target_rate / sample_rate). Returns the input unchanged when the
// rates already match.
AudioBuffer Resample(const AudioBuffer& buf, double target_rate);

// Keeps the first max_duration seconds.
AudioBuffer Truncate(const AudioBuffer& buf, double max_duration);

// y[0] = x[0], y[n] = x[n] - alpha * x[n-1].
AudioBuffer Preemphasis(const AudioBuffer& buf, double alpha);

// Zero-phase 4th-order Butterworth high-pass (run forward and backward).
AudioBuffer Highpass(const AudioBuffer& buf, double cutoff);

// Zero-phase 4th-order Butterworth low-pass (run forward and backward).
AudioBuffer Lowpass(const AudioBuffer& buf, double cutoff);

AudioBuffer SpectralSubtract(const AudioBuffer& buf, const PreprocessConfig& cfg);

// Peak normalization to [-1, 1]. Sets `silent` on all-zero input.
AudioBuffer Normalize(const AudioBuffer& buf);

// resample -> truncate -> pre-emphasis -> noise reduction -> high-pass ->
// normalize.
AudioBuffer Preprocess(const AudioBuffer& buf, const PreprocessConfig& cfg);

}  // namespace detoxaudit

#endif  // DETOXAUDIT_AUDIO_IO_HPP_

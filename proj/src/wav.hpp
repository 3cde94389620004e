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

#ifndef DETOXAUDIT_WAV_HPP_
#define DETOXAUDIT_WAV_HPP_

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace detoxaudit {

enum class WavEncoding { kPcm16, kFloat32 };

struct WavData {
  std::uint32_t sample_rate = 0;
  std::uint16_t channels = 0;
  // Interleaved, converted to [-1, 1): integer PCM is divided by 2^(bits-1).
  std::vector<double> interleaved;
};

// Reads RIFF/WAVE with integer PCM (8/16/24/32 bit) or IEEE float (32/64 bit)
// payloads, including WAVE_FORMAT_EXTENSIBLE. Throws InputError on
// unreadable, zero-length or unsupported files.
WavData ReadWav(const std::filesystem::path& path);

// Writes interleaved samples. 16-bit output scales by 32768 and clamps.
void WriteWav(const std::filesystem::path& path, std::span<const double> interleaved,
              std::uint32_t sample_rate, std::uint16_t channels,
              WavEncoding encoding = WavEncoding::kPcm16);

}  // namespace detoxaudit

#endif  // DETOXAUDIT_WAV_HPP_

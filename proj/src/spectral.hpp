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

#ifndef DETOXAUDIT_SPECTRAL_HPP_
#define DETOXAUDIT_SPECTRAL_HPP_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace detoxaudit {

enum class WindowKind { kHann, kHamming, kRectangular };

// Accepts "hann", "hamming", "rectangular" (also "rect", "boxcar").
WindowKind ParseWindow(std::string_view name);
std::string WindowName(WindowKind kind);

// Periodic (DFT-even) windows, which sum to a constant under 75% overlap.
std::vector<double> MakeWindow(WindowKind kind, std::size_t length);

// Magnitude to decibels for plot emission: 20*log10(mag + 1e-10), floored at
// -100 dB.
double MagnitudeToDb(double magnitude);

inline constexpr double kDbFloor = -100.0;

}  // namespace detoxaudit

#endif  // DETOXAUDIT_SPECTRAL_HPP_

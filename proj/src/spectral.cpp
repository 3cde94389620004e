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

#include "spectral.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>

#include "error.hpp"

namespace detoxaudit {

WindowKind ParseWindow(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (lower == "hann" || lower == "hanning") return WindowKind::kHann;
  if (lower == "hamming") return WindowKind::kHamming;
  if (lower == "rectangular" || lower == "rect" || lower == "boxcar") {
    return WindowKind::kRectangular;
  }
  throw InputError("unknown window function: " + std::string(name));
}

std::string WindowName(WindowKind kind) {
  switch (kind) {
    case WindowKind::kHann:
      return "hann";
    case WindowKind::kHamming:
      return "hamming";
    case WindowKind::kRectangular:
      return "rectangular";
  }
  return "unknown";
}

std::vector<double> MakeWindow(WindowKind kind, std::size_t length) {
  std::vector<double> w(length, 1.0);
  const double n = static_cast<double>(length);
  for (std::size_t i = 0; i < length; ++i) {
    const double phase = 2.0 * std::numbers::pi * static_cast<double>(i) / n;
    switch (kind) {
      case WindowKind::kHann:
        w[i] = 0.5 - 0.5 * std::cos(phase);
        break;
      case WindowKind::kHamming:
        w[i] = 0.54 - 0.46 * std::cos(phase);
        break;
      case WindowKind::kRectangular:
        break;
    }
  }
  return w;
}

double MagnitudeToDb(double magnitude) {
  return std::max(kDbFloor, 20.0 * std::log10(magnitude + 1e-10));
}

}  // namespace detoxaudit

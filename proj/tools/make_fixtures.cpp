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

// Writes the synthetic WAV fixtures used by the README walkthrough and the
// acceptance suite.

#include <cstdio>
#include <filesystem>

#include "synth/fixtures.hpp"

int main(int argc, char** argv) {
  const std::filesystem::path dir = argc > 1 ? argv[1] : ".";
  const auto paths = detoxaudit::synth::WriteFixtureStems(dir);
  std::printf("%s\n%s\n", paths.original.string().c_str(), paths.transformed.string().c_str());
  return 0;
}

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

#ifndef DETOXAUDIT_FFT_HPP_
#define DETOXAUDIT_FFT_HPP_

#include <complex>
#include <cstddef>
#include <span>

namespace detoxaudit {

// Real-to-complex DFT of a fixed size backed by FFTW. Instances are not
// shared between threads; create one per worker. Plan creation is serialized
// internally because the FFTW planner is not reentrant.
class RealFft {
 public:
  explicit RealFft(std::size_t size);
  ~RealFft();

  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;
  RealFft(RealFft&& other) noexcept;
  RealFft& operator=(RealFft&& other) noexcept;

  std::size_t size() const { return size_; }
  std::size_t bins() const { return size_ / 2 + 1; }

  // `in` may be shorter than size(); the remainder is zero-padded.
  // `out` must hold bins() values.
  void Forward(std::span<const double> in, std::span<std::complex<double>> out);

  // Unnormalized inverse: Inverse(Forward(x)) == size() * x.
  void Inverse(std::span<const std::complex<double>> in, std::span<double> out);

 private:
  void Release() noexcept;

  std::size_t size_ = 0;
  double* real_ = nullptr;
  void* spectrum_ = nullptr;
  void* forward_plan_ = nullptr;
  void* inverse_plan_ = nullptr;
};

}  // namespace detoxaudit

#endif  // DETOXAUDIT_FFT_HPP_

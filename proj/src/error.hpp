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

#ifndef DETOXAUDIT_ERROR_HPP_
#define DETOXAUDIT_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace detoxaudit {

// Coarse failure classes. They map one-to-one onto the C API status codes and
// the CLI exit codes.
enum class ErrorKind {
  kInput = 1,
  kProvider = 2,
  kInternal = 3,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline Error InputError(const std::string& message) {
  return Error(ErrorKind::kInput, message);
}

inline Error ProviderError(const std::string& message) {
  return Error(ErrorKind::kProvider, message);
}

inline Error InternalError(const std::string& message) {
  return Error(ErrorKind::kInternal, message);
}

}  // namespace detoxaudit

#endif  // DETOXAUDIT_ERROR_HPP_

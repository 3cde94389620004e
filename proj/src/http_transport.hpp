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

#ifndef DETOXAUDIT_HTTP_TRANSPORT_HPP_
#define DETOXAUDIT_HTTP_TRANSPORT_HPP_

#include <cstddef>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace detoxaudit {

struct HttpResponse {
  int status = 0;
  std::string body;
};

using HttpHeaders = std::vector<std::pair<std::string, std::string>>;

// Minimal POST-only transport. Implementations throw TransportError for
// connection failures and timeouts; HTTP error statuses are returned.
class HttpTransport {
 public:
  virtual ~HttpTransport() = default;
  virtual HttpResponse Post(const std::string& url, const std::string& body,
                            const HttpHeaders& headers, double timeout_seconds) = 0;
};

class TransportError : public std::exception {
 public:
  explicit TransportError(std::string message) : message_(std::move(message)) {}
  const char* what() const noexcept override { return message_.c_str(); }

 private:
  std::string message_;
};

// cpp-httplib backed transport; http:// always, https:// when built with TLS.
std::unique_ptr<HttpTransport> MakeHttpTransport();

// Process-wide count of outbound request attempts made by MakeHttpTransport
// instances. Offline runs must leave it unchanged.
std::size_t NetworkRequestCount();

}  // namespace detoxaudit

#endif  // DETOXAUDIT_HTTP_TRANSPORT_HPP_

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

#include "http_transport.hpp"

#if defined(DETOXAUDIT_WITH_TLS)
#define CPPHTTPLIB_OPENSSL_SUPPORT
#endif
#include "httplib.h"

#include <atomic>
#include <chrono>

#include "error.hpp"

namespace detoxaudit {
namespace {

std::atomic<std::size_t> g_request_count{0};

struct ParsedUrl {
  std::string origin;  // scheme://host[:port]
  std::string path;
};

ParsedUrl SplitUrl(const std::string& url) {
  const std::size_t scheme_end = url.find("://");
  if (scheme_end == std::string::npos) throw InputError("endpoint is not an absolute URL: " + url);
  const std::size_t path_start = url.find('/', scheme_end + 3);
  ParsedUrl out;
  out.origin = url.substr(0, path_start);
  out.path = path_start == std::string::npos ? "/" : url.substr(path_start);
  return out;
}

class HttplibTransport : public HttpTransport {
 public:
  HttpResponse Post(const std::string& url, const std::string& body,
                    const HttpHeaders& headers, double timeout_seconds) override {
    const ParsedUrl parsed = SplitUrl(url);
    ++g_request_count;
    httplib::Client client(parsed.origin);
    if (!client.is_valid()) throw InputError("unsupported endpoint URL: " + url);
    const auto timeout = std::chrono::duration_cast<std::chrono::microseconds>(
        std::chrono::duration<double>(timeout_seconds));
    client.set_connection_timeout(timeout);
    client.set_read_timeout(timeout);
    client.set_write_timeout(timeout);
    httplib::Headers h;
    for (const auto& [k, v] : headers) h.emplace(k, v);
    // Slow-trickle bodies are cut off at the attempt deadline.
    const auto deadline = std::chrono::steady_clock::now() + timeout;
    auto res = client.Post(parsed.path, h, body, "application/json",
                           [deadline](std::uint64_t, std::uint64_t) {
                             return std::chrono::steady_clock::now() < deadline;
                           });
    if (!res) {
      throw TransportError("request to " + url + " failed: " + httplib::to_string(res.error()));
    }
    return HttpResponse{res->status, res->body};
  }
};

}  // namespace

std::unique_ptr<HttpTransport> MakeHttpTransport() {
  return std::make_unique<HttplibTransport>();
}

std::size_t NetworkRequestCount() { return g_request_count.load(); }

}  // namespace detoxaudit

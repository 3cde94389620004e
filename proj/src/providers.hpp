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

// Clients for the external inference services (sentiment classification,
// text embedding, lyric rewriting) and deterministic offline stand-ins.
//
// Wire protocol, one POST per request:
//   request:   {"input": <text>}
//   sentiment: {"label": "POSITIVE"|"NEGATIVE", "score": <real>}
//   embedding: {"vector": [<real>, ...]}
//   rewrite:   {"text": "..."}

#ifndef DETOXAUDIT_PROVIDERS_HPP_
#define DETOXAUDIT_PROVIDERS_HPP_

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "http_transport.hpp"
#include "json.hpp"

namespace detoxaudit {

enum class SentimentLabel { kPositive, kNegative };

std::string SentimentLabelName(SentimentLabel label);
SentimentLabel ParseSentimentLabel(std::string_view text);

struct ProviderConfig {
  std::string endpoint;
  std::string auth_token;
  std::string model = "default";
  double timeout = 30.0;      // seconds per attempt
  int max_retries = 3;
  double backoff_base = 1.0;  // seconds; retry k (1-based) waits base * 2^(k-1)

  void Validate() const;
};

struct SentimentResult {
  SentimentLabel label = SentimentLabel::kPositive;
  double score = 0.0;
};

struct EmbeddingVector {
  std::vector<double> components;
  bool unit_normalized = false;

  std::size_t dimension() const { return components.size(); }
};

inline constexpr std::string_view kLyricsPlaceholder = "[lyrics]";
inline constexpr std::string_view kDefaultRewritePrompt =
    "Rewrite these song lyrics without any abusive language, keeping the line count, "
    "length and rhythm of each line: [lyrics]";

struct RewriteRequest {
  std::string lyrics;
  std::string prompt_template = std::string(kDefaultRewritePrompt);

  // Throws InputError unless the template holds the placeholder exactly once.
  void Validate() const;
  std::string Render() const;
};

struct RewriteResult {
  std::string text;
  std::vector<std::string> warnings;
  std::string raw_response;
};

// Providers are shared across threads; implementations must be thread-safe.
class SentimentProvider {
 public:
  virtual ~SentimentProvider() = default;
  virtual std::string identity() const = 0;
  virtual SentimentResult Classify(std::string_view text) = 0;
};

class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;
  virtual std::string identity() const = 0;
  virtual EmbeddingVector Embed(std::string_view text) = 0;
};

class RewriteProvider {
 public:
  virtual ~RewriteProvider() = default;
  virtual std::string identity() const = 0;
  virtual RewriteResult Rewrite(const RewriteRequest& request) = 0;
};

// Flags a rewrite whose line count differs from the input by more than 20%.
std::vector<std::string> CheckRewriteShape(std::string_view original, std::string_view rewritten);

std::uint64_t Fnv1a64(std::string_view data);

// Response cache keyed by (provider identity, model identity, input). Always
// memoizes in memory; when a directory is given, each entry is also persisted
// as one JSON file named by the key hash.
class ResponseCache {
 public:
  explicit ResponseCache(std::optional<std::filesystem::path> directory = std::nullopt);

  std::optional<nlohmann::json> Get(std::string_view provider, std::string_view model,
                                    std::string_view input);
  void Put(std::string_view provider, std::string_view model, std::string_view input,
           const nlohmann::json& response);

  std::size_t hits() const { return hits_.load(); }
  std::size_t misses() const { return misses_.load(); }

 private:
  static std::string Key(std::string_view provider, std::string_view model,
                         std::string_view input);
  std::filesystem::path FileFor(const std::string& key) const;

  std::optional<std::filesystem::path> directory_;
  std::mutex mu_;
  std::map<std::string, nlohmann::json> memory_;
  std::atomic<std::size_t> hits_{0};
  std::atomic<std::size_t> misses_{0};
};

using SleepFn = std::function<void(double seconds)>;

// POSTs JSON with per-attempt timeout and exponential backoff. Transport
// failures, 408, 429 and 5xx are retried; other statuses fail immediately.
// A failing call returns within timeout * (max_retries + 1) plus the backoff
// sum.
class RetryingJsonClient {
 public:
  RetryingJsonClient(ProviderConfig cfg, std::shared_ptr<HttpTransport> transport,
                     SleepFn sleep = {});

  nlohmann::json Post(const nlohmann::json& body);

  const ProviderConfig& config() const { return cfg_; }
  std::size_t attempts() const { return attempts_.load(); }
  std::size_t retries() const { return retries_.load(); }

 private:
  ProviderConfig cfg_;
  std::shared_ptr<HttpTransport> transport_;
  SleepFn sleep_;
  std::atomic<std::size_t> attempts_{0};
  std::atomic<std::size_t> retries_{0};
};

class HttpSentimentProvider : public SentimentProvider {
 public:
  HttpSentimentProvider(ProviderConfig cfg, std::shared_ptr<HttpTransport> transport,
                        std::shared_ptr<ResponseCache> cache, SleepFn sleep = {});
  std::string identity() const override;
  SentimentResult Classify(std::string_view text) override;
  const RetryingJsonClient& client() const { return client_; }

 private:
  RetryingJsonClient client_;
  std::shared_ptr<ResponseCache> cache_;
};

class HttpEmbeddingProvider : public EmbeddingProvider {
 public:
  // dimension == 0 accepts whatever the endpoint returns.
  HttpEmbeddingProvider(ProviderConfig cfg, std::shared_ptr<HttpTransport> transport,
                        std::shared_ptr<ResponseCache> cache, std::size_t dimension,
                        bool unit_normalize, SleepFn sleep = {});
  std::string identity() const override;
  EmbeddingVector Embed(std::string_view text) override;
  const RetryingJsonClient& client() const { return client_; }

 private:
  RetryingJsonClient client_;
  std::shared_ptr<ResponseCache> cache_;
  std::size_t dimension_;
  bool unit_normalize_;
};

class HttpRewriteProvider : public RewriteProvider {
 public:
  HttpRewriteProvider(ProviderConfig cfg, std::shared_ptr<HttpTransport> transport,
                      std::shared_ptr<ResponseCache> cache, SleepFn sleep = {});
  std::string identity() const override;
  RewriteResult Rewrite(const RewriteRequest& request) override;
  const RetryingJsonClient& client() const { return client_; }

 private:
  RetryingJsonClient client_;
  std::shared_ptr<ResponseCache> cache_;
};

// Offline stand-ins. All are pure functions of their input.

// True for lexicon words and for censored tokens (letters with an interior or
// leading '*', e.g. "f*ck").
bool IsOffensiveToken(std::string_view lowercase_token);

// NEGATIVE 0.99 when any token is offensive, otherwise POSITIVE 0.9.
class StubSentimentProvider : public SentimentProvider {
 public:
  std::string identity() const override { return "stub-sentiment/lexicon-v1"; }
  SentimentResult Classify(std::string_view text) override;
};

// Bag-of-tokens hashing embedding: every cleaned token seeds a fixed
// pseudo-random direction; the sum is L2-normalized. Identical text gives
// bit-identical vectors.
class StubEmbeddingProvider : public EmbeddingProvider {
 public:
  explicit StubEmbeddingProvider(std::size_t dimension = 768) : dimension_(dimension) {}
  std::string identity() const override { return "stub-embedding/token-hash-v1"; }
  EmbeddingVector Embed(std::string_view text) override;

 private:
  std::size_t dimension_;
};

// Replaces offensive words with fixed neutral words; everything else is kept
// byte for byte.
class StubRewriteProvider : public RewriteProvider {
 public:
  std::string identity() const override { return "stub-rewrite/lexicon-v1"; }
  RewriteResult Rewrite(const RewriteRequest& request) override;
};

struct ProvidersConfig {
  bool offline = false;
  ProviderConfig sentiment;
  ProviderConfig embedding;
  ProviderConfig rewrite;
  std::size_t embedding_dimension = 768;
  bool unit_normalize = true;
  std::string cache_dir;  // empty: memory only
  std::size_t max_concurrency = 4;
  std::string prompt_template = std::string(kDefaultRewritePrompt);

  // Fills empty endpoints and token from DETOX_SENTIMENT_URL, DETOX_EMBED_URL,
  // DETOX_REWRITE_URL and DETOX_API_TOKEN.
  void ApplyEnvironment();
};

struct ProviderSet {
  std::unique_ptr<SentimentProvider> sentiment;
  std::unique_ptr<EmbeddingProvider> embedding;
  std::unique_ptr<RewriteProvider> rewrite;
};

// Offline configs get stubs. Online configs get HTTP clients; an HTTP
// provider with no endpoint is replaced by one that fails with a
// ProviderError on first use.
ProviderSet MakeProviders(const ProvidersConfig& cfg,
                          std::shared_ptr<HttpTransport> transport = nullptr);

}  // namespace detoxaudit

#endif  // DETOXAUDIT_PROVIDERS_HPP_

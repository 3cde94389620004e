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

#include "providers.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>
#include <unordered_map>
#include <unordered_set>

#include "error.hpp"
#include "text.hpp"

namespace detoxaudit {
namespace {

using nlohmann::json;

// Seconds held back from each attempt for connection teardown.
constexpr double kAttemptGuard = 0.02;

bool IsRetriableStatus(int status) {
  return status == 408 || status == 429 || (status >= 500 && status <= 599);
}

std::string Truncated(std::string_view s, std::size_t limit = 512) {
  if (s.size() <= limit) return std::string(s);
  return std::string(s.substr(0, limit)) + "...";
}

std::size_t NonEmptyLines(std::string_view text) {
  std::size_t n = 0;
  for (const std::string& line : SplitLines(text)) {
    if (!TrimView(line).empty()) ++n;
  }
  return n;
}

void RequireText(std::string_view text) {
  if (TrimView(text).empty()) throw InputError("empty text");
}

// Neutral substitutes used by the offline rewriter.
const std::unordered_map<std::string, std::string>& Replacements() {
  static const std::unordered_map<std::string, std::string> kMap = {
      {"fuck", "love"},     {"fucking", "loving"}, {"fucked", "loved"},
      {"motherfucker", "brother"}, {"shit", "stuff"}, {"bitch", "friend"},
      {"bitches", "friends"}, {"damn", "darn"},     {"hell", "heaven"},
      {"ass", "heart"},     {"pussy", "kitty"},    {"dick", "dude"},
      {"whore", "soul"},    {"whores", "souls"},   {"hoe", "hon"},
      {"hoes", "hons"},     {"slut", "star"},      {"bastard", "buddy"},
      {"kill", "heal"},     {"killed", "healed"},  {"killing", "healing"},
      {"murder", "wonder"}, {"gun", "drum"},       {"guns", "drums"},
      {"shoot", "shine"},   {"hate", "love"},      {"die", "fly"},
      {"dead", "free"},     {"hitler", "higher"},  {"heil", "rise"},
      {"nazi", "neighbor"}, {"blood", "light"},    {"cunt", "one"},
      {"asshole", "fellow"},
  };
  return kMap;
}

std::uint64_t SplitMix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

void AddHashedDirection(std::uint64_t seed, std::vector<double>& acc) {
  std::uint64_t state = seed;
  for (double& v : acc) {
    // Top 53 bits -> [0, 1) -> [-1, 1).
    const double u = static_cast<double>(SplitMix64(state) >> 11) * 0x1.0p-53;
    v += 2.0 * u - 1.0;
  }
}

bool NormalizeInPlace(std::vector<double>& v) {
  double norm = 0.0;
  for (double x : v) norm += x * x;
  norm = std::sqrt(norm);
  if (!(norm > 0.0) || !std::isfinite(norm)) return false;
  for (double& x : v) x /= norm;
  return true;
}

SentimentResult ParseSentiment(const json& response) {
  const json* obj = &response;
  while (obj->is_array()) {
    if (obj->size() != 1) throw ProviderError("malformed sentiment response: " + Truncated(response.dump()));
    obj = &(*obj)[0];
  }
  if (!obj->is_object() || !obj->contains("label") || !obj->contains("score") ||
      !(*obj)["label"].is_string() || !(*obj)["score"].is_number()) {
    throw ProviderError("malformed sentiment response: " + Truncated(response.dump()));
  }
  SentimentResult r;
  try {
    r.label = ParseSentimentLabel((*obj)["label"].get<std::string>());
  } catch (const Error&) {
    throw ProviderError("malformed sentiment response: unknown label in " +
                        Truncated(response.dump()));
  }
  r.score = (*obj)["score"].get<double>();
  if (!(r.score >= 0.0 && r.score <= 1.0)) {
    throw ProviderError("malformed sentiment response: score outside [0, 1]");
  }
  return r;
}

class UnconfiguredSentiment : public SentimentProvider {
 public:
  std::string identity() const override { return "unconfigured-sentiment"; }
  SentimentResult Classify(std::string_view) override {
    throw ProviderError("no sentiment endpoint configured (set DETOX_SENTIMENT_URL or run offline)");
  }
};

class UnconfiguredEmbedding : public EmbeddingProvider {
 public:
  std::string identity() const override { return "unconfigured-embedding"; }
  EmbeddingVector Embed(std::string_view) override {
    throw ProviderError("no embedding endpoint configured (set DETOX_EMBED_URL or run offline)");
  }
};

class UnconfiguredRewrite : public RewriteProvider {
 public:
  std::string identity() const override { return "unconfigured-rewrite"; }
  RewriteResult Rewrite(const RewriteRequest&) override {
    throw ProviderError("no rewrite endpoint configured (set DETOX_REWRITE_URL)");
  }
};

}  // namespace

std::string SentimentLabelName(SentimentLabel label) {
  return label == SentimentLabel::kPositive ? "POSITIVE" : "NEGATIVE";
}

SentimentLabel ParseSentimentLabel(std::string_view text) {
  std::string upper(text);
  std::transform(upper.begin(), upper.end(), upper.begin(),
                 [](unsigned char c) { return std::toupper(c); });
  if (upper == "POSITIVE") return SentimentLabel::kPositive;
  if (upper == "NEGATIVE") return SentimentLabel::kNegative;
  throw InputError("unknown sentiment label: " + std::string(text));
}

void ProviderConfig::Validate() const {
  if (!(timeout > 0)) throw InputError("provider timeout must be positive");
  if (max_retries < 0) throw InputError("provider max_retries must be non-negative");
  if (!(backoff_base >= 0)) throw InputError("provider backoff_base must be non-negative");
}

void RewriteRequest::Validate() const {
  const std::size_t first = prompt_template.find(kLyricsPlaceholder);
  if (first == std::string::npos ||
      prompt_template.find(kLyricsPlaceholder, first + 1) != std::string::npos) {
    throw InputError("rewrite prompt template must contain [lyrics] exactly once");
  }
}

std::string RewriteRequest::Render() const {
  Validate();
  std::string out = prompt_template;
  out.replace(out.find(kLyricsPlaceholder), kLyricsPlaceholder.size(), lyrics);
  return out;
}

std::vector<std::string> CheckRewriteShape(std::string_view original, std::string_view rewritten) {
  std::vector<std::string> warnings;
  const std::size_t before = NonEmptyLines(original);
  const std::size_t after = NonEmptyLines(rewritten);
  const double diff = std::abs(static_cast<double>(after) - static_cast<double>(before));
  if (diff > 0.2 * static_cast<double>(before)) {
    warnings.push_back("rewrite has " + std::to_string(after) + " lines but the input has " +
                       std::to_string(before) + " (differs by more than 20%)");
  }
  return warnings;
}

std::uint64_t Fnv1a64(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

ResponseCache::ResponseCache(std::optional<std::filesystem::path> directory)
    : directory_(std::move(directory)) {}

std::string ResponseCache::Key(std::string_view provider, std::string_view model,
                               std::string_view input) {
  std::string key;
  key.reserve(provider.size() + model.size() + input.size() + 2);
  key.append(provider).push_back('\x1f');
  key.append(model).push_back('\x1f');
  key.append(input);
  return key;
}

std::filesystem::path ResponseCache::FileFor(const std::string& key) const {
  char name[32];
  std::snprintf(name, sizeof name, "%016llx.json",
                static_cast<unsigned long long>(Fnv1a64(key)));
  return *directory_ / name;
}

std::optional<json> ResponseCache::Get(std::string_view provider, std::string_view model,
                                       std::string_view input) {
  const std::string key = Key(provider, model, input);
  std::lock_guard<std::mutex> lock(mu_);
  if (auto it = memory_.find(key); it != memory_.end()) {
    ++hits_;
    return it->second;
  }
  if (directory_) {
    std::ifstream in(FileFor(key));
    if (in) {
      json stored = json::parse(in, nullptr, /*allow_exceptions=*/false);
      if (stored.is_object() && stored.value("key", "") == key && stored.contains("response")) {
        memory_[key] = stored["response"];
        ++hits_;
        return stored["response"];
      }
    }
  }
  ++misses_;
  return std::nullopt;
}

void ResponseCache::Put(std::string_view provider, std::string_view model,
                        std::string_view input, const json& response) {
  const std::string key = Key(provider, model, input);
  std::lock_guard<std::mutex> lock(mu_);
  memory_[key] = response;
  if (!directory_) return;
  std::error_code ec;
  std::filesystem::create_directories(*directory_, ec);
  const std::filesystem::path target = FileFor(key);
  std::filesystem::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw InternalError("cannot write provider cache entry: " + tmp.string());
    out << json{{"key", key}, {"response", response}}.dump();
  }
  std::filesystem::rename(tmp, target, ec);
  if (ec) throw InternalError("cannot persist provider cache entry: " + ec.message());
}

RetryingJsonClient::RetryingJsonClient(ProviderConfig cfg,
                                       std::shared_ptr<HttpTransport> transport, SleepFn sleep)
    : cfg_(std::move(cfg)), transport_(std::move(transport)), sleep_(std::move(sleep)) {
  cfg_.Validate();
  if (!transport_) transport_ = MakeHttpTransport();
  if (!sleep_) {
    sleep_ = [](double seconds) {
      std::this_thread::sleep_for(std::chrono::duration<double>(seconds));
    };
  }
}

json RetryingJsonClient::Post(const json& body) {
  HttpHeaders headers = {{"Accept", "application/json"}};
  if (!cfg_.auth_token.empty()) headers.emplace_back("Authorization", "Bearer " + cfg_.auth_token);
  const std::string payload = body.dump();

  // Attempt k must finish by start + (k+1)*timeout + backoff so far, less a
  // teardown guard, so late attempts shrink instead of stretching the total.
  using Clock = std::chrono::steady_clock;
  const Clock::time_point start = Clock::now();
  const double guard = std::min(kAttemptGuard, 0.1 * cfg_.timeout);
  double backoff_total = 0.0;

  std::string last_failure;
  for (int attempt = 0; attempt <= cfg_.max_retries; ++attempt) {
    if (attempt > 0) {
      ++retries_;
      const double delay = cfg_.backoff_base * std::ldexp(1.0, attempt - 1);
      backoff_total += delay;
      sleep_(delay);
    }
    const double elapsed = std::chrono::duration<double>(Clock::now() - start).count();
    const double budget = std::min(
        cfg_.timeout, (attempt + 1) * cfg_.timeout + backoff_total - guard - elapsed);
    if (budget <= 0.0) {
      last_failure = "no time left for the attempt";
      continue;
    }
    ++attempts_;
    HttpResponse response;
    try {
      response = transport_->Post(cfg_.endpoint, payload, headers, budget);
    } catch (const TransportError& e) {
      last_failure = e.what();
      continue;
    }
    if (response.status >= 200 && response.status < 300) {
      json parsed = json::parse(response.body, nullptr, /*allow_exceptions=*/false);
      if (parsed.is_discarded()) {
        throw ProviderError("malformed response from " + cfg_.endpoint + ": " +
                            Truncated(response.body));
      }
      return parsed;
    }
    last_failure = "HTTP " + std::to_string(response.status) + ": " + Truncated(response.body, 200);
    if (!IsRetriableStatus(response.status)) {
      throw ProviderError("request to " + cfg_.endpoint + " failed with " + last_failure);
    }
  }
  throw ProviderError("exhausted retries (" + std::to_string(cfg_.max_retries) + ") for " +
                      cfg_.endpoint + "; last failure: " + last_failure);
}

HttpSentimentProvider::HttpSentimentProvider(ProviderConfig cfg,
                                             std::shared_ptr<HttpTransport> transport,
                                             std::shared_ptr<ResponseCache> cache, SleepFn sleep)
    : client_(std::move(cfg), std::move(transport), std::move(sleep)),
      cache_(cache ? std::move(cache) : std::make_shared<ResponseCache>()) {}

std::string HttpSentimentProvider::identity() const {
  return "http-sentiment:" + client_.config().endpoint;
}

SentimentResult HttpSentimentProvider::Classify(std::string_view text) {
  RequireText(text);
  const std::string& model = client_.config().model;
  if (auto cached = cache_->Get(identity(), model, text)) return ParseSentiment(*cached);
  const json response = client_.Post(json{{"input", std::string(text)}});
  const SentimentResult r = ParseSentiment(response);
  cache_->Put(identity(), model, text,
              json{{"label", SentimentLabelName(r.label)}, {"score", r.score}});
  return r;
}

HttpEmbeddingProvider::HttpEmbeddingProvider(ProviderConfig cfg,
                                             std::shared_ptr<HttpTransport> transport,
                                             std::shared_ptr<ResponseCache> cache,
                                             std::size_t dimension, bool unit_normalize,
                                             SleepFn sleep)
    : client_(std::move(cfg), std::move(transport), std::move(sleep)),
      cache_(cache ? std::move(cache) : std::make_shared<ResponseCache>()),
      dimension_(dimension),
      unit_normalize_(unit_normalize) {}

std::string HttpEmbeddingProvider::identity() const {
  return "http-embedding:" + client_.config().endpoint;
}

EmbeddingVector HttpEmbeddingProvider::Embed(std::string_view text) {
  RequireText(text);
  const std::string& model = client_.config().model;
  json response;
  const bool from_cache = [&] {
    if (auto cached = cache_->Get(identity(), model, text)) {
      response = std::move(*cached);
      return true;
    }
    response = client_.Post(json{{"input", std::string(text)}});
    return false;
  }();

  if (!response.is_object() || !response.contains("vector") || !response["vector"].is_array()) {
    throw ProviderError("malformed embedding response: " + Truncated(response.dump()));
  }
  EmbeddingVector v;
  for (const json& x : response["vector"]) {
    if (!x.is_number()) throw ProviderError("malformed embedding response: non-numeric component");
    v.components.push_back(x.get<double>());
  }
  if (v.components.empty()) throw ProviderError("malformed embedding response: empty vector");
  if (dimension_ != 0 && v.dimension() != dimension_) {
    throw ProviderError("embedding dimension " + std::to_string(v.dimension()) +
                        " does not match configured " + std::to_string(dimension_));
  }
  if (!from_cache) cache_->Put(identity(), model, text, json{{"vector", v.components}});
  if (unit_normalize_) {
    if (!NormalizeInPlace(v.components)) throw ProviderError("embedding has zero norm");
    v.unit_normalized = true;
  }
  return v;
}

HttpRewriteProvider::HttpRewriteProvider(ProviderConfig cfg,
                                         std::shared_ptr<HttpTransport> transport,
                                         std::shared_ptr<ResponseCache> cache, SleepFn sleep)
    : client_(std::move(cfg), std::move(transport), std::move(sleep)),
      cache_(cache ? std::move(cache) : std::make_shared<ResponseCache>()) {}

std::string HttpRewriteProvider::identity() const {
  return "http-rewrite:" + client_.config().endpoint;
}

RewriteResult HttpRewriteProvider::Rewrite(const RewriteRequest& request) {
  const std::string prompt = request.Render();
  const std::string& model = client_.config().model;
  json response;
  bool from_cache = false;
  if (auto cached = cache_->Get(identity(), model, prompt)) {
    response = std::move(*cached);
    from_cache = true;
  } else {
    response = client_.Post(json{{"input", prompt}});
  }
  const std::string raw = response.dump();
  if (!response.is_object() || !response.contains("text") || !response["text"].is_string() ||
      TrimView(response["text"].get<std::string>()).empty()) {
    throw ProviderError("rewrite provider returned no text; raw payload: " + raw);
  }
  if (!from_cache) cache_->Put(identity(), model, prompt, response);
  RewriteResult result;
  result.text = response["text"].get<std::string>();
  result.raw_response = raw;
  result.warnings = CheckRewriteShape(request.lyrics, result.text);
  return result;
}

bool IsOffensiveToken(std::string_view token) {
  if (Replacements().count(std::string(token))) return true;
  const bool has_star = token.find('*') != std::string_view::npos;
  const bool has_letter = std::any_of(token.begin(), token.end(), [](unsigned char c) {
    return std::isalpha(c) != 0;
  });
  return has_star && has_letter;
}

SentimentResult StubSentimentProvider::Classify(std::string_view text) {
  RequireText(text);
  for (const std::string& token : Tokenize(text)) {
    if (IsOffensiveToken(token)) return {SentimentLabel::kNegative, 0.99};
  }
  return {SentimentLabel::kPositive, 0.9};
}

EmbeddingVector StubEmbeddingProvider::Embed(std::string_view text) {
  RequireText(text);
  EmbeddingVector v;
  v.components.assign(dimension_, 0.0);
  const std::vector<std::string> tokens = Tokenize(text);
  if (tokens.empty()) {
    AddHashedDirection(Fnv1a64(text), v.components);
  } else {
    for (const std::string& token : tokens) AddHashedDirection(Fnv1a64(token), v.components);
  }
  if (!NormalizeInPlace(v.components)) AddHashedDirection(Fnv1a64(text), v.components);
  NormalizeInPlace(v.components);
  v.unit_normalized = true;
  return v;
}

RewriteResult StubRewriteProvider::Rewrite(const RewriteRequest& request) {
  request.Validate();
  const std::string& in = request.lyrics;
  std::string out;
  out.reserve(in.size());
  auto is_word = [](unsigned char c) { return std::isalnum(c) || c == '\'' || c == '*'; };
  std::size_t i = 0;
  while (i < in.size()) {
    if (!is_word(static_cast<unsigned char>(in[i]))) {
      out.push_back(in[i++]);
      continue;
    }
    std::size_t j = i;
    while (j < in.size() && is_word(static_cast<unsigned char>(in[j]))) ++j;
    const std::string word = in.substr(i, j - i);
    std::string key;
    for (unsigned char c : word) key.push_back(static_cast<char>(std::tolower(c)));
    const std::size_t b = key.find_first_not_of('\'');
    const std::size_t e = key.find_last_not_of('\'');
    key = b == std::string::npos ? "" : key.substr(b, e - b + 1);
    if (!key.empty() && IsOffensiveToken(key)) {
      auto it = Replacements().find(key);
      std::string replacement = it != Replacements().end() ? it->second : "la";
      if (std::isupper(static_cast<unsigned char>(word[b]))) {
        replacement[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(replacement[0])));
      }
      out += word.substr(0, b) + replacement + word.substr(e + 1);
    } else {
      out += word;
    }
    i = j;
  }
  RewriteResult result;
  result.text = out;
  result.raw_response = json{{"text", out}}.dump();
  result.warnings = CheckRewriteShape(in, out);
  return result;
}

void ProvidersConfig::ApplyEnvironment() {
  auto fill = [](std::string& field, const char* var) {
    if (!field.empty()) return;
    if (const char* v = std::getenv(var); v != nullptr) field = v;
  };
  fill(sentiment.endpoint, "DETOX_SENTIMENT_URL");
  fill(embedding.endpoint, "DETOX_EMBED_URL");
  fill(rewrite.endpoint, "DETOX_REWRITE_URL");
  fill(sentiment.auth_token, "DETOX_API_TOKEN");
  fill(embedding.auth_token, "DETOX_API_TOKEN");
  fill(rewrite.auth_token, "DETOX_API_TOKEN");
}

ProviderSet MakeProviders(const ProvidersConfig& cfg, std::shared_ptr<HttpTransport> transport) {
  ProviderSet set;
  if (cfg.offline) {
    set.sentiment = std::make_unique<StubSentimentProvider>();
    set.embedding = std::make_unique<StubEmbeddingProvider>(
        cfg.embedding_dimension == 0 ? 768 : cfg.embedding_dimension);
    set.rewrite = std::make_unique<StubRewriteProvider>();
    return set;
  }
  if (!transport) transport = MakeHttpTransport();
  auto cache = std::make_shared<ResponseCache>(
      cfg.cache_dir.empty() ? std::nullopt
                            : std::optional<std::filesystem::path>(cfg.cache_dir));
  if (cfg.sentiment.endpoint.empty()) {
    set.sentiment = std::make_unique<UnconfiguredSentiment>();
  } else {
    set.sentiment = std::make_unique<HttpSentimentProvider>(cfg.sentiment, transport, cache);
  }
  if (cfg.embedding.endpoint.empty()) {
    set.embedding = std::make_unique<UnconfiguredEmbedding>();
  } else {
    set.embedding = std::make_unique<HttpEmbeddingProvider>(
        cfg.embedding, transport, cache, cfg.embedding_dimension, cfg.unit_normalize);
  }
  if (cfg.rewrite.endpoint.empty()) {
    set.rewrite = std::make_unique<UnconfiguredRewrite>();
  } else {
    set.rewrite = std::make_unique<HttpRewriteProvider>(cfg.rewrite, transport, cache);
  }
  return set;
}

}  // namespace detoxaudit

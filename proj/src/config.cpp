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

#include "config.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "error.hpp"

namespace detoxaudit {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

std::string NoiseModeName(NoiseProfileMode m) {
  return m == NoiseProfileMode::kLeadingWindow ? "leading_window" : "quietest_frames";
}

NoiseProfileMode ParseNoiseMode(const std::string& s) {
  if (s == "leading_window") return NoiseProfileMode::kLeadingWindow;
  if (s == "quietest_frames") return NoiseProfileMode::kQuietestFrames;
  throw InputError("unknown noise_mode: " + s);
}

std::string BaselineName(CppBaseline b) {
  return b == CppBaseline::kRegression ? "regression" : "flat_mean";
}

CppBaseline ParseBaseline(const std::string& s) {
  if (s == "regression") return CppBaseline::kRegression;
  if (s == "flat_mean") return CppBaseline::kFlatMean;
  throw InputError("unknown cpp_baseline: " + s);
}

// Reads fields out of one JSON object and remembers which keys were used.
class Reader {
 public:
  Reader(const json& obj, std::string section) : obj_(obj), section_(std::move(section)) {
    if (!obj_.is_object()) throw InputError("config section '" + section_ + "' must be an object");
  }

  template <typename T>
  void operator()(const char* key, T& field) {
    used_.insert(key);
    if (!obj_.contains(key)) return;
    try {
      field = obj_.at(key).get<T>();
    } catch (const json::exception&) {
      throw InputError("config key " + section_ + "." + key + " has the wrong type");
    }
  }

  template <typename T, typename Parse>
  void Enum(const char* key, T& field, Parse parse) {
    std::string text;
    (*this)(key, text);
    if (!text.empty()) field = parse(text);
  }

  const json& Child(const char* key) {
    used_.insert(key);
    static const json kEmpty = json::object();
    return obj_.contains(key) ? obj_.at(key) : kEmpty;
  }

  void Finish() const {
    for (const auto& [key, value] : obj_.items()) {
      if (!used_.count(key)) throw InputError("unknown config key: " + section_ + "." + key);
    }
  }

 private:
  const json& obj_;
  std::string section_;
  std::set<std::string> used_;
};

ordered_json ProviderJson(const ProviderConfig& p, bool redact) {
  ordered_json j;
  j["endpoint"] = p.endpoint;
  j["auth_token"] = redact ? (p.auth_token.empty() ? "" : "<set>") : p.auth_token;
  j["model"] = p.model;
  j["timeout"] = p.timeout;
  j["max_retries"] = p.max_retries;
  j["backoff_base"] = p.backoff_base;
  return j;
}

void ReadProvider(const json& obj, const std::string& section, ProviderConfig& p) {
  Reader r(obj, section);
  r("endpoint", p.endpoint);
  r("auth_token", p.auth_token);
  r("model", p.model);
  r("timeout", p.timeout);
  r("max_retries", p.max_retries);
  r("backoff_base", p.backoff_base);
  r.Finish();
}

}  // namespace

void FeatureConfig::Validate() const {
  if (frame_length < 2) throw InputError("features.frame_length must be at least 2");
  if (hop < 1 || hop > frame_length) throw InputError("features.hop must be in [1, frame_length]");
  if (spectrogram_max_columns < 1 || spectrogram_bands < 1 || waveform_points < 2) {
    throw InputError("features plot sizes must be positive");
  }
}

void LyricsConfig::Validate() const {
  if (ngram_orders.empty()) throw InputError("lyrics.ngram_orders must not be empty");
  for (std::size_t n : ngram_orders) {
    if (n < 1) throw InputError("lyrics.ngram_orders entries must be at least 1");
  }
  if (top_k < 1) throw InputError("lyrics.top_k must be at least 1");
  if (similarity_window < 1) throw InputError("lyrics.similarity_window must be at least 1");
}

void AppConfig::Validate() const {
  preprocess.Validate();
  voice.Validate();
  features.Validate();
  lyrics.Validate();
  providers.sentiment.Validate();
  providers.embedding.Validate();
  providers.rewrite.Validate();
  if (providers.max_concurrency < 1) throw InputError("providers.max_concurrency must be >= 1");
  RewriteRequest{"", providers.prompt_template}.Validate();
}

ordered_json AppConfig::ToJson(bool redact) const {
  ordered_json j;
  auto& pp = j["preprocess"];
  pp["target_rate"] = preprocess.target_rate;
  pp["max_duration"] = preprocess.max_duration;
  pp["preemphasis_alpha"] = preprocess.preemphasis_alpha;
  pp["highpass_cutoff"] = preprocess.highpass_cutoff;
  pp["noise_profile_window"] = preprocess.noise_profile_window;
  pp["subtraction_floor"] = preprocess.subtraction_floor;
  pp["denoise"] = preprocess.denoise;
  pp["noise_mode"] = NoiseModeName(preprocess.noise_mode);

  auto& v = j["voice"];
  v["fmin"] = voice.fmin;
  v["fmax"] = voice.fmax;
  v["pitch_frame"] = voice.pitch_frame;
  v["pitch_hop"] = voice.pitch_hop;
  v["voicing_threshold"] = voice.voicing_threshold;
  v["silence_gate"] = voice.silence_gate;
  v["pitch_lowpass"] = voice.pitch_lowpass;
  v["period_lowpass_ratio"] = voice.period_lowpass_ratio;
  v["period_snap_ratio"] = voice.period_snap_ratio;
  v["hnr_frame"] = voice.hnr_frame;
  v["hnr_hop"] = voice.hnr_hop;
  v["harmonic_half_bandwidth"] = voice.harmonic_half_bandwidth;
  v["hnr_cap"] = voice.hnr_cap;
  v["cpp_frame"] = voice.cpp_frame;
  v["cpp_hop"] = voice.cpp_hop;
  v["cpp_fmin"] = voice.cpp_fmin;
  v["cpp_fmax"] = voice.cpp_fmax;
  v["cpp_baseline"] = BaselineName(voice.cpp_baseline);
  v["cpp_energy_gate"] = voice.cpp_energy_gate;
  v["rms_frame"] = voice.rms_frame;
  v["rms_hop"] = voice.rms_hop;

  auto& f = j["features"];
  f["frame_length"] = features.frame_length;
  f["hop"] = features.hop;
  f["window"] = WindowName(features.window);
  f["spectrogram_max_columns"] = features.spectrogram_max_columns;
  f["spectrogram_bands"] = features.spectrogram_bands;
  f["waveform_points"] = features.waveform_points;

  auto& l = j["lyrics"];
  l["stopwords_path"] = lyrics.stopwords_path;
  l["ngram_orders"] = lyrics.ngram_orders;
  l["top_k"] = lyrics.top_k;
  l["similarity_window"] = lyrics.similarity_window;

  auto& p = j["providers"];
  p["offline"] = providers.offline;
  p["sentiment"] = ProviderJson(providers.sentiment, redact);
  p["embedding"] = ProviderJson(providers.embedding, redact);
  p["rewrite"] = ProviderJson(providers.rewrite, redact);
  p["embedding_dimension"] = providers.embedding_dimension;
  p["unit_normalize"] = providers.unit_normalize;
  p["cache_dir"] = providers.cache_dir;
  p["max_concurrency"] = providers.max_concurrency;
  p["prompt_template"] = providers.prompt_template;

  j["separator_cmd"] = separator_cmd;
  return j;
}

AppConfig AppConfig::FromJson(const json& doc) {
  AppConfig c;
  Reader root(doc, "<root>");
  {
    Reader r(root.Child("preprocess"), "preprocess");
    r("target_rate", c.preprocess.target_rate);
    r("max_duration", c.preprocess.max_duration);
    r("preemphasis_alpha", c.preprocess.preemphasis_alpha);
    r("highpass_cutoff", c.preprocess.highpass_cutoff);
    r("noise_profile_window", c.preprocess.noise_profile_window);
    r("subtraction_floor", c.preprocess.subtraction_floor);
    r("denoise", c.preprocess.denoise);
    r.Enum("noise_mode", c.preprocess.noise_mode, ParseNoiseMode);
    r.Finish();
  }
  {
    Reader r(root.Child("voice"), "voice");
    r("fmin", c.voice.fmin);
    r("fmax", c.voice.fmax);
    r("pitch_frame", c.voice.pitch_frame);
    r("pitch_hop", c.voice.pitch_hop);
    r("voicing_threshold", c.voice.voicing_threshold);
    r("silence_gate", c.voice.silence_gate);
    r("pitch_lowpass", c.voice.pitch_lowpass);
    r("period_lowpass_ratio", c.voice.period_lowpass_ratio);
    r("period_snap_ratio", c.voice.period_snap_ratio);
    r("hnr_frame", c.voice.hnr_frame);
    r("hnr_hop", c.voice.hnr_hop);
    r("harmonic_half_bandwidth", c.voice.harmonic_half_bandwidth);
    r("hnr_cap", c.voice.hnr_cap);
    r("cpp_frame", c.voice.cpp_frame);
    r("cpp_hop", c.voice.cpp_hop);
    r("cpp_fmin", c.voice.cpp_fmin);
    r("cpp_fmax", c.voice.cpp_fmax);
    r.Enum("cpp_baseline", c.voice.cpp_baseline, ParseBaseline);
    r("cpp_energy_gate", c.voice.cpp_energy_gate);
    r("rms_frame", c.voice.rms_frame);
    r("rms_hop", c.voice.rms_hop);
    r.Finish();
  }
  {
    Reader r(root.Child("features"), "features");
    r("frame_length", c.features.frame_length);
    r("hop", c.features.hop);
    r.Enum("window", c.features.window, [](const std::string& s) { return ParseWindow(s); });
    r("spectrogram_max_columns", c.features.spectrogram_max_columns);
    r("spectrogram_bands", c.features.spectrogram_bands);
    r("waveform_points", c.features.waveform_points);
    r.Finish();
  }
  {
    Reader r(root.Child("lyrics"), "lyrics");
    r("stopwords_path", c.lyrics.stopwords_path);
    r("ngram_orders", c.lyrics.ngram_orders);
    r("top_k", c.lyrics.top_k);
    r("similarity_window", c.lyrics.similarity_window);
    r.Finish();
  }
  {
    Reader r(root.Child("providers"), "providers");
    r("offline", c.providers.offline);
    ReadProvider(r.Child("sentiment"), "providers.sentiment", c.providers.sentiment);
    ReadProvider(r.Child("embedding"), "providers.embedding", c.providers.embedding);
    ReadProvider(r.Child("rewrite"), "providers.rewrite", c.providers.rewrite);
    r("embedding_dimension", c.providers.embedding_dimension);
    r("unit_normalize", c.providers.unit_normalize);
    r("cache_dir", c.providers.cache_dir);
    r("max_concurrency", c.providers.max_concurrency);
    r("prompt_template", c.providers.prompt_template);
    r.Finish();
  }
  root("separator_cmd", c.separator_cmd);
  root.Finish();
  c.Validate();
  return c;
}

void AppConfig::SetValue(std::string_view dotted_key, const json& value) {
  json doc = ToJson();
  json* node = &doc;
  std::size_t start = 0;
  while (true) {
    const std::size_t dot = dotted_key.find('.', start);
    const std::string part(dotted_key.substr(start, dot == std::string_view::npos
                                                        ? std::string_view::npos
                                                        : dot - start));
    if (!node->is_object() || !node->contains(part)) {
      throw InputError("unknown config key: " + std::string(dotted_key));
    }
    node = &(*node)[part];
    if (dot == std::string_view::npos) break;
    start = dot + 1;
  }
  if (node->is_object()) throw InputError("config key names a section: " + std::string(dotted_key));
  *node = value;
  *this = FromJson(doc);
}

void AppConfig::Set(std::string_view dotted_key, std::string_view value) {
  json parsed = json::parse(value, nullptr, /*allow_exceptions=*/false);
  if (parsed.is_discarded()) parsed = std::string(value);
  SetValue(dotted_key, parsed);
}

std::string AppConfig::Hash() const {
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016llx",
                static_cast<unsigned long long>(Fnv1a64(ToJson(/*redact=*/true).dump())));
  return hex;
}

AppConfig LoadConfig(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read config file: " + path.string());
  json doc = json::parse(in, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded()) throw InputError("config file is not valid JSON: " + path.string());
  return AppConfig::FromJson(doc);
}

}  // namespace detoxaudit

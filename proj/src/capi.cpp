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

#include "detoxaudit/detoxaudit.h"

#include <cstdlib>
#include <cstring>
#include <memory>
#include <new>
#include <string>

#include "audio_io.hpp"
#include "config.hpp"
#include "error.hpp"
#include "http_transport.hpp"
#include "pipeline.hpp"
#include "report.hpp"

struct dxa_config {
  detoxaudit::AppConfig cfg;
};

struct dxa_session {
  explicit dxa_session(const detoxaudit::AppConfig& cfg) : pipeline(cfg) {}
  detoxaudit::Pipeline pipeline;
};

struct dxa_audio {
  detoxaudit::AudioBuffer buf;
};

struct dxa_report {
  detoxaudit::ComparisonReport report;
};

namespace {

thread_local std::string t_last_error;

dxa_status Fail(dxa_status status, const std::string& message) {
  t_last_error = message;
  return status;
}

// Runs `fn`, translating exceptions into status codes.
template <typename Fn>
dxa_status Guard(Fn&& fn) {
  try {
    fn();
    t_last_error.clear();
    return DXA_OK;
  } catch (const detoxaudit::Error& e) {
    return Fail(static_cast<dxa_status>(static_cast<int>(e.kind())), e.what());
  } catch (const std::bad_alloc&) {
    return Fail(DXA_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return Fail(DXA_ERR_INTERNAL, e.what());
  } catch (...) {
    return Fail(DXA_ERR_INTERNAL, "unknown failure");
  }
}

void Require(const void* p, const char* what) {
  if (p == nullptr) throw detoxaudit::InputError(std::string(what) + " must not be NULL");
}

char* Dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

detoxaudit::TrackBundle ToBundle(const dxa_bundle* b) {
  Require(b, "bundle");
  Require(b->vocal_stem, "bundle vocal_stem");
  Require(b->lyrics, "bundle lyrics");
  detoxaudit::TrackBundle t;
  t.vocal_stem = b->vocal_stem;
  t.lyrics = b->lyrics;
  if (b->sections != nullptr && b->sections[0] != '\0') t.sections = b->sections;
  t.artist_id = b->artist_id != nullptr ? b->artist_id : "";
  return t;
}

}  // namespace

extern "C" {

const char* dxa_version(void) { return detoxaudit::kToolVersion.data(); }

const char* dxa_status_name(dxa_status status) {
  switch (status) {
    case DXA_OK: return "ok";
    case DXA_ERR_INPUT: return "input error";
    case DXA_ERR_PROVIDER: return "provider error";
    case DXA_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* dxa_last_error(void) { return t_last_error.c_str(); }

void dxa_string_free(char* s) { std::free(s); }

size_t dxa_network_request_count(void) { return detoxaudit::NetworkRequestCount(); }

dxa_status dxa_config_create(dxa_config** out) {
  return Guard([&] {
    Require(out, "out");
    *out = new dxa_config{};
  });
}

dxa_status dxa_config_load_file(const char* path, dxa_config** out) {
  return Guard([&] {
    Require(path, "path");
    Require(out, "out");
    *out = new dxa_config{detoxaudit::LoadConfig(path)};
  });
}

dxa_status dxa_config_set_number(dxa_config* cfg, const char* key, double value) {
  return Guard([&] {
    Require(cfg, "config");
    Require(key, "key");
    cfg->cfg.SetValue(key, nlohmann::json(value));
  });
}

dxa_status dxa_config_set_bool(dxa_config* cfg, const char* key, int value) {
  return Guard([&] {
    Require(cfg, "config");
    Require(key, "key");
    cfg->cfg.SetValue(key, nlohmann::json(value != 0));
  });
}

dxa_status dxa_config_set_string(dxa_config* cfg, const char* key, const char* value) {
  return Guard([&] {
    Require(cfg, "config");
    Require(key, "key");
    Require(value, "value");
    cfg->cfg.SetValue(key, nlohmann::json(std::string(value)));
  });
}

dxa_status dxa_config_set_json(dxa_config* cfg, const char* key, const char* json_value) {
  return Guard([&] {
    Require(cfg, "config");
    Require(key, "key");
    Require(json_value, "json_value");
    nlohmann::json v = nlohmann::json::parse(json_value, nullptr, false);
    if (v.is_discarded()) throw detoxaudit::InputError("value is not valid JSON");
    cfg->cfg.SetValue(key, v);
  });
}

dxa_status dxa_config_apply_environment(dxa_config* cfg) {
  return Guard([&] {
    Require(cfg, "config");
    cfg->cfg.providers.ApplyEnvironment();
  });
}

dxa_status dxa_config_to_json(const dxa_config* cfg, char** out) {
  return Guard([&] {
    Require(cfg, "config");
    Require(out, "out");
    *out = Dup(cfg->cfg.ToJson(/*redact=*/true).dump(2));
  });
}

void dxa_config_destroy(dxa_config* cfg) { delete cfg; }

dxa_status dxa_session_create(const dxa_config* cfg, dxa_session** out) {
  return Guard([&] {
    Require(cfg, "config");
    Require(out, "out");
    *out = new dxa_session(cfg->cfg);
  });
}

void dxa_session_destroy(dxa_session* session) { delete session; }

dxa_status dxa_audio_load(const char* path, dxa_audio** out) {
  return Guard([&] {
    Require(path, "path");
    Require(out, "out");
    *out = new dxa_audio{detoxaudit::LoadTrack(path)};
  });
}

dxa_status dxa_audio_preprocess(const dxa_session* session, const dxa_audio* in,
                                dxa_audio** out) {
  return Guard([&] {
    Require(session, "session");
    Require(in, "audio");
    Require(out, "out");
    *out = new dxa_audio{
        detoxaudit::Preprocess(in->buf, session->pipeline.config().preprocess)};
  });
}

size_t dxa_audio_length(const dxa_audio* audio) {
  return audio != nullptr ? audio->buf.samples.size() : 0;
}

double dxa_audio_sample_rate(const dxa_audio* audio) {
  return audio != nullptr ? audio->buf.sample_rate : 0.0;
}

int dxa_audio_is_silent(const dxa_audio* audio) {
  return audio != nullptr && audio->buf.silent ? 1 : 0;
}

const double* dxa_audio_samples(const dxa_audio* audio) {
  return audio != nullptr ? audio->buf.samples.data() : nullptr;
}

void dxa_audio_destroy(dxa_audio* audio) { delete audio; }

dxa_status dxa_analyze_audio(const dxa_session* session, const char* stem, const char* sections,
                             char** json_out) {
  return Guard([&] {
    Require(session, "session");
    Require(stem, "stem");
    Require(json_out, "json_out");
    std::optional<std::filesystem::path> map;
    if (sections != nullptr && sections[0] != '\0') map = sections;
    *json_out =
        Dup(detoxaudit::AudioToJson(session->pipeline.AnalyzeAudio(stem, map)).dump(2));
  });
}

dxa_status dxa_analyze_lyrics(const dxa_session* session, const char* lyrics, char** json_out) {
  return Guard([&] {
    Require(session, "session");
    Require(lyrics, "lyrics");
    Require(json_out, "json_out");
    *json_out = Dup(detoxaudit::LyricsToJson(session->pipeline.AnalyzeLyrics(lyrics)).dump(2));
  });
}

dxa_status dxa_rewrite(const dxa_session* session, const char* lyrics, char** json_out) {
  return Guard([&] {
    Require(session, "session");
    Require(lyrics, "lyrics");
    Require(json_out, "json_out");
    const detoxaudit::RewriteResult r = session->pipeline.Rewrite(lyrics);
    nlohmann::ordered_json j;
    j["text"] = r.text;
    j["warnings"] = r.warnings;
    j["raw_response"] = r.raw_response;
    j["provider"] = session->pipeline.providers().rewrite->identity();
    *json_out = Dup(j.dump(2));
  });
}

dxa_status dxa_compare(const dxa_session* session, const dxa_bundle* original,
                       const dxa_bundle* transformed, dxa_report** out) {
  return Guard([&] {
    Require(session, "session");
    Require(out, "out");
    *out = new dxa_report{
        session->pipeline.Compare(ToBundle(original), ToBundle(transformed))};
  });
}

dxa_status dxa_report_write(const dxa_report* report, const char* path) {
  return Guard([&] {
    Require(report, "report");
    Require(path, "path");
    detoxaudit::WriteFileAtomic(path, detoxaudit::SerializeReport(report->report));
  });
}

dxa_status dxa_report_load(const char* path, dxa_report** out) {
  return Guard([&] {
    Require(path, "path");
    Require(out, "out");
    *out = new dxa_report{detoxaudit::LoadReport(path)};
  });
}

dxa_status dxa_report_to_json(const dxa_report* report, char** out) {
  return Guard([&] {
    Require(report, "report");
    Require(out, "out");
    *out = Dup(detoxaudit::SerializeReport(report->report));
  });
}

dxa_status dxa_report_emit(const dxa_report* report, const char* kind, const char* path) {
  return Guard([&] {
    Require(report, "report");
    Require(kind, "kind");
    Require(path, "path");
    detoxaudit::EmitPlotData(report->report, detoxaudit::ParsePlotKind(kind), path);
  });
}

void dxa_report_destroy(dxa_report* report) { delete report; }

}  // extern "C"

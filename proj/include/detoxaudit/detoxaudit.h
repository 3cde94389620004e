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

/* detoxaudit C API.
 *
 * Conventions:
 *  - Functions returning dxa_status report failures through the code and a
 *    thread-local message available from dxa_last_error().
 *  - Objects are opaque handles released with their *_destroy function;
 *    passing NULL to a destroy function is a no-op.
 *  - Strings returned through char** are heap-allocated and must be released
 *    with dxa_string_free().
 *  - Handles may be shared across threads for read-only use (analysis calls
 *    take const handles); configuration setters are not synchronized.
 */

#ifndef DETOXAUDIT_DETOXAUDIT_H_
#define DETOXAUDIT_DETOXAUDIT_H_

#include <stddef.h>

#if defined(DXA_BUILDING_LIBRARY)
#define DXA_API __attribute__((visibility("default")))
#else
#define DXA_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum dxa_status {
  DXA_OK = 0,
  DXA_ERR_INPUT = 1,    /* bad arguments, unreadable or invalid input */
  DXA_ERR_PROVIDER = 2, /* external service failure */
  DXA_ERR_INTERNAL = 3
} dxa_status;

typedef struct dxa_config dxa_config;
typedef struct dxa_session dxa_session;
typedef struct dxa_audio dxa_audio;
typedef struct dxa_report dxa_report;

/* One side of a comparison. `sections` may be NULL. */
typedef struct dxa_bundle {
  const char* vocal_stem;
  const char* lyrics;
  const char* sections;
  const char* artist_id;
} dxa_bundle;

DXA_API const char* dxa_version(void);
DXA_API const char* dxa_status_name(dxa_status status);
/* Message of the last failed call on this thread; "" if none. */
DXA_API const char* dxa_last_error(void);
DXA_API void dxa_string_free(char* s);

/* Outbound HTTP attempts made by this process so far. */
DXA_API size_t dxa_network_request_count(void);

/* ---- configuration ---- */

DXA_API dxa_status dxa_config_create(dxa_config** out);
DXA_API dxa_status dxa_config_load_file(const char* path, dxa_config** out);
/* Keys are dotted paths, e.g. "preprocess.target_rate". */
DXA_API dxa_status dxa_config_set_number(dxa_config* cfg, const char* key, double value);
DXA_API dxa_status dxa_config_set_bool(dxa_config* cfg, const char* key, int value);
DXA_API dxa_status dxa_config_set_string(dxa_config* cfg, const char* key, const char* value);
/* `json_value` is any JSON value, e.g. "[2, 3]". */
DXA_API dxa_status dxa_config_set_json(dxa_config* cfg, const char* key, const char* json_value);
/* Fills unset endpoints and tokens from DETOX_* environment variables. */
DXA_API dxa_status dxa_config_apply_environment(dxa_config* cfg);
/* Auth tokens are redacted. */
DXA_API dxa_status dxa_config_to_json(const dxa_config* cfg, char** out);
DXA_API void dxa_config_destroy(dxa_config* cfg);

/* ---- session: validated config plus provider clients ---- */

DXA_API dxa_status dxa_session_create(const dxa_config* cfg, dxa_session** out);
DXA_API void dxa_session_destroy(dxa_session* session);

/* ---- audio buffers ---- */

DXA_API dxa_status dxa_audio_load(const char* path, dxa_audio** out);
DXA_API dxa_status dxa_audio_preprocess(const dxa_session* session, const dxa_audio* in,
                                        dxa_audio** out);
DXA_API size_t dxa_audio_length(const dxa_audio* audio);
DXA_API double dxa_audio_sample_rate(const dxa_audio* audio);
DXA_API int dxa_audio_is_silent(const dxa_audio* audio);
/* Valid until the handle is destroyed. */
DXA_API const double* dxa_audio_samples(const dxa_audio* audio);
DXA_API void dxa_audio_destroy(dxa_audio* audio);

/* ---- analyses (results as JSON text) ---- */

/* `sections` may be NULL. */
DXA_API dxa_status dxa_analyze_audio(const dxa_session* session, const char* stem,
                                     const char* sections, char** json_out);
DXA_API dxa_status dxa_analyze_lyrics(const dxa_session* session, const char* lyrics,
                                      char** json_out);
/* Result: {"text": ..., "warnings": [...], "raw_response": ...}. */
DXA_API dxa_status dxa_rewrite(const dxa_session* session, const char* lyrics, char** json_out);

/* ---- comparison reports ---- */

DXA_API dxa_status dxa_compare(const dxa_session* session, const dxa_bundle* original,
                               const dxa_bundle* transformed, dxa_report** out);
/* Atomic: written to a temporary file and renamed into place. */
DXA_API dxa_status dxa_report_write(const dxa_report* report, const char* path);
DXA_API dxa_status dxa_report_load(const char* path, dxa_report** out);
DXA_API dxa_status dxa_report_to_json(const dxa_report* report, char** out);
/* kind: waveform, spectrogram, ngram, radar, similarity, sentiment_sections. */
DXA_API dxa_status dxa_report_emit(const dxa_report* report, const char* kind, const char* path);
DXA_API void dxa_report_destroy(dxa_report* report);

#ifdef __cplusplus
}
#endif

#endif /* DETOXAUDIT_DETOXAUDIT_H_ */

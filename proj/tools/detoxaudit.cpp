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

// detoxaudit command-line interface. Talks to the library only through the
// C API.

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "detoxaudit/detoxaudit.h"
#include "json.hpp"

namespace {

using nlohmann::json;

// Carries a C API status out of nested helpers.
struct StatusError {
  dxa_status status;
  std::string message;
};

void Check(dxa_status status) {
  if (status != DXA_OK) throw StatusError{status, dxa_last_error()};
}

struct ConfigDeleter {
  void operator()(dxa_config* c) const { dxa_config_destroy(c); }
};
struct SessionDeleter {
  void operator()(dxa_session* s) const { dxa_session_destroy(s); }
};
struct ReportDeleter {
  void operator()(dxa_report* r) const { dxa_report_destroy(r); }
};
using ConfigPtr = std::unique_ptr<dxa_config, ConfigDeleter>;
using SessionPtr = std::unique_ptr<dxa_session, SessionDeleter>;
using ReportPtr = std::unique_ptr<dxa_report, ReportDeleter>;

std::string TakeString(char* s) {
  std::string out = s != nullptr ? s : "";
  dxa_string_free(s);
  return out;
}

struct GlobalOptions {
  std::string config_path;
  std::vector<std::string> overrides;  // key=value
  bool offline = false;
  std::string cache_dir;
  std::string stopwords;
  std::string separator_cmd;
  std::optional<double> target_rate;
  std::optional<double> max_seconds;
  bool no_denoise = false;
  bool percent = false;
  bool quiet = false;
};

ConfigPtr BuildConfig(const GlobalOptions& g) {
  dxa_config* raw = nullptr;
  std::string path = g.config_path;
  if (path.empty()) {
    if (const char* env = std::getenv("DETOX_CONFIG"); env != nullptr) path = env;
  }
  Check(path.empty() ? dxa_config_create(&raw) : dxa_config_load_file(path.c_str(), &raw));
  ConfigPtr cfg(raw);
  for (const std::string& kv : g.overrides) {
    const std::size_t eq = kv.find('=');
    if (eq == std::string::npos) {
      throw StatusError{DXA_ERR_INPUT, "--set expects key=value, got '" + kv + "'"};
    }
    const std::string key = kv.substr(0, eq);
    const std::string value = kv.substr(eq + 1);
    // Numbers, booleans and lists as JSON; anything else as a plain string.
    if (dxa_config_set_json(cfg.get(), key.c_str(), value.c_str()) != DXA_OK) {
      Check(dxa_config_set_string(cfg.get(), key.c_str(), value.c_str()));
    }
  }
  if (g.offline) Check(dxa_config_set_bool(cfg.get(), "providers.offline", 1));
  if (!g.cache_dir.empty()) {
    Check(dxa_config_set_string(cfg.get(), "providers.cache_dir", g.cache_dir.c_str()));
  }
  if (!g.stopwords.empty()) {
    Check(dxa_config_set_string(cfg.get(), "lyrics.stopwords_path", g.stopwords.c_str()));
  }
  if (!g.separator_cmd.empty()) {
    Check(dxa_config_set_string(cfg.get(), "separator_cmd", g.separator_cmd.c_str()));
  }
  if (g.target_rate) Check(dxa_config_set_number(cfg.get(), "preprocess.target_rate", *g.target_rate));
  if (g.max_seconds) Check(dxa_config_set_number(cfg.get(), "preprocess.max_duration", *g.max_seconds));
  if (g.no_denoise) Check(dxa_config_set_bool(cfg.get(), "preprocess.denoise", 0));
  Check(dxa_config_apply_environment(cfg.get()));
  return cfg;
}

SessionPtr BuildSession(const GlobalOptions& g) {
  ConfigPtr cfg = BuildConfig(g);
  dxa_session* raw = nullptr;
  Check(dxa_session_create(cfg.get(), &raw));
  return SessionPtr(raw);
}

void WriteOutput(const std::string& out_path, const std::string& text) {
  if (out_path.empty() || out_path == "-") {
    std::cout << text;
    if (text.empty() || text.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
  if (!out) throw StatusError{DXA_ERR_INPUT, "cannot write " + out_path};
  out << text;
  if (text.empty() || text.back() != '\n') out << '\n';
}

std::string Num(const json& v, bool percent = false, int precision = 4) {
  if (v.is_null()) return "n/a";
  std::ostringstream s;
  s.setf(std::ios::fixed);
  s.precision(precision);
  s << (percent ? v.get<double>() * 100.0 : v.get<double>()) << (percent ? " %" : "");
  return s.str();
}

void PrintVoiceSummary(const std::string& title, const json& audio, bool percent) {
  const json& m = audio.at("metrics");
  std::cerr << title << ": HNR " << Num(m.at("hnr_db"), false, 2) << " dB, CPP "
            << Num(m.at("cpp"), false, 2) << ", jitter " << Num(m.at("jitter"), percent)
            << ", shimmer " << Num(m.at("shimmer"), percent) << ", RMS avg "
            << Num(m.at("rms").at("avg")) << ", voiced " << Num(m.at("voiced_fraction"), false, 2)
            << '\n';
}

std::vector<std::string> SplitList(const std::vector<std::string>& items) {
  std::vector<std::string> out;
  for (const std::string& item : items) {
    std::stringstream ss(item);
    std::string part;
    while (std::getline(ss, part, ',')) {
      if (!part.empty()) out.push_back(part);
    }
  }
  return out;
}

int ExitCode(dxa_status status) { return static_cast<int>(status); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Before/after evaluation of vocal stems and lyrics."};
  app.set_version_flag("--version", std::string(dxa_version()));
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions g;
  app.add_option("--config", g.config_path, "JSON config file (default: $DETOX_CONFIG)");
  app.add_option("--set", g.overrides, "Override a config key, e.g. --set voice.fmax=500")
      ->type_name("KEY=VALUE");
  app.add_flag("--offline", g.offline, "Use deterministic local providers; no network");
  app.add_option("--cache-dir", g.cache_dir, "Persist provider responses in this directory");
  app.add_option("--stopwords", g.stopwords, "Stopword list, one word per line");
  app.add_option("--separator-cmd", g.separator_cmd,
                 "Stem separation command; {in} and {out} are substituted");
  app.add_option("--target-rate", g.target_rate, "Resampling rate in Hz");
  app.add_option("--max-seconds", g.max_seconds, "Analyze at most this many seconds");
  app.add_flag("--no-denoise", g.no_denoise, "Skip spectral subtraction");
  app.add_flag("--percent", g.percent, "Show jitter and shimmer as percentages");
  app.add_flag("-q,--quiet", g.quiet, "No summary on stderr");

  std::string out_path;

  auto* audio_cmd = app.add_subcommand("analyze-audio", "Voice metrics for one vocal stem");
  std::string stem;
  std::string sections;
  audio_cmd->add_option("stem", stem, "Vocal stem (WAV)")->required();
  audio_cmd->add_option("--sections", sections, "Section sidecar (label<TAB>start<TAB>end)");
  audio_cmd->add_option("--out", out_path, "Write JSON here instead of stdout");

  auto* lyrics_cmd = app.add_subcommand("analyze-lyrics", "N-grams and sentiment for lyrics");
  std::string lyrics;
  lyrics_cmd->add_option("lyrics", lyrics, "Lyrics text file")->required();
  lyrics_cmd->add_option("--out", out_path, "Write JSON here instead of stdout");

  auto* compare_cmd = app.add_subcommand("compare", "Compare an original and transformed song");
  std::string o_stem, o_lyrics, o_sections, t_stem, t_lyrics, t_sections, artist;
  std::vector<std::string> emit;
  std::string emit_dir;
  compare_cmd->add_option("--original-stem", o_stem)->required();
  compare_cmd->add_option("--original-lyrics", o_lyrics)->required();
  compare_cmd->add_option("--original-sections", o_sections);
  compare_cmd->add_option("--transformed-stem", t_stem)->required();
  compare_cmd->add_option("--transformed-lyrics", t_lyrics)->required();
  compare_cmd->add_option("--transformed-sections", t_sections);
  compare_cmd->add_option("--artist", artist, "Artist identifier recorded in the report");
  compare_cmd->add_option("--out", out_path, "Report path (JSON)")->required();
  compare_cmd->add_option("--emit", emit,
                          "Plot data to export: waveform,spectrogram,ngram,radar,similarity,"
                          "sentiment_sections or all")
      ->delimiter(',');
  compare_cmd->add_option("--emit-dir", emit_dir, "Directory for plot CSVs (default: report's)");

  auto* rewrite_cmd = app.add_subcommand("rewrite", "Send lyrics to the rewrite provider");
  std::string rewrite_in;
  bool rewrite_json = false;
  rewrite_cmd->add_option("lyrics", rewrite_in, "Lyrics text file")->required();
  rewrite_cmd->add_option("--out", out_path, "Write the rewritten text here");
  rewrite_cmd->add_flag("--json", rewrite_json, "Print text, warnings and raw response as JSON");

  auto* emit_cmd = app.add_subcommand("emit", "Export plot data from an existing report");
  std::string report_in, kind;
  emit_cmd->add_option("report", report_in, "Report JSON")->required();
  emit_cmd->add_option("--kind", kind, "Plot kind")->required();
  emit_cmd->add_option("--out", out_path, "CSV path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : ExitCode(DXA_ERR_INPUT);
  }

  try {
    if (*audio_cmd) {
      SessionPtr session = BuildSession(g);
      char* text = nullptr;
      Check(dxa_analyze_audio(session.get(), stem.c_str(),
                              sections.empty() ? nullptr : sections.c_str(), &text));
      const std::string result = TakeString(text);
      if (!g.quiet) PrintVoiceSummary(stem, json::parse(result), g.percent);
      WriteOutput(out_path, result);
    } else if (*lyrics_cmd) {
      SessionPtr session = BuildSession(g);
      char* text = nullptr;
      Check(dxa_analyze_lyrics(session.get(), lyrics.c_str(), &text));
      const std::string result = TakeString(text);
      if (!g.quiet) {
        const json j = json::parse(result);
        std::cerr << lyrics << ": " << j.at("lines").get<std::size_t>()
                  << " lines, mean standardized sentiment "
                  << Num(j.at("sentiment").at("per_line_mean"), false, 3) << '\n';
      }
      WriteOutput(out_path, result);
    } else if (*compare_cmd) {
      std::vector<std::string> kinds = SplitList(emit);
      if (std::find(kinds.begin(), kinds.end(), "all") != kinds.end()) {
        kinds = {"waveform", "spectrogram", "ngram", "radar", "similarity", "sentiment_sections"};
      }
      SessionPtr session = BuildSession(g);
      const dxa_bundle original{o_stem.c_str(), o_lyrics.c_str(),
                                o_sections.empty() ? nullptr : o_sections.c_str(),
                                artist.c_str()};
      const dxa_bundle transformed{t_stem.c_str(), t_lyrics.c_str(),
                                   t_sections.empty() ? nullptr : t_sections.c_str(),
                                   artist.c_str()};
      dxa_report* raw = nullptr;
      Check(dxa_compare(session.get(), &original, &transformed, &raw));
      ReportPtr report(raw);
      Check(dxa_report_write(report.get(), out_path.c_str()));

      const std::filesystem::path out(out_path);
      const std::filesystem::path dir =
          emit_dir.empty() ? out.parent_path() : std::filesystem::path(emit_dir);
      for (const std::string& k : kinds) {
        const std::filesystem::path csv = dir / (out.stem().string() + "." + k + ".csv");
        Check(dxa_report_emit(report.get(), k.c_str(), csv.string().c_str()));
        if (!g.quiet) std::cerr << "wrote " << csv.string() << '\n';
      }
      if (!g.quiet) {
        char* text = nullptr;
        Check(dxa_report_to_json(report.get(), &text));
        const json j = json::parse(TakeString(text));
        PrintVoiceSummary("original", j.at("original").at("audio"), g.percent);
        PrintVoiceSummary("transformed", j.at("transformed").at("audio"), g.percent);
        std::cerr << "sentiment per line: "
                  << Num(j.at("original").at("lyrics").at("sentiment").at("per_line_mean"), false, 3)
                  << " -> "
                  << Num(j.at("transformed").at("lyrics").at("sentiment").at("per_line_mean"),
                         false, 3)
                  << " (decrease " << Num(j.at("sentiment").at("percent_decrease_display"), false, 1)
                  << " %)\n";
        std::cerr << "semantic similarity mean: " << Num(j.at("similarity").at("mean"), false, 3)
                  << '\n';
        for (const json& w : j.at("warnings")) std::cerr << "warning: " << w.get<std::string>() << '\n';
        std::cerr << "report: " << out_path << '\n';
      }
    } else if (*rewrite_cmd) {
      SessionPtr session = BuildSession(g);
      char* text = nullptr;
      Check(dxa_rewrite(session.get(), rewrite_in.c_str(), &text));
      const json j = json::parse(TakeString(text));
      for (const json& w : j.at("warnings")) std::cerr << "warning: " << w.get<std::string>() << '\n';
      WriteOutput(out_path, rewrite_json ? j.dump(2) : j.at("text").get<std::string>());
    } else if (*emit_cmd) {
      dxa_report* raw = nullptr;
      Check(dxa_report_load(report_in.c_str(), &raw));
      ReportPtr report(raw);
      Check(dxa_report_emit(report.get(), kind.c_str(), out_path.c_str()));
    }
  } catch (const StatusError& e) {
    std::cerr << "detoxaudit: " << dxa_status_name(e.status) << ": " << e.message << '\n';
    return ExitCode(e.status);
  } catch (const std::exception& e) {
    std::cerr << "detoxaudit: internal error: " << e.what() << '\n';
    return ExitCode(DXA_ERR_INTERNAL);
  }
  return 0;
}

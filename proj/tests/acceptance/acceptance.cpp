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

// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any
// failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "audio_io.hpp"
#include "dsp_features.hpp"
#include "error.hpp"
#include "json.hpp"
#include "lyrics.hpp"
#include "mock_server.hpp"
#include "providers.hpp"
#include "synth/fixtures.hpp"
#include "synth/synth.hpp"
#include "test_util.hpp"
#include "voice_quality.hpp"

using namespace detoxaudit;
using detoxaudit::testing::FixturesDir;
using detoxaudit::testing::MockReply;
using detoxaudit::testing::MockServer;
using detoxaudit::testing::TempDir;
using nlohmann::json;

namespace {

constexpr double kRate = 22050.0;

// Collects failed checks for one criterion.
class Checks {
 public:
  void Expect(bool ok, const std::string& what) {
    if (!ok) failures_.push_back(what);
  }
  void Note(const std::string& detail) { notes_.push_back(detail); }
  bool ok() const { return failures_.empty(); }
  std::string Summary() const {
    std::ostringstream out;
    const auto& items = ok() ? notes_ : failures_;
    for (std::size_t i = 0; i < items.size(); ++i) out << (i ? "; " : "") << items[i];
    return out.str();
  }

 private:
  std::vector<std::string> failures_;
  std::vector<std::string> notes_;
};

std::string Num(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

double Seconds(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - since).count();
}

double Energy(const std::vector<double>& x) {
  return std::inner_product(x.begin(), x.end(), x.begin(), 0.0);
}

std::vector<double> Interior(const std::vector<double>& x) {
  const std::size_t skip = x.size() / 10;
  return {x.begin() + static_cast<std::ptrdiff_t>(skip), x.end() - static_cast<std::ptrdiff_t>(skip)};
}

double Mean(const std::vector<double>& x) {
  return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

// Mean absolute successive difference over the mean.
double DirectRelativeVariation(const std::vector<double>& x) {
  double diff = 0.0;
  for (std::size_t i = 0; i + 1 < x.size(); ++i) diff += std::abs(x[i] - x[i + 1]);
  return diff / static_cast<double>(x.size() - 1) / Mean(x);
}

VoiceConfig ConfigFor(double f0) {
  VoiceConfig cfg;
  if (f0 > cfg.fmax) {
    cfg.fmax = 1000.0;
    cfg.pitch_lowpass = 2000.0;
  }
  return cfg;
}

// ---- criteria ----

void PercentDecreaseTable(Checks& c) {
  const struct {
    double original, transformed, published;
  } rows[] = {{0.938, 0.344, 63.3}, {0.744, 0.107, 85.6}, {0.235, 0.063, 73.2}, {0.685, 0.250, 63.5}};
  for (const auto& r : rows) {
    const double got = PercentDecrease(r.original, r.transformed);
    c.Expect(std::abs(got - r.published) <= 0.1,
             "(" + Num(r.original) + ", " + Num(r.transformed) + ") -> " + Num(got));
    c.Note(Num(r.original) + "->" + Num(RoundTo(got, 1)));
  }
}

void StandardizationExamples(Checks& c) {
  const double pos = StandardizeSentiment(SentimentLabel::kPositive, 0.999);
  const double neg = StandardizeSentiment(SentimentLabel::kNegative, 0.992);
  c.Expect(std::abs(pos - 0.001) <= 1e-12, "POSITIVE 0.999 -> " + Num(pos, 17));
  c.Expect(std::abs(neg - 0.992) <= 1e-12, "NEGATIVE 0.992 -> " + Num(neg, 17));
  c.Note("POSITIVE 0.999->" + Num(pos) + ", NEGATIVE 0.992->" + Num(neg));
}

void JitterShimmerOracle(Checks& c) {
  std::mt19937_64 rng(20240501);
  std::uniform_real_distribution<double> period(0.002, 0.015);
  std::uniform_real_distribution<double> amp(0.01, 3.0);
  std::uniform_int_distribution<std::size_t> length(2, 400);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    PeriodSequence seq;
    const std::size_t n = length(rng);
    for (std::size_t i = 0; i < n; ++i) {
      seq.periods.push_back(period(rng));
      seq.amplitudes.push_back(amp(rng));
    }
    worst = std::max({worst, std::abs(Jitter(seq) - DirectRelativeVariation(seq.periods)),
                      std::abs(Shimmer(seq) - DirectRelativeVariation(seq.amplitudes))});
  }
  c.Expect(worst <= 1e-9, "max deviation " + Num(worst));
  c.Note("100 sequences, max deviation " + Num(worst, 3));
}

void VoiceMetricsOnSynthetics(Checks& c) {
  for (double f0 : {110.0, 220.0, 440.0}) {
    const AudioBuffer buf{synth::HarmonicTone(f0, kRate, 1.0), kRate};
    const auto median = EstimateF0(buf, ConfigFor(f0)).median_f0();
    const bool ok = median && std::abs(*median - f0) <= 0.02 * f0;
    c.Expect(ok, "f0 " + Num(f0) + " Hz -> " + (median ? Num(*median) : std::string("none")));
  }
  c.Note("f0 110/220/440 within 2%");

  for (double target : {0.0, 10.0, 20.0}) {
    const AudioBuffer buf{synth::HarmonicPlusNoise(150.0, kRate, 2.0, target, 5), kRate};
    const auto hnr = Hnr(buf, EstimateF0(buf));
    c.Expect(hnr && std::abs(*hnr - target) <= 1.5,
             "HNR target " + Num(target) + " dB -> " + (hnr ? Num(*hnr) : std::string("none")));
    if (hnr) c.Note("HNR " + Num(target) + "->" + Num(*hnr, 3));
  }

  auto pulse = synth::PulseTrain(100.0, kRate, 1.0);
  synth::ScaleToRms(pulse, 0.1);
  const auto noise = synth::WhiteNoise(pulse.size(), 0.1, 8);
  const auto cpp_pulse = Cpp(AudioBuffer{pulse, kRate});
  const auto cpp_noise = Cpp(AudioBuffer{noise, kRate});
  const bool cpp_ok = cpp_pulse && cpp_noise && *cpp_pulse - *cpp_noise >= 5.0;
  c.Expect(cpp_ok, "CPP pulse - noise = " +
                       (cpp_pulse && cpp_noise ? Num(*cpp_pulse - *cpp_noise) : std::string("absent")));
  if (cpp_pulse && cpp_noise) c.Note("CPP gap " + Num(*cpp_pulse - *cpp_noise, 3));

  const auto sig = synth::JitteredCosine(150.0, kRate, 400, 0.01, 3);
  const AudioBuffer buf{sig.samples, kRate};
  try {
    const PeriodSequence seq = ExtractPeriods(buf, EstimateF0(buf));
    const double injected = DirectRelativeVariation(sig.periods);
    const double extracted = Jitter(seq);
    c.Expect(std::abs(extracted - injected) <= 0.003,
             "jitter injected " + Num(injected) + " extracted " + Num(extracted));
    c.Note("jitter " + Num(100 * injected, 3) + "% vs " + Num(100 * extracted, 3) + "%");
  } catch (const Error& e) {
    c.Expect(false, std::string("jitter extraction failed: ") + e.what());
  }
}

void PreprocessingInvariants(Checks& c) {
  const AudioBuffer impulse{{1.0, 0.0, 0.0, 0.0}, kRate};
  c.Expect(Preemphasis(impulse, 0.97).samples == std::vector<double>{1.0, -0.97, 0.0, 0.0},
           "pre-emphasis impulse response");

  PreprocessConfig cfg;
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    synth::VoiceSpec spec;
    spec.seed = seed;
    spec.level = 0.1 * static_cast<double>(seed);
    const AudioBuffer out = Preprocess(AudioBuffer{synth::VoiceLike(spec, kRate), kRate}, cfg);
    double peak = 0.0;
    for (double v : out.samples) peak = std::max(peak, std::abs(v));
    c.Expect(peak == 1.0 && !out.silent, "normalized peak " + Num(peak, 17));
  }
  const AudioBuffer silent =
      Preprocess(AudioBuffer{std::vector<double>(static_cast<std::size_t>(kRate), 0.0), kRate}, cfg);
  c.Expect(silent.silent, "all-zero input not flagged silent");

  const AudioBuffer low{synth::Sine(50.0, kRate, 2.0), kRate};
  const double attenuation =
      10.0 * std::log10(Energy(Interior(low.samples)) / Energy(Interior(Highpass(low, 100.0).samples)));
  c.Expect(attenuation >= 20.0, "50 Hz attenuation " + Num(attenuation) + " dB");

  const AudioBuffer noise{synth::WhiteNoise(static_cast<std::size_t>(3 * kRate), 0.1, 3), kRate};
  const double reduction =
      10.0 * std::log10(Energy(noise.samples) / Energy(SpectralSubtract(noise, cfg).samples));
  c.Expect(reduction >= 6.0, "noise reduction " + Num(reduction) + " dB");
  c.Note("50 Hz -" + Num(attenuation, 3) + " dB, noise -" + Num(reduction, 3) + " dB");
}

void StftCorrectness(Checks& c) {
  const Spectrogram spec = Stft(AudioBuffer{synth::Sine(1000.0, kRate, 2.0), kRate}, 2048, 512);
  std::size_t wrong = 0;
  for (std::size_t f = 1; f + 1 < spec.frames; ++f) {
    const auto row = spec.frame(f);
    wrong += static_cast<std::size_t>(std::max_element(row.begin(), row.end()) - row.begin()) != 93;
  }
  c.Expect(wrong == 0, Num(static_cast<double>(wrong)) + " interior frames off bin 93");

  const std::size_t len = 2048;
  const AudioBuffer noise{synth::WhiteNoise(len * 8, 0.2, 4), kRate};
  const Spectrogram rect = Stft(noise, len, len, WindowKind::kRectangular);
  double freq = 0.0;
  for (std::size_t f = 0; f < rect.frames; ++f) {
    for (std::size_t b = 0; b < rect.bins; ++b) {
      const double w = (b == 0 || b + 1 == rect.bins) ? 1.0 : 2.0;
      freq += w * rect.at(f, b) * rect.at(f, b);
    }
  }
  freq /= static_cast<double>(len);
  const double rel = std::abs(freq - Energy(noise.samples)) / Energy(noise.samples);
  c.Expect(rel <= 0.01, "Parseval relative error " + Num(rel));
  c.Note("bin 93 in " + Num(static_cast<double>(spec.frames - 2)) + " frames, Parseval error " +
         Num(rel, 2));
}

std::string Quote(const std::filesystem::path& p) { return "'" + p.string() + "'"; }

void OfflineDeterminism(Checks& c) {
  TempDir dir("dxa-accept");
  const synth::FixturePaths stems = synth::WriteFixtureStems(dir.path());
  const auto fx = FixturesDir();

  // Endpoints are reachable, so any request an offline run made would land here.
  MockServer trap([](int, const std::string&) { return MockReply{500, "{}"}; });
  setenv("DETOX_SENTIMENT_URL", trap.url().c_str(), 1);
  setenv("DETOX_EMBED_URL", trap.url().c_str(), 1);
  setenv("DETOX_REWRITE_URL", trap.url().c_str(), 1);

  std::vector<json> reports;
  for (int run = 0; run < 2; ++run) {
    const auto out = dir / ("report" + std::to_string(run) + ".json");
    const std::string cmd = std::string("'") + DETOXAUDIT_CLI_PATH + "' --offline --quiet compare" +
                            " --original-stem " + Quote(stems.original) +
                            " --original-lyrics " + Quote(fx / "original_lyrics.txt") +
                            " --original-sections " + Quote(fx / "sections.tsv") +
                            " --transformed-stem " + Quote(stems.transformed) +
                            " --transformed-lyrics " + Quote(fx / "transformed_lyrics.txt") +
                            " --transformed-sections " + Quote(fx / "sections.tsv") +
                            " --artist fixture --out " + Quote(out);
    const auto start = std::chrono::steady_clock::now();
    const int status = std::system(cmd.c_str());
    const double elapsed = Seconds(start);
    c.Expect(status == 0, "compare exited with " + std::to_string(status));
    c.Expect(elapsed < 10.0, "run took " + Num(elapsed) + " s");
    c.Note("run " + std::to_string(run + 1) + " " + Num(elapsed, 3) + " s");
    if (status != 0) return;
    json j = json::parse(detoxaudit::testing::ReadText(out));
    c.Expect(j["provenance"]["offline"] == true, "provenance.offline is not set");
    j["provenance"].erase("timestamps");
    reports.push_back(std::move(j));
  }
  unsetenv("DETOX_SENTIMENT_URL");
  unsetenv("DETOX_EMBED_URL");
  unsetenv("DETOX_REWRITE_URL");
  c.Expect(trap.calls() == 0, std::to_string(trap.calls()) + " network requests");
  c.Expect(reports[0].dump() == reports[1].dump(), "reports differ outside timestamps");
  c.Note("0 requests, identical reports");

  const LyricDoc doc = LoadLyrics(fx / "original_lyrics.txt");
  StubEmbeddingProvider stub;
  const SimilaritySeries same = LineSimilarity(doc, doc, stub);
  c.Expect(!same.per_line.empty() &&
               std::all_of(same.per_line.begin(), same.per_line.end(), [](double v) { return v == 1.0; }),
           "identical documents not similar on every line");

  const SimilaritySeries pair = LineSimilarity(doc, LoadLyrics(fx / "transformed_lyrics.txt"), stub, 5);
  std::vector<double> brute;
  for (std::size_t i = 0; i + 5 <= pair.per_line.size(); ++i) {
    double sum = 0.0;
    for (std::size_t k = i; k < i + 5; ++k) sum += pair.per_line[k];
    brute.push_back(sum / 5.0);
  }
  c.Expect(pair.rolling == brute, "rolling window differs from brute force");
}

void ProviderFaultInjection(Checks& c) {
  MockServer flaky([](int call, const std::string&) {
    return call < 2 ? MockReply{503, "{}"}
                    : MockReply{200, R"({"label": "POSITIVE", "score": 0.9})"};
  });
  ProviderConfig cfg;
  cfg.endpoint = flaky.url();
  cfg.max_retries = 3;
  cfg.timeout = 1.0;
  cfg.backoff_base = 0.05;
  HttpSentimentProvider recovering(cfg, nullptr, nullptr);
  try {
    const SentimentResult r = recovering.Classify("hello");
    c.Expect(r.label == SentimentLabel::kPositive, "wrong result after retries");
  } catch (const Error& e) {
    c.Expect(false, std::string("fail-twice endpoint: ") + e.what());
  }
  c.Expect(recovering.client().retries() == 2,
           "retries " + std::to_string(recovering.client().retries()));
  c.Note("fail-twice: " + std::to_string(recovering.client().retries()) + " retries");

  // Permanent failure, both as an error status and as a stalled connection.
  struct Case {
    const char* name;
    MockReply reply;
  };
  MockReply stalled{200, R"({"label": "POSITIVE", "score": 0.9})", 2.0};
  for (const Case& k : {Case{"error status", MockReply{500, "{}"}}, Case{"stall", stalled}}) {
    const MockReply reply = k.reply;
    MockServer down([reply](int, const std::string&) { return reply; });
    ProviderConfig dc;
    dc.endpoint = down.url();
    dc.max_retries = 2;
    dc.timeout = 0.5;
    dc.backoff_base = 0.05;
    HttpSentimentProvider failing(dc, nullptr, nullptr);
    const auto start = std::chrono::steady_clock::now();
    bool threw = false;
    try {
      failing.Classify("hello");
    } catch (const Error& e) {
      threw = e.kind() == ErrorKind::kProvider;
    }
    const double elapsed = Seconds(start);
    double backoff = 0.0;
    for (int k2 = 1; k2 <= dc.max_retries; ++k2) backoff += dc.backoff_base * std::pow(2.0, k2 - 1);
    const double bound = dc.timeout * (dc.max_retries + 1) + backoff;
    c.Expect(threw, std::string(k.name) + ": no provider error");
    c.Expect(failing.client().attempts() == static_cast<std::size_t>(dc.max_retries) + 1,
             std::string(k.name) + ": attempts " + std::to_string(failing.client().attempts()));
    c.Expect(elapsed <= bound, std::string(k.name) + ": " + Num(elapsed) + " s > bound " + Num(bound));
    c.Note(std::string(k.name) + " " + Num(elapsed, 3) + " s <= " + Num(bound, 3) + " s");
  }
}

struct Criterion {
  int id;
  const char* title;
  double budget_seconds;
  std::function<void(Checks&)> run;
};

}  // namespace

int main() {
  const Criterion criteria[] = {
      {1, "percent-decrease table", 1.0, PercentDecreaseTable},
      {2, "sentiment standardization examples", 1.0, StandardizationExamples},
      {3, "jitter/shimmer oracle identity", 1.0, JitterShimmerOracle},
      {4, "voice metrics on synthetic signals", 30.0, VoiceMetricsOnSynthetics},
      {5, "preprocessing invariants", 10.0, PreprocessingInvariants},
      {6, "STFT correctness", 5.0, StftCorrectness},
      {7, "offline pipeline determinism", 20.0, OfflineDeterminism},
      {8, "provider fault injection", 15.0, ProviderFaultInjection},
  };
  int failed = 0;
  for (const Criterion& cr : criteria) {
    Checks checks;
    const auto start = std::chrono::steady_clock::now();
    try {
      cr.run(checks);
    } catch (const std::exception& e) {
      checks.Expect(false, std::string("exception: ") + e.what());
    }
    const double elapsed = Seconds(start);
    checks.Expect(elapsed < cr.budget_seconds,
                  "runtime " + Num(elapsed) + " s over " + Num(cr.budget_seconds) + " s");
    failed += !checks.ok();
    std::printf("%s criterion %d (%s) [%.3f s]: %s\n", checks.ok() ? "PASS" : "FAIL", cr.id, cr.title,
                elapsed, checks.Summary().c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}

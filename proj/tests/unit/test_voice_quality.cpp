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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "doctest.h"
#include "error.hpp"
#include "synth/synth.hpp"
#include "voice_quality.hpp"

using namespace detoxaudit;

namespace {

constexpr double kRate = 22050.0;

// Jitter written out directly, independent of the module.
double DirectJitter(const std::vector<double>& t) {
  double diff = 0.0;
  for (std::size_t i = 0; i + 1 < t.size(); ++i) diff += std::abs(t[i] - t[i + 1]);
  const double mean = std::accumulate(t.begin(), t.end(), 0.0) / static_cast<double>(t.size());
  return diff / static_cast<double>(t.size() - 1) / mean;
}

std::vector<double> Sawtooth(double f0, double seconds) {
  std::vector<double> x(static_cast<std::size_t>(seconds * kRate));
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double phase = std::fmod(f0 * static_cast<double>(i) / kRate, 1.0);
    x[i] = 2.0 * phase - 1.0;
  }
  return x;
}

VoiceConfig ConfigFor(double f0) {
  VoiceConfig cfg;
  if (f0 > cfg.fmax) {
    cfg.fmax = 1000.0;
    cfg.pitch_lowpass = 2000.0;
  }
  return cfg;
}

PeriodSequence RandomSequence(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> period(0.002, 0.015);
  std::uniform_real_distribution<double> amp(0.05, 2.0);
  PeriodSequence seq;
  for (std::size_t i = 0; i < n; ++i) {
    seq.periods.push_back(period(rng));
    seq.amplitudes.push_back(amp(rng));
  }
  return seq;
}

}  // namespace

TEST_SUITE("voice_quality") {

TEST_CASE("f0 of a 220 Hz sawtooth is within 2%") {
  AudioBuffer buf{Sawtooth(220.0, 1.0), kRate};
  const PitchTrack track = EstimateF0(buf, 65.0, 400.0);
  REQUIRE(track.median_f0().has_value());
  CHECK(*track.median_f0() >= 215.6);
  CHECK(*track.median_f0() <= 224.4);
}

TEST_CASE("property: f0 error at most 2% on clean tones") {
  for (double f0 : {110.0, 220.0, 440.0}) {
    AudioBuffer buf{synth::HarmonicTone(f0, kRate, 1.0), kRate};
    const PitchTrack track = EstimateF0(buf, ConfigFor(f0));
    REQUIRE(track.median_f0().has_value());
    CHECK(std::abs(*track.median_f0() - f0) <= 0.02 * f0);
    for (std::size_t i = 0; i < track.size(); ++i) {
      if (track.voiced[i]) CHECK(std::abs(*track.f0[i] - f0) <= 0.02 * f0);
    }
  }
}

TEST_CASE("noise is mostly unvoiced and silence entirely") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    AudioBuffer noise{synth::WhiteNoise(static_cast<std::size_t>(2 * kRate), 0.3, seed), kRate};
    CHECK(EstimateF0(noise).voiced_fraction() <= 0.2);
  }
  AudioBuffer silence{std::vector<double>(static_cast<std::size_t>(kRate), 0.0), kRate};
  const PitchTrack t = EstimateF0(silence);
  CHECK(t.size() > 0);
  CHECK(t.voiced_fraction() == 0.0);
  CHECK_FALSE(t.median_f0().has_value());
}

TEST_CASE("property: pitch track invariants") {
  AudioBuffer buf{synth::VoiceLike(synth::VoiceSpec{}, kRate), kRate};
  const VoiceConfig cfg;
  const PitchTrack t = EstimateF0(buf, cfg);
  REQUIRE(t.f0.size() == t.size());
  REQUIRE(t.voiced.size() == t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    CHECK(t.f0[i].has_value() == static_cast<bool>(t.voiced[i]));
    if (t.f0[i]) {
      CHECK(*t.f0[i] >= cfg.fmin);
      CHECK(*t.f0[i] <= cfg.fmax);
    }
    CHECK(t.confidence[i] >= 0.0);
    CHECK(t.confidence[i] <= 1.0);
  }
}

TEST_CASE("pitch config is validated") {
  AudioBuffer buf{synth::Sine(200.0, kRate, 0.5), kRate};
  CHECK_THROWS_AS(EstimateF0(buf, 400.0, 100.0), Error);
  CHECK_THROWS_AS(EstimateF0(buf, 65.0, 20000.0), Error);
}

TEST_CASE("periods of a pure 100 Hz tone are 10 ms within one sample") {
  AudioBuffer buf{synth::Sine(100.0, kRate, 1.0), kRate};
  const PitchTrack track = EstimateF0(buf);
  const PeriodSequence seq = ExtractPeriods(buf, track);
  REQUIRE(seq.size() >= 80);
  for (double t : seq.periods) CHECK(std::abs(t - 0.010) <= 1.0 / kRate);
}

TEST_CASE("alternating 1.0 / 0.8 cycle amplitudes are recovered within 5%") {
  const auto sig = synth::AmplitudePatternSine(150.0, kRate, 300, {1.0, 0.8});
  AudioBuffer buf{sig.samples, kRate};
  const PeriodSequence seq = ExtractPeriods(buf, EstimateF0(buf));
  REQUIRE(seq.size() >= 200);
  std::size_t alternations = 0;
  for (std::size_t i = 0; i + 1 < seq.size(); ++i) {
    const double hi = std::max(seq.amplitudes[i], seq.amplitudes[i + 1]);
    const double lo = std::min(seq.amplitudes[i], seq.amplitudes[i + 1]);
    CHECK(hi == doctest::Approx(2.0).epsilon(0.05));
    CHECK(lo == doctest::Approx(1.6).epsilon(0.05));
    alternations += seq.amplitudes[i] != seq.amplitudes[i + 1];
  }
  CHECK(alternations == seq.size() - 1);
}

TEST_CASE("injected period perturbation is recovered") {
  for (double f0 : {110.0, 220.0, 440.0}) {
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
      const auto sig = synth::JitteredCosine(f0, kRate, 400, 0.01, seed);
      AudioBuffer buf{sig.samples, kRate};
      const VoiceConfig cfg = ConfigFor(f0);
      const PeriodSequence seq = ExtractPeriods(buf, EstimateF0(buf, cfg), cfg);
      CHECK(seq.size() >= 390);
      CHECK(std::abs(Jitter(seq) - DirectJitter(sig.periods)) <= 0.003);
    }
  }
}

TEST_CASE("unvoiced input cannot yield periods") {
  AudioBuffer noise{synth::WhiteNoise(static_cast<std::size_t>(kRate), 0.3, 2), kRate};
  CHECK_THROWS_AS(ExtractPeriods(noise, EstimateF0(noise)), Error);
  AudioBuffer silence{std::vector<double>(static_cast<std::size_t>(kRate), 0.0), kRate};
  try {
    ExtractPeriods(silence, EstimateF0(silence));
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("insufficient voicing") != std::string::npos);
  }
}

TEST_CASE("jitter and shimmer hand-evaluated cases") {
  PeriodSequence seq;
  seq.periods = {0.0045, 0.0050, 0.0045, 0.0050, 0.0045};
  seq.amplitudes = {1.0, 1.0, 1.0, 1.0, 1.0};
  CHECK(Jitter(seq) == doctest::Approx(0.5 / 4.7).epsilon(1e-12));
  CHECK(Shimmer(seq) == 0.0);

  PeriodSequence amp;
  amp.periods = {0.01, 0.01, 0.01, 0.01};
  amp.amplitudes = {1.0, 0.8, 1.0, 0.8};
  CHECK(Shimmer(amp) == doctest::Approx(0.2 / 0.9).epsilon(1e-12));
  CHECK(Jitter(amp) == 0.0);

  PeriodSequence one;
  one.periods = {0.01};
  one.amplitudes = {1.0};
  CHECK_THROWS_AS(Jitter(one), Error);
  CHECK_THROWS_AS(Shimmer(one), Error);
}

TEST_CASE("property: jitter and shimmer equal the direct formulas") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 100; ++trial) {
    const PeriodSequence seq = RandomSequence(rng, 2 + static_cast<std::size_t>(trial) * 7);
    CHECK(std::abs(Jitter(seq) - DirectJitter(seq.periods)) <= 1e-9);
    CHECK(std::abs(Shimmer(seq) - DirectJitter(seq.amplitudes)) <= 1e-9);
  }
}

TEST_CASE("property: jitter and shimmer are scale invariant") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const PeriodSequence seq = RandomSequence(rng, 50);
    PeriodSequence scaled = seq;
    for (double& t : scaled.periods) t *= 3.7;
    for (double& a : scaled.amplitudes) a *= 0.013;
    CHECK(Jitter(scaled) == doctest::Approx(Jitter(seq)).epsilon(1e-12));
    CHECK(Shimmer(scaled) == doctest::Approx(Shimmer(seq)).epsilon(1e-12));
    CHECK(Jitter(seq) >= 0.0);
    CHECK(Shimmer(seq) >= 0.0);
  }
}

TEST_CASE("harmonic decomposition of a hand-built spectrum") {
  // Flat unit noise floor, +5 at every multiple of 10 bins up to 90.
  std::vector<double> power(96, 1.0);
  for (std::size_t k = 10; k <= 90; k += 10) power[k] += 5.0;
  const HarmonicDecomposition d = DecomposeHarmonics(power, 10.0, 1.0, 1.0);
  REQUIRE(d.harmonics() == 9);
  for (double e : d.harmonic_energies) CHECK(e == doctest::Approx(5.0));
  CHECK(d.harmonic_energy() == doctest::Approx(45.0));
  CHECK(d.noise_energy == doctest::Approx(95.0));

  // A spike outside every band raises the floor density: 27 band bins lose
  // 27 * 5 / 69 of their excess to it.
  power.push_back(6.0);
  const HarmonicDecomposition e = DecomposeHarmonics(power, 10.0, 1.0, 1.0);
  REQUIRE(e.harmonics() == 9);
  const double density = (69.0 + 5.0) / 69.0;
  for (double h : e.harmonic_energies) CHECK(h == doctest::Approx(8.0 - 3.0 * density));
}

TEST_CASE("HNR of constructed harmonic-to-noise ratios") {
  for (double target : {0.0, 10.0, 20.0}) {
    for (double f0 : {110.0, 220.0}) {
      AudioBuffer buf{synth::HarmonicPlusNoise(f0, kRate, 2.0, target, 5), kRate};
      const auto hnr = Hnr(buf, EstimateF0(buf));
      REQUIRE(hnr.has_value());
      CHECK(std::abs(*hnr - target) <= 1.5);
    }
  }
}

TEST_CASE("HNR of a pure periodic signal sits in the cap region") {
  AudioBuffer buf{synth::HarmonicTone(150.0, kRate, 1.0), kRate};
  const auto hnr = Hnr(buf, EstimateF0(buf));
  REQUIRE(hnr.has_value());
  CHECK(*hnr >= 30.0);
  CHECK(*hnr <= VoiceConfig{}.hnr_cap);
}

TEST_CASE("property: HNR does not rise as noise is added") {
  const auto tone = synth::HarmonicTone(180.0, kRate, 2.0);
  const auto noise = synth::WhiteNoise(tone.size(), 1.0, 33);
  const double tone_rms = synth::Rms(tone);
  double previous = 1e9;
  for (double level : {0.05, 0.2, 0.6}) {
    std::vector<double> x = tone;
    for (std::size_t i = 0; i < x.size(); ++i) x[i] += level * tone_rms * noise[i];
    AudioBuffer buf{x, kRate};
    const auto hnr = Hnr(buf, EstimateF0(buf));
    REQUIRE(hnr.has_value());
    CHECK(*hnr <= previous);
    previous = *hnr;
  }
}

TEST_CASE("HNR is absent without voicing") {
  AudioBuffer silence{std::vector<double>(static_cast<std::size_t>(kRate), 0.0), kRate};
  CHECK_FALSE(Hnr(silence, EstimateF0(silence)).has_value());
}

TEST_CASE("cepstrum of a frame") {
  const auto x = synth::PulseTrain(100.0, kRate, 0.1);
  const Cepstrum c = RealCepstrum(std::span<const double>(x).first(2048), kRate);
  CHECK(c.values.size() == 1025);
  CHECK(c.quefrency_rate == doctest::Approx(1.0 / kRate));
  // Rahmonic at the pulse period.
  const std::size_t lag = 221;
  const auto lo = c.values.begin() + 150;
  const auto hi = c.values.begin() + 368;
  const auto peak = static_cast<std::size_t>(std::max_element(lo, hi) - c.values.begin());
  CHECK(std::abs(static_cast<double>(peak) - static_cast<double>(lag)) <= 1.0);
}

TEST_CASE("CPP separates a pulse train from matched-RMS noise") {
  auto pulse = synth::PulseTrain(100.0, kRate, 1.0);
  synth::ScaleToRms(pulse, 0.1);
  const auto noise = synth::WhiteNoise(pulse.size(), 0.1, 8);
  for (CppBaseline baseline : {CppBaseline::kRegression, CppBaseline::kFlatMean}) {
    VoiceConfig cfg;
    cfg.cpp_baseline = baseline;
    const auto p = Cpp(AudioBuffer{pulse, kRate}, cfg);
    const auto n = Cpp(AudioBuffer{noise, kRate}, cfg);
    REQUIRE(p.has_value());
    REQUIRE(n.has_value());
    CHECK(*p > *n);
    if (baseline == CppBaseline::kRegression) CHECK(*p - *n >= 5.0);
  }
}

TEST_CASE("CPP of a constant signal is absent") {
  AudioBuffer dc{std::vector<double>(static_cast<std::size_t>(kRate), 0.5), kRate};
  CHECK_FALSE(Cpp(dc).has_value());
}

TEST_CASE("voice report on a voice-like track has every metric") {
  AudioBuffer buf{synth::VoiceLike(synth::VoiceSpec{}, kRate), kRate};
  const VoiceMetrics m = VoiceReport(buf);
  CHECK(m.hnr_db.has_value());
  CHECK(m.cpp.has_value());
  REQUIRE(m.jitter.has_value());
  REQUIRE(m.shimmer.has_value());
  CHECK(*m.jitter >= 0.0);
  CHECK(*m.shimmer >= 0.0);
  CHECK(m.voiced_fraction > 0.5);
  CHECK(m.voiced_fraction <= 1.0);
  CHECK(m.rms.min <= m.rms.avg);
  CHECK(m.rms.avg <= m.rms.max);
}

TEST_CASE("voice report ranks a rougher voice as rougher") {
  synth::VoiceSpec rough;
  rough.hnr_db = 5.0;
  rough.jitter = 0.03;
  rough.shimmer = 0.15;
  synth::VoiceSpec smooth;
  smooth.hnr_db = 25.0;
  smooth.jitter = 0.002;
  smooth.shimmer = 0.01;
  const VoiceMetrics r = VoiceReport(AudioBuffer{synth::VoiceLike(rough, kRate), kRate});
  const VoiceMetrics s = VoiceReport(AudioBuffer{synth::VoiceLike(smooth, kRate), kRate});
  CHECK(*r.hnr_db < *s.hnr_db);
  CHECK(*r.jitter > *s.jitter);
  CHECK(*r.shimmer > *s.shimmer);
}

TEST_CASE("voice report of silence leaves pitch metrics absent") {
  AudioBuffer silence{std::vector<double>(static_cast<std::size_t>(kRate), 0.0), kRate};
  const VoiceMetrics m = VoiceReport(silence);
  CHECK_FALSE(m.hnr_db.has_value());
  CHECK_FALSE(m.cpp.has_value());
  CHECK_FALSE(m.jitter.has_value());
  CHECK_FALSE(m.shimmer.has_value());
  CHECK(m.voiced_fraction == 0.0);
  CHECK(m.rms.avg == 0.0);
  CHECK(m.rms.max == 0.0);
  CHECK(m.rms.min == 0.0);
}

TEST_CASE("voice report is deterministic") {
  AudioBuffer a{synth::VoiceLike(synth::VoiceSpec{}, kRate), kRate};
  AudioBuffer b = a;
  const VoiceMetrics x = VoiceReport(a);
  const VoiceMetrics y = VoiceReport(b);
  CHECK(x.hnr_db == y.hnr_db);
  CHECK(x.cpp == y.cpp);
  CHECK(x.jitter == y.jitter);
  CHECK(x.shimmer == y.shimmer);
  CHECK(x.voiced_fraction == y.voiced_fraction);
}

TEST_CASE("radar normalization") {
  VoiceMetrics o;
  o.hnr_db = 3.06;
  o.cpp = 19.50;
  o.jitter = 0.0168;
  o.shimmer = 0.131;
  VoiceMetrics t;
  t.hnr_db = 8.43;
  t.cpp = 24.61;
  t.jitter = 0.0178;
  t.shimmer = 0.122;
  const std::pair<VoiceMetrics, VoiceMetrics> pair{o, t};
  const auto r = RadarNormalize(std::span(&pair, 1));
  REQUIRE(r.size() == 1);
  CHECK(r[0].original.hnr == 0.0);
  CHECK(r[0].transformed.hnr == 1.0);
  CHECK(r[0].original.shimmer == 1.0);
  CHECK(r[0].transformed.shimmer == 0.0);

  const std::pair<VoiceMetrics, VoiceMetrics> same{o, o};
  const auto c = RadarNormalize(std::span(&same, 1));
  CHECK(c[0].original.hnr == 0.5);
  CHECK(c[0].transformed.jitter == 0.5);

  VoiceMetrics missing = o;
  missing.cpp.reset();
  const std::pair<VoiceMetrics, VoiceMetrics> bad{o, missing};
  CHECK_THROWS_AS(RadarNormalize(std::span(&bad, 1)), Error);
}

TEST_CASE("property: radar output stays in [0, 1]") {
  std::mt19937_64 rng(99);
  std::normal_distribution<double> g(0.0, 10.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::pair<VoiceMetrics, VoiceMetrics>> pairs(4);
    for (auto& [a, b] : pairs) {
      for (VoiceMetrics* m : {&a, &b}) {
        m->hnr_db = g(rng);
        m->cpp = g(rng);
        m->jitter = std::abs(g(rng)) / 100.0;
        m->shimmer = std::abs(g(rng)) / 10.0;
      }
    }
    for (const RadarPair& p : RadarNormalize(pairs)) {
      for (const RadarPoint& q : {p.original, p.transformed}) {
        for (double v : {q.hnr, q.cpp, q.jitter, q.shimmer}) {
          CHECK(v >= 0.0);
          CHECK(v <= 1.0);
        }
      }
    }
  }
}

TEST_CASE("voice config validation") {
  VoiceConfig cfg;
  CHECK_NOTHROW(cfg.Validate());
  cfg.pitch_lowpass = 300.0;
  CHECK_THROWS_AS(cfg.Validate(), Error);
  cfg = {};
  cfg.period_lowpass_ratio = 0.5;
  CHECK_THROWS_AS(cfg.Validate(), Error);
  cfg = {};
  cfg.period_snap_ratio = 1.2;
  CHECK_THROWS_AS(cfg.Validate(), Error);
  cfg = {};
  cfg.voicing_threshold = 1.5;
  CHECK_THROWS_AS(cfg.Validate(), Error);
}

}  // TEST_SUITE

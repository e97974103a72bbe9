// core/src/simgen.cc

// Copyright 2026  heatkit authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "heat/simgen.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "heat/errors.h"
#include "json.hpp"

namespace heat {

namespace {

using Centis = std::int64_t;  // all generator arithmetic runs on 10 ms ticks

constexpr double kTicksPerSecond = 100.0;
constexpr Centis kMaxGap = 100;
constexpr double kWordsPerSecond = 2.5;
constexpr int kVocabularySize = 50;
constexpr double kMaxTotalOverlap = 0.6;
constexpr double kTargetTolerance = 0.02;
constexpr double kCheckedDuration = 600.0;

Centis ToTicks(double seconds) {
  return static_cast<Centis>(std::llround(seconds * kTicksPerSecond));
}

struct Span {
  int speaker;
  Centis start, end;
};

class Generator {
 public:
  explicit Generator(const SimSpec &spec)
      : spec_(spec),
        rng_(spec.seed),
        total_(ToTicks(spec.total_duration)),
        min_len_(std::max<Centis>(1, ToTicks(spec.min_utterance_len))),
        max_len_(std::max(min_len_, ToTicks(spec.max_utterance_len))) {}

  std::vector<Span> Run() {
    const double f2 = spec_.target_2spk_overlap;
    const double f3 = spec_.target_3spk_overlap;
    Centis cursor = 0;
    while (true) {
      const Centis s = cursor + rng_.UniformInt(0, kMaxGap);
      Centis l1 = Length(), l2 = Length(), l3 = Length();
      std::vector<int> who = PickSpeakers();
      std::vector<Span> unit;

      if (f3 > 0.0 && achieved3_ < f3 * static_cast<double>(s + l1)) {
        // a = [s, s+l1); b = [s+l1-y-x2, s+l1); c = [s+l1-y, s+l1-y+l3):
        // two-way (a, b) for x2 ticks, then three-way for the last y ticks of
        // a. b needs y + x2 >= min length, so the two-way part is sized first
        // and y absorbs the rest.
        const Centis end_guess = s + l1 + l3;
        Centis x2 = Clamp(std::llround(f2 * static_cast<double>(end_guess) -
                                       achieved2_),
                          0, max_len_ - 1);
        Centis y = Clamp(std::llround((f3 * static_cast<double>(end_guess) -
                                       achieved3_) / (1.0 + f3)),
                         std::max<Centis>(1, min_len_ - x2), max_len_ - x2);
        l3 = std::max(l3, y);
        l1 = std::max(l1, y + x2);
        unit = {{who[0], s, s + l1},
                {who[1], s + l1 - y - x2, s + l1},
                {who[2], s + l1 - y, s + l1 - y + l3}};
      } else if (f2 > 0.0) {
        const double want = (f2 * static_cast<double>(s + l1 + l2) - achieved2_) /
                            (1.0 + f2);
        if (want >= 1.0) {
          Centis o = Clamp(std::llround(want), 1, std::min(l1, l2 - 1));
          unit = {{who[0], s, s + l1}, {who[1], s + l1 - o, s + l1 - o + l2}};
        }
      }
      if (unit.empty()) unit = {{who[0], s, s + l1}};

      if (UnitEnd(unit) > total_) {
        // Close with a solo turn if one still fits.
        const Centis room = total_ - s;
        if (room >= min_len_) Commit({{who[0], s, s + std::min(l1, room)}});
        break;
      }
      Commit(unit);
      cursor = UnitEnd(unit);
    }
    return spans_;
  }

 private:
  static Centis Clamp(Centis v, Centis lo, Centis hi) {
    return std::max(lo, std::min(v, std::max(lo, hi)));
  }

  static Centis UnitEnd(const std::vector<Span> &unit) {
    Centis e = 0;
    for (const Span &sp : unit) e = std::max(e, sp.end);
    return e;
  }

  Centis Length() { return rng_.UniformInt(min_len_, max_len_); }

  // Up to three distinct speakers, the first differing from whoever spoke
  // last when there is a choice.
  std::vector<int> PickSpeakers() {
    std::vector<int> ids(static_cast<std::size_t>(spec_.num_speakers));
    std::iota(ids.begin(), ids.end(), 0);
    for (std::size_t i = ids.size(); i > 1; --i)
      std::swap(ids[i - 1], ids[static_cast<std::size_t>(
                                rng_.UniformInt(0, static_cast<std::int64_t>(i - 1)))]);
    if (ids.size() > 1 && ids[0] == last_speaker_) std::swap(ids[0], ids[1]);
    ids.resize(std::min<std::size_t>(ids.size(), 3));
    return ids;
  }

  // Overlap inside a unit, measured by sweeping its boundaries.
  void Commit(const std::vector<Span> &unit) {
    std::vector<Centis> cuts;
    for (const Span &sp : unit) {
      cuts.push_back(sp.start);
      cuts.push_back(sp.end);
    }
    std::sort(cuts.begin(), cuts.end());
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      const Centis a = cuts[i], b = cuts[i + 1];
      int active = 0;
      for (const Span &sp : unit) active += sp.start <= a && a < sp.end;
      if (active == 2) achieved2_ += static_cast<double>(b - a);
      if (active >= 3) achieved3_ += static_cast<double>(b - a);
    }
    Span last = unit.front();
    for (const Span &sp : unit) {
      spans_.push_back(sp);
      if (sp.end >= last.end) last = sp;
    }
    last_speaker_ = last.speaker;
  }

  const SimSpec &spec_;
  SplitMix64 rng_;
  Centis total_, min_len_, max_len_;
  double achieved2_ = 0.0, achieved3_ = 0.0;
  int last_speaker_ = -1;
  std::vector<Span> spans_;
};

double Fraction(std::size_t part, std::size_t whole) {
  return whole == 0 ? 0.0
                    : static_cast<double>(part) / static_cast<double>(whole);
}

}  // namespace

void SimSpec::Validate() const {
  if (num_speakers < 1) throw InvalidArgument("need at least one speaker");
  if (!(total_duration > 0.0))
    throw InvalidArgument("total duration must be positive");
  for (double f : {target_2spk_overlap, target_3spk_overlap})
    if (!(f >= 0.0 && f <= 1.0))
      throw InvalidArgument("overlap targets must lie in [0, 1]");
  if (target_2spk_overlap + target_3spk_overlap > 1.0)
    throw InvalidArgument("overlap targets sum above 1");
  if (!(min_utterance_len > 0.0) || !(max_utterance_len >= min_utterance_len))
    throw InvalidArgument("utterance length range must satisfy 0 < min <= max");
  if (max_utterance_len > total_duration)
    throw InvalidArgument("maximum utterance length exceeds the session");

  if (target_2spk_overlap > 0.0 && num_speakers < 2)
    throw Unsupported("two-speaker overlap needs at least two speakers");
  if (target_3spk_overlap > 0.0 && num_speakers < 3)
    throw Unsupported("three-speaker overlap needs at least three speakers");
  if (target_2spk_overlap + target_3spk_overlap > kMaxTotalOverlap)
    throw Unsupported(fmt::format(
        "combined overlap target above {} is not reachable by the generator",
        kMaxTotalOverlap));
}

Simulation Simulate(const SimSpec &spec) {
  spec.Validate();
  std::vector<Span> spans = Generator(spec).Run();

  SplitMix64 words_rng(spec.seed ^ 0x5eed5eed5eed5eedULL);
  const std::string session = fmt::format("sim{}", spec.seed);
  std::vector<std::string> speakers;
  for (int k = 0; k < spec.num_speakers; ++k)
    speakers.push_back(fmt::format("spk{}", k));

  Simulation sim;
  for (const Span &sp : spans) {
    Utterance u;
    u.session_id = session;
    u.speaker = speakers[static_cast<std::size_t>(sp.speaker)];
    u.start = static_cast<double>(sp.start) / kTicksPerSecond;
    u.end = static_cast<double>(sp.end) / kTicksPerSecond;
    sim.utterances.push_back(std::move(u));
  }
  SortCanonical(&sim.utterances);
  // Words are drawn after sorting so the token stream does not depend on
  // unit layout order.
  for (Utterance &u : sim.utterances) {
    const auto n = std::max<std::int64_t>(
        1, std::llround(kWordsPerSecond * u.duration()));
    std::vector<std::string> tokens;
    for (std::int64_t i = 0; i < n; ++i)
      tokens.push_back(fmt::format("w{}", words_rng.UniformInt(0, kVocabularySize - 1)));
    u.words = InterpolateWords(tokens, u.start, u.end);
  }

  sim.mask = Rasterize(sim.utterances,
                       FrameGrid(FrameGrid::kDefaultFrameLen, spec.total_duration),
                       speakers);

  if (spec.total_duration >= kCheckedDuration) {
    const OverlapStats stats = ComputeOverlapStats(sim.mask);
    if (std::abs(stats.frac_2spk() - spec.target_2spk_overlap) > kTargetTolerance ||
        std::abs(stats.frac_3plus() - spec.target_3spk_overlap) > kTargetTolerance)
      throw Unsupported(fmt::format(
          "generator reached 2-speaker {:.4f} / 3+-speaker {:.4f} for targets "
          "{:.4f} / {:.4f}",
          stats.frac_2spk(), stats.frac_3plus(), spec.target_2spk_overlap,
          spec.target_3spk_overlap));
  }
  return sim;
}

std::size_t OverlapStats::num_frames() const {
  return std::accumulate(frame_counts.begin(), frame_counts.end(), std::size_t{0});
}

double OverlapStats::frac_silence() const {
  return num_frames() == 0 ? 1.0 : Fraction(frame_counts[0], num_frames());
}
double OverlapStats::frac_1spk() const { return Fraction(frame_counts[1], num_frames()); }
double OverlapStats::frac_2spk() const { return Fraction(frame_counts[2], num_frames()); }
double OverlapStats::frac_3plus() const { return Fraction(frame_counts[3], num_frames()); }

double OverlapStats::speech_frac_1spk() const {
  return Fraction(frame_counts[1], num_frames() - frame_counts[0]);
}
double OverlapStats::speech_frac_2spk() const {
  return Fraction(frame_counts[2], num_frames() - frame_counts[0]);
}
double OverlapStats::speech_frac_3plus() const {
  return Fraction(frame_counts[3], num_frames() - frame_counts[0]);
}

OverlapStats &OverlapStats::operator+=(const OverlapStats &other) {
  for (std::size_t i = 0; i < frame_counts.size(); ++i)
    frame_counts[i] += other.frame_counts[i];
  return *this;
}

OverlapStats ComputeOverlapStats(const ActivityMask &mask) {
  OverlapStats stats;
  for (std::size_t t = 0; t < mask.num_frames(); ++t) {
    std::size_t active = 0;
    for (std::size_t k = 0; k < mask.num_speakers(); ++k)
      active += mask.at(k, t) >= 0.5;
    ++stats.frame_counts[std::min<std::size_t>(active, 3)];
  }
  return stats;
}

std::string WriteOverlapStats(const OverlapStats &stats) {
  nlohmann::ordered_json doc;
  doc["num_frames"] = stats.num_frames();
  doc["frac_silence"] = stats.frac_silence();
  doc["frac_1spk"] = stats.frac_1spk();
  doc["frac_2spk"] = stats.frac_2spk();
  doc["frac_3plus"] = stats.frac_3plus();
  doc["speech_frac_1spk"] = stats.speech_frac_1spk();
  doc["speech_frac_2spk"] = stats.speech_frac_2spk();
  doc["speech_frac_3plus"] = stats.speech_frac_3plus();
  return doc.dump();
}

}  // namespace heat

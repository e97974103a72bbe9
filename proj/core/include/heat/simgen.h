// heat/simgen.h

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

#ifndef HEAT_SIMGEN_H_
#define HEAT_SIMGEN_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "heat/segio.h"

namespace heat {

// SplitMix64 (Steele, Lea & Flood): 64-bit state, advanced by the golden
// gamma 0x9e3779b97f4a7c15 and finalized with the variant-13 mixer.
// Integers in [lo, hi] are lo + next() % (hi - lo + 1); that modulo bias is
// part of the definition so other implementations reproduce it exactly.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t Next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::int64_t UniformInt(std::int64_t lo, std::int64_t hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<std::int64_t>(Next() % span);
  }

 private:
  std::uint64_t state_;
};

struct SimSpec {
  int num_speakers = 4;
  double total_duration = 600.0;  // seconds
  double target_2spk_overlap = 0.0;  // fraction of total duration
  double target_3spk_overlap = 0.0;
  double min_utterance_len = 1.0;  // seconds
  double max_utterance_len = 8.0;
  std::uint64_t seed = 0;

  // Throws InvalidArgument for malformed specs and Unsupported for targets
  // the generator cannot reach.
  void Validate() const;
};

struct Simulation {
  std::vector<Utterance> utterances;  // canonical order, words attached
  ActivityMask mask;                  // 10 ms grid over total_duration
};

// Deterministic in (spec, seed). Times sit on a 10 ms grid. Utterances come
// in isolated units (solo turns, overlapping pairs, three-way pile-ups)
// separated by short silences; each unit's overlap is sized from the
// running shortfall against the targets. For total_duration >= 600 s the
// measured rates are checked to be within 2 points of the targets, and
// Unsupported is thrown otherwise.
Simulation Simulate(const SimSpec &spec);

struct OverlapStats {
  // Frames by number of simultaneously active speakers: 0, 1, 2, 3+.
  std::array<std::size_t, 4> frame_counts{};

  std::size_t num_frames() const;
  // Fractions of all frames; the four sum to one (silence is 1 when empty).
  double frac_silence() const;
  double frac_1spk() const;
  double frac_2spk() const;
  double frac_3plus() const;
  // Fractions of frames with any speech.
  double speech_frac_1spk() const;
  double speech_frac_2spk() const;
  double speech_frac_3plus() const;

  OverlapStats &operator+=(const OverlapStats &other);
};

OverlapStats ComputeOverlapStats(const ActivityMask &mask);
std::string WriteOverlapStats(const OverlapStats &stats);

}  // namespace heat

#endif  // HEAT_SIMGEN_H_

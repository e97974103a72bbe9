// heat/heatcore.h

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

#ifndef HEAT_HEATCORE_H_
#define HEAT_HEATCORE_H_

#include <array>
#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "heat/segio.h"

namespace heat {

inline constexpr int kNumStreams = 2;

// Stream-assignment rules. All four take the only available stream when just
// one is free; they differ when both are.
enum class Heuristic {
  kFirstAvailable,     // stream 0
  kAlternating,        // opposite of the previous assignment
  kRecencyContinuity,  // stream whose last utterance ended latest
  kSpeakerContinuity,  // stream that left off with this speaker, else recency
};

// What to do when neither stream is free (three or more concurrent talkers).
enum class OverflowPolicy {
  kForce,  // place on the stream whose last utterance ends earliest
  kDrop,   // leave the utterance unassigned
};

std::string_view ToString(Heuristic h);
std::string_view ToString(OverflowPolicy p);
// Accepts the kebab-case names printed by ToString. Throws InvalidArgument.
Heuristic ParseHeuristic(std::string_view name);
OverflowPolicy ParseOverflowPolicy(std::string_view name);
inline constexpr std::array<Heuristic, 4> kAllHeuristics = {
    Heuristic::kFirstAvailable, Heuristic::kAlternating,
    Heuristic::kRecencyContinuity, Heuristic::kSpeakerContinuity};

// Union of half-open intervals, kept merged.
class IntervalSet {
 public:
  void Add(double start, double end);
  bool Intersects(double start, double end) const;
  bool empty() const { return spans_.empty(); }

 private:
  std::map<double, double> spans_;  // start -> end, disjoint
};

struct StreamState {
  IntervalSet busy;
  double last_end = -std::numeric_limits<double>::infinity();
  std::optional<std::string> last_speaker;
  std::size_t count = 0;
};

struct HeatState {
  std::array<StreamState, kNumStreams> streams;
  std::optional<int> previous_stream;
};

// True iff [utt.start, utt.end) touches nothing already on the stream.
bool IsAvailable(const StreamState &stream, const Utterance &utt);

struct StepResult {
  HeatState state;
  std::optional<int> stream;  // nullopt when dropped
  bool overflow = false;      // neither stream was available
};

// One assignment decision. Folding Step over canonically sorted utterances
// from a default HeatState is exactly Assign.
StepResult Step(HeatState state, const Utterance &utt, Heuristic heuristic,
                OverflowPolicy overflow = OverflowPolicy::kForce);

struct HeatAssignment {
  std::vector<Utterance> utterances;  // input order
  // (input index, stream) in processing order.
  std::vector<std::pair<std::size_t, int>> assignments;
  std::vector<std::size_t> dropped;
  // Input indices force-placed onto a busy stream.
  std::vector<std::size_t> violations;

  std::optional<int> stream_of(std::size_t index) const;
};

// Processes utterances in canonical (start, end, speaker) order regardless of
// input order.
HeatAssignment Assign(std::span<const Utterance> utts, Heuristic heuristic,
                      OverflowPolicy overflow = OverflowPolicy::kForce);

// Maximal runs of frames with activity >= 0.5, per speaker, sorted
// canonically.
std::vector<Utterance> ExtractUtterances(const ActivityMask &mask,
                                         const std::string &session_id = "");

inline std::string StreamName(int stream) {
  return "stream" + std::to_string(stream);
}

// Assigned utterances relabelled "stream0"/"stream1", canonically sorted.
std::vector<Utterance> StreamUtterances(const HeatAssignment &a);

// 2 x T mask, rows "stream0" and "stream1".
ActivityMask HeatMask(const HeatAssignment &a, const FrameGrid &grid);

}  // namespace heat

#endif  // HEAT_HEATCORE_H_

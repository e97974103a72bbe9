// core/src/heatcore.cc

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

#include "heat/heatcore.h"

#include <algorithm>
#include <numeric>

#include <fmt/format.h>

#include "heat/errors.h"

namespace heat {

std::string_view ToString(Heuristic h) {
  switch (h) {
    case Heuristic::kFirstAvailable: return "first-available";
    case Heuristic::kAlternating: return "alternating";
    case Heuristic::kRecencyContinuity: return "recency-continuity";
    case Heuristic::kSpeakerContinuity: return "speaker-continuity";
  }
  return "unknown";
}

std::string_view ToString(OverflowPolicy p) {
  return p == OverflowPolicy::kForce ? "force" : "drop";
}

Heuristic ParseHeuristic(std::string_view name) {
  for (Heuristic h : kAllHeuristics)
    if (ToString(h) == name) return h;
  throw InvalidArgument(fmt::format("unknown heuristic '{}'", name));
}

OverflowPolicy ParseOverflowPolicy(std::string_view name) {
  if (name == "force") return OverflowPolicy::kForce;
  if (name == "drop") return OverflowPolicy::kDrop;
  throw InvalidArgument(fmt::format("unknown overflow policy '{}'", name));
}

void IntervalSet::Add(double start, double end) {
  if (!(end > start)) return;
  auto it = spans_.upper_bound(start);
  if (it != spans_.begin()) {
    auto prev = std::prev(it);
    if (prev->second >= start) {
      start = prev->first;
      end = std::max(end, prev->second);
      it = spans_.erase(prev);
    }
  }
  while (it != spans_.end() && it->first <= end) {
    end = std::max(end, it->second);
    it = spans_.erase(it);
  }
  spans_.emplace(start, end);
}

bool IntervalSet::Intersects(double start, double end) const {
  if (!(end > start)) return false;
  auto it = spans_.lower_bound(end);  // first span starting at or after end
  if (it == spans_.begin()) return false;
  return std::prev(it)->second > start;
}

bool IsAvailable(const StreamState &stream, const Utterance &utt) {
  return !stream.busy.Intersects(utt.start, utt.end);
}

namespace {

// Latest last_end wins; ties go to the lower index.
int MostRecent(const HeatState &s) {
  return s.streams[1].last_end > s.streams[0].last_end ? 1 : 0;
}

int BothAvailableChoice(const HeatState &s, const Utterance &utt,
                        Heuristic heuristic) {
  switch (heuristic) {
    case Heuristic::kFirstAvailable:
      return 0;
    case Heuristic::kAlternating:
      return s.previous_stream ? 1 - *s.previous_stream : 0;
    case Heuristic::kRecencyContinuity:
      return MostRecent(s);
    case Heuristic::kSpeakerContinuity: {
      bool match0 = s.streams[0].last_speaker == utt.speaker;
      bool match1 = s.streams[1].last_speaker == utt.speaker;
      if (match0 != match1) return match0 ? 0 : 1;
      return MostRecent(s);
    }
  }
  return 0;
}

}  // namespace

StepResult Step(HeatState state, const Utterance &utt, Heuristic heuristic,
                OverflowPolicy overflow) {
  const bool free0 = IsAvailable(state.streams[0], utt);
  const bool free1 = IsAvailable(state.streams[1], utt);

  StepResult result;
  int chosen;
  if (free0 && free1) {
    chosen = BothAvailableChoice(state, utt, heuristic);
  } else if (free0 || free1) {
    chosen = free0 ? 0 : 1;
  } else {
    result.overflow = true;
    if (overflow == OverflowPolicy::kDrop) {
      result.state = std::move(state);
      return result;
    }
    chosen = state.streams[1].last_end < state.streams[0].last_end ? 1 : 0;
  }

  StreamState &stream = state.streams[chosen];
  stream.busy.Add(utt.start, utt.end);
  stream.last_end = utt.end;
  stream.last_speaker = utt.speaker;
  ++stream.count;
  state.previous_stream = chosen;

  result.state = std::move(state);
  result.stream = chosen;
  return result;
}

std::optional<int> HeatAssignment::stream_of(std::size_t index) const {
  for (const auto &[i, s] : assignments)
    if (i == index) return s;
  return std::nullopt;
}

HeatAssignment Assign(std::span<const Utterance> utts, Heuristic heuristic,
                      OverflowPolicy overflow) {
  HeatAssignment out;
  out.utterances.assign(utts.begin(), utts.end());

  std::vector<std::size_t> order(utts.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  // Exact duplicates keep input order; they are interchangeable.
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return CanonicalLess(utts[a], utts[b]);
  });

  HeatState state;
  out.assignments.reserve(utts.size());
  for (std::size_t index : order) {
    StepResult r = Step(std::move(state), utts[index], heuristic, overflow);
    state = std::move(r.state);
    if (!r.stream) {
      out.dropped.push_back(index);
      continue;
    }
    if (r.overflow) out.violations.push_back(index);
    out.assignments.emplace_back(index, *r.stream);
  }
  return out;
}

std::vector<Utterance> ExtractUtterances(const ActivityMask &mask,
                                         const std::string &session_id) {
  std::vector<Utterance> out;
  const double len = mask.frame_len();
  for (std::size_t k = 0; k < mask.num_speakers(); ++k) {
    auto row = mask.row(k);
    std::size_t t = 0;
    while (t < row.size()) {
      if (row[t] < 0.5) {
        ++t;
        continue;
      }
      std::size_t run_end = t;
      while (run_end < row.size() && row[run_end] >= 0.5) ++run_end;
      Utterance u;
      u.session_id = session_id;
      u.speaker = mask.speakers()[k];
      u.start = static_cast<double>(t) * len;
      u.end = static_cast<double>(run_end) * len;
      out.push_back(std::move(u));
      t = run_end;
    }
  }
  SortCanonical(&out);
  return out;
}

std::vector<Utterance> StreamUtterances(const HeatAssignment &a) {
  std::vector<Utterance> out;
  out.reserve(a.assignments.size());
  for (const auto &[index, stream] : a.assignments) {
    Utterance u = a.utterances[index];
    u.speaker = StreamName(stream);
    out.push_back(std::move(u));
  }
  SortCanonical(&out);
  return out;
}

ActivityMask HeatMask(const HeatAssignment &a, const FrameGrid &grid) {
  return Rasterize(StreamUtterances(a), grid,
                   {StreamName(0), StreamName(1)});
}

}  // namespace heat

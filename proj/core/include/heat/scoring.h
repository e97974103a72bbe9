// heat/scoring.h

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

#ifndef HEAT_SCORING_H_
#define HEAT_SCORING_H_

#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "heat/segio.h"

namespace heat {

inline constexpr double kNoCollar = std::numeric_limits<double>::infinity();

// A hypothesis stream: timed words in output order.
using HypStream = std::vector<Word>;

struct EditCounts {
  std::size_t substitutions = 0;
  std::size_t insertions = 0;
  std::size_t deletions = 0;

  std::size_t errors() const { return substitutions + insertions + deletions; }
  bool operator==(const EditCounts &) const = default;
};

struct ScoreReport {
  std::size_t total_ref_words = 0;
  EditCounts counts;
  double wer = 0.0;  // errors / total_ref_words; +inf if no reference words
                     // but some insertions
  // Stream chosen for each reference utterance, in the caller's order.
  std::vector<int> assignment;
  double collar = kNoCollar;

  std::size_t errors() const { return counts.errors(); }
};

// Unit-cost word alignment. Under a finite collar a ref word may only be
// matched or substituted by a hyp word whose midpoint lies within `collar`
// seconds of its own; other pairings can only be deleted + inserted.
// Among minimum-error alignments the one with most substitutions is
// reported, which fixes the S/I/D split.
EditCounts Levenshtein(std::span<const Word> ref, std::span<const Word> hyp,
                       double collar = kNoCollar);

// Optimal reference combination WER over two output streams: the minimum,
// over every assignment of reference utterances to streams, of the summed
// edit distance between each stream and the concatenation (in start-time
// order) of the utterances assigned to it.
//
// Dynamic program over (utterance, hyp0 position, hyp1 position); runs in
// O(R * |hyp0| * |hyp1|) time with R total reference words, and keeps
// O(sqrt(N)) layers of |hyp0| * |hyp1| cells for the backtrace.
//
// Throws Unsupported for more than two streams and InvalidArgument for a
// reference utterance without words. Fewer than two streams are padded with
// empty ones.
ScoreReport OrcWer(std::span<const Utterance> refs,
                   std::span<const HypStream> hyps, double collar = kNoCollar);

// Exhaustive 2^N reference of OrcWer. Refuses N > kMaxBruteForceUtterances.
inline constexpr std::size_t kMaxBruteForceUtterances = 16;
ScoreReport OrcWerBruteForce(std::span<const Utterance> refs,
                             std::span<const HypStream> hyps,
                             double collar = kNoCollar);

// Lowercase, strip leading/trailing ASCII punctuation.
std::string NormalizeToken(std::string_view token);
// Normalizes every word in place and drops tokens that end up empty.
void NormalizeWords(std::vector<Utterance> *utts);

// Concatenates utterance words per stream in canonical utterance order.
// Throws InvalidArgument if an utterance carries no words.
HypStream StreamWords(std::vector<Utterance> utts);

struct ScoreOptions {
  double collar = 5.0;
  bool normalize = true;
};

// Hypothesis utterances grouped into streams by speaker label (sorted);
// more than two labels is Unsupported.
ScoreReport ScoreSession(std::vector<Utterance> refs,
                         std::vector<Utterance> hyps,
                         const ScoreOptions &options);
// Hypothesis streams given explicitly.
ScoreReport ScoreSession(std::vector<Utterance> refs,
                         std::vector<std::vector<Utterance>> hyp_streams,
                         const ScoreOptions &options);

// Stable key order; infinite collar and non-finite WER become null.
std::string WriteScoreReport(const ScoreReport &report,
                             std::string_view session_id = {});

struct TimingRecord {
  double audio_duration = 0.0;       // seconds
  double processing_duration = 0.0;  // seconds
};
using TimingLog = std::vector<TimingRecord>;

// sum(audio) / sum(processing). Throws InvalidArgument on an empty log,
// negative durations, or zero total processing time.
double Rtfx(std::span<const TimingRecord> log);

// JSON array of {"audio_duration": a, "processing_duration": p} objects or
// [a, p] pairs.
TimingLog ParseTimingLog(std::string_view text);

}  // namespace heat

#endif  // HEAT_SCORING_H_

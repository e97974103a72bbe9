// heat/segio.h

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

#ifndef HEAT_SEGIO_H_
#define HEAT_SEGIO_H_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace heat {

struct Word {
  std::string token;
  double start = 0.0;  // seconds
  double end = 0.0;

  double midpoint() const { return 0.5 * (start + end); }
  bool operator==(const Word &) const = default;
};

// One contiguous activity span of one speaker. `words` is empty-optional when
// the source carried no transcript (RTTM); an empty vector means "no words".
struct Utterance {
  std::string session_id;
  std::string speaker;
  double start = 0.0;  // seconds
  double end = 0.0;
  std::optional<std::vector<Word>> words;

  double duration() const { return end - start; }
  bool operator==(const Utterance &) const = default;
};

// Canonical order used everywhere: start, then end, then speaker id.
bool CanonicalLess(const Utterance &a, const Utterance &b);
void SortCanonical(std::vector<Utterance> *utts);

// Throws InvalidArgument if end <= start, start < 0, or word spans fall
// outside [start, end] or are not sorted by start.
void ValidateUtterance(const Utterance &utt);

struct FrameGrid {
  static constexpr double kDefaultFrameLen = 0.01;

  double frame_len = kDefaultFrameLen;  // seconds per frame
  double total_duration = 0.0;

  FrameGrid() = default;
  FrameGrid(double frame_len, double total_duration);

  // ceil(total_duration / frame_len), robust to representation error in the
  // quotient (0.05 / 0.01 is 5 frames, not 6).
  std::size_t num_frames() const;
  double frame_start(std::size_t t) const { return t * frame_len; }
};

// K x T matrix of per-speaker activity in [0, 1], rows ordered
// lexicographically by speaker id.
class ActivityMask {
 public:
  ActivityMask() = default;
  ActivityMask(std::vector<std::string> speakers, double frame_len,
               std::size_t num_frames);

  std::size_t num_speakers() const { return speakers_.size(); }
  std::size_t num_frames() const { return num_frames_; }
  double frame_len() const { return frame_len_; }
  const std::vector<std::string> &speakers() const { return speakers_; }

  // Row index of `speaker`, or nullopt.
  std::optional<std::size_t> find(std::string_view speaker) const;

  double at(std::size_t k, std::size_t t) const {
    return values_[k * num_frames_ + t];
  }
  // Throws InvalidArgument when value is outside [0, 1].
  void set(std::size_t k, std::size_t t, double value);

  std::span<const double> row(std::size_t k) const {
    return {values_.data() + k * num_frames_, num_frames_};
  }

  bool operator==(const ActivityMask &) const = default;

 private:
  std::vector<std::string> speakers_;
  double frame_len_ = FrameGrid::kDefaultFrameLen;
  std::size_t num_frames_ = 0;
  std::vector<double> values_;
};

// NIST RTTM: one utterance per SPEAKER line (col 2 session, col 4 onset,
// col 5 duration, col 8 speaker). Other line types are skipped.
std::vector<Utterance> ParseRttm(std::string_view text);
std::string WriteRttm(std::span<const Utterance> utts);

// JSON array of {session_id, speaker, start_time, end_time, words} records,
// with optional per-word `word_timings`. Without timings, word spans are
// spread uniformly over the segment.
std::vector<Utterance> ParseSegLst(std::string_view text);
std::string WriteSegLst(std::span<const Utterance> utts);

// Uniform split of [start, end] into one span per token.
std::vector<Word> InterpolateWords(const std::vector<std::string> &tokens,
                                   double start, double end);

// Frame (k, t) is 1 iff an utterance of speaker k covers the frame midpoint
// (t + 0.5) * frame_len under the half-open rule [start, end).
ActivityMask Rasterize(std::span<const Utterance> utts, const FrameGrid &grid);

// Same, but with an explicit row set (speakers are still sorted). Utterances
// of speakers missing from `speakers` raise InvalidArgument.
ActivityMask Rasterize(std::span<const Utterance> utts, const FrameGrid &grid,
                       std::vector<std::string> speakers);

// Fixed 3-decimal rendering used by every writer.
std::string FormatTime(double seconds);

// Reads a whole file; throws ParseError if it cannot be opened.
std::string ReadFile(const std::string &path);

}  // namespace heat

#endif  // HEAT_SEGIO_H_

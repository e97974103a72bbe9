// core/src/segio.cc

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

#include "heat/segio.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <sstream>
#include <tuple>

#include <fmt/format.h>

#include "heat/errors.h"
#include "json.hpp"

namespace heat {

namespace {

// Relative slack for frame-boundary arithmetic. Times are expected on a grid
// no finer than 1 us; anything within this of a boundary counts as on it.
constexpr double kFrameEps = 1e-9;

// Plain decimals with at most nine fractional digits parse exactly into
// integer nanoseconds, so onset + duration can be summed without rounding.
std::optional<std::int64_t> ParseDecimalNanos(std::string_view s) {
  bool negative = false;
  std::size_t i = 0;
  if (i < s.size() && (s[i] == '-' || s[i] == '+')) {
    negative = s[i] == '-';
    ++i;
  }
  std::int64_t whole = 0, frac = 0;
  int frac_digits = 0;
  bool any_digit = false, seen_dot = false;
  for (; i < s.size(); ++i) {
    char c = s[i];
    if (c == '.') {
      if (seen_dot) return std::nullopt;
      seen_dot = true;
    } else if (c >= '0' && c <= '9') {
      any_digit = true;
      if (seen_dot) {
        if (++frac_digits > 9) return std::nullopt;
        frac = frac * 10 + (c - '0');
      } else {
        if (whole > 1'000'000'000) return std::nullopt;
        whole = whole * 10 + (c - '0');
      }
    } else {
      return std::nullopt;
    }
  }
  if (!any_digit) return std::nullopt;
  for (; frac_digits < 9; ++frac_digits) frac *= 10;
  std::int64_t total = whole * 1'000'000'000 + frac;
  return negative ? -total : total;
}

std::optional<double> ParseDouble(std::string_view s) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(value))
    return std::nullopt;
  return value;
}

std::vector<std::string_view> SplitWhitespace(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i])))
      ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j])))
      ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

// Nearest millisecond to the exact binary value. Scaling first would turn
// 1.2345 (stored just below) into the tie 1234.5.
std::int64_t ToMillis(double seconds) {
  std::string s = fmt::format("{:.3f}", seconds);
  bool neg = s[0] == '-';
  std::size_t dot = s.find('.');
  std::int64_t whole = std::stoll(s.substr(neg, dot - neg));
  std::int64_t ms = whole * 1000 + std::stoll(s.substr(dot + 1));
  return neg ? -ms : ms;
}

double RoundToMillis(double seconds) {
  return static_cast<double>(ToMillis(seconds)) / 1000.0;
}

}  // namespace

bool CanonicalLess(const Utterance &a, const Utterance &b) {
  return std::tie(a.start, a.end, a.speaker) <
         std::tie(b.start, b.end, b.speaker);
}

void SortCanonical(std::vector<Utterance> *utts) {
  std::stable_sort(utts->begin(), utts->end(), CanonicalLess);
}

void ValidateUtterance(const Utterance &utt) {
  if (!(utt.start >= 0.0))
    throw InvalidArgument(fmt::format("utterance of '{}' starts at {} < 0",
                                      utt.speaker, utt.start));
  if (!(utt.end > utt.start))
    throw InvalidArgument(fmt::format(
        "utterance of '{}' has end {} <= start {}", utt.speaker, utt.end,
        utt.start));
  if (!utt.words) return;
  double prev_start = -std::numeric_limits<double>::infinity();
  for (const Word &w : *utt.words) {
    if (w.start < utt.start - kFrameEps || w.end > utt.end + kFrameEps ||
        w.end < w.start)
      throw InvalidArgument(fmt::format(
          "word '{}' [{}, {}] outside utterance [{}, {}]", w.token, w.start,
          w.end, utt.start, utt.end));
    if (w.start < prev_start)
      throw InvalidArgument(
          fmt::format("word '{}' starts before its predecessor", w.token));
    prev_start = w.start;
  }
}

FrameGrid::FrameGrid(double frame_len, double total_duration)
    : frame_len(frame_len), total_duration(total_duration) {
  if (!(frame_len > 0.0))
    throw InvalidArgument("frame length must be positive");
  if (!(total_duration >= 0.0))
    throw InvalidArgument("total duration must be non-negative");
}

std::size_t FrameGrid::num_frames() const {
  double q = total_duration / frame_len;
  return static_cast<std::size_t>(std::max(0.0, std::ceil(q - kFrameEps)));
}

ActivityMask::ActivityMask(std::vector<std::string> speakers, double frame_len,
                           std::size_t num_frames)
    : speakers_(std::move(speakers)),
      frame_len_(frame_len),
      num_frames_(num_frames),
      values_(speakers_.size() * num_frames, 0.0) {
  if (!(frame_len > 0.0))
    throw InvalidArgument("frame length must be positive");
  std::vector<std::string> sorted = speakers_;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw InvalidArgument("duplicate speaker id in activity mask");
}

std::optional<std::size_t> ActivityMask::find(std::string_view speaker) const {
  auto it = std::find(speakers_.begin(), speakers_.end(), speaker);
  if (it == speakers_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - speakers_.begin());
}

void ActivityMask::set(std::size_t k, std::size_t t, double value) {
  if (!(value >= 0.0 && value <= 1.0))
    throw InvalidArgument(fmt::format("activity value {} outside [0,1]", value));
  values_[k * num_frames_ + t] = value;
}

std::vector<Utterance> ParseRttm(std::string_view text) {
  std::vector<Utterance> out;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;

    auto fields = SplitWhitespace(line);
    if (fields.empty() || fields[0] != "SPEAKER") continue;
    if (fields.size() < 8)
      throw ParseError(fmt::format("SPEAKER line has {} fields, expected 10",
                                   fields.size()),
                       line_no);

    auto onset = ParseDouble(fields[3]);
    auto dur = ParseDouble(fields[4]);
    if (!onset) throw ParseError(fmt::format("bad onset '{}'", fields[3]), line_no);
    if (!dur) throw ParseError(fmt::format("bad duration '{}'", fields[4]), line_no);
    if (*dur < 0.0) throw ParseError("negative duration", line_no);
    if (*dur == 0.0) throw ParseError("zero duration", line_no);
    if (*onset < 0.0) throw ParseError("negative onset", line_no);

    Utterance utt;
    utt.session_id = std::string(fields[1]);
    utt.speaker = std::string(fields[7]);
    auto onset_ns = ParseDecimalNanos(fields[3]);
    auto dur_ns = ParseDecimalNanos(fields[4]);
    if (onset_ns && dur_ns) {
      utt.start = static_cast<double>(*onset_ns) / 1e9;
      utt.end = static_cast<double>(*onset_ns + *dur_ns) / 1e9;
    } else {
      utt.start = *onset;
      utt.end = *onset + *dur;
    }
    out.push_back(std::move(utt));
  }
  return out;
}

std::string FormatTime(double seconds) {
  return fmt::format("{:.3f}", seconds);
}

std::string WriteRttm(std::span<const Utterance> utts) {
  std::string out;
  for (const Utterance &u : utts) {
    // Durations are rendered from the millisecond-rounded endpoints so that
    // onset + duration reproduces the rounded end exactly.
    auto start_ms = ToMillis(u.start);
    auto end_ms = ToMillis(u.end);
    out += fmt::format("SPEAKER {} 1 {}.{:03d} {}.{:03d} <NA> <NA> {} <NA> <NA>\n",
                       u.session_id, start_ms / 1000, start_ms % 1000,
                       (end_ms - start_ms) / 1000, (end_ms - start_ms) % 1000,
                       u.speaker);
  }
  return out;
}

std::vector<Word> InterpolateWords(const std::vector<std::string> &tokens,
                                   double start, double end) {
  std::vector<Word> words;
  words.reserve(tokens.size());
  const double n = static_cast<double>(tokens.size());
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    double ws = start + (end - start) * (static_cast<double>(i) / n);
    double we = i + 1 == tokens.size()
                    ? end
                    : start + (end - start) * (static_cast<double>(i + 1) / n);
    words.push_back(Word{tokens[i], ws, we});
  }
  return words;
}

namespace {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

double JsonTime(const json &rec, const char *key, std::size_t index) {
  const json &v = rec.at(key);
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    auto parsed = ParseDouble(v.get<std::string>());
    if (parsed) return *parsed;
  }
  throw ParseError(
      fmt::format("record {}: key '{}' is not a number", index, key));
}

std::vector<std::string> Tokenize(const std::string &words) {
  std::vector<std::string> tokens;
  for (std::string_view tok : SplitWhitespace(words))
    tokens.emplace_back(tok);
  return tokens;
}

}  // namespace

std::vector<Utterance> ParseSegLst(std::string_view text) {
  if (std::all_of(text.begin(), text.end(), [](char c) {
        return std::isspace(static_cast<unsigned char>(c));
      }))
    return {};
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error &e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_array()) throw ParseError("SegLST must be a JSON array");

  std::vector<Utterance> out;
  out.reserve(doc.size());
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const json &rec = doc[i];
    if (!rec.is_object())
      throw ParseError(fmt::format("record {} is not an object", i));
    for (const char *key :
         {"session_id", "speaker", "start_time", "end_time", "words"}) {
      if (!rec.contains(key))
        throw ParseError(fmt::format("record {}: missing key '{}'", i, key));
    }
    Utterance utt;
    try {
      utt.session_id = rec.at("session_id").is_string()
                           ? rec.at("session_id").get<std::string>()
                           : rec.at("session_id").dump();
      utt.speaker = rec.at("speaker").is_string()
                        ? rec.at("speaker").get<std::string>()
                        : rec.at("speaker").dump();
      utt.start = JsonTime(rec, "start_time", i);
      utt.end = JsonTime(rec, "end_time", i);
      if (!rec.at("words").is_string())
        throw ParseError(fmt::format("record {}: 'words' is not a string", i));
      auto tokens = Tokenize(rec.at("words").get<std::string>());

      if (rec.contains("word_timings")) {
        const json &timings = rec.at("word_timings");
        if (!timings.is_array() || timings.size() != tokens.size())
          throw ParseError(fmt::format(
              "record {}: word_timings must have one [start,end] per word", i));
        std::vector<Word> words;
        for (std::size_t w = 0; w < tokens.size(); ++w) {
          const json &pair = timings[w];
          if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number() ||
              !pair[1].is_number())
            throw ParseError(fmt::format(
                "record {}: word_timings[{}] is not a [start,end] pair", i, w));
          words.push_back(
              Word{tokens[w], pair[0].get<double>(), pair[1].get<double>()});
        }
        utt.words = std::move(words);
      } else {
        utt.words = InterpolateWords(tokens, utt.start, utt.end);
      }
    } catch (const json::exception &e) {
      throw ParseError(fmt::format("record {}: {}", i, e.what()));
    }
    try {
      ValidateUtterance(utt);
    } catch (const InvalidArgument &e) {
      throw ParseError(fmt::format("record {}: {}", i, e.what()));
    }
    out.push_back(std::move(utt));
  }
  return out;
}

std::string WriteSegLst(std::span<const Utterance> utts) {
  ordered_json doc = ordered_json::array();
  for (const Utterance &u : utts) {
    ordered_json rec;
    rec["session_id"] = u.session_id;
    rec["speaker"] = u.speaker;
    double start = RoundToMillis(u.start);
    double end = RoundToMillis(u.end);
    rec["start_time"] = start;
    rec["end_time"] = end;
    std::vector<std::string> tokens;
    if (u.words)
      for (const Word &w : *u.words) tokens.push_back(w.token);
    std::string joined;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      if (i) joined += ' ';
      joined += tokens[i];
    }
    rec["words"] = joined;
    // Timings are only spelled out when a reader could not regenerate them
    // by interpolation.
    if (u.words && !u.words->empty() &&
        *u.words != InterpolateWords(tokens, start, end)) {
      ordered_json timings = ordered_json::array();
      for (const Word &w : *u.words)
        timings.push_back({RoundToMillis(w.start), RoundToMillis(w.end)});
      rec["word_timings"] = std::move(timings);
    }
    doc.push_back(std::move(rec));
  }
  if (doc.empty()) return "";
  return doc.dump(1) + "\n";
}

ActivityMask Rasterize(std::span<const Utterance> utts, const FrameGrid &grid) {
  std::vector<std::string> speakers;
  for (const Utterance &u : utts) speakers.push_back(u.speaker);
  std::sort(speakers.begin(), speakers.end());
  speakers.erase(std::unique(speakers.begin(), speakers.end()), speakers.end());
  return Rasterize(utts, grid, std::move(speakers));
}

ActivityMask Rasterize(std::span<const Utterance> utts, const FrameGrid &grid,
                       std::vector<std::string> speakers) {
  std::sort(speakers.begin(), speakers.end());
  const std::size_t num_frames = grid.num_frames();
  ActivityMask mask(std::move(speakers), grid.frame_len, num_frames);
  for (const Utterance &u : utts) {
    if (u.end > grid.total_duration + kFrameEps * grid.frame_len)
      throw InvalidArgument(fmt::format(
          "utterance of '{}' ends at {} beyond grid duration {}", u.speaker,
          u.end, grid.total_duration));
    auto k = mask.find(u.speaker);
    if (!k)
      throw InvalidArgument(
          fmt::format("speaker '{}' has no row in the mask", u.speaker));
    // Frames whose midpoint lies in [start, end): t + 0.5 >= start / len and
    // t + 0.5 < end / len.
    auto first_frame = [&](double sec) {
      double t = std::ceil(sec / grid.frame_len - 0.5 - kFrameEps);
      return static_cast<std::size_t>(std::clamp(
          t, 0.0, static_cast<double>(num_frames)));
    };
    std::size_t begin = first_frame(u.start);
    std::size_t end = first_frame(u.end);
    for (std::size_t t = begin; t < end; ++t) mask.set(*k, t, 1.0);
  }
  return mask;
}

std::string ReadFile(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace heat

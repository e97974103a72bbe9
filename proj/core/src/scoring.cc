// core/src/scoring.cc

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

#include "heat/scoring.h"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <unordered_map>

#include <fmt/format.h>

#include "heat/errors.h"
#include "json.hpp"

namespace heat {

namespace {

// Alignment cost packed as errors * kScale - substitutions, so that a single
// integer min picks fewest errors first and most substitutions second.
using Cost = std::int64_t;
constexpr Cost kScale = Cost{1} << 24;
constexpr Cost kGap = kScale;         // insertion or deletion
constexpr Cost kSub = kScale - 1;     // substitution
constexpr Cost kMatch = 0;

struct Token {
  int id;
  double mid;
};

bool Pairable(double ref_mid, double hyp_mid, double collar) {
  return std::isinf(collar) || std::abs(ref_mid - hyp_mid) <= collar;
}

EditCounts Decode(Cost cost, std::size_t ref_words, std::size_t hyp_words) {
  const auto errors = static_cast<std::size_t>((cost + kScale - 1) / kScale);
  const auto subs = static_cast<std::size_t>(static_cast<Cost>(errors) * kScale - cost);
  // ins - del = hyp - ref, ins + del = errors - subs.
  const auto gaps = static_cast<std::int64_t>(errors - subs);
  const auto diff = static_cast<std::int64_t>(hyp_words) -
                    static_cast<std::int64_t>(ref_words);
  EditCounts c;
  c.substitutions = subs;
  c.insertions = static_cast<std::size_t>((gaps + diff) / 2);
  c.deletions = static_cast<std::size_t>((gaps - diff) / 2);
  return c;
}

void FillWer(ScoreReport *r) {
  if (r->total_ref_words > 0)
    r->wer = static_cast<double>(r->errors()) /
             static_cast<double>(r->total_ref_words);
  else
    r->wer = r->errors() == 0 ? 0.0 : std::numeric_limits<double>::infinity();
}

void CheckInputs(std::span<const Utterance> refs,
                 std::span<const HypStream> hyps) {
  if (hyps.size() > 2)
    throw Unsupported(fmt::format(
        "ORC-WER supports at most 2 hypothesis streams, got {}", hyps.size()));
  for (std::size_t i = 0; i < refs.size(); ++i)
    if (!refs[i].words)
      throw InvalidArgument(fmt::format(
          "reference utterance {} ('{}' at {}) has no words", i,
          refs[i].speaker, refs[i].start));
}

std::vector<std::size_t> CanonicalOrder(std::span<const Utterance> refs) {
  std::vector<std::size_t> order(refs.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return CanonicalLess(refs[a], refs[b]);
  });
  return order;
}

// Dense (H0+1) x (H1+1) cost table for one utterance boundary.
class Layer {
 public:
  Layer(std::size_t n0, std::size_t n1)
      : width_(n1 + 1), cells_((n0 + 1) * (n1 + 1)) {}
  Cost &at(std::size_t p0, std::size_t p1) { return cells_[p0 * width_ + p1]; }
  Cost at(std::size_t p0, std::size_t p1) const {
    return cells_[p0 * width_ + p1];
  }
  std::vector<Cost> &cells() { return cells_; }
  const std::vector<Cost> &cells() const { return cells_; }

 private:
  std::size_t width_;
  std::vector<Cost> cells_;
};

class OrcAligner {
 public:
  OrcAligner(std::vector<std::vector<Token>> utts,
             std::array<std::vector<Token>, 2> hyps, double collar)
      : utts_(std::move(utts)), hyps_(std::move(hyps)), collar_(collar) {}

  // Returns the optimal cost and fills `streams` (canonical utterance order).
  Cost Solve(std::vector<int> *streams) const {
    const std::size_t n = utts_.size();
    const std::size_t n0 = hyps_[0].size(), n1 = hyps_[1].size();
    const std::size_t block = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(n)))));

    Layer layer(n0, n1);
    for (std::size_t p0 = 0; p0 <= n0; ++p0)
      for (std::size_t p1 = 0; p1 <= n1; ++p1)
        layer.at(p0, p1) = static_cast<Cost>(p0 + p1) * kGap;

    std::vector<Layer> checkpoints;
    for (std::size_t i = 0; i < n; ++i) {
      if (i % block == 0) checkpoints.push_back(layer);
      layer = Advance(layer, i);
    }

    streams->assign(n, 0);
    std::size_t p0 = n0, p1 = n1;
    Cost target = layer.at(n0, n1);
    const Cost total = target;
    for (std::size_t b = checkpoints.size(); b-- > 0;) {
      const std::size_t first = b * block;
      const std::size_t last = std::min(n, first + block);
      std::vector<Layer> layers{checkpoints[b]};
      for (std::size_t i = first; i + 1 < last; ++i)
        layers.push_back(Advance(layers.back(), i));
      for (std::size_t i = last; i-- > first;) {
        const Layer &before = layers[i - first];
        (*streams)[i] = TraceUtterance(before, i, &p0, &p1, target);
        target = before.at(p0, p1);
      }
      checkpoints.pop_back();
    }
    return total;
  }

 private:
  // Relaxes `values` (costs along one hypothesis axis, indexed by position)
  // through all words of utterance `i` against hypothesis stream `s`.
  void ExtendColumn(std::vector<Cost> *values, std::vector<Cost> *scratch,
                    std::size_t i, int s) const {
    const auto &hyp = hyps_[s];
    std::vector<Cost> &cur = *values;
    std::vector<Cost> &next = *scratch;
    const std::size_t len = cur.size();
    for (const Token &r : utts_[i]) {
      next[0] = cur[0] + kGap;
      for (std::size_t q = 1; q < len; ++q) {
        Cost best = std::min(cur[q] + kGap, next[q - 1] + kGap);
        const Token &h = hyp[q - 1];
        if (Pairable(r.mid, h.mid, collar_))
          best = std::min(best, cur[q - 1] + (r.id == h.id ? kMatch : kSub));
        next[q] = best;
      }
      std::swap(cur, next);
    }
  }

  Layer Advance(const Layer &in, std::size_t i) const {
    const std::size_t n0 = hyps_[0].size(), n1 = hyps_[1].size();
    Layer out = in;
    if (utts_[i].empty()) return out;

    // Stream 0 path: columns along p0 for each fixed p1.
    std::vector<Cost> col(n0 + 1), scratch(n0 + 1);
    for (std::size_t p1 = 0; p1 <= n1; ++p1) {
      for (std::size_t p0 = 0; p0 <= n0; ++p0) col[p0] = in.at(p0, p1);
      ExtendColumn(&col, &scratch, i, 0);
      for (std::size_t p0 = 0; p0 <= n0; ++p0) out.at(p0, p1) = col[p0];
    }
    // Stream 1 path: rows along p1; keep the cheaper, stream 0 on ties.
    std::vector<Cost> row(n1 + 1), scratch1(n1 + 1);
    for (std::size_t p0 = 0; p0 <= n0; ++p0) {
      for (std::size_t p1 = 0; p1 <= n1; ++p1) row[p1] = in.at(p0, p1);
      ExtendColumn(&row, &scratch1, i, 1);
      for (std::size_t p1 = 0; p1 <= n1; ++p1)
        out.at(p0, p1) = std::min(out.at(p0, p1), row[p1]);
    }
    return out;
  }

  // Finds which stream utterance `i` went to on an optimal path reaching
  // (*p0, *p1) with cost `target`, and moves the cursor to where the
  // utterance began.
  int TraceUtterance(const Layer &before, std::size_t i, std::size_t *p0,
                     std::size_t *p1, Cost target) const {
    if (utts_[i].empty()) return 0;
    for (int s = 0; s < 2; ++s) {
      std::size_t *axis = s == 0 ? p0 : p1;
      const std::size_t end = *axis;
      const auto &words = utts_[i];
      const auto &hyp = hyps_[s];
      std::vector<std::vector<Cost>> table(words.size() + 1,
                                           std::vector<Cost>(end + 1));
      for (std::size_t q = 0; q <= end; ++q)
        table[0][q] = s == 0 ? before.at(q, *p1) : before.at(*p0, q);
      for (std::size_t j = 1; j <= words.size(); ++j) {
        const Token &r = words[j - 1];
        table[j][0] = table[j - 1][0] + kGap;
        for (std::size_t q = 1; q <= end; ++q) {
          Cost best = std::min(table[j - 1][q] + kGap, table[j][q - 1] + kGap);
          const Token &h = hyp[q - 1];
          if (Pairable(r.mid, h.mid, collar_))
            best = std::min(best,
                            table[j - 1][q - 1] + (r.id == h.id ? kMatch : kSub));
          table[j][q] = best;
        }
      }
      if (table[words.size()][end] != target) continue;

      std::size_t j = words.size(), q = end;
      while (j > 0) {
        const Cost here = table[j][q];
        if (q > 0) {
          const Token &h = hyp[q - 1];
          const Token &r = words[j - 1];
          if (Pairable(r.mid, h.mid, collar_) &&
              table[j - 1][q - 1] + (r.id == h.id ? kMatch : kSub) == here) {
            --j;
            --q;
            continue;
          }
          if (table[j][q - 1] + kGap == here) {
            --q;
            continue;
          }
        }
        --j;  // deletion
      }
      *axis = q;
      return s;
    }
    throw std::logic_error("ORC-WER backtrace lost the optimal path");
  }

  std::vector<std::vector<Token>> utts_;
  std::array<std::vector<Token>, 2> hyps_;
  double collar_;
};

class Vocabulary {
 public:
  int Id(const std::string &token) {
    auto [it, inserted] = ids_.emplace(token, static_cast<int>(ids_.size()));
    return it->second;
  }

 private:
  std::unordered_map<std::string, int> ids_;
};

std::size_t CountWords(std::span<const Utterance> refs) {
  std::size_t n = 0;
  for (const Utterance &u : refs) n += u.words->size();
  return n;
}

std::size_t CountWords(std::span<const HypStream> hyps) {
  std::size_t n = 0;
  for (const HypStream &h : hyps) n += h.size();
  return n;
}

}  // namespace

EditCounts Levenshtein(std::span<const Word> ref, std::span<const Word> hyp,
                       double collar) {
  const std::size_t m = ref.size(), n = hyp.size();
  std::vector<std::vector<Cost>> d(m + 1, std::vector<Cost>(n + 1));
  for (std::size_t i = 0; i <= m; ++i) d[i][0] = static_cast<Cost>(i) * kGap;
  for (std::size_t j = 0; j <= n; ++j) d[0][j] = static_cast<Cost>(j) * kGap;
  for (std::size_t i = 1; i <= m; ++i) {
    for (std::size_t j = 1; j <= n; ++j) {
      Cost best = std::min(d[i - 1][j], d[i][j - 1]) + kGap;
      if (Pairable(ref[i - 1].midpoint(), hyp[j - 1].midpoint(), collar))
        best = std::min(best, d[i - 1][j - 1] +
                                  (ref[i - 1].token == hyp[j - 1].token ? kMatch
                                                                        : kSub));
      d[i][j] = best;
    }
  }
  return Decode(d[m][n], m, n);
}

ScoreReport OrcWer(std::span<const Utterance> refs,
                   std::span<const HypStream> hyps, double collar) {
  CheckInputs(refs, hyps);
  if (!(collar >= 0.0)) throw InvalidArgument("collar must be non-negative");

  Vocabulary vocab;
  const std::vector<std::size_t> order = CanonicalOrder(refs);
  std::vector<std::vector<Token>> utts;
  utts.reserve(refs.size());
  for (std::size_t index : order) {
    std::vector<Token> tokens;
    for (const Word &w : *refs[index].words)
      tokens.push_back(Token{vocab.Id(w.token), w.midpoint()});
    utts.push_back(std::move(tokens));
  }
  std::array<std::vector<Token>, 2> streams;
  for (std::size_t s = 0; s < hyps.size(); ++s)
    for (const Word &w : hyps[s])
      streams[s].push_back(Token{vocab.Id(w.token), w.midpoint()});

  ScoreReport report;
  report.total_ref_words = CountWords(refs);
  report.collar = collar;
  if (report.total_ref_words >= static_cast<std::size_t>(kScale))
    throw Unsupported("too many reference words for one scoring call");

  std::vector<int> canonical_streams;
  OrcAligner aligner(std::move(utts), std::move(streams), collar);
  const Cost cost = aligner.Solve(&canonical_streams);

  report.counts = Decode(cost, report.total_ref_words, CountWords(hyps));
  report.assignment.assign(refs.size(), 0);
  for (std::size_t k = 0; k < order.size(); ++k)
    report.assignment[order[k]] = canonical_streams[k];
  FillWer(&report);
  return report;
}

ScoreReport OrcWerBruteForce(std::span<const Utterance> refs,
                             std::span<const HypStream> hyps, double collar) {
  CheckInputs(refs, hyps);
  if (refs.size() > kMaxBruteForceUtterances)
    throw InvalidArgument(fmt::format(
        "brute-force ORC-WER refuses {} utterances (limit {})", refs.size(),
        kMaxBruteForceUtterances));

  const std::vector<std::size_t> order = CanonicalOrder(refs);
  const HypStream empty;
  const HypStream &h0 = hyps.size() > 0 ? hyps[0] : empty;
  const HypStream &h1 = hyps.size() > 1 ? hyps[1] : empty;

  ScoreReport best;
  best.total_ref_words = CountWords(refs);
  best.collar = collar;
  Cost best_cost = std::numeric_limits<Cost>::max();
  const std::size_t n = refs.size();
  for (std::uint32_t mask = 0; mask < (std::uint32_t{1} << n); ++mask) {
    std::array<std::vector<Word>, 2> stream_refs;
    for (std::size_t k = 0; k < n; ++k) {
      const Utterance &u = refs[order[k]];
      auto &dst = stream_refs[(mask >> k) & 1u];
      dst.insert(dst.end(), u.words->begin(), u.words->end());
    }
    EditCounts c0 = Levenshtein(stream_refs[0], h0, collar);
    EditCounts c1 = Levenshtein(stream_refs[1], h1, collar);
    const Cost cost =
        static_cast<Cost>(c0.errors() + c1.errors()) * kScale -
        static_cast<Cost>(c0.substitutions + c1.substitutions);
    if (cost < best_cost) {
      best_cost = cost;
      best.counts = EditCounts{c0.substitutions + c1.substitutions,
                               c0.insertions + c1.insertions,
                               c0.deletions + c1.deletions};
      best.assignment.assign(n, 0);
      for (std::size_t k = 0; k < n; ++k)
        best.assignment[order[k]] = static_cast<int>((mask >> k) & 1u);
    }
  }
  FillWer(&best);
  return best;
}

std::string NormalizeToken(std::string_view token) {
  auto punct = [](char c) { return std::ispunct(static_cast<unsigned char>(c)) != 0; };
  std::size_t b = 0, e = token.size();
  while (b < e && punct(token[b])) ++b;
  while (e > b && punct(token[e - 1])) --e;
  std::string out(token.substr(b, e - b));
  for (char &c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

void NormalizeWords(std::vector<Utterance> *utts) {
  for (Utterance &u : *utts) {
    if (!u.words) continue;
    std::vector<Word> kept;
    for (Word &w : *u.words) {
      w.token = NormalizeToken(w.token);
      if (!w.token.empty()) kept.push_back(std::move(w));
    }
    u.words = std::move(kept);
  }
}

HypStream StreamWords(std::vector<Utterance> utts) {
  SortCanonical(&utts);
  HypStream out;
  for (const Utterance &u : utts) {
    if (!u.words)
      throw InvalidArgument(fmt::format(
          "hypothesis utterance of '{}' at {} has no words", u.speaker, u.start));
    out.insert(out.end(), u.words->begin(), u.words->end());
  }
  return out;
}

ScoreReport ScoreSession(std::vector<Utterance> refs,
                         std::vector<Utterance> hyps,
                         const ScoreOptions &options) {
  std::map<std::string, std::vector<Utterance>> by_label;
  for (Utterance &u : hyps) by_label[u.speaker].push_back(std::move(u));
  if (by_label.size() > 2)
    throw Unsupported(fmt::format(
        "hypothesis has {} stream labels; at most 2 are supported",
        by_label.size()));
  std::vector<std::vector<Utterance>> streams;
  for (auto &[label, utts] : by_label) streams.push_back(std::move(utts));
  return ScoreSession(std::move(refs), std::move(streams), options);
}

ScoreReport ScoreSession(std::vector<Utterance> refs,
                         std::vector<std::vector<Utterance>> hyp_streams,
                         const ScoreOptions &options) {
  if (hyp_streams.size() > 2)
    throw Unsupported(fmt::format(
        "{} hypothesis streams given; at most 2 are supported",
        hyp_streams.size()));
  if (options.normalize) {
    NormalizeWords(&refs);
    for (auto &s : hyp_streams) NormalizeWords(&s);
  }
  std::vector<HypStream> hyps;
  for (auto &s : hyp_streams) hyps.push_back(StreamWords(std::move(s)));
  return OrcWer(refs, hyps, options.collar);
}

std::string WriteScoreReport(const ScoreReport &report,
                             std::string_view session_id) {
  nlohmann::ordered_json doc;
  if (!session_id.empty()) doc["session_id"] = session_id;
  doc["total_ref_words"] = report.total_ref_words;
  doc["substitutions"] = report.counts.substitutions;
  doc["insertions"] = report.counts.insertions;
  doc["deletions"] = report.counts.deletions;
  doc["errors"] = report.errors();
  doc["wer"] = std::isfinite(report.wer) ? nlohmann::ordered_json(report.wer)
                                         : nlohmann::ordered_json(nullptr);
  doc["collar"] = std::isfinite(report.collar)
                      ? nlohmann::ordered_json(report.collar)
                      : nlohmann::ordered_json(nullptr);
  doc["assignment"] = report.assignment;
  return doc.dump();
}

double Rtfx(std::span<const TimingRecord> log) {
  if (log.empty()) throw InvalidArgument("RTFx of an empty timing log");
  double audio = 0.0, processing = 0.0;
  for (const TimingRecord &r : log) {
    if (!(r.audio_duration >= 0.0) || !(r.processing_duration >= 0.0))
      throw InvalidArgument("timing durations must be non-negative");
    audio += r.audio_duration;
    processing += r.processing_duration;
  }
  if (!(processing > 0.0))
    throw InvalidArgument("total processing time is zero");
  return audio / processing;
}

TimingLog ParseTimingLog(std::string_view text) {
  TimingLog log;
  try {
    auto doc = nlohmann::json::parse(text);
    if (!doc.is_array()) throw ParseError("timing log must be a JSON array");
    for (std::size_t i = 0; i < doc.size(); ++i) {
      const auto &rec = doc[i];
      TimingRecord r;
      if (rec.is_array() && rec.size() == 2) {
        r.audio_duration = rec[0].get<double>();
        r.processing_duration = rec[1].get<double>();
      } else if (rec.is_object()) {
        r.audio_duration = rec.at("audio_duration").get<double>();
        r.processing_duration = rec.at("processing_duration").get<double>();
      } else {
        throw ParseError(fmt::format("timing record {} is malformed", i));
      }
      log.push_back(r);
    }
  } catch (const nlohmann::json::exception &e) {
    throw ParseError(std::string("invalid timing log: ") + e.what());
  }
  return log;
}

}  // namespace heat

// tools/cli.cc

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

#include "cli.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <thread>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "heat/errors.h"
#include "heat/segio.h"
#include "heat/simgen.h"
#include "heat/stno_fddt.h"
#include "json.hpp"

namespace heat::cli {

namespace {

using ordered_json = nlohmann::ordered_json;

using SessionMap = std::map<std::string, std::vector<Utterance>>;

// Utterances grouped by session, each keeping its index in the input list.
struct IndexedSessions {
  SessionMap utts;
  std::map<std::string, std::vector<std::size_t>> input_index;
};

IndexedSessions GroupBySession(const std::vector<Utterance> &utts) {
  IndexedSessions out;
  for (std::size_t i = 0; i < utts.size(); ++i) {
    out.utts[utts[i].session_id].push_back(utts[i]);
    out.input_index[utts[i].session_id].push_back(i);
  }
  return out;
}

// Runs fn(0..count-1) on up to `jobs` threads.
void ParallelFor(int jobs, std::size_t count,
                 const std::function<void(std::size_t)> &fn) {
  const std::size_t workers =
      std::min<std::size_t>(std::max(1, jobs), std::max<std::size_t>(count, 1));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(count);
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i; (i = next.fetch_add(1)) < count;) {
        try {
          fn(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  for (auto &t : pool) t.join();
  for (auto &e : errors)
    if (e) std::rethrow_exception(e);
}

void WriteOutput(const std::string &path, const std::string &content,
                 std::ostream &out) {
  if (path == "-") {
    out << content;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write '" + path + "'");
  f << content;
}

double MaxEnd(const std::vector<Utterance> &utts) {
  double end = 0.0;
  for (const Utterance &u : utts) end = std::max(end, u.end);
  return end;
}

std::vector<Utterance> LoadUtterances(const std::string &rttm,
                                      const std::string &seglst) {
  if (!rttm.empty()) return ParseRttm(ReadFile(rttm));
  return ParseSegLst(ReadFile(seglst));
}

struct ConvertResult {
  std::vector<Utterance> streams;  // all sessions, session order
  ordered_json assignment;
};

ConvertResult ConvertSessions(const std::vector<Utterance> &utts,
                              const Config &cfg) {
  IndexedSessions sessions = GroupBySession(utts);
  std::vector<std::string> ids;
  for (const auto &[id, _] : sessions.utts) ids.push_back(id);
  std::vector<HeatAssignment> results(ids.size());
  ParallelFor(cfg.jobs, ids.size(), [&](std::size_t i) {
    results[i] = Assign(sessions.utts.at(ids[i]), cfg.heuristic, cfg.overflow);
  });

  ConvertResult out;
  ordered_json assignments = ordered_json::array();
  ordered_json dropped = ordered_json::array();
  ordered_json violations = ordered_json::array();
  for (std::size_t s = 0; s < ids.size(); ++s) {
    const HeatAssignment &a = results[s];
    const auto &global = sessions.input_index.at(ids[s]);
    std::vector<std::pair<std::size_t, int>> by_input;
    for (const auto &[local, stream] : a.assignments)
      by_input.emplace_back(global[local], stream);
    std::sort(by_input.begin(), by_input.end());
    for (const auto &[index, stream] : by_input) {
      const Utterance &u = utts[index];
      ordered_json rec;
      rec["index"] = index;
      rec["session_id"] = u.session_id;
      rec["speaker"] = u.speaker;
      rec["start"] = std::round(u.start * 1000.0) / 1000.0;
      rec["end"] = std::round(u.end * 1000.0) / 1000.0;
      rec["stream"] = stream;
      assignments.push_back(std::move(rec));
    }
    for (std::size_t local : a.dropped) dropped.push_back(global[local]);
    for (std::size_t local : a.violations) violations.push_back(global[local]);
    auto streams = StreamUtterances(a);
    out.streams.insert(out.streams.end(), streams.begin(), streams.end());
  }
  std::sort(dropped.begin(), dropped.end());
  std::sort(violations.begin(), violations.end());
  out.assignment["heuristic"] = ToString(cfg.heuristic);
  out.assignment["overflow"] = ToString(cfg.overflow);
  out.assignment["assignments"] = std::move(assignments);
  out.assignment["dropped"] = std::move(dropped);
  out.assignment["violations"] = std::move(violations);
  return out;
}

bool IsHeatStreams(const std::vector<Utterance> &utts) {
  return !utts.empty() && std::all_of(utts.begin(), utts.end(), [](const Utterance &u) {
    return u.speaker == StreamName(0) || u.speaker == StreamName(1);
  });
}

double ParseCollar(const std::string &text) {
  if (text == "inf" || text == "infinity" || text == "none") return kNoCollar;
  std::size_t used = 0;
  double v = std::stod(text, &used);
  if (used != text.size() || !(v >= 0.0))
    throw CLI::ValidationError("--collar", "expected a non-negative number or 'inf'");
  return v;
}

ordered_json ReportJson(const ScoreReport &r, const std::string &session) {
  return ordered_json::parse(WriteScoreReport(r, session));
}

void AddConfigOptions(CLI::App *cmd, Config *cfg, std::string *heuristic,
                      std::string *overflow) {
  cmd->add_option("--heuristic", *heuristic, "Stream assignment heuristic")
      ->check(CLI::IsMember({"first-available", "alternating",
                             "recency-continuity", "speaker-continuity"}))
      ->capture_default_str();
  cmd->add_option("--overflow", *overflow,
                  "Policy when neither stream is free (3+ talkers)")
      ->check(CLI::IsMember({"force", "drop"}))
      ->capture_default_str();
  cmd->add_option("--jobs", cfg->jobs, "Sessions processed in parallel")
      ->check(CLI::PositiveNumber);
}

}  // namespace

int Run(const std::vector<std::string> &args, std::ostream &out,
        std::ostream &err) {
  CLI::App app{"heat: HEAT stream conversion, STNO masks and ORC-WER scoring"};
  app.name("heat");
  app.require_subcommand(1);

  Config cfg;
  std::string heuristic = std::string(ToString(cfg.heuristic));
  std::string overflow = std::string(ToString(cfg.overflow));

  // convert
  std::string in_rttm, in_seglst, out_rttm = "-", out_seglst, out_assignment;
  auto *convert = app.add_subcommand(
      "convert", "Split speaker segments into two speaker-agnostic streams");
  auto *conv_in = convert->add_option("--rttm", in_rttm, "Input RTTM");
  convert->add_option("--seglst", in_seglst, "Input SegLST (keeps words)")
      ->excludes(conv_in);
  convert->add_option("-o,--output", out_rttm, "Stream RTTM output ('-' = stdout)")
      ->capture_default_str();
  convert->add_option("--out-seglst", out_seglst, "Stream SegLST output");
  convert->add_option("--assignment", out_assignment, "Assignment JSON output");
  AddConfigOptions(convert, &cfg, &heuristic, &overflow);

  // stno
  std::string stno_rttm, out_prefix, format = "json";
  double duration = -1.0;
  auto *stno = app.add_subcommand(
      "stno", "Per-stream STNO conditioning masks from RTTM or HEAT RTTM");
  stno->add_option("--rttm", stno_rttm, "Input RTTM (speakers or stream0/1)")
      ->required();
  stno->add_option("--out-prefix", out_prefix,
                   "Writes <prefix>.<session>.stream<k>.stno.<format>")
      ->required();
  stno->add_option("--format", format, "json or bin")
      ->check(CLI::IsMember({"json", "bin"}))
      ->capture_default_str();
  stno->add_option("--frame-len", cfg.frame_len, "Seconds per frame")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  stno->add_option("--duration", duration,
                   "Session length in seconds (default: last segment end)");
  AddConfigOptions(stno, &cfg, &heuristic, &overflow);

  // score
  std::string ref_path, collar_text = "5";
  std::vector<std::string> hyp_paths;
  bool no_normalize = false;
  auto *score = app.add_subcommand(
      "score", "Time-constrained ORC-WER of two hypothesis streams");
  score->add_option("--ref", ref_path, "Reference SegLST")->required();
  score->add_option("--hyp", hyp_paths,
                    "Hypothesis SegLST: one file with <=2 stream labels, or "
                    "one file per stream")
      ->required()
      ->expected(1, 2);
  score->add_option("--collar", collar_text, "Collar in seconds, or 'inf'")
      ->capture_default_str();
  score->add_flag("--no-normalize", no_normalize,
                  "Score tokens verbatim (no lowercasing/punctuation strip)");
  score->add_option("--jobs", cfg.jobs, "Sessions scored in parallel")
      ->check(CLI::PositiveNumber);

  // stats
  std::string stats_rttm;
  auto *stats = app.add_subcommand("stats", "Overlap statistics of an RTTM");
  stats->add_option("--rttm", stats_rttm, "Input RTTM")->required();
  stats->add_option("--frame-len", cfg.frame_len, "Seconds per frame")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  // simulate
  SimSpec spec;
  std::string sim_rttm, sim_seglst;
  auto *simulate = app.add_subcommand(
      "simulate", "Synthetic conversation with controlled overlap");
  simulate->add_option("--speakers", spec.num_speakers, "Number of speakers")->capture_default_str();
  simulate->add_option("--duration", spec.total_duration, "Seconds")
      ->capture_default_str();
  simulate->add_option("--overlap2", spec.target_2spk_overlap,
                       "Target fraction of exactly-two-speaker time")
      ->capture_default_str();
  simulate->add_option("--overlap3", spec.target_3spk_overlap,
                       "Target fraction of 3+-speaker time")
      ->capture_default_str();
  simulate->add_option("--min-len", spec.min_utterance_len, "Shortest utterance, seconds")->capture_default_str();
  simulate->add_option("--max-len", spec.max_utterance_len, "Longest utterance, seconds")->capture_default_str();
  simulate->add_option("--seed", spec.seed, "SplitMix64 seed")->capture_default_str();
  simulate->add_option("--rttm", sim_rttm, "RTTM output ('-' = stdout)");
  simulate->add_option("--seglst", sim_seglst, "SegLST output ('-' = stdout)");

  // rtfx
  std::string log_path;
  auto *rtfx = app.add_subcommand("rtfx", "Inverse real-time factor of a timing log");
  rtfx->add_option("log", log_path,
                   "JSON array of {audio_duration, processing_duration} or "
                   "[audio, processing] pairs")
      ->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    cfg.heuristic = ParseHeuristic(heuristic);
    cfg.overflow = ParseOverflowPolicy(overflow);
    cfg.normalize = !no_normalize;

    if (*convert) {
      if (in_rttm.empty() && in_seglst.empty()) {
        err << "convert: one of --rttm or --seglst is required\n";
        return kUsage;
      }
      if (out_rttm == "-" && out_assignment == "-") {
        err << "convert: RTTM and assignment cannot both go to stdout\n";
        return kUsage;
      }
      auto utts = LoadUtterances(in_rttm, in_seglst);
      ConvertResult r = ConvertSessions(utts, cfg);
      WriteOutput(out_rttm, WriteRttm(r.streams), out);
      if (!out_seglst.empty()) WriteOutput(out_seglst, WriteSegLst(r.streams), out);
      if (!out_assignment.empty())
        WriteOutput(out_assignment, r.assignment.dump(1) + "\n", out);
      return kOk;
    }

    if (*stno) {
      auto utts = ParseRttm(ReadFile(stno_rttm));
      std::vector<Utterance> streams =
          IsHeatStreams(utts) ? utts : ConvertSessions(utts, cfg).streams;
      IndexedSessions sessions = GroupBySession(streams);
      std::vector<std::string> ids;
      for (const auto &[id, _] : sessions.utts) ids.push_back(id);
      std::vector<std::vector<std::string>> written(ids.size());
      ParallelFor(cfg.jobs, ids.size(), [&](std::size_t i) {
        const auto &session = sessions.utts.at(ids[i]);
        const double total = duration >= 0.0 ? duration : MaxEnd(session);
        ActivityMask heat =
            Rasterize(session, FrameGrid(cfg.frame_len, total),
                      {StreamName(0), StreamName(1)});
        auto [mask0, mask1] = StnoForStreams(heat);
        const StnoMask *masks[] = {&mask0, &mask1};
        for (int k = 0; k < kNumStreams; ++k) {
          std::string path = fmt::format("{}.{}.{}.stno.{}", out_prefix, ids[i],
                                         StreamName(k), format);
          WriteOutput(path,
                      format == "json" ? WriteStnoJson(*masks[k])
                                       : WriteStnoBinary(*masks[k]),
                      out);
          written[i].push_back(path);
        }
      });
      ordered_json files = ordered_json::array();
      for (const auto &w : written)
        for (const auto &p : w) files.push_back(p);
      ordered_json doc;
      doc["files"] = std::move(files);
      out << doc.dump() << "\n";
      return kOk;
    }

    if (*score) {
      const double collar = ParseCollar(collar_text);
      IndexedSessions refs = GroupBySession(ParseSegLst(ReadFile(ref_path)));
      std::vector<SessionMap> hyp_files;
      for (const auto &p : hyp_paths)
        hyp_files.push_back(GroupBySession(ParseSegLst(ReadFile(p))).utts);

      std::vector<std::string> ids;
      for (const auto &[id, _] : refs.utts) ids.push_back(id);
      for (const auto &file : hyp_files)
        for (const auto &[id, _] : file)
          if (!refs.utts.count(id)) ids.push_back(id);
      std::sort(ids.begin(), ids.end());
      ids.erase(std::unique(ids.begin(), ids.end()), ids.end());

      ScoreOptions options{collar, cfg.normalize};
      std::vector<ScoreReport> reports(ids.size());
      ParallelFor(cfg.jobs, ids.size(), [&](std::size_t i) {
        const std::string &id = ids[i];
        std::vector<Utterance> ref;
        if (auto it = refs.utts.find(id); it != refs.utts.end()) ref = it->second;
        auto hyp_of = [&](const SessionMap &m) {
          auto it = m.find(id);
          return it == m.end() ? std::vector<Utterance>{} : it->second;
        };
        if (hyp_files.size() == 1) {
          reports[i] = ScoreSession(std::move(ref), hyp_of(hyp_files[0]), options);
        } else {
          std::vector<std::vector<Utterance>> streams;
          for (const auto &f : hyp_files) streams.push_back(hyp_of(f));
          reports[i] = ScoreSession(std::move(ref), std::move(streams), options);
        }
      });

      ScoreReport total;
      total.collar = collar;
      ordered_json per_session = ordered_json::array();
      for (std::size_t i = 0; i < ids.size(); ++i) {
        total.total_ref_words += reports[i].total_ref_words;
        total.counts.substitutions += reports[i].counts.substitutions;
        total.counts.insertions += reports[i].counts.insertions;
        total.counts.deletions += reports[i].counts.deletions;
        per_session.push_back(ReportJson(reports[i], ids[i]));
      }
      total.wer = total.total_ref_words > 0
                      ? static_cast<double>(total.errors()) /
                            static_cast<double>(total.total_ref_words)
                      : (total.errors() == 0 ? 0.0 : kNoCollar);
      ordered_json doc = ReportJson(total, "");
      doc.erase("assignment");
      doc["sessions"] = std::move(per_session);
      out << doc.dump(1) << "\n";
      return kOk;
    }

    if (*stats) {
      IndexedSessions sessions = GroupBySession(ParseRttm(ReadFile(stats_rttm)));
      OverlapStats total;
      ordered_json per_session = ordered_json::array();
      for (const auto &[id, utts] : sessions.utts) {
        OverlapStats s = ComputeOverlapStats(
            Rasterize(utts, FrameGrid(cfg.frame_len, MaxEnd(utts))));
        total += s;
        ordered_json rec;
        rec["session_id"] = id;
        rec.update(ordered_json::parse(WriteOverlapStats(s)));
        per_session.push_back(std::move(rec));
      }
      ordered_json doc = ordered_json::parse(WriteOverlapStats(total));
      doc["sessions"] = std::move(per_session);
      out << doc.dump(1) << "\n";
      return kOk;
    }

    if (*simulate) {
      Simulation sim = Simulate(spec);
      if (sim_rttm.empty() && sim_seglst.empty()) sim_rttm = "-";
      if (!sim_rttm.empty()) WriteOutput(sim_rttm, WriteRttm(sim.utterances), out);
      if (!sim_seglst.empty())
        WriteOutput(sim_seglst, WriteSegLst(sim.utterances), out);
      return kOk;
    }

    if (*rtfx) {
      const double ratio = Rtfx(ParseTimingLog(ReadFile(log_path)));
      out << ordered_json(ratio).dump() << "\n";
      return kOk;
    }
  } catch (const ParseError &e) {
    err << "error: " << e.what() << "\n";
    return kParse;
  } catch (const Unsupported &e) {
    err << "error: " << e.what() << "\n";
    return kUnsupported;
  } catch (const InvalidArgument &e) {
    err << "error: " << e.what() << "\n";
    return kParse;
  } catch (const std::exception &e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}

}  // namespace heat::cli

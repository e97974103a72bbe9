// benchmarks/bench_scoring.cc

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

#include <benchmark/benchmark.h>

#include "heat/heatcore.h"
#include "heat/scoring.h"
#include "heat/simgen.h"

namespace {

// Scores the reference against its own speaker-continuity split.
void BM_OrcWer(benchmark::State &state) {
  heat::SimSpec spec;
  spec.total_duration = static_cast<double>(state.range(0));
  spec.target_2spk_overlap = 0.2;
  heat::Simulation sim = heat::Simulate(spec);
  std::vector<heat::Utterance> s0, s1;
  for (heat::Utterance &u : heat::StreamUtterances(
           heat::Assign(sim.utterances, heat::Heuristic::kSpeakerContinuity)))
    (u.speaker == heat::StreamName(0) ? s0 : s1).push_back(std::move(u));
  std::vector<heat::HypStream> hyps = {heat::StreamWords(s0), heat::StreamWords(s1)};
  for (auto _ : state)
    benchmark::DoNotOptimize(heat::OrcWer(sim.utterances, hyps, 5.0));
  state.counters["utterances"] = static_cast<double>(sim.utterances.size());
  state.counters["hyp_words"] = static_cast<double>(hyps[0].size() + hyps[1].size());
}
BENCHMARK(BM_OrcWer)->Arg(30)->Arg(60)->Arg(120)->Unit(benchmark::kMillisecond);

void BM_Levenshtein(benchmark::State &state) {
  heat::SplitMix64 rng(1);
  std::vector<heat::Word> a, b;
  for (int i = 0; i < state.range(0); ++i) {
    a.push_back({"w" + std::to_string(rng.UniformInt(0, 9)), i * 0.4, i * 0.4 + 0.3});
    b.push_back({"w" + std::to_string(rng.UniformInt(0, 9)), i * 0.4, i * 0.4 + 0.3});
  }
  for (auto _ : state) benchmark::DoNotOptimize(heat::Levenshtein(a, b, 5.0));
}
BENCHMARK(BM_Levenshtein)->Arg(100)->Arg(1000);

}  // namespace

// benchmarks/bench_heatcore.cc

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
#include "heat/simgen.h"

namespace {

void BM_Assign(benchmark::State &state) {
  heat::SimSpec spec;
  spec.total_duration = static_cast<double>(state.range(0));
  spec.target_2spk_overlap = 0.2;
  heat::Simulation sim = heat::Simulate(spec);
  for (auto _ : state)
    benchmark::DoNotOptimize(
        heat::Assign(sim.utterances, heat::Heuristic::kSpeakerContinuity));
  state.SetItemsProcessed(state.iterations() *
                          static_cast<std::int64_t>(sim.utterances.size()));
}
BENCHMARK(BM_Assign)->Arg(600)->Arg(3600);

void BM_HeatMask(benchmark::State &state) {
  heat::SimSpec spec;
  spec.total_duration = 3600.0;
  spec.target_2spk_overlap = 0.2;
  heat::Simulation sim = heat::Simulate(spec);
  auto a = heat::Assign(sim.utterances, heat::Heuristic::kSpeakerContinuity);
  heat::FrameGrid grid(0.01, spec.total_duration);
  for (auto _ : state) benchmark::DoNotOptimize(heat::HeatMask(a, grid));
}
BENCHMARK(BM_HeatMask)->Unit(benchmark::kMillisecond);

}  // namespace

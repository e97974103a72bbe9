// benchmarks/bench_simgen.cc

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

#include "heat/simgen.h"
#include "heat/stno_fddt.h"

namespace {

void BM_Simulate(benchmark::State &state) {
  heat::SimSpec spec;
  spec.total_duration = static_cast<double>(state.range(0));
  spec.target_2spk_overlap = 0.2;
  spec.target_3spk_overlap = 0.05;
  for (auto _ : state) {
    benchmark::DoNotOptimize(heat::Simulate(spec));
    ++spec.seed;
  }
}
BENCHMARK(BM_Simulate)->Arg(600)->Arg(3600)->Unit(benchmark::kMillisecond);

void BM_FddtApply(benchmark::State &state) {
  const Eigen::Index d = state.range(0), frames = 1500;
  std::vector<double> target(frames), other(frames);
  heat::SplitMix64 rng(2);
  for (Eigen::Index t = 0; t < frames; ++t) {
    target[t] = static_cast<double>(rng.UniformInt(0, 100)) / 100.0;
    other[t] = static_cast<double>(rng.UniformInt(0, 100)) / 100.0;
  }
  std::span<const double> others[] = {other};
  heat::StnoMask mask = heat::Stno(target, others);
  heat::FddtParams p = heat::FddtParams::Identity(d);
  Eigen::MatrixXd z = Eigen::MatrixXd::Random(d, frames);
  for (auto _ : state) benchmark::DoNotOptimize(heat::FddtApply(z, mask, p));
}
BENCHMARK(BM_FddtApply)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);

}  // namespace

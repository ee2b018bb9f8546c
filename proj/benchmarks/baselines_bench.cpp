// Copyright 2026 The plapreg Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include <benchmark/benchmark.h>

#include "plapreg/baselines.hpp"
#include "plapreg/synth.hpp"

namespace plapreg {
namespace {

FeatureTable Table(std::size_t n, std::size_t dim) {
  SynthSpec spec;
  spec.n = n;
  spec.dim = dim;
  return Generate(spec);
}

void BM_LssvrFit(benchmark::State& state) {
  const FeatureTable t = Table(static_cast<std::size_t>(state.range(0)), 10);
  for (auto _ : state) {
    benchmark::DoNotOptimize(LssvrFit(t.features, t.target(kSynthTarget), 0.01, 100.0));
  }
}
BENCHMARK(BM_LssvrFit)->Arg(100)->Arg(400);

void BM_RidgeFit(benchmark::State& state) {
  const FeatureTable t = Table(400, 44);
  const int degree = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(RidgeFit(t.features, t.target(kSynthTarget), 1.0, degree));
  }
}
BENCHMARK(BM_RidgeFit)->Arg(1)->Arg(2);

}  // namespace
}  // namespace plapreg

BENCHMARK_MAIN();

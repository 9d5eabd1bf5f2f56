// Copyright 2026 The qbfn Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <vector>

#include <benchmark/benchmark.h>

#include "qbfn/experiment.hpp"
#include "qbfn/oracle.hpp"
#include "qbfn/sweep.hpp"

namespace {

using namespace qbfn;

PhysicsConfig physics_for(int64_t which) { return which == 0 ? qubit_preset_physics() : spin1_preset_physics(); }

void BM_ResponseSerial(benchmark::State& state) {
    const PhysicsConfig cfg = physics_for(state.range(0));
    const ControlField field = sample_random_field(cfg, 1);
    for (auto _ : state) benchmark::DoNotOptimize(build_response_serial(field, cfg));
}

void BM_ResponseParallel(benchmark::State& state) {
    const PhysicsConfig cfg = physics_for(state.range(0));
    const ControlField field = sample_random_field(cfg, 1);
    for (auto _ : state) benchmark::DoNotOptimize(build_response(field, cfg));
}

std::vector<SweepPoint> sweep_points() {
    const std::vector<double> gammas{0.25};
    const std::vector<double> noises{0.1};
    return sweep_grid(1, 8, gammas, noises);
}

void BM_SweepSerial(benchmark::State& state) {
    const ExperimentConfig base = preset_config("paper-2level");
    const auto points = sweep_points();
    for (auto _ : state) benchmark::DoNotOptimize(run_sweep_serial(base, points));
}

void BM_SweepParallel(benchmark::State& state) {
    const ExperimentConfig base = preset_config("paper-2level");
    const auto points = sweep_points();
    for (auto _ : state) benchmark::DoNotOptimize(run_sweep(base, points));
}

}  // namespace

BENCHMARK(BM_ResponseSerial)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ResponseParallel)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_SweepSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SweepParallel)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();

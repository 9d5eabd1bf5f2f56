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

#include "qbfn/sweep.hpp"

#include "qbfn/bfn_diagnostics.hpp"

namespace qbfn {

SweepOutcome run_sweep_point(const ExperimentConfig& base, const SweepPoint& point) {
    SweepOutcome out;
    out.point = point;
    try {
        ExperimentConfig cfg = base;
        cfg.physics.rng_seed = point.seed;
        cfg.physics.gamma_small = point.gamma_small;
        cfg.physics.noise_meas = point.noise;
        cfg.physics.noise_field = point.noise;
        const SimulatedExperiment sim = simulate_experiment(cfg);
        const BfnRun run = run_bfn(sim.record, sim.observer_field, cfg.physics, bfn_options(cfg), sim.truth.trajectory);
        out.fidelity = run.fidelity.value_or(0.0);
        out.v0 = run.vk.front();
        out.vn = run.vk.back();
        out.envelope_decreasing = envelope_decreasing(run.vk);
    } catch (const std::exception& e) {
        out.ok = false;
        out.error = e.what();
    }
    return out;
}

std::vector<SweepOutcome> run_sweep(const ExperimentConfig& base, std::span<const SweepPoint> points) {
    std::vector<SweepOutcome> out(points.size());
    const auto n = static_cast<long>(points.size());
#pragma omp parallel for schedule(dynamic)
    for (long i = 0; i < n; ++i) {
        out[static_cast<std::size_t>(i)] = run_sweep_point(base, points[static_cast<std::size_t>(i)]);
    }
    return out;
}

std::vector<SweepOutcome> run_sweep_serial(const ExperimentConfig& base, std::span<const SweepPoint> points) {
    std::vector<SweepOutcome> out;
    out.reserve(points.size());
    for (const auto& p : points) out.push_back(run_sweep_point(base, p));
    return out;
}

std::vector<SweepPoint> sweep_grid(std::uint64_t first_seed, int count, std::span<const double> gammas,
                                   std::span<const double> noises) {
    std::vector<SweepPoint> points;
    for (int s = 0; s < count; ++s) {
        for (double g : gammas) {
            for (double noise : noises) points.push_back({first_seed + static_cast<std::uint64_t>(s), g, noise});
        }
    }
    return points;
}

}  // namespace qbfn

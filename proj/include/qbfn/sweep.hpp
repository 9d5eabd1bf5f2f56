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

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "qbfn/experiment.hpp"

namespace qbfn {

struct SweepPoint {
    std::uint64_t seed = 1;
    double gamma_small = 0.25;
    double noise = 0.0;  // applied to both the record and the observer's fields
};

struct SweepOutcome {
    SweepPoint point;
    double fidelity = 0.0;
    double v0 = 0.0;
    double vn = 0.0;
    bool envelope_decreasing = false;
    bool ok = true;
    std::string error;
};

/// Simulate, estimate with truth diagnostics, and score one point.
SweepOutcome run_sweep_point(const ExperimentConfig& base, const SweepPoint& point);

/// Points run concurrently (OpenMP); output order matches input order.
std::vector<SweepOutcome> run_sweep(const ExperimentConfig& base, std::span<const SweepPoint> points);
/// Serial reference for run_sweep.
std::vector<SweepOutcome> run_sweep_serial(const ExperimentConfig& base, std::span<const SweepPoint> points);

/// Cartesian product of seeds [first, first + count) x gammas x noises.
std::vector<SweepPoint> sweep_grid(std::uint64_t first_seed, int count, std::span<const double> gammas,
                                   std::span<const double> noises);

}  // namespace qbfn

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

#include "qbfn/qops.hpp"

namespace qbfn {

enum class Direction { forward, backward };

const char* to_string(Direction d);

/// Scalar parameters of one experiment. Units follow the caller: kHz and ms
/// for the qubit preset, dimensionless for the spin-1 preset.
struct PhysicsConfig {
    Spin spin{1};
    double gamma_big = 0.25;    // measurement strength
    double gamma_small = 0.25;  // observer gain
    double b0 = 10.0;           // control amplitude (mu_B * B0 for spin >= 1)
    double t_horizon = 1.0;
    double g_f = 1.0;
    double mu_b = 1.0;
    double beta = 0.0;
    int steps_per_pass = 2000;  // record intervals N on [0, T]; must be even
    int n_knots = 10;           // phase spline knots, endpoints included
    double noise_meas = 0.0;    // fraction of the clean record RMS
    double noise_field = 0.0;   // fraction of b0
    std::uint64_t rng_seed = 1;

    int dim() const { return spin.dim(); }
    /// Record spacing T / N.
    double dt() const { return t_horizon / steps_per_pass; }
    /// Throws Error(invalid_argument) on any violated invariant.
    void validate() const;
};

/// Qubit protocol: Gamma = gamma = 0.25, B0 = 10, T = 1.
PhysicsConfig qubit_preset_physics();
/// Spin-1 protocol: g_F = 1, mu_B B0 = 30, Gamma = gamma = 1, beta = 10, T = 1.
PhysicsConfig spin1_preset_physics();

/// Independent RNG streams derived from one base seed.
enum class SeedStream : std::uint32_t { control = 0, truth_state = 1, meas_noise = 2, field_noise = 3 };
std::uint64_t derive_seed(std::uint64_t base, SeedStream stream);

}  // namespace qbfn

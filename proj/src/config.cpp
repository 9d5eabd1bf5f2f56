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

#include "qbfn/config.hpp"

#include <array>
#include <cmath>
#include <random>
#include <sstream>

#include "qbfn/error.hpp"

namespace qbfn {

const char* to_string(Direction d) { return d == Direction::forward ? "forward" : "backward"; }

void PhysicsConfig::validate() const {
    std::ostringstream os;
    if (spin.twice() < 1) os << "spin must be >= 1/2; ";
    if (!(gamma_big > 0.0)) os << "Gamma must be > 0; ";
    if (!(gamma_small > 0.0)) os << "gamma must be > 0; ";
    if (!(t_horizon > 0.0)) os << "T must be > 0; ";
    if (!(b0 >= 0.0) || !std::isfinite(b0)) os << "B0 must be finite and >= 0; ";
    if (steps_per_pass < 2 || steps_per_pass % 2 != 0) os << "steps_per_pass must be even and >= 2; ";
    if (n_knots < 4) os << "at least 4 spline knots are required; ";
    if (!(noise_meas >= 0.0)) os << "noise_meas must be >= 0; ";
    if (!(noise_field >= 0.0)) os << "noise_field must be >= 0; ";
    if (!std::isfinite(g_f) || !std::isfinite(mu_b) || !std::isfinite(beta)) os << "non-finite coupling; ";
    const std::string problems = os.str();
    if (!problems.empty()) throw Error(ErrorCode::invalid_argument, "invalid physics config: " + problems);
}

PhysicsConfig qubit_preset_physics() {
    PhysicsConfig cfg;
    cfg.spin = Spin(1);
    cfg.gamma_big = 0.25;
    cfg.gamma_small = 0.25;
    cfg.b0 = 10.0;
    cfg.t_horizon = 1.0;
    return cfg;
}

PhysicsConfig spin1_preset_physics() {
    PhysicsConfig cfg;
    cfg.spin = Spin(2);
    cfg.gamma_big = 1.0;
    cfg.gamma_small = 1.0;
    cfg.b0 = 30.0;  // the product mu_B * B0
    cfg.mu_b = 1.0;
    cfg.g_f = 1.0;
    cfg.beta = 10.0;
    cfg.t_horizon = 1.0;
    return cfg;
}

std::uint64_t derive_seed(std::uint64_t base, SeedStream stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(base), static_cast<std::uint32_t>(base >> 32),
                      static_cast<std::uint32_t>(stream)};
    std::array<std::uint32_t, 2> words{};
    seq.generate(words.begin(), words.end());
    return (static_cast<std::uint64_t>(words[0]) << 32) | words[1];
}

}  // namespace qbfn

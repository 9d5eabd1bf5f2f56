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

#include <span>
#include <vector>

#include "qbfn/bfn.hpp"

namespace qbfn {

/// Discrete decrease check for one iteration: V_{k+1} - V_k against
/// -2 gamma int_{2kT}^{2(k+1)T} g Z^2 dt (trapezoidal).
struct DecreaseCheck {
    int k = 0;
    double dv_actual = 0.0;
    double dv_predicted = 0.0;
    double rel_mismatch = 0.0;
};

struct LyapunovReport {
    std::vector<DecreaseCheck> iterations;
    double max_rel_mismatch = 0.0;
    double g_min = 0.0;                  // smallest g on the observer nodes (must be >= 1)
    double g_at_period_start = 0.0;      // g(2kT), worst deviation from 1 is reported here
    double g_mid_forward_limit = 0.0;    // exp(4 Gamma T)
    double g_mid_backward_value = 0.0;   // g((2k+1)T) from the backward branch
    bool strictly_decreasing = false;    // V_{k+1} < V_k for all k
    bool non_increasing = false;
    double max_within_period_ratio = 0.0;  // max_u V(2kT + u) / V_k
};

/// Throws Error(missing_truth) if the run carries no truth diagnostics.
LyapunovReport lyapunov_diagnostics(const BfnRun& run, const PhysicsConfig& cfg);

/// Finite-difference dV/dt against -4 Gamma V - 2 gamma Z^2 (forward) and
/// +4 Gamma V - 2 gamma Z^2 (backward) at interior observer nodes. Relative
/// error is measured against 4 Gamma V + 2 gamma Z^2. Spin 1/2 only.
struct DerivativeIdentityReport {
    double max_rel_forward = 0.0;
    double max_rel_backward = 0.0;
    std::size_t samples = 0;
};

DerivativeIdentityReport derivative_identity_check(const BfnRun& run, const PhysicsConfig& cfg);

/// Quantities that must vanish at the start of each forward pass as k grows:
/// Z, one-sided dZ/dt and d2Z/dt2 at 2kT+, and the combinations
/// Bx Y - By X and Bx' Y - By' X evaluated with the field at t = 0.
struct ProofChainPoint {
    int k = 0;
    double z = 0.0;
    double z_dot = 0.0;
    double z_ddot = 0.0;
    double field_combination = 0.0;
    double rate_combination = 0.0;
    double x = 0.0;
    double y = 0.0;
};

std::vector<ProofChainPoint> proof_chain(const BfnRun& run, const ControlField& field);

/// True when V_n < V_0 and the least-squares slope of log V_k is negative.
bool envelope_decreasing(std::span<const double> vk);

}  // namespace qbfn

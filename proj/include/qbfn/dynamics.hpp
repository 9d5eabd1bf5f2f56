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
#include <vector>

#include "qbfn/config.hpp"
#include "qbfn/controls.hpp"
#include "qbfn/error.hpp"
#include "qbfn/qops.hpp"

namespace qbfn {

/// Uniformly sampled measurement y(t_i), t_i = i T / N.
struct MeasurementRecord {
    std::vector<double> times;
    std::vector<double> values;
    std::vector<double> clean_values;

    std::size_t size() const { return values.size(); }
    int intervals() const { return static_cast<int>(values.size()) - 1; }
    /// Throws Error(grid_mismatch) unless the record has N + 1 finite samples
    /// on the uniform grid of cfg.
    void check_grid(const PhysicsConfig& cfg) const;
};

/// Measured observable: sigma_z for spin 1/2, sqrt(Gamma) F_z otherwise.
ComplexMatrix observable(const PhysicsConfig& cfg);

/// Forward: -i[H, rho] + rate D[jump] rho. Backward: +i[H, rho] - rate D[jump] rho.
/// D[L] rho = L rho L^dag - (L^dag L rho + rho L^dag L) / 2.
ComplexMatrix lindblad_rhs(const ComplexMatrix& state, const ComplexMatrix& hamiltonian,
                           const ComplexMatrix& jump, double rate, Direction direction);

/// Spin 1/2: Bx sigma_x + By sigma_y. Spin >= 1:
/// g_F mu_B (Bx F_x + By F_y) + beta Gamma F_x^2.
ComplexMatrix hamiltonian(FieldValue field, const PhysicsConfig& cfg);
/// Same as above at time t of the forward field; t must lie in [0, T].
ComplexMatrix hamiltonian_at(double t, const ControlField& field, const PhysicsConfig& cfg);

/// Classical fourth-order Runge-Kutta step for any vector-space state.
template <class State, class Rhs>
State rk4_step(const State& state, double t, double dt, Rhs&& rhs) {
    const State k1 = rhs(state, t);
    const State k2 = rhs(state + (0.5 * dt) * k1, t + 0.5 * dt);
    const State k3 = rhs(state + (0.5 * dt) * k2, t + 0.5 * dt);
    const State k4 = rhs(state + dt * k3, t + dt);
    return state + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

struct StepDrift {
    double trace = 0.0;      // |tr(after) - tr(before)|
    double hermitian = 0.0;  // hermiticity_defect of the raw update
};

/// RK4 step for matrix states: re-Hermitizes the result and throws
/// Error(integration) on non-finite values. Reports the drift it removed.
template <class Rhs>
ComplexMatrix rk4_step_hermitian(const ComplexMatrix& state, double t, double dt, Rhs&& rhs,
                                 StepDrift* drift = nullptr) {
    ComplexMatrix next = rk4_step(state, t, dt, rhs);
    if (!next.allFinite()) throw Error(ErrorCode::integration, "non-finite state in RK4 step");
    if (drift != nullptr) {
        drift->trace = std::abs(next.trace() - state.trace());
        drift->hermitian = hermiticity_defect(next);
    }
    return hermitian_part(next);
}

/// States at the N + 1 grid nodes of [0, T] under the noiseless master
/// equation. No positivity requirement on the initial matrix.
std::vector<ComplexMatrix> integrate_master(const ComplexMatrix& rho0, const ControlField& field,
                                            const PhysicsConfig& cfg, Direction direction = Direction::forward);

struct TruthRun {
    std::vector<ComplexMatrix> trajectory;  // N + 1 states
    MeasurementRecord record;               // values == clean_values
};

/// Forward simulation of the true system. Throws Error(integration) if a state
/// leaves the positive cone by more than tol::kPositivity.
TruthRun simulate_truth(const DensityMatrix& rho0, const ControlField& field, const PhysicsConfig& cfg);

MeasurementRecord make_record(const std::vector<ComplexMatrix>& trajectory, const PhysicsConfig& cfg);

double rms(const std::vector<double>& values);

/// values = clean_values + N(0, (level * RMS(clean))^2), deterministic in seed.
MeasurementRecord add_noise(MeasurementRecord record, double level, std::uint64_t seed);

}  // namespace qbfn

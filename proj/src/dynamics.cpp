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

#include "qbfn/dynamics.hpp"

#include <cmath>
#include <random>
#include <sstream>

namespace qbfn {

void MeasurementRecord::check_grid(const PhysicsConfig& cfg) const {
    const auto expected = static_cast<std::size_t>(cfg.steps_per_pass) + 1;
    std::ostringstream os;
    if (values.size() != expected || times.size() != expected || clean_values.size() != expected) {
        os << "record has " << values.size() << " samples, config expects " << expected;
        throw Error(ErrorCode::grid_mismatch, os.str());
    }
    const double dt = cfg.dt();
    for (std::size_t i = 0; i < expected; ++i) {
        if (std::abs(times[i] - static_cast<double>(i) * dt) > 1e-9 * cfg.t_horizon) {
            os << "record time " << times[i] << " at index " << i << " is off the uniform grid";
            throw Error(ErrorCode::grid_mismatch, os.str());
        }
        if (!std::isfinite(values[i]) || !std::isfinite(clean_values[i])) {
            os << "record value at index " << i << " is not finite";
            throw Error(ErrorCode::grid_mismatch, os.str());
        }
    }
}

ComplexMatrix observable(const PhysicsConfig& cfg) {
    if (cfg.spin.is_qubit()) return pauli(Axis::z);
    return std::sqrt(cfg.gamma_big) * angular_momentum(cfg.spin, Axis::z);
}

ComplexMatrix lindblad_rhs(const ComplexMatrix& state, const ComplexMatrix& hamiltonian,
                           const ComplexMatrix& jump, double rate, Direction direction) {
    if (state.rows() != hamiltonian.rows() || state.rows() != jump.rows() || state.rows() != state.cols()) {
        throw Error(ErrorCode::dimension_mismatch, "lindblad_rhs: operand dimensions differ");
    }
    const Complex i_unit{0.0, 1.0};
    const ComplexMatrix jdag = jump.adjoint();
    const ComplexMatrix jj = jdag * jump;
    const ComplexMatrix dissipator = jump * state * jdag - 0.5 * (jj * state + state * jj);
    const ComplexMatrix drift = -i_unit * (hamiltonian * state - state * hamiltonian) + rate * dissipator;
    return direction == Direction::forward ? drift : ComplexMatrix(-drift);
}

ComplexMatrix hamiltonian(FieldValue field, const PhysicsConfig& cfg) {
    if (cfg.spin.is_qubit()) return field.bx * pauli(Axis::x) + field.by * pauli(Axis::y);
    const ComplexMatrix fx = angular_momentum(cfg.spin, Axis::x);
    const ComplexMatrix fy = angular_momentum(cfg.spin, Axis::y);
    return cfg.g_f * cfg.mu_b * (field.bx * fx + field.by * fy) + cfg.beta * cfg.gamma_big * fx * fx;
}

ComplexMatrix hamiltonian_at(double t, const ControlField& field, const PhysicsConfig& cfg) {
    if (!(t >= 0.0 && t <= cfg.t_horizon * (1.0 + tol::kTimeSlack))) {
        std::ostringstream os;
        os << "hamiltonian_at: t=" << t << " outside [0, " << cfg.t_horizon << "]";
        throw Error(ErrorCode::invalid_argument, os.str());
    }
    return hamiltonian(field.at(t), cfg);
}

std::vector<ComplexMatrix> integrate_master(const ComplexMatrix& rho0, const ControlField& field,
                                            const PhysicsConfig& cfg, Direction direction) {
    cfg.validate();
    if (rho0.rows() != cfg.dim()) throw Error(ErrorCode::dimension_mismatch, "initial state dimension != 2F+1");
    const ComplexMatrix jump = observable(cfg);
    const double dt = cfg.dt();
    auto rhs = [&](const ComplexMatrix& rho, double t) {
        return lindblad_rhs(rho, hamiltonian(field.at(t, direction), cfg), jump, cfg.gamma_big, direction);
    };
    std::vector<ComplexMatrix> states;
    states.reserve(static_cast<std::size_t>(cfg.steps_per_pass) + 1);
    states.push_back(rho0);
    for (int i = 0; i < cfg.steps_per_pass; ++i) {
        states.push_back(rk4_step_hermitian(states.back(), i * dt, dt, rhs));
    }
    return states;
}

MeasurementRecord make_record(const std::vector<ComplexMatrix>& trajectory, const PhysicsConfig& cfg) {
    const ComplexMatrix obs = observable(cfg);
    MeasurementRecord record;
    record.times.reserve(trajectory.size());
    record.clean_values.reserve(trajectory.size());
    for (std::size_t i = 0; i < trajectory.size(); ++i) {
        record.times.push_back(static_cast<double>(i) * cfg.dt());
        record.clean_values.push_back(expect(obs, trajectory[i]));
    }
    record.values = record.clean_values;
    return record;
}

TruthRun simulate_truth(const DensityMatrix& rho0, const ControlField& field, const PhysicsConfig& cfg) {
    if (!rho0.is_positive()) throw Error(ErrorCode::invalid_argument, "true initial state is not positive");
    TruthRun run;
    run.trajectory = integrate_master(rho0.matrix(), field, cfg, Direction::forward);
    for (std::size_t i = 0; i < run.trajectory.size(); ++i) {
        const double lambda = min_eigenvalue(run.trajectory[i]);
        if (lambda < -tol::kPositivity) {
            std::ostringstream os;
            os << "true state lost positivity at step " << i << " (min eigenvalue " << lambda << ")";
            throw Error(ErrorCode::integration, os.str());
        }
    }
    run.record = make_record(run.trajectory, cfg);
    return run;
}

double rms(const std::vector<double>& values) {
    if (values.empty()) return 0.0;
    double acc = 0.0;
    for (double v : values) acc += v * v;
    return std::sqrt(acc / static_cast<double>(values.size()));
}

MeasurementRecord add_noise(MeasurementRecord record, double level, std::uint64_t seed) {
    if (!(level >= 0.0)) throw Error(ErrorCode::invalid_argument, "noise level must be >= 0");
    record.values = record.clean_values;
    const double sigma = level * rms(record.clean_values);
    if (sigma == 0.0) return record;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, sigma);
    for (auto& v : record.values) v += noise(rng);
    return record;
}

}  // namespace qbfn

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

#include "qbfn/bfn.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

#include "qbfn/error.hpp"

namespace qbfn {
namespace {

// Weight g at local pass time s: exp(4 Gamma s) forward, exp(4 Gamma (T - s)) backward.
double pass_weight(double s, Direction direction, double gamma_big, double t_horizon) {
    return direction == Direction::forward ? std::exp(4.0 * gamma_big * s)
                                           : std::exp(4.0 * gamma_big * (t_horizon - s));
}

double weighted_integral(const std::vector<double>& values, const PassTrace& pass, double gamma_big,
                         double t_horizon) {
    double acc = 0.0;
    for (std::size_t j = 0; j + 1 < values.size(); ++j) {
        const double s0 = static_cast<double>(j) * pass.step;
        const double s1 = static_cast<double>(j + 1) * pass.step;
        const double f0 = pass_weight(s0, pass.direction, gamma_big, t_horizon) * values[j] * values[j];
        const double f1 = pass_weight(s1, pass.direction, gamma_big, t_horizon) * values[j + 1] * values[j + 1];
        acc += 0.5 * pass.step * (f0 + f1);
    }
    return acc;
}

}  // namespace

InjectionGains default_gains(const PhysicsConfig& cfg) {
    if (cfg.spin.is_qubit()) {
        return {-(cfg.gamma_big + cfg.gamma_small), cfg.gamma_big - cfg.gamma_small};
    }
    return {-cfg.gamma_small, -cfg.gamma_small};
}

ObserverModel::ObserverModel(const PhysicsConfig& cfg, InjectionGains gains)
    : gamma_big_(cfg.gamma_big), gains_(gains), observable_(qbfn::observable(cfg)) {
    if (cfg.spin.is_qubit()) {
        drive_x_ = pauli(Axis::x);
        drive_y_ = pauli(Axis::y);
        static_ = ComplexMatrix::Zero(2, 2);
    } else {
        const ComplexMatrix fx = angular_momentum(cfg.spin, Axis::x);
        drive_x_ = cfg.g_f * cfg.mu_b * fx;
        drive_y_ = cfg.g_f * cfg.mu_b * angular_momentum(cfg.spin, Axis::y);
        static_ = cfg.beta * cfg.gamma_big * fx * fx;
    }
}

ComplexMatrix ObserverModel::hamiltonian(FieldValue field) const {
    return field.bx * drive_x_ + field.by * drive_y_ + static_;
}

double ObserverModel::predicted(const ComplexMatrix& rho_hat) const {
    return (observable_ * rho_hat).trace().real();
}

ComplexMatrix ObserverModel::rhs(const ComplexMatrix& rho_hat, FieldValue field, double measured,
                                 Direction direction) const {
    const double gain = direction == Direction::forward ? gains_.forward : gains_.backward;
    ComplexMatrix out = lindblad_rhs(rho_hat, hamiltonian(field), observable_, gamma_big_, direction);
    out += (gain * (predicted(rho_hat) - measured)) * observable_;
    return out;
}

ComplexMatrix observer_rhs_forward(const ComplexMatrix& rho_hat, FieldValue field, double measured,
                                   const PhysicsConfig& cfg) {
    return ObserverModel(cfg, default_gains(cfg)).rhs(rho_hat, field, measured, Direction::forward);
}

ComplexMatrix observer_rhs_forward(const ComplexMatrix& rho_hat, double t, const ControlField& field,
                                   double measured, const PhysicsConfig& cfg) {
    return observer_rhs_forward(rho_hat, field.at(t, Direction::forward), measured, cfg);
}

ComplexMatrix observer_rhs_backward(const ComplexMatrix& rho_hat, FieldValue reflected_field,
                                    double reflected_measured, const PhysicsConfig& cfg) {
    return ObserverModel(cfg, default_gains(cfg)).rhs(rho_hat, reflected_field, reflected_measured,
                                                      Direction::backward);
}

ComplexMatrix observer_rhs_backward(const ComplexMatrix& rho_hat, double t, const ControlField& field,
                                    double reflected_measured, const PhysicsConfig& cfg) {
    return observer_rhs_backward(rho_hat, field.at(t, Direction::backward), reflected_measured, cfg);
}

PassTrace run_pass(ObserverState& state, const MeasurementRecord& record, const FieldSamples& fields,
                   const ObserverModel& model, const PhysicsConfig& cfg, std::span<const ComplexMatrix> truth) {
    const int n = cfg.steps_per_pass;
    const int half = n / 2;
    const double dt = cfg.dt();
    const bool forward = state.direction == Direction::forward;
    const bool with_truth = !truth.empty();
    const bool bloch = with_truth && cfg.spin.is_qubit();
    auto record_index = [&](int offset) { return forward ? offset : n - offset; };

    PassTrace pass;
    pass.iteration = state.iteration;
    pass.direction = state.direction;
    pass.t_global_start = (2.0 * state.iteration + (forward ? 0.0 : 1.0)) * cfg.t_horizon;
    pass.step = 2.0 * dt;
    pass.start = state.rho_hat;
    pass.residual.reserve(static_cast<std::size_t>(half) + 1);

    const Complex start_trace = state.rho_hat.trace();
    const double norm_limit =
        std::exp(tol::kBlowupRate * cfg.gamma_big * cfg.t_horizon) * std::max(1.0, state.rho_hat.norm());

    auto record_node = [&](int j) {
        const auto idx = static_cast<std::size_t>(record_index(2 * j));
        pass.residual.push_back(model.predicted(state.rho_hat) - record.values[idx]);
        pass.max_trace_drift = std::max(pass.max_trace_drift, std::abs(state.rho_hat.trace() - start_trace));
        pass.max_norm = std::max(pass.max_norm, state.rho_hat.norm());
        if (!with_truth) return;
        const ComplexMatrix err = state.rho_hat - truth[idx];
        pass.v.push_back(lyapunov_v(hermitian_part(err)));
        if (bloch) {
            const BlochVector b = bloch_decompose(hermitian_part(err));
            pass.x.push_back(b.x);
            pass.y.push_back(b.y);
            pass.z.push_back(b.z);
        } else {
            pass.z.push_back((model.observable() * err).trace().real());
        }
    };

    auto rhs = [&](const ComplexMatrix& rho, double s) {
        const auto idx = static_cast<std::size_t>(record_index(static_cast<int>(std::lround(s / dt))));
        return model.rhs(rho, fields.nodes[idx], record.values[idx], state.direction);
    };

    auto fail = [&](const std::string& why) {
        std::ostringstream os;
        os << "observer blowup in iteration " << state.iteration << " (" << to_string(state.direction)
           << " pass, t=" << state.t_local << "): " << why;
        throw Error(ErrorCode::blowup, os.str());
    };

    record_node(0);
    for (int j = 0; j < half; ++j) {
        StepDrift drift;
        try {
            state.rho_hat = rk4_step_hermitian(state.rho_hat, j * pass.step, pass.step, rhs, &drift);
        } catch (const Error& e) {
            fail(e.what());
        }
        state.t_local = (j + 1) * pass.step;
        pass.max_hermitian_drift = std::max(pass.max_hermitian_drift, drift.hermitian);
        if (state.rho_hat.norm() > norm_limit) {
            std::ostringstream os;
            os << "state norm " << state.rho_hat.norm() << " exceeds " << norm_limit;
            fail(os.str());
        }
        record_node(j + 1);
    }
    pass.end = state.rho_hat;
    return pass;
}

std::vector<ErrorSample> BfnRun::z_trace() const {
    std::vector<ErrorSample> out;
    for (std::size_t p = 0; p < passes.size(); ++p) {
        const PassTrace& pass = passes[p];
        for (std::size_t j = (p == 0 ? 0 : 1); j < pass.z.size(); ++j) {
            out.push_back({pass.t_global(j), pass.v[j], pass.z[j]});
        }
    }
    return out;
}

double nudging_weight(double t_global, double gamma_big, double t_horizon) {
    const double period = 2.0 * t_horizon;
    const double k = std::floor(t_global / period);
    const double local = t_global - k * period;
    if (local < t_horizon) return std::exp(4.0 * gamma_big * local);
    return std::exp(-4.0 * gamma_big * (local - period));
}

BfnRun run_bfn(const MeasurementRecord& record, const FieldSamples& fields, const PhysicsConfig& cfg,
               const BfnOptions& options, std::span<const ComplexMatrix> truth) {
    cfg.validate();
    if (options.n_iterations < 1) throw Error(ErrorCode::invalid_argument, "n_iterations must be >= 1");
    record.check_grid(cfg);
    const auto nodes = static_cast<std::size_t>(cfg.steps_per_pass) + 1;
    if (fields.nodes.size() != nodes) {
        throw Error(ErrorCode::grid_mismatch, "field samples do not match the record grid");
    }
    if (!truth.empty() && truth.size() != nodes) {
        throw Error(ErrorCode::grid_mismatch, "truth trajectory does not match the record grid");
    }

    const int d = cfg.dim();
    const ComplexMatrix initial = options.initial ? DensityMatrix(*options.initial).matrix()
                                                  : DensityMatrix::maximally_mixed(d).matrix();
    if (initial.rows() != d) throw Error(ErrorCode::dimension_mismatch, "initial observer has wrong dimension");

    const InjectionGains gains = options.gains.value_or(default_gains(cfg));
    const ObserverModel model(cfg, gains);

    BfnRun run{.final_estimate = DensityMatrix::maximally_mixed(d), .raw_final = initial, .gains = gains};
    const bool with_truth = !truth.empty();
    ObserverState state{initial, 0, Direction::forward, 0.0};

    auto note_estimate = [&](const ComplexMatrix& rho_hat) {
        run.estimates.push_back(rho_hat);
        run.min_eigenvalues.push_back(min_eigenvalue(rho_hat));
        if (with_truth) run.vk.push_back(lyapunov_v(hermitian_part(rho_hat - truth[0])));
    };

    const auto wall_start = std::chrono::steady_clock::now();
    for (int k = 0; k < options.n_iterations; ++k) {
        const auto iter_start = std::chrono::steady_clock::now();
        note_estimate(state.rho_hat);

        state.iteration = k;
        state.direction = Direction::forward;
        state.t_local = 0.0;
        PassTrace fwd = run_pass(state, record, fields, model, cfg, truth);
        state.direction = Direction::backward;
        state.t_local = 0.0;
        PassTrace bwd = run_pass(state, record, fields, model, cfg, truth);

        const double scale = 2.0 * cfg.gamma_small;
        run.surrogate_residuals.push_back(
            scale * (weighted_integral(fwd.residual, fwd, cfg.gamma_big, cfg.t_horizon) +
                     weighted_integral(bwd.residual, bwd, cfg.gamma_big, cfg.t_horizon)));
        if (with_truth) {
            run.weighted_residuals.push_back(scale * (weighted_integral(fwd.z, fwd, cfg.gamma_big, cfg.t_horizon) +
                                                      weighted_integral(bwd.z, bwd, cfg.gamma_big, cfg.t_horizon)));
        }
        run.passes.push_back(std::move(fwd));
        run.passes.push_back(std::move(bwd));
        run.iterations_run = k + 1;
        run.iteration_seconds.push_back(
            std::chrono::duration<double>(std::chrono::steady_clock::now() - iter_start).count());

        if (options.early_stop_residual > 0.0 && run.surrogate_residuals.back() < options.early_stop_residual) {
            run.stopped_early = k + 1 < options.n_iterations;
            break;
        }
    }
    note_estimate(state.rho_hat);
    run.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_start).count();

    run.raw_final = state.rho_hat;
    run.final_estimate = psd_project(state.rho_hat);
    if (with_truth) run.fidelity = fidelity(run.final_estimate, DensityMatrix(truth[0]));
    return run;
}

}  // namespace qbfn

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

#include <optional>
#include <span>
#include <vector>

#include "qbfn/config.hpp"
#include "qbfn/controls.hpp"
#include "qbfn/dynamics.hpp"
#include "qbfn/qops.hpp"

namespace qbfn {

/// Output-injection gains: the observer adds gain * O * (yhat - y).
/// Spin 1/2 uses -(Gamma + gamma) forward and +(Gamma - gamma) backward;
/// higher spins use -gamma in both directions.
struct InjectionGains {
    double forward = 0.0;
    double backward = 0.0;
};

InjectionGains default_gains(const PhysicsConfig& cfg);

/// Observer vector field with the operators of one configuration cached.
class ObserverModel {
public:
    ObserverModel(const PhysicsConfig& cfg, InjectionGains gains);

    const ComplexMatrix& observable() const { return observable_; }
    const InjectionGains& gains() const { return gains_; }
    ComplexMatrix hamiltonian(FieldValue field) const;
    /// tr(O rho_hat).
    double predicted(const ComplexMatrix& rho_hat) const;
    /// For Direction::backward, `field` and `measured` must already be the
    /// values at the reflected time T - t.
    ComplexMatrix rhs(const ComplexMatrix& rho_hat, FieldValue field, double measured, Direction direction) const;

private:
    double gamma_big_;
    InjectionGains gains_;
    ComplexMatrix observable_;
    ComplexMatrix drive_x_;
    ComplexMatrix drive_y_;
    ComplexMatrix static_;
};

ComplexMatrix observer_rhs_forward(const ComplexMatrix& rho_hat, FieldValue field, double measured,
                                   const PhysicsConfig& cfg);
ComplexMatrix observer_rhs_forward(const ComplexMatrix& rho_hat, double t, const ControlField& field,
                                   double measured, const PhysicsConfig& cfg);
ComplexMatrix observer_rhs_backward(const ComplexMatrix& rho_hat, FieldValue reflected_field,
                                    double reflected_measured, const PhysicsConfig& cfg);
ComplexMatrix observer_rhs_backward(const ComplexMatrix& rho_hat, double t, const ControlField& field,
                                    double reflected_measured, const PhysicsConfig& cfg);

struct ObserverState {
    ComplexMatrix rho_hat;
    int iteration = 0;
    Direction direction = Direction::forward;
    double t_local = 0.0;
};

/// One forward or backward sweep over [0, T]. The observer steps over pairs of
/// record intervals (h = 2T/N) so every RK4 stage lands on a record node.
struct PassTrace {
    int iteration = 0;
    Direction direction = Direction::forward;
    double t_global_start = 0.0;  // 2kT or (2k+1)T
    double step = 0.0;            // h
    std::vector<double> residual;  // yhat - y at each observer node
    // Error against the truth (empty in estimation mode). For spin 1/2,
    // x, y, z are the Bloch coordinates of rho_tilde; otherwise z = tr(O rho_tilde).
    std::vector<double> v;
    std::vector<double> x;
    std::vector<double> y;
    std::vector<double> z;
    double max_trace_drift = 0.0;      // |tr(rho_hat(t)) - tr(rho_hat(0))|
    double max_hermitian_drift = 0.0;  // largest raw per-step hermiticity defect
    double max_norm = 0.0;
    ComplexMatrix start;
    ComplexMatrix end;

    std::size_t nodes() const { return residual.size(); }
    double t_global(std::size_t j) const { return t_global_start + static_cast<double>(j) * step; }
};

PassTrace run_pass(ObserverState& state, const MeasurementRecord& record, const FieldSamples& fields,
                   const ObserverModel& model, const PhysicsConfig& cfg,
                   std::span<const ComplexMatrix> truth = {});

struct BfnOptions {
    int n_iterations = 10;
    std::optional<InjectionGains> gains;
    /// Stop once the weighted measurement residual of an iteration drops below
    /// this value; zero disables early stopping.
    double early_stop_residual = 0.0;
    /// Defaults to the maximally mixed state.
    std::optional<ComplexMatrix> initial;
};

struct ErrorSample {
    double t = 0.0;
    double v = 0.0;
    double z = 0.0;
};

struct BfnRun {
    DensityMatrix final_estimate;  // PSD projection of the last forward-start estimate
    ComplexMatrix raw_final;
    InjectionGains gains;
    std::vector<ComplexMatrix> estimates{};  // rho_hat^f_k(0), k = 0..n
    std::vector<double> min_eigenvalues{};   // of each estimate
    std::vector<PassTrace> passes{};         // forward/backward alternating
    std::vector<double> vk{};                // V_k, k = 0..n (truth only)
    std::vector<double> weighted_residuals{};   // 2 gamma int g Z^2 per iteration (truth only)
    std::vector<double> surrogate_residuals{};  // 2 gamma int g (yhat - y)^2 per iteration
    std::optional<double> fidelity{};           // against truth[0]
    std::vector<double> iteration_seconds{};
    double wall_seconds = 0.0;
    int iterations_run = 0;
    bool stopped_early = false;

    bool has_truth() const { return !vk.empty(); }
    /// Z(t), V(t) on the global axis [0, 2nT] (pass-boundary duplicates dropped).
    std::vector<ErrorSample> z_trace() const;
};

/// Back-and-forth nudging. `fields` is the observer's copy of the controls at
/// the record nodes. When `truth` (the N + 1 true states) is given, the error
/// diagnostics are filled in.
BfnRun run_bfn(const MeasurementRecord& record, const FieldSamples& fields, const PhysicsConfig& cfg,
               const BfnOptions& options, std::span<const ComplexMatrix> truth = {});

/// g(t) = exp(4 Gamma (t - 2kT)) on forward intervals and
/// exp(-4 Gamma (t - 2(k+1)T)) on backward ones.
double nudging_weight(double t_global, double gamma_big, double t_horizon);

}  // namespace qbfn

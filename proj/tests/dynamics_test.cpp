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

#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "qbfn/config.hpp"
#include "qbfn/controls.hpp"
#include "qbfn/dynamics.hpp"
#include "qbfn/error.hpp"
#include "test_util.hpp"

namespace qbfn {
namespace {

using testing::basis_ket;
using testing::random_density;
using testing::random_hermitian;

ControlField constant_field(double b0, double theta, double horizon = 1.0) {
    return ControlField(b0, synthesize_phase(std::vector<double>(10, theta), horizon));
}

ControlField zero_field(double horizon = 1.0) { return constant_field(0.0, 0.0, horizon); }

TEST(LindbladRhs, SigmaZEigenstateIsStationary) {
    const ComplexMatrix up = basis_ket(2, 0) * basis_ket(2, 0).adjoint();
    const ComplexMatrix r = lindblad_rhs(up, ComplexMatrix::Zero(2, 2), pauli(Axis::z), 0.25, Direction::forward);
    EXPECT_LT(max_abs(r), 1e-15);
}

TEST(LindbladRhs, DephasingShrinksX) {
    const double gamma = 0.25;
    const ComplexMatrix rho = 0.5 * (identity(2) + pauli(Axis::x));
    const ComplexMatrix r = lindblad_rhs(rho, ComplexMatrix::Zero(2, 2), pauli(Axis::z), gamma, Direction::forward);
    EXPECT_LT(max_abs(r + gamma * pauli(Axis::x)), 1e-15);
    EXPECT_NEAR(bloch_decompose(r).x, -2.0 * gamma * 1.0, 1e-15);
}

TEST(LindbladRhs, QubitReducesToPauliDephasingForm) {
    std::mt19937_64 rng(1);
    const ComplexMatrix sz = pauli(Axis::z);
    for (int trial = 0; trial < 10; ++trial) {
        const ComplexMatrix rho = random_hermitian(2, rng);
        const ComplexMatrix h = random_hermitian(2, rng);
        const Complex i(0.0, 1.0);
        const ComplexMatrix expected = -i * (h * rho - rho * h) + 0.3 * (sz * rho * sz - rho);
        EXPECT_LT(max_abs(lindblad_rhs(rho, h, sz, 0.3, Direction::forward) - expected), 1e-13);
        EXPECT_LT(max_abs(lindblad_rhs(rho, h, sz, 0.3, Direction::backward) + expected), 1e-13);
    }
}

TEST(LindbladRhs, TraceAnnihilation) {
    std::mt19937_64 rng(2);
    for (int dim : {2, 3, 4}) {
        for (Direction dir : {Direction::forward, Direction::backward}) {
            for (int trial = 0; trial < 20; ++trial) {
                const ComplexMatrix a = random_hermitian(dim, rng);
                const ComplexMatrix h = random_hermitian(dim, rng);
                const ComplexMatrix o = random_hermitian(dim, rng);
                EXPECT_LT(std::abs(lindblad_rhs(a, h, o, 0.7, dir).trace()), 1e-12);
            }
        }
    }
}

TEST(LindbladRhs, DimensionMismatch) {
    EXPECT_THROW(lindblad_rhs(identity(2), identity(3), identity(2), 1.0, Direction::forward), Error);
}

TEST(Hamiltonian, QubitConvention) {
    const PhysicsConfig cfg = qubit_preset_physics();
    EXPECT_LT(max_abs(hamiltonian(FieldValue{1.0, 0.0}, cfg) - pauli(Axis::x)), 1e-15);
    EXPECT_LT(max_abs(hamiltonian(FieldValue{0.0, 2.0}, cfg) - 2.0 * pauli(Axis::y)), 1e-15);
}

TEST(Hamiltonian, SpinOneStaticTerm) {
    PhysicsConfig cfg = spin1_preset_physics();
    ASSERT_EQ(cfg.beta, 10.0);
    ASSERT_EQ(cfg.gamma_big, 1.0);
    const ComplexMatrix fx = angular_momentum(Spin(2), Axis::x);
    EXPECT_LT(max_abs(hamiltonian(FieldValue{0.0, 0.0}, cfg) - 10.0 * fx * fx), 1e-13);
}

TEST(Hamiltonian, HermitianAndRangeChecked) {
    const PhysicsConfig cfg = spin1_preset_physics();
    const ControlField f = sample_random_field(cfg, 3);
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 50; ++i) EXPECT_TRUE(is_hermitian(hamiltonian_at(u(rng), f, cfg)));
    EXPECT_THROW(hamiltonian_at(-0.5, f, cfg), Error);
    EXPECT_THROW(hamiltonian_at(1.5, f, cfg), Error);
}

TEST(Rk4, ZeroRhsKeepsState) {
    const ComplexMatrix s = 0.5 * (identity(2) + 0.3 * pauli(Axis::y));
    const ComplexMatrix next =
        rk4_step(s, 0.0, 0.1, [](const ComplexMatrix& x, double) { return ComplexMatrix::Zero(x.rows(), x.cols()); });
    EXPECT_EQ(next, s);
}

TEST(Rk4, ScalarExponentialStep) {
    const double x = rk4_step(1.0, 0.0, 0.1, [](double v, double) { return v; });
    // 1 + h + h^2/2 + h^3/6 + h^4/24 at h = 0.1.
    EXPECT_NEAR(x, 1.10517083333333, 1e-13);
}

TEST(Rk4, FourthOrderOnExponential) {
    auto integrate = [](int n) {
        double x = 1.0;
        const double h = 1.0 / n;
        for (int i = 0; i < n; ++i) x = rk4_step(x, i * h, h, [](double v, double) { return v; });
        return std::abs(x - std::exp(1.0));
    };
    const double ratio = integrate(10) / integrate(20);
    EXPECT_NEAR(ratio, 16.0, 1.0);
}

TEST(Rk4, NonFiniteAborts) {
    auto bad = [](const ComplexMatrix& x, double) {
        return ComplexMatrix::Constant(x.rows(), x.cols(), Complex(std::nan(""), 0.0));
    };
    EXPECT_THROW(rk4_step_hermitian(identity(2), 0.0, 0.1, bad), Error);
}

TEST(SimulateTruth, MaximallyMixedGivesZeroRecord) {
    const PhysicsConfig cfg = qubit_preset_physics();
    const TruthRun run = simulate_truth(DensityMatrix::maximally_mixed(2), sample_random_field(cfg, 1), cfg);
    ASSERT_EQ(run.record.size(), 2001u);
    for (double y : run.record.clean_values) EXPECT_NEAR(y, 0.0, 1e-14);
}

TEST(SimulateTruth, EigenstateWithoutFieldGivesUnitRecord) {
    const PhysicsConfig cfg = qubit_preset_physics();
    const TruthRun run = simulate_truth(DensityMatrix::pure(basis_ket(2, 0)), zero_field(), cfg);
    for (double y : run.record.values) EXPECT_NEAR(y, 1.0, 1e-14);
}

TEST(SimulateTruth, TraceHermiticityPositivity) {
    const PhysicsConfig cfg = qubit_preset_physics();
    std::mt19937_64 rng(5);
    const Eigen::VectorXcd psi = testing::random_unitary(2, rng).col(0);
    const ControlField f = sample_random_field(cfg, 5);
    const TruthRun run = simulate_truth(DensityMatrix::pure(psi), f, cfg);
    for (const auto& rho : run.trajectory) {
        EXPECT_NEAR(rho.trace().real(), 1.0, 1e-9);
        EXPECT_LT(hermiticity_defect(rho), 1e-10);
        EXPECT_GT(min_eigenvalue(rho), -1e-8);
    }
    EXPECT_EQ(run.record.values, run.record.clean_values);
    EXPECT_NO_THROW(run.record.check_grid(cfg));
}

TEST(SimulateTruth, RawStepHermiticityDrift) {
    const PhysicsConfig cfg = spin1_preset_physics();
    const ControlField f = sample_random_field(cfg, 2);
    const ComplexMatrix jump = observable(cfg);
    std::mt19937_64 rng(6);
    ComplexMatrix rho = random_density(3, rng).matrix();
    auto rhs = [&](const ComplexMatrix& r, double t) {
        return lindblad_rhs(r, hamiltonian(f.at(t), cfg), jump, cfg.gamma_big, Direction::forward);
    };
    for (int i = 0; i < cfg.steps_per_pass; ++i) {
        StepDrift drift;
        rho = rk4_step_hermitian(rho, i * cfg.dt(), cfg.dt(), rhs, &drift);
        ASSERT_LT(drift.hermitian, 1e-10);
        ASSERT_LT(drift.trace, 1e-12);
    }
}

TEST(SimulateTruth, PurityDecaysWithoutField) {
    const PhysicsConfig cfg = qubit_preset_physics();
    const Eigen::Vector2cd psi(Complex(std::sqrt(0.3), 0.0), Complex(0.0, std::sqrt(0.7)));
    const TruthRun run = simulate_truth(DensityMatrix::pure(psi), zero_field(), cfg);
    double last = 1.0 + 1e-12;
    for (const auto& rho : run.trajectory) {
        const double p = (rho * rho).trace().real();
        EXPECT_LE(p, last + 1e-14);
        last = p;
    }
    // Analytic: coherence decays as exp(-2 Gamma t).
    const double c0 = std::abs(run.trajectory.front()(0, 1));
    EXPECT_NEAR(std::abs(run.trajectory.back()(0, 1)), c0 * std::exp(-2.0 * cfg.gamma_big), 1e-12);
}

TEST(SimulateTruth, RejectsNonPositiveInitialState) {
    const PhysicsConfig cfg = qubit_preset_physics();
    const DensityMatrix bad(0.5 * identity(2) + 0.8 * pauli(Axis::x));
    EXPECT_THROW(simulate_truth(bad, zero_field(), cfg), Error);
}

TEST(Integration, ConvergenceOrderUnderStepHalving) {
    PhysicsConfig cfg = qubit_preset_physics();
    const ControlField f = sample_random_field(cfg, 8);
    const ComplexMatrix rho0 = DensityMatrix::pure(Eigen::Vector2cd(Complex(0.8, 0.0), Complex(0.36, 0.48))).matrix();
    auto final_state = [&](int n) {
        cfg.steps_per_pass = n;
        return integrate_master(rho0, f, cfg).back();
    };
    const ComplexMatrix ref = final_state(2000);
    const double e1 = (final_state(250) - ref).norm();
    const double e2 = (final_state(500) - ref).norm();
    EXPECT_NEAR(e1 / e2, 16.0, 2.0);
}

TEST(Integration, BackwardUndoesForward) {
    const PhysicsConfig cfg = qubit_preset_physics();
    ASSERT_LE(cfg.gamma_big * cfg.t_horizon, 0.25);
    const ControlField f = sample_random_field(cfg, 9);
    std::mt19937_64 rng(9);
    const ComplexMatrix rho0 = random_density(2, rng).matrix();
    const ComplexMatrix rho_t = integrate_master(rho0, f, cfg, Direction::forward).back();
    const ComplexMatrix back = integrate_master(rho_t, f, cfg, Direction::backward).back();
    EXPECT_LT((back - rho0).norm(), 1e-9);
}

TEST(Integration, SpinOneTracePreserved) {
    const PhysicsConfig cfg = spin1_preset_physics();
    const ControlField f = sample_random_field(cfg, 1);
    for (const auto& rho : integrate_master(DensityMatrix::maximally_mixed(3).matrix(), f, cfg)) {
        EXPECT_NEAR(rho.trace().real(), 1.0, 1e-9);
    }
}

TEST(Noise, ZeroLevelLeavesRecord) {
    const PhysicsConfig cfg = qubit_preset_physics();
    const TruthRun run = simulate_truth(DensityMatrix::pure(basis_ket(2, 0)), sample_random_field(cfg, 1), cfg);
    EXPECT_EQ(add_noise(run.record, 0.0, 5).values, run.record.values);
}

TEST(Noise, StandardDeviationIsLevelTimesRms) {
    const PhysicsConfig cfg = qubit_preset_physics();
    const Eigen::Vector2cd psi(Complex(std::sqrt(0.5), 0.0), Complex(std::sqrt(0.5), 0.0));
    const TruthRun run = simulate_truth(DensityMatrix::pure(psi), sample_random_field(cfg, 1), cfg);
    const double scale = rms(run.record.clean_values);
    ASSERT_GT(scale, 0.0);
    const MeasurementRecord noisy = add_noise(run.record, 0.1, 77);
    double s2 = 0.0;
    for (std::size_t i = 0; i < noisy.size(); ++i) {
        const double e = (noisy.values[i] - noisy.clean_values[i]) / scale;
        s2 += e * e;
    }
    EXPECT_NEAR(std::sqrt(s2 / noisy.size()), 0.1, 0.005);
    EXPECT_EQ(noisy.clean_values, run.record.clean_values);
}

TEST(Noise, Deterministic) {
    const PhysicsConfig cfg = qubit_preset_physics();
    const TruthRun run = simulate_truth(DensityMatrix::pure(basis_ket(2, 0)), sample_random_field(cfg, 1), cfg);
    EXPECT_EQ(add_noise(run.record, 0.1, 3).values, add_noise(run.record, 0.1, 3).values);
    EXPECT_NE(add_noise(run.record, 0.1, 3).values, add_noise(run.record, 0.1, 4).values);
    EXPECT_THROW(add_noise(run.record, -0.1, 3), Error);
}

TEST(Record, GridMismatchDetected) {
    PhysicsConfig cfg = qubit_preset_physics();
    const TruthRun run = simulate_truth(DensityMatrix::maximally_mixed(2), zero_field(), cfg);
    cfg.steps_per_pass = 1000;
    try {
        run.record.check_grid(cfg);
        FAIL() << "expected grid mismatch";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::grid_mismatch);
    }
}

TEST(Config, Validation) {
    PhysicsConfig cfg = qubit_preset_physics();
    EXPECT_NO_THROW(cfg.validate());
    cfg.steps_per_pass = 2001;
    EXPECT_THROW(cfg.validate(), Error);
    cfg = qubit_preset_physics();
    cfg.gamma_small = 0.0;
    EXPECT_THROW(cfg.validate(), Error);
    cfg = qubit_preset_physics();
    cfg.t_horizon = -1.0;
    EXPECT_THROW(cfg.validate(), Error);
}

TEST(Config, DerivedSeedsAreDistinct) {
    EXPECT_NE(derive_seed(1, SeedStream::control), derive_seed(1, SeedStream::truth_state));
    EXPECT_NE(derive_seed(1, SeedStream::meas_noise), derive_seed(2, SeedStream::meas_noise));
    EXPECT_EQ(derive_seed(5, SeedStream::field_noise), derive_seed(5, SeedStream::field_noise));
}

}  // namespace
}  // namespace qbfn

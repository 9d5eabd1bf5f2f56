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

// Every numerical tolerance used by the library lives here.
namespace qbfn::tol {

// Density matrices: ||M - M^dag||_max <= kHermitianRel * ||M||_max.
inline constexpr double kHermitianRel = 1e-12;
inline constexpr double kTrace = 1e-10;
// Eigenvalues below this are treated as zero before taking square roots.
inline constexpr double kEigenClamp = 1e-12;
// Imaginary part allowed in tr(O rho) for Hermitian rho.
inline constexpr double kExpectImag = 1e-10;
// Simulated true states must keep eigenvalues above -kPositivity.
inline constexpr double kPositivity = 1e-8;

// Observer drift bounds per pass.
inline constexpr double kObserverTrace = 1e-9;
inline constexpr double kObserverHermitian = 1e-10;
// Backward-pass blowup guard: ||rho_hat|| <= exp(kBlowupRate * Gamma * T) * max(1, ||start||).
inline constexpr double kBlowupRate = 5.0;

// |Bx(0) By'(0) - By(0) Bx'(0)| < kPreconditionRel * B0^2 counts as a violation.
inline constexpr double kPreconditionRel = 1e-6;
inline constexpr int kPreconditionRetries = 100;

// Oracle: numerical rank threshold (relative to sigma_max) and least-squares cutoff.
inline constexpr double kRankRel = 1e-6;
inline constexpr double kSvdCutoff = 1e-8;

// Time arguments may overshoot [0, T] by this fraction of T (grid round-off).
inline constexpr double kTimeSlack = 1e-9;

}  // namespace qbfn::tol

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

#include <vector>

#include <Eigen/Dense>

#include "qbfn/config.hpp"
#include "qbfn/controls.hpp"
#include "qbfn/dynamics.hpp"
#include "qbfn/qops.hpp"

namespace qbfn {

/// The master equation is linear in rho, so the record is an affine function
/// of the initial state: y = baseline + columns * c for
/// rho(0) = Id/d + sum_j c_j E_j with E_j the orthonormal Gell-Mann basis.
struct LinearResponse {
    Eigen::MatrixXd columns;  // (N + 1) x (d^2 - 1)
    Eigen::VectorXd baseline;  // record of Id/d
    std::vector<ComplexMatrix> basis;
    Eigen::VectorXd singular_values;
    int rank = 0;  // singular values above tol::kRankRel * sigma_max
    double condition = 0.0;

    int unknowns() const { return static_cast<int>(columns.cols()); }
    bool observable() const { return rank == unknowns(); }
};

/// Columns are simulated independently in parallel (OpenMP).
LinearResponse build_response(const ControlField& field, const PhysicsConfig& cfg, double epsilon = 1e-2);
/// Serial reference; produces bitwise-identical results.
LinearResponse build_response_serial(const ControlField& field, const PhysicsConfig& cfg, double epsilon = 1e-2);

struct Reconstruction {
    DensityMatrix estimate;  // PSD-projected
    ComplexMatrix raw;
    Eigen::VectorXd coefficients;
    double residual_norm = 0.0;
    double condition = 0.0;
    int rank = 0;
};

/// Least squares through the SVD with relative cutoff tol::kSvdCutoff. Throws
/// Error(unobservable) when the response is rank deficient.
Reconstruction reconstruct(const MeasurementRecord& record, const LinearResponse& response);

}  // namespace qbfn

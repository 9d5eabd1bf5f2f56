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

#include "qbfn/oracle.hpp"

#include <limits>
#include <sstream>

#include "qbfn/error.hpp"

namespace qbfn {
namespace {

Eigen::VectorXd simulate_record(const ComplexMatrix& rho0, const ControlField& field, const PhysicsConfig& cfg) {
    const MeasurementRecord r = make_record(integrate_master(rho0, field, cfg), cfg);
    return Eigen::Map<const Eigen::VectorXd>(r.clean_values.data(), static_cast<Eigen::Index>(r.clean_values.size()));
}

LinearResponse prepare(const PhysicsConfig& cfg, double epsilon) {
    cfg.validate();
    if (!(epsilon > 0.0)) throw Error(ErrorCode::invalid_argument, "response epsilon must be > 0");
    LinearResponse response;
    response.basis = gell_mann_basis(cfg.dim());
    response.columns.resize(cfg.steps_per_pass + 1, static_cast<Eigen::Index>(response.basis.size()));
    return response;
}

void finish(LinearResponse& response) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(response.columns);
    response.singular_values = svd.singularValues();
    const auto& s = response.singular_values;
    const double smax = s.size() > 0 ? s(0) : 0.0;
    response.rank = smax > 0.0 ? static_cast<int>((s.array() > tol::kRankRel * smax).count()) : 0;
    const double smin = s.size() > 0 ? s(s.size() - 1) : 0.0;
    response.condition = smin > 0.0 ? smax / smin : std::numeric_limits<double>::infinity();
}

}  // namespace

LinearResponse build_response_serial(const ControlField& field, const PhysicsConfig& cfg, double epsilon) {
    LinearResponse response = prepare(cfg, epsilon);
    const ComplexMatrix mixed = DensityMatrix::maximally_mixed(cfg.dim()).matrix();
    response.baseline = simulate_record(mixed, field, cfg);
    for (Eigen::Index j = 0; j < response.columns.cols(); ++j) {
        const Eigen::VectorXd y = simulate_record(mixed + epsilon * response.basis[static_cast<std::size_t>(j)], field, cfg);
        response.columns.col(j) = (y - response.baseline) / epsilon;
    }
    finish(response);
    return response;
}

LinearResponse build_response(const ControlField& field, const PhysicsConfig& cfg, double epsilon) {
    LinearResponse response = prepare(cfg, epsilon);
    const ComplexMatrix mixed = DensityMatrix::maximally_mixed(cfg.dim()).matrix();
    response.baseline = simulate_record(mixed, field, cfg);
    const auto cols = static_cast<int>(response.columns.cols());
    std::vector<Eigen::VectorXd> records(static_cast<std::size_t>(cols));
    bool failed = false;
    std::string failure;
#pragma omp parallel for schedule(dynamic)
    for (int j = 0; j < cols; ++j) {
        try {
            records[static_cast<std::size_t>(j)] =
                simulate_record(mixed + epsilon * response.basis[static_cast<std::size_t>(j)], field, cfg);
        } catch (const std::exception& e) {
#pragma omp critical(qbfn_response_failure)
            {
                failed = true;
                failure = e.what();
            }
        }
    }
    if (failed) throw Error(ErrorCode::integration, "response column failed: " + failure);
    for (int j = 0; j < cols; ++j) {
        response.columns.col(j) = (records[static_cast<std::size_t>(j)] - response.baseline) / epsilon;
    }
    finish(response);
    return response;
}

Reconstruction reconstruct(const MeasurementRecord& record, const LinearResponse& response) {
    const auto rows = response.columns.rows();
    if (static_cast<Eigen::Index>(record.values.size()) != rows) {
        throw Error(ErrorCode::grid_mismatch, "record length does not match the response matrix");
    }
    if (!response.observable()) {
        std::ostringstream os;
        os << "control is not informative: response rank " << response.rank << " < " << response.unknowns();
        throw Error(ErrorCode::unobservable, os.str());
    }
    const Eigen::Map<const Eigen::VectorXd> y(record.values.data(), rows);
    const Eigen::VectorXd rhs = y - response.baseline;

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(response.columns, Eigen::ComputeThinU | Eigen::ComputeThinV);
    svd.setThreshold(tol::kSvdCutoff);
    const Eigen::VectorXd c = svd.solve(rhs);

    const int d = static_cast<int>(response.basis.front().rows());
    ComplexMatrix raw = DensityMatrix::maximally_mixed(d).matrix();
    for (Eigen::Index j = 0; j < c.size(); ++j) raw += c(j) * response.basis[static_cast<std::size_t>(j)];
    raw = hermitian_part(raw);

    return Reconstruction{psd_project(raw), raw, c, (response.columns * c - rhs).norm(), response.condition,
                          response.rank};
}

}  // namespace qbfn

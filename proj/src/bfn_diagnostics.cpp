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

#include "qbfn/bfn_diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qbfn/error.hpp"

namespace qbfn {
namespace {

void require_truth(const BfnRun& run) {
    if (!run.has_truth()) throw Error(ErrorCode::missing_truth, "diagnostics need a run with a truth trajectory");
}

}  // namespace

LyapunovReport lyapunov_diagnostics(const BfnRun& run, const PhysicsConfig& cfg) {
    require_truth(run);
    LyapunovReport report;
    report.strictly_decreasing = true;
    report.non_increasing = true;
    for (std::size_t k = 0; k + 1 < run.vk.size(); ++k) {
        DecreaseCheck c;
        c.k = static_cast<int>(k);
        c.dv_actual = run.vk[k + 1] - run.vk[k];
        c.dv_predicted = -run.weighted_residuals[k];
        const double scale = std::max(std::abs(c.dv_predicted), std::abs(c.dv_actual));
        const double denom = c.dv_predicted != 0.0 ? std::abs(c.dv_predicted) : scale;
        c.rel_mismatch = denom > 0.0 ? std::abs(c.dv_actual - c.dv_predicted) / denom : 0.0;
        report.max_rel_mismatch = std::max(report.max_rel_mismatch, c.rel_mismatch);
        if (!(run.vk[k + 1] < run.vk[k])) report.strictly_decreasing = false;
        if (run.vk[k + 1] > run.vk[k]) report.non_increasing = false;
        report.iterations.push_back(c);
    }

    const double gamma = cfg.gamma_big;
    const double t = cfg.t_horizon;
    report.g_min = std::numeric_limits<double>::infinity();
    double worst_start = 1.0;
    for (const PassTrace& pass : run.passes) {
        for (std::size_t j = 0; j < pass.nodes(); ++j) {
            report.g_min = std::min(report.g_min, nudging_weight(pass.t_global(j), gamma, t));
        }
        if (pass.direction == Direction::forward) {
            const double g0 = nudging_weight(pass.t_global_start, gamma, t);
            if (std::abs(g0 - 1.0) > std::abs(worst_start - 1.0)) worst_start = g0;
        } else {
            report.g_mid_backward_value = nudging_weight(pass.t_global_start, gamma, t);
        }
    }
    report.g_at_period_start = worst_start;
    report.g_mid_forward_limit = std::exp(4.0 * gamma * t);

    for (std::size_t p = 0; p < run.passes.size(); ++p) {
        const PassTrace& pass = run.passes[p];
        const double vk = run.vk[static_cast<std::size_t>(pass.iteration)];
        if (vk <= 0.0) continue;
        for (double v : pass.v) report.max_within_period_ratio = std::max(report.max_within_period_ratio, v / vk);
    }
    return report;
}

DerivativeIdentityReport derivative_identity_check(const BfnRun& run, const PhysicsConfig& cfg) {
    require_truth(run);
    if (!cfg.spin.is_qubit()) {
        throw Error(ErrorCode::invalid_argument, "the dV/dt identities are stated for spin 1/2");
    }
    DerivativeIdentityReport report;
    const double gb = cfg.gamma_big;
    const double gs = cfg.gamma_small;
    for (const PassTrace& pass : run.passes) {
        const double sign = pass.direction == Direction::forward ? -1.0 : 1.0;
        double& worst = pass.direction == Direction::forward ? report.max_rel_forward : report.max_rel_backward;
        for (std::size_t j = 1; j + 1 < pass.v.size(); ++j) {
            const double fd = (pass.v[j + 1] - pass.v[j - 1]) / (2.0 * pass.step);
            const double z2 = pass.z[j] * pass.z[j];
            const double analytic = sign * 4.0 * gb * pass.v[j] - 2.0 * gs * z2;
            const double scale = 4.0 * gb * pass.v[j] + 2.0 * gs * z2;
            if (scale == 0.0) continue;
            worst = std::max(worst, std::abs(fd - analytic) / scale);
            ++report.samples;
        }
    }
    return report;
}

std::vector<ProofChainPoint> proof_chain(const BfnRun& run, const ControlField& field) {
    require_truth(run);
    const FieldValue b = field.at(0.0);
    const FieldValue db = field.rate(0.0);
    std::vector<ProofChainPoint> out;
    for (const PassTrace& pass : run.passes) {
        if (pass.direction != Direction::forward) continue;
        if (pass.x.empty() || pass.z.size() < 4) {
            throw Error(ErrorCode::invalid_argument, "proof_chain needs spin-1/2 traces with >= 4 nodes");
        }
        const double h = pass.step;
        const auto& z = pass.z;
        ProofChainPoint p;
        p.k = pass.iteration;
        p.z = z[0];
        p.z_dot = (-3.0 * z[0] + 4.0 * z[1] - z[2]) / (2.0 * h);
        p.z_ddot = (2.0 * z[0] - 5.0 * z[1] + 4.0 * z[2] - z[3]) / (h * h);
        p.x = pass.x[0];
        p.y = pass.y[0];
        p.field_combination = b.bx * p.y - b.by * p.x;
        p.rate_combination = db.bx * p.y - db.by * p.x;
        out.push_back(p);
    }
    // The state after the last backward pass starts iteration n.
    if (!run.passes.empty() && run.passes.back().direction == Direction::backward) {
        const PassTrace& last = run.passes.back();
        ProofChainPoint p;
        p.k = last.iteration + 1;
        p.z = last.z.back();
        p.x = last.x.back();
        p.y = last.y.back();
        p.z_dot = std::numeric_limits<double>::quiet_NaN();
        p.z_ddot = std::numeric_limits<double>::quiet_NaN();
        p.field_combination = b.bx * p.y - b.by * p.x;
        p.rate_combination = db.bx * p.y - db.by * p.x;
        out.push_back(p);
    }
    return out;
}

bool envelope_decreasing(std::span<const double> vk) {
    if (vk.size() < 2) return false;
    if (!(vk.back() < vk.front())) return false;
    const double n = static_cast<double>(vk.size());
    double sk = 0.0, sl = 0.0, skk = 0.0, skl = 0.0;
    for (std::size_t k = 0; k < vk.size(); ++k) {
        const double kk = static_cast<double>(k);
        const double l = std::log(std::max(vk[k], std::numeric_limits<double>::min()));
        sk += kk;
        sl += l;
        skk += kk * kk;
        skl += kk * l;
    }
    const double slope = (n * skl - sk * sl) / (n * skk - sk * sk);
    return slope < 0.0;
}

}  // namespace qbfn

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

#include "qbfn/controls.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "qbfn/error.hpp"

namespace qbfn {

NaturalCubicSpline::NaturalCubicSpline(std::vector<double> knots, std::vector<double> values)
    : knots_(std::move(knots)), values_(std::move(values)) {
    const std::size_t n = knots_.size();
    if (n < 4) throw Error(ErrorCode::invalid_argument, "cubic spline needs at least 4 knots");
    if (values_.size() != n) throw Error(ErrorCode::invalid_argument, "spline knots and values differ in length");
    for (std::size_t i = 0; i < n; ++i) {
        if (!std::isfinite(knots_[i]) || !std::isfinite(values_[i])) {
            throw Error(ErrorCode::invalid_argument, "spline data must be finite");
        }
        if (i > 0 && !(knots_[i] > knots_[i - 1])) {
            throw Error(ErrorCode::invalid_argument, "spline knots must be strictly increasing");
        }
    }

    // Tridiagonal system for the interior moments; natural ends fix M_0 = M_n-1 = 0.
    moments_.assign(n, 0.0);
    const std::size_t m = n - 2;
    std::vector<double> diag(m), upper(m), rhs(m);
    for (std::size_t k = 0; k < m; ++k) {
        const std::size_t i = k + 1;
        const double h0 = knots_[i] - knots_[i - 1];
        const double h1 = knots_[i + 1] - knots_[i];
        diag[k] = 2.0 * (h0 + h1);
        upper[k] = h1;
        rhs[k] = 6.0 * ((values_[i + 1] - values_[i]) / h1 - (values_[i] - values_[i - 1]) / h0);
    }
    // Thomas elimination; the sub-diagonal entry of row k is h_{k} = upper[k-1].
    for (std::size_t k = 1; k < m; ++k) {
        const double w = upper[k - 1] / diag[k - 1];
        diag[k] -= w * upper[k - 1];
        rhs[k] -= w * rhs[k - 1];
    }
    for (std::size_t k = m; k-- > 0;) {
        const double next = k + 1 < m ? moments_[k + 2] : 0.0;
        moments_[k + 1] = (rhs[k] - upper[k] * next) / diag[k];
    }
}

std::size_t NaturalCubicSpline::interval(double t) const {
    const auto it = std::upper_bound(knots_.begin() + 1, knots_.end() - 1, t);
    return static_cast<std::size_t>(it - knots_.begin()) - 1;
}

double NaturalCubicSpline::value(double t) const {
    const std::size_t i = interval(t);
    const double h = knots_[i + 1] - knots_[i];
    const double a = knots_[i + 1] - t;
    const double b = t - knots_[i];
    return moments_[i] * a * a * a / (6.0 * h) + moments_[i + 1] * b * b * b / (6.0 * h) +
           (values_[i] / h - moments_[i] * h / 6.0) * a + (values_[i + 1] / h - moments_[i + 1] * h / 6.0) * b;
}

double NaturalCubicSpline::derivative(double t) const {
    const std::size_t i = interval(t);
    const double h = knots_[i + 1] - knots_[i];
    const double a = knots_[i + 1] - t;
    const double b = t - knots_[i];
    return -moments_[i] * a * a / (2.0 * h) + moments_[i + 1] * b * b / (2.0 * h) -
           (values_[i] / h - moments_[i] * h / 6.0) + (values_[i + 1] / h - moments_[i + 1] * h / 6.0);
}

double NaturalCubicSpline::second_derivative(double t) const {
    const std::size_t i = interval(t);
    const double h = knots_[i + 1] - knots_[i];
    return (moments_[i] * (knots_[i + 1] - t) + moments_[i + 1] * (t - knots_[i])) / h;
}

ControlField::ControlField(double b0, NaturalCubicSpline phase)
    : b0_(b0), horizon_(0.0), phase_(std::move(phase)) {
    if (!(b0_ >= 0.0) || !std::isfinite(b0_)) throw Error(ErrorCode::invalid_argument, "B0 must be finite and >= 0");
    if (phase_.knots().front() != 0.0) {
        throw Error(ErrorCode::invalid_argument, "control phase must start at t = 0");
    }
    horizon_ = phase_.knots().back();
}

double ControlField::checked_time(double t) const {
    const double slack = tol::kTimeSlack * horizon_;
    if (!(t >= -slack && t <= horizon_ + slack)) {
        std::ostringstream os;
        os << "time " << t << " outside [0, " << horizon_ << "]";
        throw Error(ErrorCode::invalid_argument, os.str());
    }
    return std::clamp(t, 0.0, horizon_);
}

double ControlField::theta(double t) const { return phase_.value(checked_time(t)); }

FieldValue ControlField::at(double t, Direction direction) const {
    double s = checked_time(t);
    if (direction == Direction::backward) s = horizon_ - s;
    const double th = phase_.value(s);
    return {b0_ * std::cos(th), b0_ * std::sin(th)};
}

FieldValue ControlField::rate(double t) const {
    const double s = checked_time(t);
    const double th = phase_.value(s);
    const double dth = phase_.derivative(s);
    return {-b0_ * std::sin(th) * dth, b0_ * std::cos(th) * dth};
}

NaturalCubicSpline synthesize_phase(std::span<const double> knot_phases, double t_horizon) {
    if (knot_phases.size() < 4) throw Error(ErrorCode::invalid_argument, "at least 4 knot phases are required");
    if (!(t_horizon > 0.0)) throw Error(ErrorCode::invalid_argument, "T must be > 0");
    const std::size_t n = knot_phases.size();
    std::vector<double> times(n);
    for (std::size_t j = 0; j < n; ++j) times[j] = t_horizon * static_cast<double>(j) / static_cast<double>(n - 1);
    times.back() = t_horizon;
    return NaturalCubicSpline(std::move(times), {knot_phases.begin(), knot_phases.end()});
}

ControlField field_from_table(double b0, std::span<const double> times, std::span<const double> thetas) {
    return ControlField(b0, NaturalCubicSpline({times.begin(), times.end()}, {thetas.begin(), thetas.end()}));
}

FieldValue field_at(double t, const ControlField& field, Direction direction) { return field.at(t, direction); }

double check_observability_precondition(const ControlField& field) {
    const FieldValue b = field.at(0.0);
    const FieldValue db = field.rate(0.0);
    return b.bx * db.by - b.by * db.bx;
}

bool precondition_holds(const ControlField& field) {
    return std::abs(check_observability_precondition(field)) >= tol::kPreconditionRel * field.b0() * field.b0();
}

ControlField sample_random_field(const PhysicsConfig& cfg, std::uint64_t seed) {
    cfg.validate();
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
    std::vector<double> knots(static_cast<std::size_t>(cfg.n_knots));
    double last = 0.0;
    for (int attempt = 0; attempt < tol::kPreconditionRetries; ++attempt) {
        for (auto& k : knots) k = phase(rng);
        ControlField field(cfg.b0, synthesize_phase(knots, cfg.t_horizon));
        if (precondition_holds(field)) return field;
        last = check_observability_precondition(field);
    }
    std::ostringstream os;
    os << "no admissible control after " << tol::kPreconditionRetries
       << " draws (Bx(0)By'(0) - By(0)Bx'(0) = " << last << ")";
    throw Error(ErrorCode::precondition, os.str());
}

FieldSamples sample_field(const ControlField& field, const PhysicsConfig& cfg) {
    FieldSamples out;
    out.nodes.reserve(static_cast<std::size_t>(cfg.steps_per_pass) + 1);
    for (int i = 0; i <= cfg.steps_per_pass; ++i) out.nodes.push_back(field.at(i * cfg.dt()));
    return out;
}

FieldSamples add_field_noise(FieldSamples samples, double level, double b0, std::uint64_t seed) {
    if (!(level >= 0.0)) throw Error(ErrorCode::invalid_argument, "field noise level must be >= 0");
    if (level == 0.0) return samples;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, level * b0);
    for (auto& node : samples.nodes) {
        node.bx += noise(rng);
        node.by += noise(rng);
    }
    return samples;
}

}  // namespace qbfn

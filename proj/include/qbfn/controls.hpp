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
#include <span>
#include <vector>

#include "qbfn/config.hpp"

namespace qbfn {

/// Natural cubic spline (zero second derivative at both ends).
class NaturalCubicSpline {
public:
    /// Knots must be strictly increasing; at least four are required.
    NaturalCubicSpline(std::vector<double> knots, std::vector<double> values);

    double value(double t) const;
    double derivative(double t) const;
    double second_derivative(double t) const;

    std::span<const double> knots() const { return knots_; }
    std::span<const double> values() const { return values_; }
    /// Second derivatives at the knots.
    std::span<const double> moments() const { return moments_; }

private:
    std::size_t interval(double t) const;

    std::vector<double> knots_;
    std::vector<double> values_;
    std::vector<double> moments_;
};

struct FieldValue {
    double bx = 0.0;
    double by = 0.0;
};

/// Bx = B0 cos(theta(t)), By = B0 sin(theta(t)) on [0, T].
class ControlField {
public:
    ControlField(double b0, NaturalCubicSpline phase);

    double b0() const { return b0_; }
    double horizon() const { return horizon_; }
    const NaturalCubicSpline& phase() const { return phase_; }

    double theta(double t) const;
    /// Backward evaluates the forward field at T - t.
    FieldValue at(double t, Direction direction = Direction::forward) const;
    /// d/dt of the forward field.
    FieldValue rate(double t) const;

private:
    double checked_time(double t) const;

    double b0_;
    double horizon_;
    NaturalCubicSpline phase_;
};

/// Spline through phases at equally spaced times 0 = t_0 < ... < t_K = T.
NaturalCubicSpline synthesize_phase(std::span<const double> knot_phases, double t_horizon);

/// Hook for externally designed controls: a spline through an arbitrary
/// (t, theta) table covering [0, T].
ControlField field_from_table(double b0, std::span<const double> times, std::span<const double> thetas);

FieldValue field_at(double t, const ControlField& field, Direction direction);

/// Bx(0) By'(0) - By(0) Bx'(0), which equals B0^2 theta'(0).
double check_observability_precondition(const ControlField& field);
bool precondition_holds(const ControlField& field);

/// Uniform random knot phases in [0, 2pi), resampled until the precondition
/// holds. Throws Error(precondition) after tol::kPreconditionRetries draws.
ControlField sample_random_field(const PhysicsConfig& cfg, std::uint64_t seed);

/// Field values at the N + 1 record nodes, as seen by the observer.
struct FieldSamples {
    std::vector<FieldValue> nodes;
};

FieldSamples sample_field(const ControlField& field, const PhysicsConfig& cfg);
/// Independent Gaussian perturbation of each component, sigma = level * b0.
FieldSamples add_field_noise(FieldSamples samples, double level, double b0, std::uint64_t seed);

}  // namespace qbfn

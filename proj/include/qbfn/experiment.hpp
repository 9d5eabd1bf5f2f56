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
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "qbfn/bfn.hpp"
#include "qbfn/config.hpp"
#include "qbfn/controls.hpp"
#include "qbfn/dynamics.hpp"

namespace qbfn {

enum class TruthKind { random_pure, spin1_preset, maximally_mixed, explicit_matrix, none };

struct TruthSpec {
    TruthKind kind = TruthKind::random_pure;
    std::optional<ComplexMatrix> matrix;  // for explicit_matrix
};

/// Where the control phase comes from. Empty knot_phases and csv_path mean a
/// random spline drawn from the control seed stream.
struct ControlSpec {
    std::vector<double> knot_times;  // empty: equally spaced on [0, T]
    std::vector<double> knot_phases;
    std::string csv_path;  // t,theta[,bx,by] table
};

struct EmitFlags {
    bool vk = true;
    bool ztrace = true;
    bool record = true;
    bool estimate = true;
    bool response = false;
};

struct ExperimentConfig {
    std::string preset = "paper-2level";
    PhysicsConfig physics = qubit_preset_physics();
    ControlSpec control;
    TruthSpec truth;
    int n_iterations = 10;
    std::string out_dir = "out";
    EmitFlags emit;
};

/// "paper-2level" (random pure qubit state, 10 iterations) or "paper-spin1"
/// (the (|+1> + |-1>)/sqrt(2) state, 50 iterations, 10% noise).
ExperimentConfig preset_config(std::string_view name);

/// The spin-1 initial state (1/2) [[1,0,1],[0,0,0],[1,0,1]].
DensityMatrix spin1_preset_state();

nlohmann::json to_json(const PhysicsConfig& cfg);
PhysicsConfig physics_from_json(const nlohmann::json& j, PhysicsConfig base);
nlohmann::json to_json(const ExperimentConfig& cfg);
/// Starts from the preset named in the document (default paper-2level) and
/// applies every other field on top. Throws Error(invalid_argument) on
/// unknown keys or malformed values.
ExperimentConfig experiment_from_json(const nlohmann::json& j);

ControlField resolve_control(const ExperimentConfig& cfg);
DensityMatrix resolve_truth(const ExperimentConfig& cfg);
/// Haar-random pure state of dimension d.
DensityMatrix random_pure_state(int dim, std::uint64_t seed);
/// The observer's copy of the controls: grid samples plus field noise.
FieldSamples observer_fields(const ControlField& field, const PhysicsConfig& cfg);

struct SimulatedExperiment {
    ControlField field;
    FieldSamples observer_field;
    DensityMatrix rho0;
    TruthRun truth;
    MeasurementRecord record;  // with measurement noise
};

SimulatedExperiment simulate_experiment(const ExperimentConfig& cfg);

BfnOptions bfn_options(const ExperimentConfig& cfg);

/// Everything needed to replay a simulation: physics, resolved control knots,
/// the true initial state and noise-model identifiers.
nlohmann::json make_metadata(const ExperimentConfig& cfg, const SimulatedExperiment& sim);
/// Config whose control and truth are pinned to the ones recorded in metadata.
ExperimentConfig experiment_from_metadata(const nlohmann::json& metadata);

}  // namespace qbfn

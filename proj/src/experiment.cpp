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

#include "qbfn/experiment.hpp"

#include <fstream>
#include <random>
#include <set>

#include "qbfn/error.hpp"
#include "qbfn/io.hpp"

namespace qbfn {
namespace {

using nlohmann::json;

const char* truth_name(TruthKind kind) {
    switch (kind) {
        case TruthKind::random_pure: return "random-pure";
        case TruthKind::spin1_preset: return "paper-spin1";
        case TruthKind::maximally_mixed: return "maximally-mixed";
        case TruthKind::explicit_matrix: return "explicit";
        case TruthKind::none: return "none";
    }
    return "none";
}

TruthKind truth_from_name(const std::string& name) {
    if (name == "random-pure") return TruthKind::random_pure;
    if (name == "paper-spin1") return TruthKind::spin1_preset;
    if (name == "maximally-mixed") return TruthKind::maximally_mixed;
    if (name == "none") return TruthKind::none;
    throw Error(ErrorCode::invalid_argument, "unknown truth preset '" + name + "'");
}

void reject_unknown(const json& j, std::initializer_list<const char*> allowed, const char* where) {
    const std::set<std::string> keys(allowed.begin(), allowed.end());
    for (const auto& [key, value] : j.items()) {
        if (!keys.count(key)) throw Error(ErrorCode::invalid_argument, std::string("unknown key '") + key + "' in " + where);
    }
}

template <class T>
void read_if(const json& j, const char* key, T& out) {
    if (!j.contains(key)) return;
    try {
        out = j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw Error(ErrorCode::invalid_argument, std::string("bad value for '") + key + "': " + e.what());
    }
}

}  // namespace

ExperimentConfig preset_config(std::string_view name) {
    ExperimentConfig cfg;
    cfg.preset = std::string(name);
    if (name == "paper-2level") {
        cfg.physics = qubit_preset_physics();
        cfg.truth.kind = TruthKind::random_pure;
        cfg.n_iterations = 10;
    } else if (name == "paper-spin1") {
        cfg.physics = spin1_preset_physics();
        cfg.physics.noise_meas = 0.1;
        cfg.physics.noise_field = 0.1;
        cfg.truth.kind = TruthKind::spin1_preset;
        cfg.n_iterations = 50;
    } else {
        throw Error(ErrorCode::invalid_argument, "unknown preset '" + std::string(name) + "'");
    }
    return cfg;
}

DensityMatrix spin1_preset_state() {
    ComplexMatrix m = ComplexMatrix::Zero(3, 3);
    m(0, 0) = m(0, 2) = m(2, 0) = m(2, 2) = 0.5;
    return DensityMatrix(m);
}

json to_json(const PhysicsConfig& c) {
    return {{"spin", c.spin.value()},          {"gamma_big", c.gamma_big},     {"gamma_small", c.gamma_small},
            {"b0", c.b0},                      {"t_horizon", c.t_horizon},     {"g_f", c.g_f},
            {"mu_b", c.mu_b},                  {"beta", c.beta},               {"steps_per_pass", c.steps_per_pass},
            {"n_knots", c.n_knots},            {"noise_meas", c.noise_meas},   {"noise_field", c.noise_field},
            {"rng_seed", c.rng_seed}};
}

PhysicsConfig physics_from_json(const json& j, PhysicsConfig c) {
    if (!j.is_object()) throw Error(ErrorCode::invalid_argument, "physics must be an object");
    reject_unknown(j,
                   {"spin", "gamma_big", "gamma_small", "b0", "t_horizon", "g_f", "mu_b", "beta", "steps_per_pass",
                    "n_knots", "noise_meas", "noise_field", "rng_seed"},
                   "physics");
    double spin = c.spin.value();
    read_if(j, "spin", spin);
    c.spin = Spin::from_value(spin);
    read_if(j, "gamma_big", c.gamma_big);
    read_if(j, "gamma_small", c.gamma_small);
    read_if(j, "b0", c.b0);
    read_if(j, "t_horizon", c.t_horizon);
    read_if(j, "g_f", c.g_f);
    read_if(j, "mu_b", c.mu_b);
    read_if(j, "beta", c.beta);
    read_if(j, "steps_per_pass", c.steps_per_pass);
    read_if(j, "n_knots", c.n_knots);
    read_if(j, "noise_meas", c.noise_meas);
    read_if(j, "noise_field", c.noise_field);
    read_if(j, "rng_seed", c.rng_seed);
    c.validate();
    return c;
}

json to_json(const ExperimentConfig& cfg) {
    json j;
    j["preset"] = cfg.preset;
    j["physics"] = to_json(cfg.physics);
    json control = json::object();
    if (!cfg.control.knot_phases.empty()) {
        control["knot_phases"] = cfg.control.knot_phases;
        if (!cfg.control.knot_times.empty()) control["knot_times"] = cfg.control.knot_times;
    }
    if (!cfg.control.csv_path.empty()) control["csv"] = cfg.control.csv_path;
    j["control"] = control;
    if (cfg.truth.kind == TruthKind::explicit_matrix && cfg.truth.matrix) {
        j["truth"] = {{"matrix", io::matrix_to_json(*cfg.truth.matrix)}};
    } else {
        j["truth"] = truth_name(cfg.truth.kind);
    }
    j["n_iterations"] = cfg.n_iterations;
    j["out"] = cfg.out_dir;
    j["emit"] = {{"vk", cfg.emit.vk},
                 {"ztrace", cfg.emit.ztrace},
                 {"record", cfg.emit.record},
                 {"estimate", cfg.emit.estimate},
                 {"response", cfg.emit.response}};
    return j;
}

ExperimentConfig experiment_from_json(const json& j) {
    if (!j.is_object()) throw Error(ErrorCode::invalid_argument, "config must be a JSON object");
    reject_unknown(j, {"preset", "physics", "control", "truth", "n_iterations", "out", "emit"}, "config");
    std::string preset = "paper-2level";
    read_if(j, "preset", preset);
    ExperimentConfig cfg = preset_config(preset);
    if (j.contains("physics")) cfg.physics = physics_from_json(j.at("physics"), cfg.physics);
    if (j.contains("control")) {
        const json& c = j.at("control");
        if (!c.is_object()) throw Error(ErrorCode::invalid_argument, "control must be an object");
        reject_unknown(c, {"knot_phases", "knot_times", "csv"}, "control");
        read_if(c, "knot_phases", cfg.control.knot_phases);
        read_if(c, "knot_times", cfg.control.knot_times);
        read_if(c, "csv", cfg.control.csv_path);
    }
    if (j.contains("truth")) {
        const json& t = j.at("truth");
        if (t.is_string()) {
            cfg.truth = {truth_from_name(t.get<std::string>()), std::nullopt};
        } else if (t.is_object() && t.contains("matrix")) {
            cfg.truth = {TruthKind::explicit_matrix, io::matrix_from_json(t.at("matrix"))};
        } else {
            throw Error(ErrorCode::invalid_argument, "truth must be a preset name or {\"matrix\": ...}");
        }
    }
    read_if(j, "n_iterations", cfg.n_iterations);
    read_if(j, "out", cfg.out_dir);
    if (j.contains("emit")) {
        const json& e = j.at("emit");
        reject_unknown(e, {"vk", "ztrace", "record", "estimate", "response"}, "emit");
        read_if(e, "vk", cfg.emit.vk);
        read_if(e, "ztrace", cfg.emit.ztrace);
        read_if(e, "record", cfg.emit.record);
        read_if(e, "estimate", cfg.emit.estimate);
        read_if(e, "response", cfg.emit.response);
    }
    if (cfg.n_iterations < 1) throw Error(ErrorCode::invalid_argument, "n_iterations must be >= 1");
    return cfg;
}

ControlField resolve_control(const ExperimentConfig& cfg) {
    const PhysicsConfig& p = cfg.physics;
    std::optional<ControlField> field;
    if (!cfg.control.csv_path.empty()) {
        std::ifstream is(cfg.control.csv_path);
        if (!is) throw Error(ErrorCode::invalid_argument, "cannot open control table " + cfg.control.csv_path);
        const io::PhaseTable table = io::read_phase_table(is);
        field.emplace(field_from_table(p.b0, table.times, table.thetas));
    } else if (!cfg.control.knot_phases.empty()) {
        if (cfg.control.knot_times.empty()) {
            field.emplace(p.b0, synthesize_phase(cfg.control.knot_phases, p.t_horizon));
        } else {
            field.emplace(field_from_table(p.b0, cfg.control.knot_times, cfg.control.knot_phases));
        }
    } else {
        return sample_random_field(p, derive_seed(p.rng_seed, SeedStream::control));
    }
    if (std::abs(field->horizon() - p.t_horizon) > tol::kTimeSlack * p.t_horizon) {
        throw Error(ErrorCode::invalid_argument, "control table does not span [0, T]");
    }
    return *field;
}

DensityMatrix random_pure_state(int dim, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::VectorXcd psi(dim);
    for (int i = 0; i < dim; ++i) {
        const double re = normal(rng);
        const double im = normal(rng);
        psi(i) = Complex(re, im);
    }
    return DensityMatrix::pure(psi);
}

DensityMatrix resolve_truth(const ExperimentConfig& cfg) {
    const int d = cfg.physics.dim();
    switch (cfg.truth.kind) {
        case TruthKind::random_pure:
            return random_pure_state(d, derive_seed(cfg.physics.rng_seed, SeedStream::truth_state));
        case TruthKind::spin1_preset:
            if (d != 3) throw Error(ErrorCode::invalid_argument, "paper-spin1 truth needs spin 1");
            return spin1_preset_state();
        case TruthKind::maximally_mixed:
            return DensityMatrix::maximally_mixed(d);
        case TruthKind::explicit_matrix: {
            if (!cfg.truth.matrix) throw Error(ErrorCode::invalid_argument, "explicit truth without a matrix");
            DensityMatrix rho(*cfg.truth.matrix);
            if (rho.dim() != d) throw Error(ErrorCode::invalid_argument, "truth matrix dimension != 2F+1");
            return rho;
        }
        case TruthKind::none:
            break;
    }
    throw Error(ErrorCode::invalid_argument, "a truth state is required to simulate a record");
}

FieldSamples observer_fields(const ControlField& field, const PhysicsConfig& cfg) {
    return add_field_noise(sample_field(field, cfg), cfg.noise_field, cfg.b0,
                           derive_seed(cfg.rng_seed, SeedStream::field_noise));
}

SimulatedExperiment simulate_experiment(const ExperimentConfig& cfg) {
    cfg.physics.validate();
    ControlField field = resolve_control(cfg);
    DensityMatrix rho0 = resolve_truth(cfg);
    TruthRun truth = simulate_truth(rho0, field, cfg.physics);
    MeasurementRecord record =
        add_noise(truth.record, cfg.physics.noise_meas, derive_seed(cfg.physics.rng_seed, SeedStream::meas_noise));
    FieldSamples samples = observer_fields(field, cfg.physics);
    return {std::move(field), std::move(samples), std::move(rho0), std::move(truth), std::move(record)};
}

BfnOptions bfn_options(const ExperimentConfig& cfg) {
    BfnOptions options;
    options.n_iterations = cfg.n_iterations;
    return options;
}

json make_metadata(const ExperimentConfig& cfg, const SimulatedExperiment& sim) {
    ExperimentConfig pinned = cfg;
    pinned.control.csv_path.clear();
    pinned.control.knot_times.assign(sim.field.phase().knots().begin(), sim.field.phase().knots().end());
    pinned.control.knot_phases.assign(sim.field.phase().values().begin(), sim.field.phase().values().end());
    pinned.truth = {TruthKind::explicit_matrix, sim.rho0.matrix()};

    json meta;
    meta["format"] = "qbfn-record/1";
    meta["config"] = to_json(pinned);
    meta["requested_control"] = cfg.control.csv_path.empty()
                                    ? (cfg.control.knot_phases.empty() ? "random-spline" : "inline-knots")
                                    : "csv";
    meta["requested_truth"] = truth_name(cfg.truth.kind);
    meta["control"] = {{"b0", sim.field.b0()},
                       {"knot_times", pinned.control.knot_times},
                       {"knot_phases", pinned.control.knot_phases},
                       {"knots_include_endpoints", true},
                       {"spline", "natural cubic"},
                       {"precondition_value", check_observability_precondition(sim.field)},
                       {"precondition_holds", precondition_holds(sim.field)}};
    meta["truth_state"] = io::matrix_to_json(sim.rho0.matrix());
    meta["noise_model"] = {
        {"measurement", "additive gaussian, sigma = noise_meas * RMS(clean record)"},
        {"field", "additive gaussian per record node on bx and by, sigma = noise_field * b0, observer copy only"},
        {"rng", "mt19937_64 seeded by seed_seq(rng_seed, stream)"}};
    meta["seeds"] = {{"base", cfg.physics.rng_seed},
                     {"control", derive_seed(cfg.physics.rng_seed, SeedStream::control)},
                     {"truth_state", derive_seed(cfg.physics.rng_seed, SeedStream::truth_state)},
                     {"meas_noise", derive_seed(cfg.physics.rng_seed, SeedStream::meas_noise)},
                     {"field_noise", derive_seed(cfg.physics.rng_seed, SeedStream::field_noise)}};
    meta["grid"] = {{"intervals", cfg.physics.steps_per_pass},
                    {"record_dt", cfg.physics.dt()},
                    {"observer_step", 2.0 * cfg.physics.dt()},
                    {"integrator", "rk4"}};
    return meta;
}

ExperimentConfig experiment_from_metadata(const json& metadata) {
    if (!metadata.is_object() || !metadata.contains("config")) {
        throw Error(ErrorCode::invalid_argument, "metadata has no config block");
    }
    return experiment_from_json(metadata.at("config"));
}

}  // namespace qbfn

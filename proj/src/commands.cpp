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

#include "qbfn/commands.hpp"

#include <algorithm>
#include <fstream>
#include <ostream>
#include <sstream>

#include "qbfn/bfn_diagnostics.hpp"
#include "qbfn/io.hpp"
#include "qbfn/oracle.hpp"
#include "qbfn/sweep.hpp"

namespace qbfn {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

constexpr const char* kHypothesis = "B_x(0)dB_y/dt(0) - B_y(0)dB_x/dt(0) != 0";

template <class Fn>
int guarded(std::ostream& err, Fn&& fn) {
    try {
        return fn();
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return exit_code_for(e.code());
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitFailure;
    }
}

template <class Writer>
void write_csv(const fs::path& path, Writer&& writer) {
    std::ostringstream os;
    writer(os);
    io::write_text_file(path, os.str());
}

// The pieces cmd_estimate and cmd_validate share.
struct LoadedRun {
    ExperimentConfig recorded;
    ControlField field;
    MeasurementRecord record;
    FieldSamples fields;
    std::optional<DensityMatrix> rho0;
    std::vector<ComplexMatrix> truth;
};

LoadedRun load_run(const ExperimentConfig& cfg, const fs::path& record_path) {
    cfg.physics.validate();
    const json meta = io::read_json_file(metadata_path_for(record_path));
    ExperimentConfig recorded = experiment_from_metadata(meta);
    const PhysicsConfig& a = cfg.physics;
    const PhysicsConfig& b = recorded.physics;
    if (a.steps_per_pass != b.steps_per_pass || a.t_horizon != b.t_horizon || !(a.spin == b.spin)) {
        std::ostringstream os;
        os << "config grid (F=" << a.spin.value() << ", N=" << a.steps_per_pass << ", T=" << a.t_horizon
           << ") does not match the recorded one (F=" << b.spin.value() << ", N=" << b.steps_per_pass
           << ", T=" << b.t_horizon << ")";
        throw Error(ErrorCode::grid_mismatch, os.str());
    }
    std::ifstream is(record_path);
    if (!is) throw Error(ErrorCode::io, "cannot read " + record_path.string());
    MeasurementRecord record = io::read_record_csv(is);
    record.check_grid(a);

    recorded.physics = a;
    ControlField field = resolve_control(recorded);
    FieldSamples fields = observer_fields(field, a);
    LoadedRun loaded{recorded, field, std::move(record), std::move(fields), std::nullopt, {}};
    if (cfg.truth.kind != TruthKind::none && meta.contains("truth_state")) {
        loaded.rho0.emplace(io::matrix_from_json(meta.at("truth_state")));
        loaded.truth = simulate_truth(*loaded.rho0, field, a).trajectory;
    }
    return loaded;
}

std::string csv_cell(std::string text) {
    std::replace(text.begin(), text.end(), ',', ';');
    std::replace(text.begin(), text.end(), '\n', ' ');
    return text;
}

double median(std::vector<double> v) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size() / 2;
    return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

}  // namespace

int exit_code_for(ErrorCode code) {
    switch (code) {
        case ErrorCode::invalid_argument:
        case ErrorCode::dimension_mismatch:
        case ErrorCode::not_hermitian:
        case ErrorCode::missing_truth:
            return kExitInvalidConfig;
        case ErrorCode::precondition:
        case ErrorCode::unobservable:
            return kExitPrecondition;
        case ErrorCode::integration:
            return kExitIntegration;
        case ErrorCode::grid_mismatch:
            return kExitGridMismatch;
        case ErrorCode::blowup:
            return kExitBlowup;
        case ErrorCode::io:
            return kExitFailure;
    }
    return kExitFailure;
}

fs::path metadata_path_for(const fs::path& record_path) {
    return record_path.parent_path() / "metadata.json";
}

int cmd_simulate(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const SimulatedExperiment sim = simulate_experiment(cfg);
        const double discriminant = check_observability_precondition(sim.field);
        if (!precondition_holds(sim.field)) {
            err << "warning: control violates " << kHypothesis << " (value " << discriminant << ")\n";
        }
        const fs::path dir = cfg.out_dir;
        write_csv(dir / "record.csv", [&](std::ostream& os) { io::write_record_csv(os, sim.record); });
        write_csv(dir / "field.csv", [&](std::ostream& os) { io::write_field_csv(os, sim.field, cfg.physics); });
        io::write_text_file(dir / "metadata.json", make_metadata(cfg, sim).dump(2) + "\n");
        json summary = {{"command", "simulate"},
                        {"out", dir.string()},
                        {"samples", sim.record.size()},
                        {"record_rms", rms(sim.record.clean_values)},
                        {"precondition_value", discriminant}};
        out << summary.dump() << '\n';
        return kExitOk;
    });
}

int cmd_estimate(const ExperimentConfig& cfg, const fs::path& record_path, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        if (cfg.n_iterations < 1) throw Error(ErrorCode::invalid_argument, "iterations must be >= 1");
        const LoadedRun loaded = load_run(cfg, record_path);
        const BfnRun run = run_bfn(loaded.record, loaded.fields, cfg.physics, bfn_options(cfg), loaded.truth);

        const fs::path dir = cfg.out_dir;
        json estimate = {{"estimate", io::matrix_to_json(run.final_estimate.matrix())},
                         {"raw", io::matrix_to_json(run.raw_final)},
                         {"raw_min_eigenvalue", run.min_eigenvalues.back()},
                         {"iterations", run.iterations_run}};
        if (run.fidelity) estimate["fidelity"] = *run.fidelity;
        if (cfg.emit.estimate) {
            io::write_text_file(dir / "estimate.json", estimate.dump(2) + "\n");
            io::write_text_file(dir / "run.json", io::run_to_json(run).dump(2) + "\n");
        }
        if (run.has_truth()) {
            if (cfg.emit.vk) write_csv(dir / "vk.csv", [&](std::ostream& os) { io::write_vk_csv(os, run); });
            if (cfg.emit.ztrace) write_csv(dir / "ztrace.csv", [&](std::ostream& os) { io::write_ztrace_csv(os, run); });
        }
        json summary = {{"command", "estimate"},
                        {"iterations", run.iterations_run},
                        {"wall_seconds", run.wall_seconds},
                        {"seconds_per_iteration", run.wall_seconds / std::max(1, run.iterations_run)},
                        {"final_surrogate_residual", run.surrogate_residuals.back()}};
        if (run.has_truth()) {
            summary["final_vk"] = run.vk.back();
            summary["v0"] = run.vk.front();
        }
        if (run.fidelity) summary["fidelity"] = *run.fidelity;
        out << summary.dump() << '\n';
        return kExitOk;
    });
}

int cmd_validate(const ExperimentConfig& cfg, const fs::path& record_path, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const LoadedRun loaded = load_run(cfg, record_path);
        const double discriminant = check_observability_precondition(loaded.field);
        const LinearResponse response = build_response(loaded.field, cfg.physics);
        const fs::path dir = cfg.out_dir;
        if (cfg.emit.response) {
            write_csv(dir / "response.csv",
                      [&](std::ostream& os) { io::write_response_csv(os, response, loaded.record); });
        }

        json report = {{"command", "validate"},
                       {"response_rank", response.rank},
                       {"unknowns", response.unknowns()},
                       {"response_condition", response.condition},
                       {"precondition_value", discriminant},
                       {"precondition_holds", precondition_holds(loaded.field)}};
        if (!response.observable()) {
            report["error"] = "unobservable control";
            report["failed_hypothesis"] = kHypothesis;
            io::write_text_file(dir / "validate.json", report.dump(2) + "\n");
            out << report.dump() << '\n';
            err << "error: response rank " << response.rank << " < " << response.unknowns()
                << "; failed hypothesis " << kHypothesis << " (value " << discriminant << ")\n";
            return kExitPrecondition;
        }

        const Reconstruction oracle = reconstruct(loaded.record, response);
        const BfnRun run = run_bfn(loaded.record, loaded.fields, cfg.physics, bfn_options(cfg), loaded.truth);
        const double distance = (oracle.estimate.matrix() - run.final_estimate.matrix()).norm();
        report["oracle_estimate"] = io::matrix_to_json(oracle.estimate.matrix());
        report["bfn_estimate"] = io::matrix_to_json(run.final_estimate.matrix());
        report["frobenius_distance"] = distance;
        report["oracle_residual_norm"] = oracle.residual_norm;
        report["iterations"] = run.iterations_run;
        if (loaded.rho0) {
            report["oracle_fidelity"] = fidelity(oracle.estimate, *loaded.rho0);
            report["bfn_fidelity"] = fidelity(run.final_estimate, *loaded.rho0);
        }
        io::write_text_file(dir / "validate.json", report.dump(2) + "\n");
        out << report.dump() << '\n';
        return kExitOk;
    });
}

int cmd_sweep(const ExperimentConfig& cfg, const SweepSpec& spec, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        cfg.physics.validate();
        if (spec.seeds < 1) throw Error(ErrorCode::invalid_argument, "sweep needs at least one seed");
        const std::vector<double> gammas = spec.gammas.empty() ? std::vector<double>{cfg.physics.gamma_small} : spec.gammas;
        const std::vector<double> noises = spec.noises.empty() ? std::vector<double>{cfg.physics.noise_meas} : spec.noises;
        const auto points = sweep_grid(cfg.physics.rng_seed, spec.seeds, gammas, noises);
        const auto outcomes = run_sweep(cfg, points);

        std::ostringstream os;
        os << "seed,gamma,noise,fidelity,v0,vn,envelope_decreasing,error\n";
        std::vector<double> fids;
        int decreasing = 0;
        int failed = 0;
        for (const auto& o : outcomes) {
            os << o.point.seed << ',' << io::format_double(o.point.gamma_small) << ',' << io::format_double(o.point.noise)
               << ',' << io::format_double(o.fidelity) << ',' << io::format_double(o.v0) << ','
               << io::format_double(o.vn) << ',' << (o.envelope_decreasing ? 1 : 0) << ',' << csv_cell(o.error) << '\n';
            if (o.ok) {
                fids.push_back(o.fidelity);
                decreasing += o.envelope_decreasing ? 1 : 0;
            } else {
                ++failed;
                err << "warning: seed " << o.point.seed << " failed: " << o.error << '\n';
            }
        }
        io::write_text_file(fs::path(cfg.out_dir) / "sweep.csv", os.str());
        json summary = {{"command", "sweep"},
                        {"runs", outcomes.size()},
                        {"failed", failed},
                        {"median_fidelity", median(fids)},
                        {"envelope_decreasing", decreasing}};
        out << summary.dump() << '\n';
        return kExitOk;
    });
}

}  // namespace qbfn

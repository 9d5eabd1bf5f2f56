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

// qbfn: simulate a continuously measured spin ensemble and reconstruct its
// initial state with back-and-forth nudging observers.

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "qbfn/commands.hpp"
#include "qbfn/error.hpp"
#include "qbfn/experiment.hpp"
#include "qbfn/io.hpp"

namespace {

struct CommonFlags {
    std::string config_path;
    std::string preset;
    std::optional<std::uint64_t> seed;
    std::optional<int> iterations;
    std::optional<double> noise_meas;
    std::optional<double> noise_field;
    std::string out;
    std::string record;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
    cmd->add_option("--config", f.config_path, "JSON experiment config")->check(CLI::ExistingFile);
    cmd->add_option("--preset", f.preset, "Built-in experiment")
        ->check(CLI::IsMember({"paper-2level", "paper-spin1"}));
    cmd->add_option("--seed", f.seed, "Base RNG seed");
    cmd->add_option("--iterations", f.iterations, "Back-and-forth iterations");
    cmd->add_option("--noise-meas", f.noise_meas, "Measurement noise (fraction of record RMS)");
    cmd->add_option("--noise-field", f.noise_field, "Field noise (fraction of B0)");
    cmd->add_option("--out", f.out, "Output directory");
}

// Config file, else preset, else (for commands that read a record) the config
// stored in the record's metadata, else paper-2level. Flags override.
qbfn::ExperimentConfig resolve_config(const CommonFlags& f, bool from_record) {
    qbfn::ExperimentConfig cfg;
    if (!f.config_path.empty()) {
        cfg = qbfn::experiment_from_json(qbfn::io::read_json_file(f.config_path));
    } else if (!f.preset.empty()) {
        cfg = qbfn::preset_config(f.preset);
    } else if (from_record && std::filesystem::exists(qbfn::metadata_path_for(f.record))) {
        cfg = qbfn::experiment_from_metadata(qbfn::io::read_json_file(qbfn::metadata_path_for(f.record)));
        cfg.out_dir = std::filesystem::path(f.record).parent_path().string();
    } else {
        cfg = qbfn::preset_config("paper-2level");
    }
    if (f.seed) cfg.physics.rng_seed = *f.seed;
    if (f.iterations) {
        if (*f.iterations < 1) throw qbfn::Error(qbfn::ErrorCode::invalid_argument, "--iterations must be >= 1");
        cfg.n_iterations = *f.iterations;
    }
    if (f.noise_meas) cfg.physics.noise_meas = *f.noise_meas;
    if (f.noise_field) cfg.physics.noise_field = *f.noise_field;
    if (!f.out.empty()) cfg.out_dir = f.out;
    cfg.physics.validate();
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Back-and-forth nudging state reconstruction for continuously measured spins"};
    app.require_subcommand(1);

    CommonFlags sim_flags, est_flags, val_flags, sweep_flags;
    qbfn::SweepSpec sweep_spec;

    auto* simulate = app.add_subcommand("simulate", "Simulate a measurement record");
    add_common(simulate, sim_flags);

    auto* estimate = app.add_subcommand("estimate", "Run the BFN estimator on a record");
    add_common(estimate, est_flags);
    estimate->add_option("--record", est_flags.record, "Record CSV (metadata.json must sit beside it)")->required();

    auto* validate = app.add_subcommand("validate", "Compare BFN against linear-inversion reconstruction");
    add_common(validate, val_flags);
    validate->add_option("--record", val_flags.record, "Record CSV (metadata.json must sit beside it)")->required();

    auto* sweep = app.add_subcommand("sweep", "Independent runs over seeds, gains and noise levels");
    add_common(sweep, sweep_flags);
    sweep->add_option("--seeds", sweep_spec.seeds, "Number of consecutive seeds starting at --seed");
    sweep->add_option("--gammas", sweep_spec.gammas, "Observer gains to sweep");
    sweep->add_option("--noises", sweep_spec.noises, "Noise levels to sweep (measurement and field)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return qbfn::kExitInvalidConfig;
    }

    try {
        if (*simulate) return qbfn::cmd_simulate(resolve_config(sim_flags, false), std::cout, std::cerr);
        if (*estimate) {
            return qbfn::cmd_estimate(resolve_config(est_flags, true), est_flags.record, std::cout, std::cerr);
        }
        if (*validate) {
            return qbfn::cmd_validate(resolve_config(val_flags, true), val_flags.record, std::cout, std::cerr);
        }
        if (*sweep) return qbfn::cmd_sweep(resolve_config(sweep_flags, false), sweep_spec, std::cout, std::cerr);
    } catch (const qbfn::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return qbfn::exit_code_for(e.code());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return qbfn::kExitFailure;
    }
    return qbfn::kExitFailure;
}

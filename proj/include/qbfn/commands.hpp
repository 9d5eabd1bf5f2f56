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

#include <filesystem>
#include <iosfwd>
#include <vector>

#include "qbfn/error.hpp"
#include "qbfn/experiment.hpp"

namespace qbfn {

/// Process exit codes of the command-line front end.
enum ExitCode : int {
    kExitOk = 0,
    kExitFailure = 1,        // I/O and unexpected errors
    kExitInvalidConfig = 2,
    kExitPrecondition = 3,   // control resampling exhausted or unobservable control
    kExitIntegration = 4,
    kExitGridMismatch = 5,
    kExitBlowup = 6,
};

int exit_code_for(ErrorCode code);

struct SweepSpec {
    int seeds = 20;
    std::vector<double> gammas;  // empty: the config's gamma
    std::vector<double> noises;  // empty: the config's measurement noise
};

/// Writes record.csv, field.csv and metadata.json into cfg.out_dir.
int cmd_simulate(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err);
/// Reads the record and the metadata.json beside it; writes estimate.json and
/// run.json, plus vk.csv and ztrace.csv when the true state is known.
int cmd_estimate(const ExperimentConfig& cfg, const std::filesystem::path& record_path, std::ostream& out,
                 std::ostream& err);
/// Linear-inversion reconstruction next to the BFN estimate; writes validate.json.
int cmd_validate(const ExperimentConfig& cfg, const std::filesystem::path& record_path, std::ostream& out,
                 std::ostream& err);
/// Independent runs over seeds x gammas x noise levels; writes sweep.csv.
int cmd_sweep(const ExperimentConfig& cfg, const SweepSpec& spec, std::ostream& out, std::ostream& err);

/// Metadata stored beside a record file.
std::filesystem::path metadata_path_for(const std::filesystem::path& record_path);

}  // namespace qbfn

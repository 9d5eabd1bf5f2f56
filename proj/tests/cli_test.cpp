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

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "qbfn/bfn.hpp"
#include "qbfn/commands.hpp"
#include "qbfn/experiment.hpp"
#include "qbfn/io.hpp"

namespace qbfn {
namespace {

namespace fs = std::filesystem;

struct Result {
    int code = -1;
    std::string out;
};

Result run_cli(const std::string& args) {
    const std::string cmd = std::string(QBFN_CLI_PATH) + " " + args + " 2>/dev/null";
    Result r;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (pipe == nullptr) return r;
    std::array<char, 4096> buf{};
    std::size_t n = 0;
    while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
    const int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

class CliTest : public ::testing::Test {
protected:
    void SetUp() override {
        const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
        dir_ = fs::temp_directory_path() / (std::string("qbfn_cli_") + info->name());
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    std::string path(const std::string& name) const { return (dir_ / name).string(); }

    std::string write_config(const std::string& name, const ExperimentConfig& cfg) const {
        io::write_text_file(dir_ / name, to_json(cfg).dump(2));
        return path(name);
    }

    fs::path dir_;
};

TEST_F(CliTest, SimulateWritesPresetMetadata) {
    const Result r = run_cli("simulate --preset paper-2level --out " + path("a"));
    ASSERT_EQ(r.code, 0) << r.out;
    const auto summary = nlohmann::json::parse(r.out);
    EXPECT_EQ(summary["samples"], 2001);

    const auto meta = io::read_json_file(dir_ / "a" / "metadata.json");
    const auto& phys = meta["config"]["physics"];
    EXPECT_EQ(phys["gamma_big"].get<double>(), 0.25);
    EXPECT_EQ(phys["gamma_small"].get<double>(), 0.25);
    EXPECT_EQ(phys["b0"].get<double>(), 10.0);
    EXPECT_EQ(phys["t_horizon"].get<double>(), 1.0);
    EXPECT_EQ(meta["control"]["knot_phases"].size(), 10u);
    EXPECT_TRUE(meta["control"]["knots_include_endpoints"].get<bool>());
    EXPECT_TRUE(meta.contains("noise_model"));
    EXPECT_TRUE(meta.contains("seeds"));
    EXPECT_TRUE(fs::exists(dir_ / "a" / "field.csv"));
}

TEST_F(CliTest, SameSeedGivesByteIdenticalRecord) {
    ASSERT_EQ(run_cli("simulate --seed 5 --noise-meas 0.1 --out " + path("a")).code, 0);
    ASSERT_EQ(run_cli("simulate --seed 5 --noise-meas 0.1 --out " + path("b")).code, 0);
    ASSERT_EQ(run_cli("simulate --seed 6 --noise-meas 0.1 --out " + path("c")).code, 0);
    const std::string a = io::read_text_file(dir_ / "a" / "record.csv");
    EXPECT_EQ(a, io::read_text_file(dir_ / "b" / "record.csv"));
    EXPECT_NE(a, io::read_text_file(dir_ / "c" / "record.csv"));
}

TEST_F(CliTest, MaximallyMixedTruthGivesZeroRecord) {
    ExperimentConfig cfg = preset_config("paper-2level");
    cfg.truth.kind = TruthKind::maximally_mixed;
    const std::string config = write_config("mixed.json", cfg);
    ASSERT_EQ(run_cli("simulate --config " + config + " --out " + path("m")).code, 0);
    std::ifstream is(dir_ / "m" / "record.csv");
    const MeasurementRecord rec = io::read_record_csv(is);
    ASSERT_EQ(rec.size(), 2001u);
    for (double v : rec.values) EXPECT_EQ(v, 0.0);
}

TEST_F(CliTest, EstimateRoundTripIsBitExact) {
    ASSERT_EQ(run_cli("simulate --seed 3 --noise-meas 0.1 --noise-field 0.1 --out " + path("r")).code, 0);
    const Result est = run_cli("estimate --record " + path("r/record.csv"));
    ASSERT_EQ(est.code, 0) << est.out;
    const auto summary = nlohmann::json::parse(est.out);
    EXPECT_TRUE(summary.contains("fidelity"));
    EXPECT_TRUE(summary.contains("seconds_per_iteration"));
    EXPECT_EQ(summary["iterations"], 10);

    ExperimentConfig cfg = preset_config("paper-2level");
    cfg.physics.rng_seed = 3;
    cfg.physics.noise_meas = 0.1;
    cfg.physics.noise_field = 0.1;
    const SimulatedExperiment sim = simulate_experiment(cfg);
    const BfnRun run = run_bfn(sim.record, sim.observer_field, cfg.physics, bfn_options(cfg), sim.truth.trajectory);

    const auto estimate = io::read_json_file(dir_ / "r" / "estimate.json");
    EXPECT_EQ(io::matrix_from_json(estimate["raw"]), run.raw_final);
    EXPECT_EQ(io::matrix_from_json(estimate["estimate"]), run.final_estimate.matrix());
    EXPECT_EQ(summary["fidelity"].get<double>(), *run.fidelity);
    EXPECT_EQ(summary["final_vk"].get<double>(), run.vk.back());
    EXPECT_TRUE(fs::exists(dir_ / "r" / "vk.csv"));
    EXPECT_TRUE(fs::exists(dir_ / "r" / "ztrace.csv"));
}

TEST_F(CliTest, ReplayFromMetadataAlone) {
    ExperimentConfig cfg = preset_config("paper-2level");
    cfg.physics.rng_seed = 9;
    cfg.physics.noise_meas = 0.05;
    const std::string config = write_config("c.json", cfg);
    ASSERT_EQ(run_cli("simulate --config " + config + " --out " + path("orig")).code, 0);

    // Re-simulate from the metadata's pinned config only.
    const auto meta = io::read_json_file(dir_ / "orig" / "metadata.json");
    io::write_text_file(dir_ / "replay.json", meta["config"].dump());
    ASSERT_EQ(run_cli("simulate --config " + path("replay.json") + " --out " + path("replay")).code, 0);
    EXPECT_EQ(io::read_text_file(dir_ / "orig" / "record.csv"), io::read_text_file(dir_ / "replay" / "record.csv"));
}

TEST_F(CliTest, ValidateNoiselessReportsOracleComparison) {
    ASSERT_EQ(run_cli("simulate --seed 2 --out " + path("v")).code, 0);
    const Result r = run_cli("validate --record " + path("v/record.csv"));
    ASSERT_EQ(r.code, 0) << r.out;
    const auto report = nlohmann::json::parse(r.out);
    EXPECT_EQ(report["response_rank"], 3);
    EXPECT_LT(report["oracle_residual_norm"].get<double>(), 1e-8);
    EXPECT_GT(report["oracle_fidelity"].get<double>(), 1.0 - 1e-9);
    EXPECT_TRUE(report.contains("frobenius_distance"));
    EXPECT_TRUE(fs::exists(dir_ / "v" / "validate.json"));
}

TEST_F(CliTest, ValidateNoisyReportsDistance) {
    ASSERT_EQ(run_cli("simulate --seed 2 --noise-meas 0.1 --noise-field 0.1 --out " + path("n")).code, 0);
    const Result r = run_cli("validate --record " + path("n/record.csv"));
    ASSERT_EQ(r.code, 0) << r.out;
    EXPECT_TRUE(nlohmann::json::parse(r.out)["frobenius_distance"].is_number());
}

TEST_F(CliTest, ValidateNamesFailedHypothesisForConstantPhase) {
    ExperimentConfig cfg = preset_config("paper-2level");
    cfg.control.knot_phases.assign(10, 1.1);
    const std::string config = write_config("const.json", cfg);
    ASSERT_EQ(run_cli("simulate --config " + config + " --out " + path("k")).code, 0);
    const Result r = run_cli("validate --record " + path("k/record.csv"));
    EXPECT_EQ(r.code, kExitPrecondition);
    const auto report = nlohmann::json::parse(r.out);
    EXPECT_EQ(report["failed_hypothesis"], "B_x(0)dB_y/dt(0) - B_y(0)dB_x/dt(0) != 0");
    EXPECT_LT(report["response_rank"].get<int>(), 3);
}

TEST_F(CliTest, ZeroIterationsRejected) {
    ASSERT_EQ(run_cli("simulate --out " + path("z")).code, 0);
    EXPECT_EQ(run_cli("estimate --iterations 0 --record " + path("z/record.csv")).code, kExitInvalidConfig);
}

TEST_F(CliTest, GridMismatchExitCode) {
    ASSERT_EQ(run_cli("simulate --out " + path("g")).code, 0);
    ExperimentConfig cfg = preset_config("paper-2level");
    cfg.physics.steps_per_pass = 1000;
    const std::string config = write_config("coarse.json", cfg);
    EXPECT_EQ(run_cli("estimate --config " + config + " --record " + path("g/record.csv")).code, kExitGridMismatch);
}

TEST_F(CliTest, InvalidConfigExitCodes) {
    EXPECT_EQ(run_cli("simulate --preset nope --out " + path("x")).code, kExitInvalidConfig);
    EXPECT_EQ(run_cli("frobnicate").code, kExitInvalidConfig);
    io::write_text_file(dir_ / "bad.json", R"({"physics": {"steps_per_pass": 3}})");
    EXPECT_EQ(run_cli("simulate --config " + path("bad.json") + " --out " + path("x")).code, kExitInvalidConfig);
    EXPECT_EQ(run_cli("estimate --record " + path("missing/record.csv")).code, kExitFailure);
}

TEST_F(CliTest, BlowupExitCode) {
    EXPECT_EQ(exit_code_for(ErrorCode::blowup), kExitBlowup);
    EXPECT_EQ(exit_code_for(ErrorCode::integration), kExitIntegration);
    EXPECT_EQ(exit_code_for(ErrorCode::precondition), kExitPrecondition);
}

TEST_F(CliTest, SweepWritesMergedCsv) {
    const Result r = run_cli("sweep --seeds 2 --gammas 0.25 0.5 --noises 0 0.1 --iterations 2 --out " + path("s"));
    ASSERT_EQ(r.code, 0) << r.out;
    const auto summary = nlohmann::json::parse(r.out);
    EXPECT_EQ(summary["runs"], 8);
    EXPECT_EQ(summary["failed"], 0);
    std::istringstream csv(io::read_text_file(dir_ / "s" / "sweep.csv"));
    std::string line;
    std::getline(csv, line);
    EXPECT_EQ(line, "seed,gamma,noise,fidelity,v0,vn,envelope_decreasing,error");
    int rows = 0;
    while (std::getline(csv, line)) ++rows;
    EXPECT_EQ(rows, 8);
}

TEST_F(CliTest, InProcessCommandsMatchExitTable) {
    ExperimentConfig cfg = preset_config("paper-2level");
    cfg.out_dir = path("p");
    std::ostringstream out, err;
    EXPECT_EQ(cmd_simulate(cfg, out, err), kExitOk);
    cfg.n_iterations = 0;
    EXPECT_EQ(cmd_estimate(cfg, dir_ / "p" / "record.csv", out, err), kExitInvalidConfig);
}

}  // namespace
}  // namespace qbfn

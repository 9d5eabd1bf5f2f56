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
#include <string>
#include <vector>

#include "json.hpp"

#include "qbfn/bfn.hpp"
#include "qbfn/controls.hpp"
#include "qbfn/dynamics.hpp"
#include "qbfn/oracle.hpp"

namespace qbfn::io {

/// Shortest text that parses back to the same double.
std::string format_double(double v);

/// Complex entries as {"re": .., "im": ..}, rows outermost.
nlohmann::json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const nlohmann::json& j);

/// Header t,value,clean_value.
void write_record_csv(std::ostream& os, const MeasurementRecord& record);
MeasurementRecord read_record_csv(std::istream& is);

/// Header t,theta,bx,by sampled on the record grid of cfg.
void write_field_csv(std::ostream& os, const ControlField& field, const PhysicsConfig& cfg);

struct PhaseTable {
    std::vector<double> times;
    std::vector<double> thetas;
};
/// Reads the t and theta columns of a field CSV (extra columns ignored).
PhaseTable read_phase_table(std::istream& is);

/// Header k,v.
void write_vk_csv(std::ostream& os, const BfnRun& run);
/// Header t,v,z.
void write_ztrace_csv(std::ostream& os, const BfnRun& run);
/// Header t,baseline,e0,e1,...
void write_response_csv(std::ostream& os, const LinearResponse& response, const MeasurementRecord& grid);

nlohmann::json run_to_json(const BfnRun& run);

nlohmann::json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace qbfn::io

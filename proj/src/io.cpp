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

#include "qbfn/io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "qbfn/error.hpp"

namespace qbfn::io {
namespace {

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
        out.push_back(cell);
    }
    return out;
}

double parse_double(const std::string& s) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        throw Error(ErrorCode::io, "malformed number '" + s + "' in CSV");
    }
    return v;
}

std::vector<std::string> read_header(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw Error(ErrorCode::io, "empty CSV input");
    return split(line);
}

std::size_t column(const std::vector<std::string>& header, const std::string& name) {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) return i;
    }
    throw Error(ErrorCode::io, "CSV is missing column '" + name + "'");
}

std::vector<std::vector<double>> read_rows(std::istream& is, std::size_t width) {
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty() || line == "\r") continue;
        const auto cells = split(line);
        if (cells.size() != width) throw Error(ErrorCode::io, "CSV row has the wrong number of columns");
        std::vector<double> row;
        row.reserve(width);
        for (const auto& c : cells) row.push_back(parse_double(c));
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace

std::string format_double(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc()) throw Error(ErrorCode::io, "cannot format number");
    return std::string(buf, ptr);
}

nlohmann::json matrix_to_json(const ComplexMatrix& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back({{"re", m(i, j).real()}, {"im", m(i, j).imag()}});
        rows.push_back(std::move(row));
    }
    return rows;
}

ComplexMatrix matrix_from_json(const nlohmann::json& j) {
    if (!j.is_array() || j.empty()) throw Error(ErrorCode::invalid_argument, "matrix must be a non-empty array of rows");
    const auto n = static_cast<Eigen::Index>(j.size());
    ComplexMatrix m(n, n);
    for (Eigen::Index r = 0; r < n; ++r) {
        const auto& row = j[static_cast<std::size_t>(r)];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n) {
            throw Error(ErrorCode::invalid_argument, "matrix must be square");
        }
        for (Eigen::Index c = 0; c < n; ++c) {
            const auto& e = row[static_cast<std::size_t>(c)];
            if (e.is_number()) {
                m(r, c) = e.get<double>();
            } else if (e.is_object() && e.contains("re")) {
                m(r, c) = Complex(e.at("re").get<double>(), e.value("im", 0.0));
            } else {
                throw Error(ErrorCode::invalid_argument, "matrix entries must be numbers or {re, im}");
            }
        }
    }
    return m;
}

void write_record_csv(std::ostream& os, const MeasurementRecord& record) {
    os << "t,value,clean_value\n";
    for (std::size_t i = 0; i < record.size(); ++i) {
        os << format_double(record.times[i]) << ',' << format_double(record.values[i]) << ','
           << format_double(record.clean_values[i]) << '\n';
    }
}

MeasurementRecord read_record_csv(std::istream& is) {
    const auto header = read_header(is);
    const std::size_t ct = column(header, "t");
    const std::size_t cv = column(header, "value");
    const bool has_clean = std::find(header.begin(), header.end(), "clean_value") != header.end();
    const std::size_t cc = has_clean ? column(header, "clean_value") : cv;
    MeasurementRecord record;
    for (const auto& row : read_rows(is, header.size())) {
        record.times.push_back(row[ct]);
        record.values.push_back(row[cv]);
        record.clean_values.push_back(row[cc]);
    }
    return record;
}

void write_field_csv(std::ostream& os, const ControlField& field, const PhysicsConfig& cfg) {
    os << "t,theta,bx,by\n";
    for (int i = 0; i <= cfg.steps_per_pass; ++i) {
        const double t = i * cfg.dt();
        const FieldValue b = field.at(t);
        os << format_double(t) << ',' << format_double(field.theta(t)) << ',' << format_double(b.bx) << ','
           << format_double(b.by) << '\n';
    }
}

PhaseTable read_phase_table(std::istream& is) {
    const auto header = read_header(is);
    const std::size_t ct = column(header, "t");
    const std::size_t cth = column(header, "theta");
    PhaseTable table;
    for (const auto& row : read_rows(is, header.size())) {
        table.times.push_back(row[ct]);
        table.thetas.push_back(row[cth]);
    }
    return table;
}

void write_vk_csv(std::ostream& os, const BfnRun& run) {
    os << "k,v\n";
    for (std::size_t k = 0; k < run.vk.size(); ++k) os << k << ',' << format_double(run.vk[k]) << '\n';
}

void write_ztrace_csv(std::ostream& os, const BfnRun& run) {
    os << "t,v,z\n";
    for (const auto& s : run.z_trace()) {
        os << format_double(s.t) << ',' << format_double(s.v) << ',' << format_double(s.z) << '\n';
    }
}

void write_response_csv(std::ostream& os, const LinearResponse& response, const MeasurementRecord& grid) {
    os << "t,baseline";
    for (Eigen::Index j = 0; j < response.columns.cols(); ++j) os << ",e" << j;
    os << '\n';
    for (Eigen::Index i = 0; i < response.columns.rows(); ++i) {
        os << format_double(grid.times[static_cast<std::size_t>(i)]) << ',' << format_double(response.baseline(i));
        for (Eigen::Index j = 0; j < response.columns.cols(); ++j) os << ',' << format_double(response.columns(i, j));
        os << '\n';
    }
}

nlohmann::json run_to_json(const BfnRun& run) {
    nlohmann::json j;
    j["iterations_run"] = run.iterations_run;
    j["stopped_early"] = run.stopped_early;
    j["wall_seconds"] = run.wall_seconds;
    j["iteration_seconds"] = run.iteration_seconds;
    j["gains"] = {{"forward", run.gains.forward}, {"backward", run.gains.backward}};
    j["final_estimate"] = matrix_to_json(run.final_estimate.matrix());
    j["raw_final"] = matrix_to_json(run.raw_final);
    j["min_eigenvalues"] = run.min_eigenvalues;
    j["surrogate_residuals"] = run.surrogate_residuals;
    if (run.has_truth()) {
        j["vk"] = run.vk;
        j["weighted_residuals"] = run.weighted_residuals;
    }
    if (run.fidelity) j["fidelity"] = *run.fidelity;
    nlohmann::json passes = nlohmann::json::array();
    for (const auto& p : run.passes) {
        passes.push_back({{"iteration", p.iteration},
                          {"direction", to_string(p.direction)},
                          {"max_trace_drift", p.max_trace_drift},
                          {"max_hermitian_drift", p.max_hermitian_drift},
                          {"max_norm", p.max_norm}});
    }
    j["passes"] = std::move(passes);
    return j;
}

nlohmann::json read_json_file(const std::filesystem::path& path) {
    try {
        return nlohmann::json::parse(read_text_file(path));
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(ErrorCode::io, "cannot parse " + path.string() + ": " + e.what());
    }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream os(path, std::ios::binary);
    if (!os) throw Error(ErrorCode::io, "cannot write " + path.string());
    os << text;
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw Error(ErrorCode::io, "cannot read " + path.string());
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

}  // namespace qbfn::io

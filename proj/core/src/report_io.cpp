#include "superosc/report_io.hpp"

#include <nlohmann/json.hpp>

#include <fstream>

namespace superosc {

namespace {

using nlohmann::json;

json to_json_obj(const PhysicalConfig& cfg) {
    return {{"hbar", cfg.hbar},
            {"p_max", cfg.p_max},
            {"slit_half_width", cfg.slit_half_width},
            {"slit_center", cfg.slit_center}};
}

json to_json_obj(const ConstraintSet& cs) {
    json targets = json::array();
    for (const auto& v : cs.values) targets.push_back({v.real(), v.imag()});
    return {{"family", name_of(cs.family)}, {"nodes", cs.nodes}, {"targets", targets}};
}

json to_json_obj(const SolveOptions& s) {
    return {{"tol", s.tol}, {"start_digits", s.start_digits}, {"max_digits", s.max_digits}};
}

json to_json_obj(const SampleTable& t) {
    return {{"name", t.name}, {"columns", t.columns}, {"rows", t.rows.size()}};
}

}  // namespace

std::string to_json(const ExperimentReport& report, int indent) {
    json j;
    j["experiment"] = report.experiment;
    j["inputs"]["physical"] = to_json_obj(report.cfg);
    if (report.constraints) j["inputs"]["problem"] = to_json_obj(*report.constraints);
    j["inputs"]["solver"] = to_json_obj(report.solver);
    j["inputs"]["params"] = report.params;
    j["outputs"] = report.outputs;
    json tables = json::array();
    for (const auto& t : report.tables) tables.push_back(to_json_obj(t));
    j["tables"] = tables;
    j["notes"] = report.notes;
    return j.dump(indent);
}

std::string to_json(const SweepResult& sweep, int indent) {
    json j;
    j["experiment"] = sweep.experiment;
    j["inputs"]["physical"] = to_json_obj(sweep.cfg);
    j["inputs"]["solver"] = to_json_obj(sweep.solver);
    j["inputs"]["params"] = sweep.params;
    json points = json::array();
    for (const auto& p : sweep.points) {
        json jp;
        jp["sweep_value"] = p.sweep_value;
        jp["failed"] = p.failed;
        if (p.failed) jp["error_kind"] = p.error_kind;
        jp["outputs"] = p.outputs;
        points.push_back(std::move(jp));
    }
    j["points"] = points;
    j["fit"] = sweep.fit;
    return j.dump(indent);
}

void write_csv(const SampleTable& table, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out.precision(17);
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
        if (i) out << ',';
        out << table.columns[i];
    }
    out << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out << ',';
            out << row[i];
        }
        out << '\n';
    }
}

}  // namespace superosc

#include "cstab/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

namespace cstab {

namespace {

ordered_json params_json(const ParamMap& p) {
    ordered_json j = ordered_json::object();
    for (const auto& [k, v] : p) j[k] = v;
    return j;
}

ordered_json diagnostics_json(const std::vector<DiagnosticResult>& ds) {
    ordered_json arr = ordered_json::array();
    for (const auto& d : ds) {
        ordered_json j;
        j["name"] = d.name;
        j["pass"] = d.pass;
        j["gating"] = d.gating;
        j["value"] = d.value;
        if (!d.detail.empty()) j["detail"] = d.detail;
        arr.push_back(std::move(j));
    }
    return arr;
}

} // namespace

ordered_json verification_json(const VerificationReport& rep) {
    ordered_json j;
    j["system"] = rep.system;
    j["definition"] = rep.definition;
    j["distribution"] = rep.distribution_family;
    j["params"] = params_json(rep.distribution_params);
    j["normalizer"] = rep.normalizer_id;
    j["check_kind"] = rep.check_kind;
    j["tol"] = rep.tol;
    j["worst_residual"] = rep.worst_residual;
    j["verdict"] = verdict_name(rep.verdict);
    j["notes"] = rep.notes;
    ordered_json per_n = ordered_json::array();
    for (const auto& r : rep.per_n) {
        ordered_json nj;
        nj["n"] = r.n;
        nj["worst"] = r.worst;
        if (r.cross_residual > 0.0) nj["cross_residual"] = r.cross_residual;
        nj["points"] = r.points;
        nj["residuals"] = r.residuals;
        ordered_json errs = ordered_json::array();
        for (size_t i = 0; i < r.point_errors.size(); ++i) {
            if (r.point_errors[i].empty()) continue;
            ordered_json e;
            e["point"] = r.points[i];
            e["message"] = r.point_errors[i];
            errs.push_back(std::move(e));
        }
        nj["errors"] = std::move(errs);
        nj["diagnostics"] = diagnostics_json(r.diagnostics);
        per_n.push_back(std::move(nj));
    }
    j["per_n"] = std::move(per_n);
    return j;
}

ordered_json scan_json(const ScanResult& scan) {
    ordered_json j;
    j["combinations"] = scan.combinations;
    j["order"] = scan.order;
    ordered_json v = ordered_json::array();
    for (const auto& x : scan.violations) {
        ordered_json e;
        e["gamma"] = x.gamma;
        e["a"] = x.a;
        e["n"] = x.n;
        e["index"] = x.index;
        e["coeff"] = x.coeff;
        v.push_back(std::move(e));
    }
    j["violations"] = std::move(v);
    return j;
}

ordered_json case_report_json(const CaseReport& rep) {
    ordered_json j;
    j["id"] = rep.spec.id;
    j["title"] = rep.spec.title;
    j["expected"] = rep.spec.expected;
    j["verdict"] = rep.verdict;
    j["matches_expected"] = rep.matches_expected;
    ordered_json reports = ordered_json::array();
    for (const auto& r : rep.reports) reports.push_back(verification_json(r));
    j["reports"] = std::move(reports);
    if (rep.scan) j["scan"] = scan_json(*rep.scan);
    j["extras"] = rep.extras;
    return j;
}

ordered_json simulation_json(const SimulationReport& rep) {
    ordered_json j;
    j["samples"] = rep.count;
    j["seed"] = rep.seed;
    j["n"] = rep.n;
    j["ks"] = rep.ks.d;
    j["ks_plus"] = rep.ks.d_plus;
    j["ks_minus"] = rep.ks.d_minus;
    j["critical_1pct"] = rep.critical;
    j["pass"] = rep.pass;
    j["transform_max_dev_se"] = rep.transform_max_dev_se;
    if (!rep.case_note.empty()) j["note"] = rep.case_note;
    return j;
}

void write_json(const ordered_json& j, std::ostream& os) {
    switch (j.type()) {
        case ordered_json::value_t::object: {
            os << '{';
            bool first = true;
            for (const auto& [k, v] : j.items()) {
                if (!first) os << ',';
                first = false;
                os << nlohmann::json(k).dump() << ':';
                write_json(v, os);
            }
            os << '}';
            break;
        }
        case ordered_json::value_t::array: {
            os << '[';
            bool first = true;
            for (const auto& v : j) {
                if (!first) os << ',';
                first = false;
                write_json(v, os);
            }
            os << ']';
            break;
        }
        case ordered_json::value_t::number_float: {
            double v = j.get<double>();
            if (!std::isfinite(v)) { os << "null"; break; }
            char buf[40];
            std::snprintf(buf, sizeof buf, "%.17g", v);
            os << buf;
            break;
        }
        case ordered_json::value_t::string:
            os << j.dump();
            break;
        default:
            os << j.dump();
            break;
    }
}

std::string json_to_string(const ordered_json& j) {
    std::ostringstream os;
    write_json(j, os);
    return os.str();
}

} // namespace cstab

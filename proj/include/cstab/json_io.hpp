#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "cstab/catalog.hpp"
#include "cstab/montecarlo.hpp"

namespace cstab {

using ordered_json = nlohmann::ordered_json;

ordered_json verification_json(const VerificationReport& rep);
ordered_json case_report_json(const CaseReport& rep);
ordered_json scan_json(const ScanResult& scan);
ordered_json simulation_json(const SimulationReport& rep);

// Deterministic writer: fields keep insertion order and every float is
// serialized with 17 significant digits, so identical reports are
// byte-identical across runs.
void write_json(const ordered_json& j, std::ostream& os);
std::string json_to_string(const ordered_json& j);

} // namespace cstab

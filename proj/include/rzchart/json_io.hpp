#pragma once

#include <json.hpp>

#include "rzchart/chart_design.hpp"
#include "rzchart/monitor.hpp"
#include "rzchart/run_length.hpp"

namespace rzchart {

// JSON mapping of the persisted and exchanged types. Infinite limits are
// written as null; every other number must be finite.
nlohmann::json to_json_value(const ChartConfig& cfg);
nlohmann::json to_json_value(const InspectionRecord& rec);
nlohmann::json to_json_value(const ChartState& state);
nlohmann::json to_json_value(const ChartSummary& summary);

// Throw ValidationError on missing fields, wrong types or invalid values.
ChartConfig chart_config_from_json(const nlohmann::json& j);
InspectionRecord inspection_record_from_json(const nlohmann::json& j);
ChartState chart_state_from_json(const nlohmann::json& j);

// Design request body: side, n, gamma_x, gamma_y, z0, rho0, I and an
// optional tarl0_target.
DesignRequest design_request_from_json(const nlohmann::json& j);

}  // namespace rzchart

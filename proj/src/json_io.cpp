#include "rzchart/json_io.hpp"

#include <cmath>

#include "rzchart/errors.hpp"

namespace rzchart {
namespace {

using nlohmann::json;

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

const json& field(const json& j, const char* key) {
    if (!j.is_object()) throw ValidationError("expected a JSON object");
    const auto it = j.find(key);
    if (it == j.end()) throw ValidationError(std::string("missing field '") + key + "'");
    return *it;
}

double get_double(const json& j, const char* key) {
    const json& v = field(j, key);
    if (!v.is_number()) throw ValidationError(std::string("field '") + key + "' must be a number");
    return v.get<double>();
}

int get_int(const json& j, const char* key) {
    const json& v = field(j, key);
    if (v.is_number_integer()) return v.get<int>();
    if (v.is_number_float()) {
        const double d = v.get<double>();
        if (std::floor(d) == d && std::abs(d) < 1e9) return static_cast<int>(d);
    }
    throw ValidationError(std::string("field '") + key + "' must be an integer");
}

std::string get_string(const json& j, const char* key) {
    const json& v = field(j, key);
    if (!v.is_string()) throw ValidationError(std::string("field '") + key + "' must be a string");
    return v.get<std::string>();
}

std::optional<std::string> get_opt_string(const json& j, const char* key) {
    const auto it = j.find(key);
    if (it == j.end() || it->is_null()) return std::nullopt;
    if (!it->is_string()) throw ValidationError(std::string("field '") + key + "' must be a string");
    return it->get<std::string>();
}

std::vector<double> get_doubles(const json& j, const char* key) {
    const json& v = field(j, key);
    if (!v.is_array()) throw ValidationError(std::string("field '") + key + "' must be an array");
    std::vector<double> out;
    out.reserve(v.size());
    for (const auto& e : v) {
        if (!e.is_number()) throw ValidationError(std::string("field '") + key + "' must hold numbers");
        out.push_back(e.get<double>());
    }
    return out;
}

}  // namespace

json to_json_value(const ChartConfig& cfg) {
    return json{{"side", to_string(cfg.side)},
                {"n", cfg.n},
                {"horizon_inspections", cfg.horizon_inspections},
                {"z0", cfg.z0},
                {"rho0", cfg.rho0},
                {"gamma_x", cfg.gamma_x},
                {"gamma_y", cfg.gamma_y},
                {"tarl0_target", cfg.tarl0_target},
                {"alpha0", cfg.alpha0},
                {"lcl", finite_or_null(cfg.lcl)},
                {"ucl", finite_or_null(cfg.ucl)}};
}

json to_json_value(const InspectionRecord& rec) {
    json j{{"index", rec.index},     {"x_values", rec.x_values}, {"y_values", rec.y_values},
           {"x_bar", rec.x_bar},     {"y_bar", rec.y_bar},       {"z_hat", rec.z_hat},
           {"signal", rec.signal},   {"timestamp", nullptr},     {"label", nullptr}};
    if (rec.timestamp) j["timestamp"] = *rec.timestamp;
    if (rec.label) j["label"] = *rec.label;
    return j;
}

json to_json_value(const ChartState& state) {
    json records = json::array();
    for (const auto& r : state.records) records.push_back(to_json_value(r));
    return json{{"id", state.id},
                {"parent_id", state.parent_id ? json(*state.parent_id) : json(nullptr)},
                {"cfg", to_json_value(state.cfg)},
                {"records", std::move(records)},
                {"status", to_string(state.status)},
                {"created_at", state.created_at},
                {"updated_at", state.updated_at}};
}

json to_json_value(const ChartSummary& s) {
    return json{{"status", to_string(s.status)},
                {"inspections_done", s.inspections_done},
                {"remaining", s.remaining},
                {"signal_count", s.signal_count},
                {"signal_indices", s.signal_indices},
                {"last_z_hat", s.last_z_hat ? json(*s.last_z_hat) : json(nullptr)},
                {"lcl", finite_or_null(s.lcl)},
                {"ucl", finite_or_null(s.ucl)}};
}

ChartConfig chart_config_from_json(const json& j) {
    ChartConfig cfg;
    cfg.side = parse_side(get_string(j, "side"));
    cfg.n = get_int(j, "n");
    cfg.horizon_inspections = get_int(j, "horizon_inspections");
    cfg.z0 = get_double(j, "z0");
    cfg.rho0 = get_double(j, "rho0");
    cfg.gamma_x = get_double(j, "gamma_x");
    cfg.gamma_y = get_double(j, "gamma_y");
    cfg.tarl0_target = get_double(j, "tarl0_target");
    cfg.alpha0 = get_double(j, "alpha0");
    cfg.lcl = get_double(j, "lcl");
    const json& ucl = field(j, "ucl");
    cfg.ucl = ucl.is_null() ? kNoUpperLimit : get_double(j, "ucl");
    cfg.validate();
    return cfg;
}

InspectionRecord inspection_record_from_json(const json& j) {
    InspectionRecord rec;
    rec.index = get_int(j, "index");
    rec.x_values = get_doubles(j, "x_values");
    rec.y_values = get_doubles(j, "y_values");
    rec.x_bar = get_double(j, "x_bar");
    rec.y_bar = get_double(j, "y_bar");
    rec.z_hat = get_double(j, "z_hat");
    const json& sig = field(j, "signal");
    if (!sig.is_boolean()) throw ValidationError("field 'signal' must be a boolean");
    rec.signal = sig.get<bool>();
    rec.timestamp = get_opt_string(j, "timestamp");
    rec.label = get_opt_string(j, "label");
    return rec;
}

ChartState chart_state_from_json(const json& j) {
    ChartState state;
    state.id = get_string(j, "id");
    state.parent_id = get_opt_string(j, "parent_id");
    state.cfg = chart_config_from_json(field(j, "cfg"));
    const json& records = field(j, "records");
    if (!records.is_array()) throw ValidationError("field 'records' must be an array");
    for (const auto& r : records) state.records.push_back(inspection_record_from_json(r));
    state.status = parse_run_status(get_string(j, "status"));
    state.created_at = get_string(j, "created_at");
    state.updated_at = get_string(j, "updated_at");

    if (static_cast<int>(state.records.size()) > state.cfg.horizon_inspections) {
        throw ValidationError("more records than inspections in the run");
    }
    for (std::size_t i = 0; i < state.records.size(); ++i) {
        if (state.records[i].index != static_cast<int>(i) + 1) {
            throw ValidationError("record indices must be contiguous from 1");
        }
    }
    const bool full = static_cast<int>(state.records.size()) == state.cfg.horizon_inspections;
    if (full != (state.status == RunStatus::Completed)) {
        throw ValidationError("status must be Completed exactly when all inspections are recorded");
    }
    return state;
}

DesignRequest design_request_from_json(const json& j) {
    DesignRequest req;
    req.side = parse_side(get_string(j, "side"));
    req.n = get_int(j, "n");
    req.gamma_x = get_double(j, "gamma_x");
    req.gamma_y = get_double(j, "gamma_y");
    req.z0 = get_double(j, "z0");
    req.rho0 = get_double(j, "rho0");
    req.horizon_inspections = get_int(j, "I");
    if (const auto it = j.find("tarl0_target"); it != j.end() && !it->is_null()) {
        req.tarl0_target = get_double(j, "tarl0_target");
    }
    return req;
}

}  // namespace rzchart

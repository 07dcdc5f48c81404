#include "rzchart/server.hpp"

#include <algorithm>
#include <sstream>

#include <fmt/format.h>
#include <httplib.h>

#include "rzchart/csv.hpp"
#include "rzchart/errors.hpp"
#include "rzchart/json_io.hpp"
#include "rzchart/run_length.hpp"

namespace rzchart {
namespace {

using nlohmann::json;

ApiResponse json_response(int status, const json& body) {
    return {status, body.dump(), "application/json"};
}

ApiResponse error_response(int status, ApiError error) {
    return json_response(status, error.to_json());
}

std::vector<std::string> split_path(const std::string& path) {
    std::vector<std::string> parts;
    std::string part;
    std::istringstream in(path);
    while (std::getline(in, part, '/')) {
        if (!part.empty()) parts.push_back(part);
    }
    return parts;
}

json parse_body(const std::string& body) {
    json j = json::parse(body, nullptr, false);
    if (j.is_discarded()) throw ValidationError("request body is not valid JSON");
    if (!j.is_object()) throw ValidationError("request body must be a JSON object");
    return j;
}

const std::string* query_value(const ApiRequest& r, const std::string& key) {
    const auto it = r.query.find(key);
    return it == r.query.end() ? nullptr : &it->second;
}

const std::string& required_query(const ApiRequest& r, const std::string& key) {
    const std::string* v = query_value(r, key);
    if (!v) throw ValidationError("missing query parameter '" + key + "'");
    return *v;
}

int parse_int_param(const std::string& text, const std::string& name) {
    const long v = csv::parse_long(text, name);
    if (v < -1000000000L || v > 1000000000L) throw ValidationError(name + " is out of range");
    return static_cast<int>(v);
}

std::vector<double> parse_double_list(const std::string& text, const std::string& name) {
    std::vector<double> out;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, ',')) {
        if (item.empty()) continue;
        out.push_back(csv::parse_double(item, name));
    }
    return out;
}

json listing_entry(const ChartState& s) {
    return json{{"id", s.id},
                {"parent_id", s.parent_id ? json(*s.parent_id) : json(nullptr)},
                {"cfg", to_json_value(s.cfg)},
                {"status", to_string(s.status)},
                {"created_at", s.created_at},
                {"updated_at", s.updated_at},
                {"summary", to_json_value(chart_status(s))}};
}

}  // namespace

json ApiError::to_json() const {
    json j{{"code", code}, {"message", message}};
    if (detail) j["detail"] = *detail;
    return j;
}

ApiResponse Api::handle(const ApiRequest& request) {
    try {
        const auto parts = split_path(request.path);
        const bool get = request.method == "GET";
        const bool post = request.method == "POST";
        if (parts.size() >= 2 && parts[0] == "api") {
            if (parts.size() == 2 && parts[1] == "charts") {
                if (get) return list_charts();
                if (post) return create_chart(request);
            } else if (parts.size() == 3 && parts[1] == "charts" && get) {
                return get_chart(parts[2]);
            } else if (parts.size() == 4 && parts[1] == "charts" && post) {
                if (parts[3] == "inspections") return post_inspection(parts[2], request);
                if (parts[3] == "reset") return reset_chart(parts[2]);
            } else if (parts.size() == 2 && parts[1] == "tarl" && get) {
                return tarl_curve(request);
            } else if (parts.size() == 2 && parts[1] == "openapi.json" && get) {
                return {200, openapi_document(), "application/json"};
            }
        }
        return error_response(404, {"not_found", fmt::format("no route for {} {}", request.method, request.path), {}});
    } catch (const ValidationError& e) {
        return error_response(400, {"invalid_params", e.what(), {}});
    } catch (const DomainError& e) {
        return error_response(422, {"domain_error", e.what(), {}});
    } catch (const NotFoundError& e) {
        return error_response(404, {"not_found", e.what(), {}});
    } catch (const StateError& e) {
        return error_response(409, {"conflict", e.what(), {}});
    } catch (const IoError& e) {
        return error_response(500, {"io_error", e.what(), {}});
    } catch (const json::exception& e) {
        return error_response(400, {"invalid_params", e.what(), {}});
    }
}

ApiResponse Api::create_chart(const ApiRequest& request) {
    const json body = parse_body(request.body);
    const DesignRequest design = design_request_from_json(body);
    std::optional<std::string> token;
    if (const auto it = body.find("client_token"); it != body.end() && !it->is_null()) {
        if (!it->is_string()) throw ValidationError("client_token must be a string");
        token = it->get<std::string>();
    }
    const ChartConfig cfg = design_chart(design);
    auto created = store_.create(cfg, token);
    return json_response(created.created ? 201 : 200, to_json_value(created.state));
}

ApiResponse Api::list_charts() {
    json out = json::array();
    for (const auto& s : store_.list()) out.push_back(listing_entry(s));
    return json_response(200, out);
}

ApiResponse Api::get_chart(const std::string& id) {
    return json_response(200, to_json_value(store_.get(id)));
}

ApiResponse Api::post_inspection(const std::string& id, const ApiRequest& request) {
    const json body = parse_body(request.body);
    const auto read_list = [&](const char* key) {
        const auto it = body.find(key);
        if (it == body.end() || !it->is_array()) throw ValidationError(std::string(key) + " must be an array");
        std::vector<double> v;
        for (const auto& e : *it) {
            if (!e.is_number()) throw ValidationError(std::string(key) + " must hold numbers");
            v.push_back(e.get<double>());
        }
        return v;
    };
    const std::vector<double> x = read_list("x_values");
    const std::vector<double> y = read_list("y_values");
    std::optional<std::string> label;
    if (const auto it = body.find("label"); it != body.end() && !it->is_null()) {
        if (!it->is_string()) throw ValidationError("label must be a string");
        label = it->get<std::string>();
    }
    // Existence is checked before validation so an unknown id is a 404
    // even with a malformed body.
    (void)store_.get(id);
    const InspectionRecord rec = store_.ingest(id, x, y, std::move(label));
    json out = to_json_value(rec);
    out["run_status"] = to_string(store_.get(id).status);
    return json_response(200, out);
}

ApiResponse Api::reset_chart(const std::string& id) {
    return json_response(201, to_json_value(store_.reset(id)));
}

ApiResponse Api::tarl_curve(const ApiRequest& request) {
    DesignRequest design;
    design.side = parse_side(required_query(request, "side"));
    design.n = parse_int_param(required_query(request, "n"), "n");
    design.gamma_x = csv::parse_double(required_query(request, "gamma_x"), "gamma_x");
    design.gamma_y = csv::parse_double(required_query(request, "gamma_y"), "gamma_y");
    design.z0 = csv::parse_double(required_query(request, "z0"), "z0");
    design.rho0 = csv::parse_double(required_query(request, "rho0"), "rho0");
    design.horizon_inspections = parse_int_param(required_query(request, "I"), "I");
    if (const auto* t = query_value(request, "tarl0_target")) design.tarl0_target = csv::parse_double(*t, "tarl0_target");

    std::vector<double> taus = parse_double_list(required_query(request, "taus"), "taus");
    if (taus.empty()) throw ValidationError("taus must list at least one shift");
    std::sort(taus.begin(), taus.end());
    double rho1 = design.rho0;
    if (const auto* r = query_value(request, "rho1")) rho1 = csv::parse_double(*r, "rho1");

    const ChartConfig cfg = design_chart(design);
    json out = json::array();
    for (const double tau : taus) {
        const ShiftScenario sc{tau, rho1};
        out.push_back(json{{"tau", tau}, {"tarl1", tarl1(cfg, sc)}});
    }
    return json_response(200, out);
}

struct HttpServer::Impl {
    Api& api;
    ServerOptions options;
    httplib::Server server;
    int port = -1;

    Impl(Api& a, ServerOptions o) : api(a), options(std::move(o)) {}
};

HttpServer::HttpServer(Api& api, ServerOptions options) : impl_(std::make_unique<Impl>(api, std::move(options))) {
    auto forward = [this](const httplib::Request& req, httplib::Response& res) {
        ApiRequest r;
        r.method = req.method;
        r.path = req.path;
        for (const auto& [k, v] : req.params) r.query.emplace(k, v);
        r.body = req.body;
        const ApiResponse out = impl_->api.handle(r);
        res.status = out.status;
        res.set_content(out.body, out.content_type);
    };
    impl_->server.Get(R"(/api/.*)", forward);
    impl_->server.Post(R"(/api/.*)", forward);
    if (impl_->options.static_dir) {
        if (!impl_->server.set_mount_point("/", impl_->options.static_dir->string())) {
            throw IoError("static directory '" + impl_->options.static_dir->string() + "' does not exist");
        }
    }
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind() {
    auto& s = impl_->server;
    if (impl_->options.port == 0) {
        impl_->port = s.bind_to_any_port(impl_->options.host);
    } else {
        impl_->port = s.bind_to_port(impl_->options.host, impl_->options.port) ? impl_->options.port : -1;
    }
    if (impl_->port <= 0) {
        throw IoError(fmt::format("cannot bind {}:{}", impl_->options.host, impl_->options.port));
    }
    return impl_->port;
}

void HttpServer::run() { impl_->server.listen_after_bind(); }

void HttpServer::stop() {
    if (impl_ && impl_->server.is_running()) impl_->server.stop();
}

}  // namespace rzchart

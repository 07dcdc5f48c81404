#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>

#include <json.hpp>

#include "rzchart/store.hpp"

namespace rzchart {

struct ApiError {
    std::string code;  // invalid_params, domain_error, not_found, conflict, io_error
    std::string message;
    std::optional<nlohmann::json> detail;

    nlohmann::json to_json() const;
};

struct ApiRequest {
    std::string method;  // "GET" or "POST"
    std::string path;
    std::multimap<std::string, std::string> query;
    std::string body;
};

struct ApiResponse {
    int status = 200;
    std::string body;
    std::string content_type = "application/json";

    nlohmann::json json() const { return nlohmann::json::parse(body); }
};

// Transport-independent request router. The HTTP server forwards every
// /api request here, which keeps handlers testable without sockets.
class Api {
public:
    explicit Api(ChartStore& store) : store_(store) {}

    ApiResponse handle(const ApiRequest& request);

private:
    ApiResponse create_chart(const ApiRequest& request);
    ApiResponse list_charts();
    ApiResponse get_chart(const std::string& id);
    ApiResponse post_inspection(const std::string& id, const ApiRequest& request);
    ApiResponse reset_chart(const std::string& id);
    ApiResponse tarl_curve(const ApiRequest& request);

    ChartStore& store_;
};

// The OpenAPI description served at /api/openapi.json.
const std::string& openapi_document();

struct ServerOptions {
    std::string host = "127.0.0.1";
    int port = 8642;
    std::optional<std::filesystem::path> static_dir;  // UI assets served at /
};

// HTTP/1.1 front end over an Api. Port 0 binds an ephemeral port.
class HttpServer {
public:
    HttpServer(Api& api, ServerOptions options);
    ~HttpServer();
    HttpServer(const HttpServer&) = delete;
    HttpServer& operator=(const HttpServer&) = delete;

    // Returns the bound port; throws IoError if binding fails.
    int bind();
    // Serves until stop() is called from another thread.
    void run();
    void stop();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace rzchart

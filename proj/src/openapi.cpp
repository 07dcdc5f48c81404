#include "rzchart/server.hpp"

namespace rzchart {

const std::string& openapi_document() {
    static const std::string doc = R"json({
  "openapi": "3.0.3",
  "info": {
    "title": "rzchart API",
    "version": "1.0.0",
    "description": "Design, run-length evaluation and live monitoring of one-sided control charts for the ratio of two normal variables."
  },
  "servers": [{"url": "http://127.0.0.1:8642"}],
  "paths": {
    "/api/charts": {
      "get": {
        "summary": "List stored charts, most recently updated first",
        "responses": {"200": {"description": "Array of chart listing entries"}}
      },
      "post": {
        "summary": "Design a chart and persist an empty run",
        "requestBody": {"required": true, "content": {"application/json": {"schema": {"$ref": "#/components/schemas/DesignRequest"}}}},
        "responses": {
          "201": {"description": "Created", "content": {"application/json": {"schema": {"$ref": "#/components/schemas/ChartState"}}}},
          "200": {"description": "client_token replayed; the chart created by its first use"},
          "400": {"$ref": "#/components/responses/Error"},
          "422": {"$ref": "#/components/responses/Error"}
        }
      }
    },
    "/api/charts/{id}": {
      "get": {
        "summary": "Fetch one chart state",
        "parameters": [{"$ref": "#/components/parameters/ChartId"}],
        "responses": {
          "200": {"description": "OK", "content": {"application/json": {"schema": {"$ref": "#/components/schemas/ChartState"}}}},
          "404": {"$ref": "#/components/responses/Error"}
        }
      }
    },
    "/api/charts/{id}/inspections": {
      "post": {
        "summary": "Record one inspection of n (x, y) pairs",
        "parameters": [{"$ref": "#/components/parameters/ChartId"}],
        "requestBody": {"required": true, "content": {"application/json": {"schema": {
          "type": "object",
          "required": ["x_values", "y_values"],
          "properties": {
            "x_values": {"type": "array", "items": {"type": "number"}},
            "y_values": {"type": "array", "items": {"type": "number"}},
            "label": {"type": "string"}
          }}}}},
        "responses": {
          "200": {"description": "The new record plus run_status", "content": {"application/json": {"schema": {"$ref": "#/components/schemas/InspectionRecord"}}}},
          "400": {"$ref": "#/components/responses/Error"},
          "404": {"$ref": "#/components/responses/Error"},
          "409": {"$ref": "#/components/responses/Error"}
        }
      }
    },
    "/api/charts/{id}/reset": {
      "post": {
        "summary": "Start a new empty run with the same design",
        "parameters": [{"$ref": "#/components/parameters/ChartId"}],
        "responses": {
          "201": {"description": "The new run, parent_id set to the old run", "content": {"application/json": {"schema": {"$ref": "#/components/schemas/ChartState"}}}},
          "404": {"$ref": "#/components/responses/Error"}
        }
      }
    },
    "/api/tarl": {
      "get": {
        "summary": "Expected truncated run length under shifts of the in-control ratio",
        "parameters": [
          {"name": "side", "in": "query", "required": true, "schema": {"type": "string", "enum": ["lower", "upper"]}},
          {"name": "n", "in": "query", "required": true, "schema": {"type": "integer", "minimum": 1}},
          {"name": "gamma_x", "in": "query", "required": true, "schema": {"type": "number"}},
          {"name": "gamma_y", "in": "query", "required": true, "schema": {"type": "number"}},
          {"name": "z0", "in": "query", "required": true, "schema": {"type": "number"}},
          {"name": "rho0", "in": "query", "required": true, "schema": {"type": "number"}},
          {"name": "I", "in": "query", "required": true, "schema": {"type": "integer", "minimum": 1}},
          {"name": "taus", "in": "query", "required": true, "description": "Comma-separated shift factors", "schema": {"type": "string"}},
          {"name": "rho1", "in": "query", "required": false, "description": "Correlation after the shift; defaults to rho0", "schema": {"type": "number"}},
          {"name": "tarl0_target", "in": "query", "required": false, "schema": {"type": "number"}}
        ],
        "responses": {
          "200": {"description": "Points ordered by tau", "content": {"application/json": {"schema": {"type": "array", "items": {
            "type": "object", "properties": {"tau": {"type": "number"}, "tarl1": {"type": "number"}}}}}}},
          "400": {"$ref": "#/components/responses/Error"},
          "422": {"$ref": "#/components/responses/Error"}
        }
      }
    },
    "/api/openapi.json": {
      "get": {"summary": "This document", "responses": {"200": {"description": "OpenAPI description"}}}
    }
  },
  "components": {
    "parameters": {
      "ChartId": {"name": "id", "in": "path", "required": true, "schema": {"type": "string"}}
    },
    "responses": {
      "Error": {"description": "Error", "content": {"application/json": {"schema": {"$ref": "#/components/schemas/ApiError"}}}}
    },
    "schemas": {
      "ApiError": {
        "type": "object",
        "required": ["code", "message"],
        "properties": {
          "code": {"type": "string", "enum": ["invalid_params", "domain_error", "not_found", "conflict", "io_error"]},
          "message": {"type": "string"},
          "detail": {}
        }
      },
      "DesignRequest": {
        "type": "object",
        "required": ["side", "n", "gamma_x", "gamma_y", "z0", "rho0", "I"],
        "properties": {
          "side": {"type": "string", "enum": ["lower", "upper"]},
          "n": {"type": "integer", "minimum": 1},
          "gamma_x": {"type": "number", "exclusiveMinimum": 0, "maximum": 0.5},
          "gamma_y": {"type": "number", "exclusiveMinimum": 0, "maximum": 0.5},
          "z0": {"type": "number", "exclusiveMinimum": 0},
          "rho0": {"type": "number", "exclusiveMinimum": -1, "exclusiveMaximum": 1},
          "I": {"type": "integer", "minimum": 1},
          "tarl0_target": {"type": "number"},
          "client_token": {"type": "string"}
        }
      },
      "ChartConfig": {
        "type": "object",
        "properties": {
          "side": {"type": "string", "enum": ["lower", "upper"]},
          "n": {"type": "integer"},
          "horizon_inspections": {"type": "integer"},
          "z0": {"type": "number"},
          "rho0": {"type": "number"},
          "gamma_x": {"type": "number"},
          "gamma_y": {"type": "number"},
          "tarl0_target": {"type": "number"},
          "alpha0": {"type": "number"},
          "lcl": {"type": "number"},
          "ucl": {"type": "number", "nullable": true, "description": "null for a lower chart"}
        }
      },
      "InspectionRecord": {
        "type": "object",
        "properties": {
          "index": {"type": "integer"},
          "x_values": {"type": "array", "items": {"type": "number"}},
          "y_values": {"type": "array", "items": {"type": "number"}},
          "x_bar": {"type": "number"},
          "y_bar": {"type": "number"},
          "z_hat": {"type": "number"},
          "signal": {"type": "boolean"},
          "timestamp": {"type": "string", "nullable": true},
          "label": {"type": "string", "nullable": true}
        }
      },
      "ChartState": {
        "type": "object",
        "properties": {
          "id": {"type": "string"},
          "parent_id": {"type": "string", "nullable": true},
          "cfg": {"$ref": "#/components/schemas/ChartConfig"},
          "records": {"type": "array", "items": {"$ref": "#/components/schemas/InspectionRecord"}},
          "status": {"type": "string", "enum": ["Active", "SignaledActive", "Completed"]},
          "created_at": {"type": "string", "format": "date-time"},
          "updated_at": {"type": "string", "format": "date-time"}
        }
      }
    }
  }
}
)json";
    return doc;
}

}  // namespace rzchart

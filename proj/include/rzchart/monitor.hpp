#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rzchart/chart_design.hpp"

namespace rzchart {

struct InspectionRecord {
    int index = 0;  // 1-based
    std::vector<double> x_values;
    std::vector<double> y_values;
    double x_bar = 0.0;
    double y_bar = 0.0;
    double z_hat = 0.0;
    bool signal = false;
    std::optional<std::string> timestamp;
    std::optional<std::string> label;

    friend bool operator==(const InspectionRecord&, const InspectionRecord&) = default;
};

enum class RunStatus { Active, SignaledActive, Completed };

std::string to_string(RunStatus status);
RunStatus parse_run_status(const std::string& text);

struct ChartState {
    std::string id;
    std::optional<std::string> parent_id;
    ChartConfig cfg;
    std::vector<InspectionRecord> records;
    RunStatus status = RunStatus::Active;
    std::string created_at;
    std::string updated_at;

    friend bool operator==(const ChartState&, const ChartState&) = default;
};

// Current UTC time as ISO-8601 with millisecond precision.
std::string utc_now_iso8601();

// Random 128-bit identifier rendered as 32 hex digits.
std::string new_chart_id();

// Empty Active run for a validated config. Throws ValidationError.
ChartState create_chart(const ChartConfig& cfg);

// Appends inspection number records.size() + 1. Throws ValidationError for
// length mismatches, non-finite values or y_bar <= 0, StateError once the
// run is Completed. The record carries exactly the timestamp passed in, so
// replays without timestamps are reproducible.
const InspectionRecord& ingest_inspection(ChartState& state, std::span<const double> x_values,
                                          std::span<const double> y_values,
                                          std::optional<std::string> label = std::nullopt,
                                          std::optional<std::string> timestamp = std::nullopt);

struct ChartSummary {
    RunStatus status = RunStatus::Active;
    int inspections_done = 0;
    int remaining = 0;
    int signal_count = 0;
    std::vector<int> signal_indices;
    std::optional<double> last_z_hat;
    double lcl = 0.0;
    double ucl = 0.0;
};

ChartSummary chart_status(const ChartState& state);

// Fresh run of the same design: new id, parent_id pointing at the old run.
ChartState reset_chart(const ChartState& state);

// One inspection's worth of rows from the long-format samples CSV
// (header "inspection,label,x,y", n consecutive rows per inspection).
struct SampleBatch {
    int inspection = 0;
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

std::vector<SampleBatch> read_samples_csv(std::istream& in);

}  // namespace rzchart

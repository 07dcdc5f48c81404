#include "rzchart/monitor.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <istream>
#include <random>

#include <fmt/format.h>

#include "rzchart/csv.hpp"
#include "rzchart/errors.hpp"

namespace rzchart {

std::string to_string(RunStatus status) {
    switch (status) {
        case RunStatus::Active: return "Active";
        case RunStatus::SignaledActive: return "SignaledActive";
        case RunStatus::Completed: return "Completed";
    }
    return "Active";
}

RunStatus parse_run_status(const std::string& text) {
    if (text == "Active") return RunStatus::Active;
    if (text == "SignaledActive") return RunStatus::SignaledActive;
    if (text == "Completed") return RunStatus::Completed;
    throw ValidationError("unknown run status '" + text + "'");
}

std::string utc_now_iso8601() {
    using namespace std::chrono;
    const auto now = system_clock::now();
    const auto ms = duration_cast<milliseconds>(now.time_since_epoch()).count() % 1000;
    const std::time_t t = system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    return fmt::format("{:04}-{:02}-{:02}T{:02}:{:02}:{:02}.{:03}Z", tm.tm_year + 1900, tm.tm_mon + 1, tm.tm_mday,
                       tm.tm_hour, tm.tm_min, tm.tm_sec, ms);
}

std::string new_chart_id() {
    thread_local std::mt19937_64 gen{[] {
        std::random_device rd;
        std::seed_seq seq{rd(), rd(), rd(), rd()};
        return std::mt19937_64(seq);
    }()};
    return fmt::format("{:016x}{:016x}", gen(), gen());
}

ChartState create_chart(const ChartConfig& cfg) {
    cfg.validate();
    ChartState state;
    state.id = new_chart_id();
    state.cfg = cfg;
    state.status = RunStatus::Active;
    state.created_at = utc_now_iso8601();
    state.updated_at = state.created_at;
    return state;
}

const InspectionRecord& ingest_inspection(ChartState& state, std::span<const double> x_values,
                                          std::span<const double> y_values, std::optional<std::string> label,
                                          std::optional<std::string> timestamp) {
    if (state.status == RunStatus::Completed) {
        throw StateError("run is completed; reset the chart to start a new run");
    }
    const auto n = static_cast<std::size_t>(state.cfg.n);
    if (x_values.size() != n || y_values.size() != n) {
        throw ValidationError(fmt::format("expected {} x and {} y values, got {} and {}", n, n, x_values.size(),
                                          y_values.size()));
    }
    double sx = 0.0;
    double sy = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        if (!std::isfinite(x_values[j]) || !std::isfinite(y_values[j])) {
            throw ValidationError("sample values must be finite");
        }
        sx += x_values[j];
        sy += y_values[j];
    }
    if (!(sy > 0.0)) throw ValidationError("mean of y values must be positive");

    InspectionRecord rec;
    rec.index = static_cast<int>(state.records.size()) + 1;
    rec.x_values.assign(x_values.begin(), x_values.end());
    rec.y_values.assign(y_values.begin(), y_values.end());
    rec.x_bar = sx / static_cast<double>(n);
    rec.y_bar = sy / static_cast<double>(n);
    rec.z_hat = sx / sy;
    rec.signal = state.cfg.signals(rec.z_hat);
    rec.label = std::move(label);
    rec.timestamp = std::move(timestamp);

    const bool signalled_before = state.status == RunStatus::SignaledActive;
    state.records.push_back(std::move(rec));
    if (static_cast<int>(state.records.size()) >= state.cfg.horizon_inspections) {
        state.status = RunStatus::Completed;
    } else if (signalled_before || state.records.back().signal) {
        state.status = RunStatus::SignaledActive;
    }
    state.updated_at = utc_now_iso8601();
    return state.records.back();
}

ChartSummary chart_status(const ChartState& state) {
    ChartSummary s;
    s.status = state.status;
    s.inspections_done = static_cast<int>(state.records.size());
    s.remaining = state.cfg.horizon_inspections - s.inspections_done;
    for (const auto& r : state.records) {
        if (r.signal) s.signal_indices.push_back(r.index);
    }
    s.signal_count = static_cast<int>(s.signal_indices.size());
    if (!state.records.empty()) s.last_z_hat = state.records.back().z_hat;
    s.lcl = state.cfg.lcl;
    s.ucl = state.cfg.ucl;
    return s;
}

ChartState reset_chart(const ChartState& state) {
    ChartState next;
    next.id = new_chart_id();
    next.parent_id = state.id;
    next.cfg = state.cfg;
    next.status = RunStatus::Active;
    next.created_at = utc_now_iso8601();
    next.updated_at = next.created_at;
    return next;
}

std::vector<SampleBatch> read_samples_csv(std::istream& in) {
    std::vector<std::string> f;
    if (!csv::read_record(in, f)) throw ValidationError("samples CSV is empty");
    if (f != std::vector<std::string>{"inspection", "label", "x", "y"}) {
        throw ValidationError("samples CSV header must be 'inspection,label,x,y'");
    }
    std::vector<SampleBatch> batches;
    while (csv::read_record(in, f)) {
        if (f.size() != 4) throw ValidationError("samples CSV rows need 4 fields");
        const int idx = static_cast<int>(csv::parse_long(f[0], "inspection"));
        if (batches.empty() || batches.back().inspection != idx) {
            if (!batches.empty() && idx != batches.back().inspection + 1) {
                throw ValidationError(fmt::format("inspection numbers must be contiguous; {} follows {}", idx,
                                                  batches.back().inspection));
            }
            if (batches.empty() && idx != 1) throw ValidationError("first inspection must be numbered 1");
            batches.push_back({idx, f[1], {}, {}});
        }
        batches.back().x.push_back(csv::parse_double(f[2], "x"));
        batches.back().y.push_back(csv::parse_double(f[3], "y"));
    }
    return batches;
}

}  // namespace rzchart

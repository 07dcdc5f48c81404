#pragma once

#include <limits>
#include <optional>
#include <string>

#include "rzchart/ratio_dist.hpp"

namespace rzchart {

enum class ChartSide { Lower, Upper };

std::string to_string(ChartSide side);
// Accepts "lower"/"upper" in any letter case; throws ValidationError.
ChartSide parse_side(const std::string& text);

inline constexpr double kNoUpperLimit = std::numeric_limits<double>::infinity();
inline constexpr double kNoLowerLimit = 0.0;

// A designed one-sided chart. The unused limit is a sentinel: +inf as the
// upper limit of a Lower chart, 0 as the lower limit of an Upper chart.
struct ChartConfig {
    ChartSide side = ChartSide::Upper;
    int n = 1;
    int horizon_inspections = 1;  // I
    double z0 = 1.0;
    double rho0 = 0.0;
    double gamma_x = 0.0;
    double gamma_y = 0.0;
    double tarl0_target = 1.0;
    double alpha0 = 0.0;
    double lcl = kNoLowerLimit;
    double ucl = kNoUpperLimit;

    SampleRatioParams in_control() const { return {n, gamma_x, gamma_y, z0, rho0}; }

    // The limit that can actually be crossed.
    double active_limit() const { return side == ChartSide::Lower ? lcl : ucl; }

    // Strict comparison: a point sitting exactly on the limit is in control.
    bool signals(double z_hat) const {
        return side == ChartSide::Lower ? z_hat < lcl : z_hat > ucl;
    }

    // Throws ValidationError if the stored design is inconsistent.
    void validate() const;

    friend bool operator==(const ChartConfig&, const ChartConfig&) = default;
};

struct DesignRequest {
    ChartSide side = ChartSide::Upper;
    int n = 1;
    double gamma_x = 0.0;
    double gamma_y = 0.0;
    double z0 = 1.0;
    double rho0 = 0.0;
    int horizon_inspections = 2;
    // In-control TARL to design for; defaults to horizon_inspections.
    std::optional<double> tarl0_target;
};

// In-control TARL of a chart with per-inspection false-alarm probability
// alpha over I inspections.
double tarl0_of_alpha(double alpha, int horizon);

// Per-inspection false-alarm probability giving TARL0 == target over the
// horizon. Target must lie in (1, I + 1); defaults to I. Bisection, so the
// result is unique and always bracketed.
double solve_alpha_for_tarl0(int horizon, std::optional<double> target = std::nullopt);

ChartConfig design_chart(const DesignRequest& request);

struct RunPlan {
    double horizon_hours = 0.0;
    int inspections = 1;
    long lot_size = 0;  // informational only
};

// Hours between consecutive inspections: H / (I + 1).
double sampling_frequency(const RunPlan& plan);

}  // namespace rzchart

#include "rzchart/chart_design.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include <fmt/format.h>

#include "rzchart/errors.hpp"
#include "rzchart/run_length.hpp"

namespace rzchart {

std::string to_string(ChartSide side) {
    return side == ChartSide::Lower ? "lower" : "upper";
}

ChartSide parse_side(const std::string& text) {
    std::string lowered(text);
    std::transform(lowered.begin(), lowered.end(), lowered.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (lowered == "lower") return ChartSide::Lower;
    if (lowered == "upper") return ChartSide::Upper;
    throw ValidationError("side must be 'lower' or 'upper', got '" + text + "'");
}

void ChartConfig::validate() const {
    if (horizon_inspections < 1) throw ValidationError("horizon_inspections must be at least 1");
    in_control().validate();
    if (!(alpha0 > 0.0 && alpha0 < 1.0)) throw ValidationError("alpha0 must lie in (0, 1)");
    if (!(tarl0_target > 1.0 && tarl0_target < horizon_inspections + 1.0)) {
        throw ValidationError("tarl0_target must lie in (1, I + 1)");
    }
    if (side == ChartSide::Lower) {
        if (!std::isfinite(lcl) || !(std::isinf(ucl) && ucl > 0)) {
            throw ValidationError("lower chart needs a finite lcl and an infinite ucl");
        }
    } else {
        if (lcl != kNoLowerLimit || !std::isfinite(ucl)) {
            throw ValidationError("upper chart needs lcl = 0 and a finite ucl");
        }
    }
    if (!(lcl < z0 && z0 < ucl)) throw ValidationError("limits must bracket z0");
}

double tarl0_of_alpha(double alpha, int horizon) {
    return tarl(alpha, horizon);
}

double solve_alpha_for_tarl0(int horizon, std::optional<double> target) {
    if (horizon < 1) throw ValidationError("number of inspections must be at least 1");
    const double goal = target.value_or(static_cast<double>(horizon));
    if (!(goal > 1.0 && goal < horizon + 1.0)) {
        throw ValidationError(fmt::format(
            "TARL0 target {} must lie strictly between 1 and I + 1 = {}", goal, horizon + 1));
    }

    // tarl0_of_alpha falls monotonically from I + 1 to 1 on (0, 1).
    double lo = 1e-12;
    double hi = 1.0 - 1e-12;
    double mid = 0.5 * (lo + hi);
    for (int iter = 0; iter < 200; ++iter) {
        mid = 0.5 * (lo + hi);
        const double residual = tarl0_of_alpha(mid, horizon) - goal;
        if (std::fabs(residual) <= 1e-12 || mid == lo || mid == hi) break;
        if (residual > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return mid;
}

ChartConfig design_chart(const DesignRequest& request) {
    ChartConfig cfg;
    cfg.side = request.side;
    cfg.n = request.n;
    cfg.horizon_inspections = request.horizon_inspections;
    cfg.z0 = request.z0;
    cfg.rho0 = request.rho0;
    cfg.gamma_x = request.gamma_x;
    cfg.gamma_y = request.gamma_y;
    cfg.in_control().validate();

    cfg.tarl0_target = request.tarl0_target.value_or(static_cast<double>(request.horizon_inspections));
    cfg.alpha0 = solve_alpha_for_tarl0(request.horizon_inspections, cfg.tarl0_target);

    const SampleRatioParams sp = cfg.in_control();
    if (cfg.side == ChartSide::Lower) {
        cfg.lcl = sample_ratio_idf(cfg.alpha0, sp);
        cfg.ucl = kNoUpperLimit;
    } else {
        cfg.lcl = kNoLowerLimit;
        cfg.ucl = sample_ratio_idf(1.0 - cfg.alpha0, sp);
    }
    if (!std::isfinite(cfg.active_limit()) || !(cfg.lcl < cfg.z0 && cfg.z0 < cfg.ucl)) {
        throw DomainError("design produced a limit that does not bracket z0");
    }
    return cfg;
}

double sampling_frequency(const RunPlan& plan) {
    if (!(plan.horizon_hours > 0.0) || !std::isfinite(plan.horizon_hours)) {
        throw ValidationError("horizon_hours must be positive");
    }
    if (plan.inspections < 1) throw ValidationError("inspections must be at least 1");
    return plan.horizon_hours / (plan.inspections + 1);
}

}  // namespace rzchart

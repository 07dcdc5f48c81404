#include "rzchart/run_length.hpp"

#include <cmath>

#include <fmt/format.h>

#include "rzchart/errors.hpp"

namespace rzchart {

namespace {

// (1 - p)^k without cancellation for small p.
double survival(double p, int k) {
    if (k == 0) return 1.0;
    if (p >= 1.0) return 0.0;
    return std::exp(static_cast<double>(k) * std::log1p(-p));
}

void check_support(int l, const TrlDistribution& d) {
    d.validate();
    if (l < 1 || l > d.horizon + 1) {
        throw DomainError(fmt::format("run length {} outside support 1..{}", l, d.horizon + 1));
    }
}

}  // namespace

void ShiftScenario::validate() const {
    if (!std::isfinite(tau) || !(tau > 0.0)) throw ValidationError("tau must be positive");
    if (!std::isfinite(rho1) || !(rho1 > -1.0 && rho1 < 1.0)) {
        throw ValidationError("rho1 must lie in the open interval (-1, 1)");
    }
}

void TrlDistribution::validate() const {
    if (!(p >= 0.0 && p <= 1.0)) throw ValidationError("signal probability must lie in [0, 1]");
    if (horizon < 1) throw ValidationError("horizon must be at least 1");
}

double trl_pmf(int l, const TrlDistribution& d) {
    check_support(l, d);
    if (l == d.horizon + 1) return survival(d.p, d.horizon);
    return d.p * survival(d.p, l - 1);
}

double trl_cdf(int l, const TrlDistribution& d) {
    check_support(l, d);
    if (l == d.horizon + 1) return 1.0;
    return -std::expm1(static_cast<double>(l) * std::log1p(-d.p));
}

double tarl(double p, int horizon) {
    TrlDistribution{p, horizon}.validate();
    if (p == 0.0) return horizon + 1.0;
    if (p >= 1.0) return 1.0;
    // 1 - (1 - p)^(I+1) == -expm1((I+1) log1p(-p))
    return -std::expm1((horizon + 1.0) * std::log1p(-p)) / p;
}

ErrorProbabilities error_probabilities(const ChartConfig& cfg, const ShiftScenario& sc, OmegaRule rule) {
    cfg.validate();
    sc.validate();

    const SampleRatioParams in_control = cfg.in_control();
    RatioParams shifted = in_control.aggregated();
    shifted.rho = sc.rho1;
    if (rule == OmegaRule::FollowShift) {
        shifted.omega = sc.tau * cfg.z0 * cfg.gamma_x / cfg.gamma_y;
    }

    ErrorProbabilities out;
    if (cfg.side == ChartSide::Lower) {
        out.alpha = sample_ratio_cdf(cfg.lcl, in_control);
        out.beta = 1.0 - ratio_cdf(cfg.lcl, shifted);
    } else {
        out.alpha = 1.0 - sample_ratio_cdf(cfg.ucl, in_control);
        out.beta = ratio_cdf(cfg.ucl, shifted);
    }
    return out;
}

double tarl1(const ChartConfig& cfg, const ShiftScenario& sc, OmegaRule rule) {
    const ErrorProbabilities e = error_probabilities(cfg, sc, rule);
    return tarl(1.0 - e.beta, cfg.horizon_inspections);
}

}  // namespace rzchart

#pragma once

#include "rzchart/chart_design.hpp"

namespace rzchart {

// Out-of-control state: ratio moves to tau * z0, correlation to rho1.
struct ShiftScenario {
    double tau = 1.0;
    double rho1 = 0.0;

    void validate() const;
};

// Truncated run length of a chart signalling with probability p at each of
// I inspections. Support is {1, ..., I + 1}; I + 1 means the run finished
// without a signal.
struct TrlDistribution {
    double p = 0.0;
    int horizon = 1;

    void validate() const;
};

double trl_pmf(int l, const TrlDistribution& d);
double trl_cdf(int l, const TrlDistribution& d);

// Expected truncated run length, (1 - (1 - p)^(I + 1)) / p, and I + 1 at p = 0.
double tarl(double p, int horizon);

// How the standard-deviation ratio is treated once the ratio has shifted.
enum class OmegaRule {
    FollowShift,     // omega1 = z1 * gamma_x / gamma_y
    HoldInControl,   // omega stays at omega0
};

struct ErrorProbabilities {
    double alpha = 0.0;  // per-inspection false alarm probability
    double beta = 0.0;   // per-inspection miss probability under the shift
};

ErrorProbabilities error_probabilities(const ChartConfig& cfg, const ShiftScenario& sc,
                                       OmegaRule rule = OmegaRule::FollowShift);

double tarl1(const ChartConfig& cfg, const ShiftScenario& sc,
             OmegaRule rule = OmegaRule::FollowShift);

}  // namespace rzchart

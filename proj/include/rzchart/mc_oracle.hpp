#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "rzchart/chart_design.hpp"
#include "rzchart/run_length.hpp"

namespace rzchart {

// xoshiro256** with splitmix64 seeding. Each replication of a simulation
// gets its own generator from (seed, replication index), so results do not
// depend on how replications are scheduled across threads.
class Rng {
public:
    explicit Rng(std::uint64_t seed);

    // Independent stream `stream` of the family rooted at `seed`.
    static Rng for_stream(std::uint64_t seed, std::uint64_t stream);

    std::uint64_t next_u64() noexcept;

    // Uniform on the open interval (0, 1) with 53-bit resolution.
    double uniform_open() noexcept;

    // Standard normal via the inverse CDF.
    double normal();

private:
    std::uint64_t s_[4];
};

struct InspectionSample {
    std::vector<double> x;
    std::vector<double> y;
};

// n pairs from the bivariate normal with means (mu_x, mu_y), standard
// deviations gamma * mu and correlation rho:
//   X = mu_x + sigma_x (rho u + sqrt(1 - rho^2) v),  Y = mu_y + sigma_y u.
// gamma_x = 0 is accepted and yields constant X.
InspectionSample sample_inspection(double mu_x, double mu_y, double gamma_x, double gamma_y,
                                   double rho, int n, Rng& rng);

struct SimulationSpec {
    ChartConfig cfg;
    ShiftScenario scenario;
    long replications = 100000;
    std::uint64_t seed = 0;
    // Mean of Y at each inspection; length must equal I. Defaults to 1.0.
    std::optional<std::vector<double>> mu_y_schedule;

    void validate() const;
};

struct SimulatedRun {
    int length = 0;                   // 1..I+1
    bool nonpositive_denominator = false;  // ended on a Y-bar <= 0 draw
};

// One finite-horizon run under the scenario's (tau * z0, rho1).
SimulatedRun simulate_trl(const SimulationSpec& spec, Rng& rng);

struct TarlEstimate {
    double mean = 0.0;
    double standard_error = 0.0;
    long replications = 0;
    double signal_fraction = 0.0;     // share of runs that signalled before I + 1
    long nonpositive_denominators = 0;
};

// Mean and standard error of simulate_trl over spec.replications runs.
// threads = 0 picks std::thread::hardware_concurrency().
TarlEstimate estimate_tarl(const SimulationSpec& spec, unsigned threads = 1);

}  // namespace rzchart

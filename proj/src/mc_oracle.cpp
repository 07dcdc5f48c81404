#include "rzchart/mc_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "rzchart/errors.hpp"
#include "rzchart/normal.hpp"

namespace rzchart {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) noexcept {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
    return (x << k) | (x >> (64 - k));
}

struct Partial {
    long count = 0;
    long signalled = 0;
    long flagged = 0;
    // Integer sums keep the reduction exact, hence thread-count independent.
    unsigned long long sum = 0;
    unsigned long long sum_sq = 0;
};

Partial run_range(const SimulationSpec& spec, long begin, long end) {
    Partial part;
    const int horizon = spec.cfg.horizon_inspections;
    for (long r = begin; r < end; ++r) {
        Rng rng = Rng::for_stream(spec.seed, static_cast<std::uint64_t>(r));
        const SimulatedRun run = simulate_trl(spec, rng);
        const auto l = static_cast<unsigned long long>(run.length);
        ++part.count;
        part.sum += l;
        part.sum_sq += l * l;
        if (run.length <= horizon) ++part.signalled;
        if (run.nonpositive_denominator) ++part.flagged;
    }
    return part;
}

}  // namespace

Rng::Rng(std::uint64_t seed) {
    std::uint64_t state = seed;
    for (auto& word : s_) word = splitmix64(state);
}

Rng Rng::for_stream(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t state = seed;
    const std::uint64_t root = splitmix64(state);
    std::uint64_t mixed = root ^ (stream * 0xD1B54A32D192ED03ULL);
    return Rng(splitmix64(mixed));
}

std::uint64_t Rng::next_u64() noexcept {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
}

double Rng::uniform_open() noexcept {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double Rng::normal() {
    return std_normal_quantile(uniform_open());
}

InspectionSample sample_inspection(double mu_x, double mu_y, double gamma_x, double gamma_y,
                                   double rho, int n, Rng& rng) {
    if (n < 1) throw ValidationError("sample size must be at least 1");
    if (!(rho > -1.0 && rho < 1.0)) throw ValidationError("rho must lie in (-1, 1)");
    if (gamma_x < 0.0 || gamma_y < 0.0) throw ValidationError("coefficients of variation must be non-negative");

    const double sigma_x = gamma_x * mu_x;
    const double sigma_y = gamma_y * mu_y;
    const double residual = std::sqrt(1.0 - rho * rho);

    InspectionSample out;
    out.x.reserve(static_cast<std::size_t>(n));
    out.y.reserve(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
        const double u = rng.normal();
        const double v = rng.normal();
        out.x.push_back(mu_x + sigma_x * (rho * u + residual * v));
        out.y.push_back(mu_y + sigma_y * u);
    }
    return out;
}

void SimulationSpec::validate() const {
    cfg.validate();
    scenario.validate();
    if (replications < 1) throw ValidationError("replications must be at least 1");
    if (mu_y_schedule) {
        if (static_cast<int>(mu_y_schedule->size()) != cfg.horizon_inspections) {
            throw ValidationError("mu_y schedule length must equal the number of inspections");
        }
        for (double m : *mu_y_schedule) {
            if (!(m > 0.0) || !std::isfinite(m)) throw ValidationError("mu_y schedule entries must be positive");
        }
    }
}

SimulatedRun simulate_trl(const SimulationSpec& spec, Rng& rng) {
    const ChartConfig& cfg = spec.cfg;
    const int horizon = cfg.horizon_inspections;
    const double z1 = spec.scenario.tau * cfg.z0;
    for (int i = 1; i <= horizon; ++i) {
        const double mu_y = spec.mu_y_schedule ? (*spec.mu_y_schedule)[static_cast<std::size_t>(i - 1)] : 1.0;
        const InspectionSample s =
            sample_inspection(z1 * mu_y, mu_y, cfg.gamma_x, cfg.gamma_y, spec.scenario.rho1, cfg.n, rng);
        double sx = 0.0;
        double sy = 0.0;
        for (int j = 0; j < cfg.n; ++j) {
            sx += s.x[static_cast<std::size_t>(j)];
            sy += s.y[static_cast<std::size_t>(j)];
        }
        if (!(sy > 0.0)) return {i, true};
        if (cfg.signals(sx / sy)) return {i, false};
    }
    return {horizon + 1, false};
}

TarlEstimate estimate_tarl(const SimulationSpec& spec, unsigned threads) {
    spec.validate();
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    const long total = spec.replications;
    threads = static_cast<unsigned>(std::min<long>(threads, total));

    std::vector<Partial> parts(threads);
    if (threads == 1) {
        parts[0] = run_range(spec, 0, total);
    } else {
        std::vector<std::jthread> workers;
        workers.reserve(threads);
        for (unsigned t = 0; t < threads; ++t) {
            const long begin = total * t / threads;
            const long end = total * (t + 1) / threads;
            workers.emplace_back([&spec, &parts, t, begin, end] { parts[t] = run_range(spec, begin, end); });
        }
    }

    Partial all;
    for (const Partial& p : parts) {
        all.count += p.count;
        all.signalled += p.signalled;
        all.flagged += p.flagged;
        all.sum += p.sum;
        all.sum_sq += p.sum_sq;
    }

    TarlEstimate est;
    est.replications = all.count;
    const double m = static_cast<double>(all.count);
    est.mean = static_cast<double>(all.sum) / m;
    if (all.count > 1) {
        const double var = (static_cast<double>(all.sum_sq) - m * est.mean * est.mean) / (m - 1.0);
        est.standard_error = std::sqrt(std::max(0.0, var) / m);
    }
    est.signal_fraction = static_cast<double>(all.signalled) / m;
    est.nonpositive_denominators = all.flagged;
    return est;
}

}  // namespace rzchart

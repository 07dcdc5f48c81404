// Acceptance runner: one PASS/FAIL line per primary criterion. Exits
// non-zero when any criterion fails.

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include <fmt/format.h>

#include "../golden.hpp"
#include "rzchart/chart_design.hpp"
#include "rzchart/mc_oracle.hpp"
#include "rzchart/monitor.hpp"
#include "rzchart/ratio_dist.hpp"
#include "rzchart/run_length.hpp"
#include "rzchart/table_gen.hpp"

#ifndef RZCHART_TEST_DATA_DIR
#error "RZCHART_TEST_DATA_DIR must be defined"
#endif
#ifndef RZCHART_CLI_PATH
#error "RZCHART_CLI_PATH must be defined"
#endif

using namespace rzchart;

namespace {

using Clock = std::chrono::steady_clock;

std::string data(const std::string& name) { return std::string(RZCHART_TEST_DATA_DIR) + "/" + name; }

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
    bool pass = false;
    std::string summary;
    std::vector<std::string> notes;
};

DesignRequest request(ChartSide side, int n, double gx, double gy, double rho0, int horizon) {
    DesignRequest r;
    r.side = side;
    r.n = n;
    r.gamma_x = gx;
    r.gamma_y = gy;
    r.z0 = 1.0;
    r.rho0 = rho0;
    r.horizon_inspections = horizon;
    return r;
}

std::vector<LimitsRow> reference_limits(int horizon) {
    std::ifstream in(data("reference_limits.csv"));
    std::vector<LimitsRow> out;
    for (const auto& r : parse_limits_csv(in)) {
        if (r.horizon == horizon) out.push_back(r);
    }
    return out;
}

// Evenly spread picks: index floor((j + 0.5) m / c) for j < c.
template <class T>
std::vector<T> stride_pick(const std::vector<T>& all, std::size_t count) {
    std::vector<T> out;
    for (std::size_t j = 0; j < count && !all.empty(); ++j) {
        out.push_back(all[static_cast<std::size_t>((j + 0.5) * all.size() / count)]);
    }
    return out;
}

Outcome limits_grid_full() {
    const auto reference = reference_limits(10);
    const auto t0 = Clock::now();
    GridSpec grid;
    grid.horizons = {10};
    const auto generated = gen_limits_table(grid);
    const double elapsed = seconds_since(t0);

    std::map<std::tuple<double, double, double, int>, LimitsRow> by_key;
    for (const auto& g : generated) by_key[{g.gamma_x, g.gamma_y, g.rho0, g.n}] = g;
    int ok = 0;
    Outcome o;
    for (const auto& r : reference) {
        const auto it = by_key.find({r.gamma_x, r.gamma_y, r.rho0, r.n});
        if (it != by_key.end() && std::abs(it->second.lcl - r.lcl) <= 1e-3 && std::abs(it->second.ucl - r.ucl) <= 1e-3) {
            ++ok;
        } else {
            o.notes.push_back(fmt::format("mismatch gx={} gy={} rho0={} n={}", r.gamma_x, r.gamma_y, r.rho0, r.n));
        }
    }
    o.pass = ok == static_cast<int>(reference.size()) && reference.size() == 100 && elapsed < 1.0;
    o.summary = fmt::format("{}/{} (LCL, UCL) pairs within 1e-3, {:.3f} s", ok, reference.size(), elapsed);
    return o;
}

Outcome spot_checks() {
    Outcome o;
    int ok = 0;
    int total = 0;
    for (int horizon : {30, 50}) {
        const auto reference = reference_limits(horizon);
        // Reference rows nest gamma pair -> rho0 -> n; pick ten cells that
        // cover all four gamma pairs, every rho0 twice and every n twice.
        std::map<std::tuple<double, double, double, int>, LimitsRow> by_key;
        for (const auto& r : reference) by_key[{r.gamma_x, r.gamma_y, r.rho0, r.n}] = r;
        const std::array<std::pair<double, double>, 4> gammas{{{0.01, 0.01}, {0.2, 0.2}, {0.01, 0.2}, {0.2, 0.01}}};
        const std::array<double, 5> rhos{-0.8, -0.4, 0.0, 0.4, 0.8};
        const std::array<int, 5> ns{1, 5, 7, 10, 15};
        for (int j = 0; j < 10; ++j) {
            const auto [gx, gy] = gammas[j % 4];
            const double rho = rhos[j % 5];
            const int n = ns[(j + j / 5) % 5];
            const auto it = by_key.find({gx, gy, rho, n});
            ++total;
            if (it == by_key.end()) {
                o.notes.push_back(fmt::format("I={} cell gx={} gy={} rho0={} n={} missing", horizon, gx, gy, rho, n));
                continue;
            }
            const double lcl = design_chart(request(ChartSide::Lower, n, gx, gy, rho, horizon)).lcl;
            const double ucl = design_chart(request(ChartSide::Upper, n, gx, gy, rho, horizon)).ucl;
            if (std::abs(lcl - it->second.lcl) <= 1e-3 && std::abs(ucl - it->second.ucl) <= 1e-3) {
                ++ok;
            } else {
                o.notes.push_back(fmt::format("I={} gx={} gy={} rho0={} n={}: computed ({:.4f}, {:.4f}) printed ({:.4f}, {:.4f})",
                                              horizon, gx, gy, rho, n, lcl, ucl, it->second.lcl, it->second.ucl));
            }
        }
    }
    o.pass = ok == total && total == 20;
    o.summary = fmt::format("{}/{} stratified cells (10 at I=30, 10 at I=50) within 1e-3", ok, total);
    return o;
}

Outcome food_ucl() {
    const ChartConfig cfg = design_chart(request(ChartSide::Upper, 5, 0.02, 0.01, 0.8, 15));
    Outcome o;
    o.pass = std::abs(cfg.ucl - 1.01421) <= 5e-4;
    o.summary = fmt::format("UCL = {:.6f} (target 1.01421 +- 5e-4)", cfg.ucl);
    return o;
}

Outcome food_replay() {
    Outcome o;
    std::ifstream samples(data("packaging_run.csv"));
    ChartState state = create_chart(design_chart(request(ChartSide::Upper, 5, 0.02, 0.01, 0.8, 15)));
    for (const auto& b : read_samples_csv(samples)) ingest_inspection(state, b.x, b.y, b.label);

    std::ifstream printed(data("packaging_run_printed.csv"));
    std::string line;
    std::getline(printed, line);
    int z_ok = 0;
    int rows = 0;
    while (std::getline(printed, line)) {
        int idx = 0;
        double xb = 0, yb = 0, z = 0;
        if (std::sscanf(line.c_str(), "%d,%lf,%lf,%lf", &idx, &xb, &yb, &z) != 4) continue;
        ++rows;
        const auto& rec = state.records.at(idx - 1);
        const std::string mine = fmt::format("{:.3f}", rec.z_hat);
        const std::string theirs = fmt::format("{:.3f}", z);
        if (mine == theirs) {
            ++z_ok;
        } else {
            o.notes.push_back(fmt::format(
                "inspection {}: z_hat {} from raw values (x_bar {:.3f}, y_bar {:.3f}) vs printed {} (x_bar {:.3f}, "
                "y_bar {:.3f}, ratio of printed means {:.3f})",
                idx, mine, rec.x_bar, rec.y_bar, theirs, xb, yb, xb / yb));
        }
    }
    const auto summary = chart_status(state);
    std::string got;
    for (std::size_t i = 0; i < summary.signal_indices.size(); ++i) {
        got += (i ? "," : "") + std::to_string(summary.signal_indices[i]);
    }
    const bool signals_ok = summary.signal_indices == std::vector<int>{11, 12, 13};
    o.pass = z_ok == 15 && rows == 15 && signals_ok;
    o.summary = fmt::format("{}/{} z_hat match at 3 decimals; signals {{{}}} (expected {{11,12,13}})", z_ok, rows, got);
    if (!o.pass) {
        o.notes.push_back("the printed raw weights disagree with the printed means at 12 and 13 and with the printed "
                          "z_hat at 2; replay uses the raw weights verbatim");
    }
    return o;
}

Outcome tarl_golden() {
    Outcome o;
    const auto cells = golden::load_tarl_cells(data("reference_tarl.csv"));
    std::vector<golden::TarlCell> same_rho, shift_rho;
    std::vector<golden::TarlCell> duplicated;
    for (const auto& c : cells) {
        if (golden::is_duplicated_block(c.block)) {
            duplicated.push_back(c);
        } else if (golden::is_shift_block(c.block)) {
            shift_rho.push_back(c);
        } else {
            same_rho.push_back(c);
        }
    }
    int ok = 0;
    int total = 0;
    auto run = [&](const std::vector<golden::TarlCell>& pick) {
        for (const auto& c : pick) {
            ++total;
            const auto res = golden::check_cell(c);
            if (res.ok) {
                ++ok;
            } else {
                o.notes.push_back(fmt::format("{} gx={} gy={} rho0={} rho1={} n={} tau={}: computed {:.3f} printed {}",
                                              c.block, c.gamma_x, c.gamma_y, c.rho0, c.rho1, c.n, c.tau, res.computed,
                                              c.printed));
            }
        }
    };
    run(stride_pick(same_rho, 30));
    run(stride_pick(shift_rho, 10));

    // Tables printed twice: report how their cells fare under their own
    // captions and under the unequal-gamma parameters they repeat.
    int dup_total = 0;
    int dup_caption_ok = 0;
    int dup_rehomed_ok = 0;
    for (const auto& c : stride_pick(duplicated, 40)) {
        ++dup_total;
        if (golden::check_cell(c).ok) ++dup_caption_ok;
        golden::TarlCell moved = c;
        moved.gamma_y = c.gamma_x == 0.01 ? 0.2 : 0.01;
        if (golden::check_cell(moved).ok) ++dup_rehomed_ok;
    }
    o.notes.push_back(fmt::format(
        "duplicated equal-gamma blocks at I=30/50: {}/{} sampled cells match their captions, {}/{} match the "
        "unequal-gamma parameters they repeat",
        dup_caption_ok, dup_total, dup_rehomed_ok, dup_total));
    o.pass = ok == total && total == 40;
    o.summary = fmt::format("{}/{} cells (30 same-correlation, 10 correlation-shift) match at 1 decimal", ok, total);
    return o;
}

Outcome property_suite() {
    Outcome o;
    int checks = 0;
    std::map<std::string, int> failures;
    auto expect = [&](bool cond, const std::string& name) {
        ++checks;
        if (!cond) ++failures[name];
    };

    for (double gx : {0.01, 0.05, 0.2}) {
        for (double gy : {0.01, 0.05, 0.2}) {
            for (double rho : {-0.8, -0.4, 0.0, 0.4, 0.8}) {
                for (double z0 : {0.5, 1.0, 2.0}) {
                    const RatioParams p{gx, gy, z0 * gx / gy, rho};
                    expect(std::abs(ratio_cdf(z0, p) - 0.5) <= 1e-12, "median identity");
                    for (double prob : {0.001, 0.0193, 0.3, 0.5, 0.7, 0.9807, 0.999}) {
                        const double z = ratio_idf(prob, p);
                        expect(std::abs(ratio_cdf(z, p) - prob) <= 1e-9, "idf/cdf round-trip");
                    }
                    const double lo = ratio_idf(1e-4, p);
                    const double hi = ratio_idf(1 - 1e-4, p);
                    double prev = 0.0;
                    for (int i = 0; i <= 100; ++i) {
                        const double c = ratio_cdf(lo + (hi - lo) * i / 100.0, p);
                        expect(c >= prev, "cdf monotonicity");
                        prev = c;
                    }
                    const double h = 1e-4 * (ratio_idf(0.75, p) - ratio_idf(0.25, p));
                    for (double prob : {0.01, 0.5, 0.99}) {
                        const double z = ratio_idf(prob, p);
                        const double fd = (ratio_cdf(z + h, p) - ratio_cdf(z - h, p)) / (2 * h);
                        const double pdf = ratio_pdf(z, p);
                        expect(std::abs(pdf - fd) <= 1e-6 * pdf, "pdf-cdf finite difference");
                    }
                }
            }
        }
    }
    for (double p : {0.0, 1e-6, 0.0192521, 0.3, 0.9, 1.0}) {
        for (int horizon : {1, 10, 30, 50, 400}) {
            double total = 0.0;
            for (int l = 1; l <= horizon + 1; ++l) total += trl_pmf(l, {p, horizon});
            expect(std::abs(total - 1.0) <= 1e-12, "TRL pmf normalization");
            const double t = tarl(p, horizon);
            expect(t >= 1.0 && t <= horizon + 1.0, "TARL bounds");
        }
    }
    for (int horizon : {2, 5, 10, 15, 30, 50, 100}) {
        expect(std::abs(tarl0_of_alpha(solve_alpha_for_tarl0(horizon), horizon) - horizon) <= 1e-9, "TARL0(alpha0) = I");
    }
    for (double g : {0.01, 0.2}) {
        for (double rho : {-0.8, 0.0, 0.8}) {
            for (int n : {1, 7, 15}) {
                const double lcl = design_chart(request(ChartSide::Lower, n, g, g, rho, 30)).lcl;
                const double ucl = design_chart(request(ChartSide::Upper, n, g, g, rho, 30)).ucl;
                expect(std::abs(lcl * ucl - 1.0) <= 1e-6, "limit reciprocal symmetry");
            }
        }
    }
    const ChartConfig up = design_chart(request(ChartSide::Upper, 5, 0.02, 0.01, 0.8, 15));
    const ChartConfig lo = design_chart(request(ChartSide::Lower, 5, 0.02, 0.01, 0.8, 15));
    expect(!up.signals(up.ucl) && up.signals(std::nextafter(up.ucl, 2.0)), "strict signal rule");
    expect(!lo.signals(lo.lcl) && lo.signals(std::nextafter(lo.lcl, 0.0)), "strict signal rule");
    {
        std::ifstream in(data("packaging_run.csv"));
        const auto batches = read_samples_csv(in);
        for (double c : {1e-3, 0.37, 3.0, 1e4}) {
            ChartState a = create_chart(up);
            ChartState b = create_chart(up);
            for (const auto& batch : batches) {
                auto xs = batch.x;
                auto ys = batch.y;
                for (auto& v : xs) v *= c;
                for (auto& v : ys) v *= c;
                const auto ra = ingest_inspection(a, batch.x, batch.y);
                const auto rb = ingest_inspection(b, xs, ys);
                expect(std::abs(ra.z_hat - rb.z_hat) <= 1e-13 * ra.z_hat && ra.signal == rb.signal,
                       "scale invariance of z_hat");
            }
        }
    }
    for (const auto& [name, count] : failures) o.notes.push_back(fmt::format("{}: {} failures", name, count));
    o.pass = failures.empty();
    int failed = 0;
    for (const auto& kv : failures) failed += kv.second;
    o.summary = fmt::format("{} checks across 10 properties, {} failed", checks, failed);
    return o;
}

Outcome monte_carlo() {
    struct Case {
        ChartSide side;
        int n;
        double gx, gy, rho0;
        int horizon;
        double tau, rho1;
    };
    const std::vector<Case> cases{
        {ChartSide::Upper, 5, 0.02, 0.01, 0.8, 15, 1.01, 0.8},
        {ChartSide::Upper, 5, 0.02, 0.01, 0.8, 15, 1.00, 0.8},
        {ChartSide::Lower, 5, 0.2, 0.2, 0.4, 10, 0.95, 0.4},
        {ChartSide::Lower, 1, 0.01, 0.2, -0.8, 10, 0.90, -0.8},
        {ChartSide::Lower, 7, 0.01, 0.01, 0.4, 10, 0.99, 0.8},
        {ChartSide::Lower, 10, 0.2, 0.01, 0.0, 30, 0.98, 0.0},
        {ChartSide::Upper, 10, 0.01, 0.2, -0.8, 10, 1.10, -0.8},
        {ChartSide::Upper, 1, 0.2, 0.2, 0.0, 10, 1.05, 0.0},
        {ChartSide::Upper, 15, 0.2, 0.2, 0.4, 10, 1.02, 0.2},
        {ChartSide::Upper, 7, 0.2, 0.01, -0.4, 30, 1.01, -0.8},
    };
    Outcome o;
    int ok = 0;
    const auto t0 = Clock::now();
    std::uint64_t seed = 20261017;
    for (const auto& c : cases) {
        SimulationSpec spec{design_chart(request(c.side, c.n, c.gx, c.gy, c.rho0, c.horizon)), {c.tau, c.rho1}, 100000,
                            seed++, std::nullopt};
        const double analytic = tarl1(spec.cfg, spec.scenario);
        const TarlEstimate est = estimate_tarl(spec, 1);
        const double z = est.standard_error > 0 ? (est.mean - analytic) / est.standard_error : 0.0;
        const bool pass = std::abs(est.mean - analytic) <= 3.0 * est.standard_error;
        if (pass) ++ok;
        o.notes.push_back(fmt::format("{} n={} gamma=({}, {}) rho {}->{} I={} tau={}: analytic {:.4f}, MC {:.4f} +- {:.4f} "
                                      "(z = {:+.2f}) {}",
                                      to_string(c.side), c.n, c.gx, c.gy, c.rho0, c.rho1, c.horizon, c.tau, analytic,
                                      est.mean, est.standard_error, z, pass ? "ok" : "OUTSIDE 3 SE"));
    }
    const double elapsed = seconds_since(t0);
    o.pass = ok == static_cast<int>(cases.size()) && elapsed < 60.0;
    o.summary = fmt::format("{}/{} configurations within 3 SE at 1e5 replications, {:.1f} s on one thread", ok,
                            cases.size(), elapsed);
    return o;
}

std::string capture(const std::string& command) {
    std::string out;
    FILE* pipe = popen(command.c_str(), "r");
    if (!pipe) return "<popen failed>";
    std::array<char, 4096> buf{};
    std::size_t n = 0;
    while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), n);
    const int status = pclose(pipe);
    out += fmt::format("\n<exit {}>", status);
    return out;
}

Outcome cli_determinism() {
    const std::string cli = RZCHART_CLI_PATH;
    const std::string design = " --side upper --n 5 --gamma-x 0.02 --gamma-y 0.01 --z0 1 --rho0 0.8 --I 15";
    const std::string cfg_path = std::string(RZCHART_CLI_PATH) + ".acceptance-chart.json";
    const std::vector<std::string> commands{
        cli + " design" + design,
        cli + " design" + design + " --format json",
        cli + " tarl" + design + " --taus 1.0,1.01,1.02,1.05 --rho1 0.4",
        cli + " tables --which limits --I 10",
        cli + " tables --which rho-shift --I 10 --format text",
        cli + " simulate" + design + " --tau 1.01 --replications 20000 --seed 7",
        cli + " simulate --side lower --n 5 --gamma-x 0.2 --gamma-y 0.2 --rho0 0.4 --I 10 --tau 0.95 "
              "--replications 20000 --seed 7 --threads 2",
        cli + " design" + design + " --format json --out " + cfg_path + " && " + cli + " monitor --chart " + cfg_path +
            " --samples " + data("packaging_run.csv"),
    };
    Outcome o;
    int ok = 0;
    for (const auto& cmd : commands) {
        const std::string a = capture(cmd + " 2>&1");
        const std::string b = capture(cmd + " 2>&1");
        const bool same = a == b && a.find("<exit 0>") != std::string::npos;
        if (same) {
            ++ok;
        } else {
            o.notes.push_back("differs or failed: " + cmd);
        }
    }
    std::remove(cfg_path.c_str());
    o.pass = ok == static_cast<int>(commands.size());
    o.summary = fmt::format("{}/{} invocations byte-identical across two runs", ok, commands.size());
    return o;
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"limits-grid-i10-full", limits_grid_full},
        {"limits-grid-i30-i50-spot-checks", spot_checks},
        {"food-example-ucl", food_ucl},
        {"food-example-replay", food_replay},
        {"tarl-golden-suite", tarl_golden},
        {"property-suite", property_suite},
        {"monte-carlo-cross-validation", monte_carlo},
        {"cli-determinism", cli_determinism},
    };
    int failed = 0;
    for (const auto& [name, run] : criteria) {
        Outcome o;
        try {
            o = run();
        } catch (const std::exception& e) {
            o.pass = false;
            o.summary = std::string("exception: ") + e.what();
        }
        if (!o.pass) ++failed;
        std::printf("%s %s: %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.summary.c_str());
        for (const auto& note : o.notes) std::printf("    %s\n", note.c_str());
        std::fflush(stdout);
    }
    std::printf("%zu criteria, %d failed\n", criteria.size(), failed);
    return failed == 0 ? 0 : 1;
}

#include "rzchart/cli.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "rzchart/chart_design.hpp"
#include "rzchart/errors.hpp"
#include "rzchart/json_io.hpp"
#include "rzchart/mc_oracle.hpp"
#include "rzchart/monitor.hpp"
#include "rzchart/run_length.hpp"
#include "rzchart/server.hpp"
#include "rzchart/table_gen.hpp"

namespace rzchart {
namespace {

struct DesignFlags {
    std::string side;
    int n = 0;
    double gamma_x = 0.0;
    double gamma_y = 0.0;
    double z0 = 1.0;
    double rho0 = 0.0;
    int horizon = 0;
    std::optional<double> tarl0_target;

    void add_to(CLI::App* app) {
        app->add_option("--side", side, "Chart side: lower or upper")->required();
        app->add_option("--n", n, "Sample size per inspection")->required();
        app->add_option("--gamma-x", gamma_x, "Coefficient of variation of X")->required();
        app->add_option("--gamma-y", gamma_y, "Coefficient of variation of Y")->required();
        app->add_option("--z0", z0, "In-control ratio of means")->capture_default_str();
        app->add_option("--rho0", rho0, "In-control correlation of X and Y")->required();
        app->add_option("--I", horizon, "Number of inspections in the run")->required();
        app->add_option("--tarl0-target", tarl0_target, "In-control TARL to design for (default I)");
    }

    ChartConfig design() const {
        DesignRequest req;
        req.side = parse_side(side);
        req.n = n;
        req.gamma_x = gamma_x;
        req.gamma_y = gamma_y;
        req.z0 = z0;
        req.rho0 = rho0;
        req.horizon_inspections = horizon;
        req.tarl0_target = tarl0_target;
        return design_chart(req);
    }
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void emit(const std::string& text, const std::string& out_path, std::ostream& out) {
    if (out_path.empty()) {
        out << text;
        return;
    }
    std::ofstream file(out_path, std::ios::binary | std::ios::trunc);
    if (!file) throw IoError("cannot open '" + out_path + "' for writing");
    file << text;
    if (!file.flush()) throw IoError("failed writing '" + out_path + "'");
}

std::string limit_text(double v) {
    return std::isfinite(v) ? fmt::format("{:.4f}", v) : std::string("none");
}

std::string design_text(const ChartConfig& cfg) {
    std::string s;
    s += fmt::format("side: {}\n", cfg.side == ChartSide::Lower ? "lower" : "upper");
    s += fmt::format("n: {}\nI: {}\n", cfg.n, cfg.horizon_inspections);
    s += fmt::format("gamma_x: {}\ngamma_y: {}\nz0: {}\nrho0: {}\n", cfg.gamma_x, cfg.gamma_y, cfg.z0, cfg.rho0);
    s += fmt::format("tarl0_target: {}\nalpha0: {:.6e}\n", cfg.tarl0_target, cfg.alpha0);
    s += fmt::format("lcl: {}\nucl: {}\n", limit_text(cfg.lcl), limit_text(cfg.ucl));
    return s;
}

std::string monitor_text(const ChartState& state) {
    std::string s = fmt::format("{:>10}  {:<8}  {:>10}  {:>10}  {:>6}  {}\n", "inspection", "label", "x_bar", "y_bar",
                                "z_hat", "signal");
    for (const auto& r : state.records) {
        s += fmt::format("{:>10}  {:<8}  {:>10.3f}  {:>10.3f}  {:>6.3f}  {}\n", r.index, r.label.value_or(""), r.x_bar,
                         r.y_bar, r.z_hat, r.signal ? "SIGNAL" : "-");
    }
    const ChartSummary sum = chart_status(state);
    std::string idx;
    for (std::size_t i = 0; i < sum.signal_indices.size(); ++i) {
        idx += (i ? "," : "") + std::to_string(sum.signal_indices[i]);
    }
    s += fmt::format("limit: {} {}\n", state.cfg.side == ChartSide::Lower ? "lcl" : "ucl",
                     limit_text(state.cfg.active_limit()));
    s += fmt::format("signals: {} [{}]\n", sum.signal_count, idx);
    s += fmt::format("status: {} ({} of {} inspections)\n", to_string(sum.status), sum.inspections_done,
                     state.cfg.horizon_inspections);
    return s;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Control charts for the ratio of two normal variables in short production runs", "rzchart"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "Show help for all subcommands");

    // design
    DesignFlags design_flags;
    std::string design_format = "text";
    std::string design_out;
    auto* design_cmd = app.add_subcommand("design", "Compute the control limit of a one-sided chart");
    design_flags.add_to(design_cmd);
    design_cmd->add_option("--format", design_format, "text or json (json is accepted by monitor --chart)")
        ->check(CLI::IsMember({"text", "json"}));
    design_cmd->add_option("--out", design_out, "Write to this file instead of stdout");

    // tarl
    DesignFlags tarl_flags;
    std::vector<double> tarl_taus;
    std::optional<double> tarl_rho1;
    std::string tarl_out;
    auto* tarl_cmd = app.add_subcommand("tarl", "Expected truncated run length under shifts");
    tarl_flags.add_to(tarl_cmd);
    tarl_cmd->add_option("--taus", tarl_taus, "Comma-separated shift factors tau")->required()->delimiter(',');
    tarl_cmd->add_option("--rho1", tarl_rho1, "Correlation after the shift (default rho0)");
    tarl_cmd->add_option("--out", tarl_out, "Write to this file instead of stdout");

    // tables
    std::string tables_which = "limits";
    std::vector<int> tables_horizons;
    std::string tables_format = "csv";
    std::string tables_out;
    auto* tables_cmd = app.add_subcommand("tables", "Regenerate the limit and run-length tables");
    tables_cmd->add_option("--which", tables_which, "limits, tarl or rho-shift")
        ->check(CLI::IsMember({"limits", "tarl", "rho-shift"}));
    tables_cmd->add_option("--I", tables_horizons, "Restrict to these numbers of inspections")->delimiter(',');
    tables_cmd->add_option("--format", tables_format, "csv or text")->check(CLI::IsMember({"csv", "text"}));
    tables_cmd->add_option("--out", tables_out, "Write to this file instead of stdout");

    // monitor
    std::string monitor_chart;
    std::string monitor_samples;
    std::string monitor_format = "text";
    std::string monitor_out;
    auto* monitor_cmd = app.add_subcommand("monitor", "Replay a samples CSV against a designed chart");
    monitor_cmd->add_option("--chart", monitor_chart, "Chart config JSON (from design --format json)")->required();
    monitor_cmd->add_option("--samples", monitor_samples, "CSV with header inspection,label,x,y")->required();
    monitor_cmd->add_option("--format", monitor_format, "text or json")->check(CLI::IsMember({"text", "json"}));
    monitor_cmd->add_option("--out", monitor_out, "Write to this file instead of stdout");

    // simulate
    DesignFlags sim_flags;
    double sim_tau = 1.0;
    std::optional<double> sim_rho1;
    long sim_reps = 100000;
    std::uint64_t sim_seed = 1;
    unsigned sim_threads = 1;
    auto* sim_cmd = app.add_subcommand("simulate", "Monte-Carlo check of the analytic TARL");
    sim_flags.add_to(sim_cmd);
    sim_cmd->add_option("--tau", sim_tau, "Shift factor tau")->required();
    sim_cmd->add_option("--rho1", sim_rho1, "Correlation after the shift (default rho0)");
    sim_cmd->add_option("--replications", sim_reps, "Number of simulated runs")->capture_default_str();
    sim_cmd->add_option("--seed", sim_seed, "Random seed")->capture_default_str();
    sim_cmd->add_option("--threads", sim_threads, "Worker threads; results do not depend on it")->capture_default_str();

    // serve
    ServerOptions serve_opts;
    std::string serve_store = "charts";
    std::string serve_static;
    auto* serve_cmd = app.add_subcommand("serve", "Run the HTTP JSON API");
    serve_cmd->add_option("--host", serve_opts.host, "Bind address")->capture_default_str();
    serve_cmd->add_option("--port", serve_opts.port, "Port")->capture_default_str();
    serve_cmd->add_option("--store-dir", serve_store, "Directory holding chart documents")->capture_default_str();
    serve_cmd->add_option("--static-dir", serve_static, "Serve UI assets from this directory");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitValidation;
    }

    try {
        if (*design_cmd) {
            const ChartConfig cfg = design_flags.design();
            emit(design_format == "json" ? to_json_value(cfg).dump(2) + "\n" : design_text(cfg), design_out, out);
        } else if (*tarl_cmd) {
            const ChartConfig cfg = tarl_flags.design();
            std::sort(tarl_taus.begin(), tarl_taus.end());
            std::string s = "tau,tarl1\n";
            for (const double tau : tarl_taus) {
                s += fmt::format("{},{:.4f}\n", tau, tarl1(cfg, {tau, tarl_rho1.value_or(cfg.rho0)}));
            }
            emit(s, tarl_out, out);
        } else if (*tables_cmd) {
            GridSpec grid = tables_which == "rho-shift" ? correlation_shift_grid() : GridSpec{};
            if (!tables_horizons.empty()) grid.horizons = tables_horizons;
            const TableFormat fmt_sel = parse_table_format(tables_format);
            const std::string text = tables_which == "limits" ? render(gen_limits_table(grid), fmt_sel)
                                                              : render(gen_tarl_table(grid), fmt_sel);
            emit(text, tables_out, out);
        } else if (*monitor_cmd) {
            const auto cfg_json = nlohmann::json::parse(read_file(monitor_chart), nullptr, false);
            if (cfg_json.is_discarded()) throw ValidationError("'" + monitor_chart + "' is not valid JSON");
            ChartState state;
            state.id = "replay";
            state.cfg = chart_config_from_json(cfg_json);
            std::istringstream samples(read_file(monitor_samples));
            for (const auto& batch : read_samples_csv(samples)) {
                ingest_inspection(state, batch.x, batch.y,
                                  batch.label.empty() ? std::nullopt : std::optional<std::string>(batch.label));
            }
            if (monitor_format == "json") {
                nlohmann::json j{{"cfg", to_json_value(state.cfg)}, {"records", nlohmann::json::array()},
                                 {"summary", to_json_value(chart_status(state))}};
                for (const auto& r : state.records) j["records"].push_back(to_json_value(r));
                emit(j.dump(2) + "\n", monitor_out, out);
            } else {
                emit(monitor_text(state), monitor_out, out);
            }
        } else if (*sim_cmd) {
            SimulationSpec spec;
            spec.cfg = sim_flags.design();
            spec.scenario = {sim_tau, sim_rho1.value_or(spec.cfg.rho0)};
            spec.replications = sim_reps;
            spec.seed = sim_seed;
            const double analytic = tarl1(spec.cfg, spec.scenario);
            const TarlEstimate est = estimate_tarl(spec, sim_threads);
            const double diff = est.mean - analytic;
            const bool pass = std::abs(diff) <= 3.0 * est.standard_error;
            out << fmt::format("analytic_tarl1: {:.6f}\n", analytic);
            out << fmt::format("empirical_mean: {:.6f}\n", est.mean);
            out << fmt::format("standard_error: {:.6f}\n", est.standard_error);
            out << fmt::format("replications: {}\n", est.replications);
            out << fmt::format("seed: {}\n", sim_seed);
            out << fmt::format("nonpositive_denominators: {}\n", est.nonpositive_denominators);
            out << fmt::format("result: {} (|mean - analytic| = {:.6f}, 3 SE = {:.6f})\n", pass ? "PASS" : "FAIL",
                               std::abs(diff), 3.0 * est.standard_error);
        } else if (*serve_cmd) {
            ChartStore store(serve_store);
            Api api(store);
            if (!serve_static.empty()) serve_opts.static_dir = serve_static;
            HttpServer server(api, serve_opts);
            const int port = server.bind();
            out << fmt::format("listening on http://{}:{}\n", serve_opts.host, port) << std::flush;
            server.run();
        }
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
        return kExitDomain;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitValidation;
    }
    return kExitOk;
}

}  // namespace rzchart

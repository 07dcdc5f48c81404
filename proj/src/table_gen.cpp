#include "rzchart/table_gen.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include <fmt/format.h>

#include "rzchart/csv.hpp"
#include "rzchart/errors.hpp"
#include "rzchart/run_length.hpp"

namespace rzchart {

namespace {

// Parameters print in shortest round-trip form; +0.0 avoids "-0".
std::string param(double v) { return fmt::format("{}", v + 0.0); }
std::string limit4(double v) { return fmt::format("{:.4f}", v + 0.0); }
std::string tarl1dp(double v) { return fmt::format("{:.1f}", v + 0.0); }

std::vector<std::pair<double, double>> rho_pairs(const GridSpec& grid) {
    if (const auto* ex = std::get_if<Rho1Explicit>(&grid.rho1_rule)) return ex->pairs;
    std::vector<std::pair<double, double>> out;
    for (double r : grid.rhos) out.emplace_back(r, r);
    return out;
}

void check_stream(const std::ostream& out) {
    if (!out) throw IoError("failed writing table output");
}

void require_header(std::istream& in, const char* header) {
    std::vector<std::string> fields;
    if (!csv::read_record(in, fields)) throw ValidationError("empty CSV input");
    std::string joined;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) joined += ',';
        joined += fields[i];
    }
    if (joined != header) throw ValidationError("unexpected CSV header: " + joined);
}

template <typename Row>
void require_rows(const std::vector<Row>& rows) {
    if (rows.empty()) throw ValidationError("nothing to render: no rows");
}

void render_aligned(const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& cells,
                    std::ostream& out) {
    std::vector<std::size_t> width(header.size());
    for (std::size_t c = 0; c < header.size(); ++c) width[c] = header[c].size();
    for (const auto& row : cells) {
        for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
    }
    auto emit = [&](const std::vector<std::string>& row) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) out << "  ";
            out << std::string(width[c] - row[c].size(), ' ') << row[c];
        }
        out << '\n';
    };
    emit(header);
    std::size_t total = 0;
    for (std::size_t c = 0; c < width.size(); ++c) total += width[c] + (c ? 2 : 0);
    out << std::string(total, '-') << '\n';
    for (const auto& row : cells) emit(row);
}

void render_csv(const char* header, const std::vector<std::vector<std::string>>& cells, std::ostream& out) {
    out << header << '\n';
    for (const auto& row : cells) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) out << ',';
            out << csv::escape(row[c]);
        }
        out << '\n';
    }
}

std::vector<std::string> split_header(const char* header) {
    return csv::split_record(header);
}

bool same_cell(const TarlRow& a, const TarlRow& b) {
    return a.gamma_x == b.gamma_x && a.gamma_y == b.gamma_y && a.rho0 == b.rho0 && a.rho1 == b.rho1 &&
           a.n == b.n && a.horizon == b.horizon && a.tau == b.tau;
}

}  // namespace

void GridSpec::validate() const {
    if (gammas.empty() || ns.empty() || horizons.empty()) throw ValidationError("grid has an empty axis");
    if (std::holds_alternative<Rho1EqualsRho0>(rho1_rule) && rhos.empty()) {
        throw ValidationError("grid has no rho0 values");
    }
    for (const auto& g : gammas) {
        SampleRatioParams{1, g.gamma_x, g.gamma_y, z0, 0.0}.validate();
    }
    for (const auto& [r0, r1] : rho_pairs(*this)) {
        SampleRatioParams{1, gammas.front().gamma_x, gammas.front().gamma_y, z0, r0}.validate();
        ShiftScenario{1.0, r1}.validate();
    }
    for (int n : ns) {
        if (n < 1) throw ValidationError("grid sample sizes must be at least 1");
    }
    for (int h : horizons) {
        if (h < 2) throw ValidationError("grid horizons must be at least 2");
    }
    for (double t : taus) ShiftScenario{t, 0.0}.validate();
}

GridSpec correlation_shift_grid() {
    GridSpec grid;
    grid.rho1_rule = Rho1Explicit{{{-0.4, -0.2}, {-0.4, -0.8}, {0.4, 0.2}, {0.4, 0.8}}};
    grid.taus = {0.9, 0.95, 0.98, 0.99, 1.0, 1.01, 1.02, 1.05, 1.1};
    return grid;
}

std::vector<LimitsRow> gen_limits_table(const GridSpec& grid) {
    grid.validate();
    std::vector<LimitsRow> rows;
    for (const auto& g : grid.gammas) {
        for (double rho0 : grid.rhos) {
            for (int n : grid.ns) {
                for (int horizon : grid.horizons) {
                    DesignRequest req{ChartSide::Lower, n, g.gamma_x, g.gamma_y, grid.z0, rho0, horizon, {}};
                    const ChartConfig lower = design_chart(req);
                    req.side = ChartSide::Upper;
                    const ChartConfig upper = design_chart(req);
                    rows.push_back({g.gamma_x, g.gamma_y, rho0, n, horizon, lower.lcl, upper.ucl});
                }
            }
        }
    }
    return rows;
}

std::vector<TarlRow> gen_tarl_table(const GridSpec& grid) {
    grid.validate();
    if (grid.taus.empty()) throw ValidationError("grid has no tau values");
    std::vector<TarlRow> rows;
    const auto pairs = rho_pairs(grid);
    for (int horizon : grid.horizons) {
        for (const auto& g : grid.gammas) {
            for (const auto& [rho0, rho1] : pairs) {
                for (int n : grid.ns) {
                    DesignRequest req{ChartSide::Lower, n, g.gamma_x, g.gamma_y, grid.z0, rho0, horizon, {}};
                    const ChartConfig lower = design_chart(req);
                    req.side = ChartSide::Upper;
                    const ChartConfig upper = design_chart(req);
                    for (double tau : grid.taus) {
                        const ShiftScenario sc{tau, rho1};
                        if (tau <= 1.0) {
                            rows.push_back({g.gamma_x, g.gamma_y, rho0, rho1, n, horizon, tau, ChartSide::Lower,
                                            tarl1(lower, sc)});
                        }
                        if (tau >= 1.0) {
                            rows.push_back({g.gamma_x, g.gamma_y, rho0, rho1, n, horizon, tau, ChartSide::Upper,
                                            tarl1(upper, sc)});
                        }
                    }
                }
            }
        }
    }
    return rows;
}

TableFormat parse_table_format(const std::string& text) {
    if (text == "csv") return TableFormat::Csv;
    if (text == "text") return TableFormat::AlignedText;
    throw ValidationError("format must be 'csv' or 'text', got '" + text + "'");
}

void render(const std::vector<LimitsRow>& rows, TableFormat format, std::ostream& out) {
    require_rows(rows);
    std::vector<std::vector<std::string>> cells;
    cells.reserve(rows.size());
    for (const auto& r : rows) {
        cells.push_back({param(r.gamma_x), param(r.gamma_y), param(r.rho0), std::to_string(r.n),
                         std::to_string(r.horizon), limit4(r.lcl), limit4(r.ucl)});
    }
    if (format == TableFormat::Csv) {
        render_csv(kLimitsCsvHeader, cells, out);
    } else {
        render_aligned(split_header(kLimitsCsvHeader), cells, out);
    }
    check_stream(out);
}

void render(const std::vector<TarlRow>& rows, TableFormat format, std::ostream& out) {
    require_rows(rows);
    std::vector<std::vector<std::string>> cells;
    cells.reserve(rows.size());
    for (const auto& r : rows) {
        cells.push_back({param(r.gamma_x), param(r.gamma_y), param(r.rho0), param(r.rho1), std::to_string(r.n),
                         std::to_string(r.horizon), param(r.tau), to_string(r.side), tarl1dp(r.tarl1)});
    }
    if (format == TableFormat::Csv) {
        render_csv(kTarlCsvHeader, cells, out);
    } else {
        render_aligned(split_header(kTarlCsvHeader), cells, out);
    }
    check_stream(out);
}

std::string render(const std::vector<LimitsRow>& rows, TableFormat format) {
    std::ostringstream out;
    render(rows, format, out);
    return out.str();
}

std::string render(const std::vector<TarlRow>& rows, TableFormat format) {
    std::ostringstream out;
    render(rows, format, out);
    return out.str();
}

std::vector<LimitsRow> parse_limits_csv(std::istream& in) {
    require_header(in, kLimitsCsvHeader);
    std::vector<LimitsRow> rows;
    std::vector<std::string> f;
    while (csv::read_record(in, f)) {
        if (f.size() != 7) throw ValidationError("limits CSV row must have 7 fields");
        rows.push_back({csv::parse_double(f[0], "gamma_x"), csv::parse_double(f[1], "gamma_y"),
                        csv::parse_double(f[2], "rho0"), static_cast<int>(csv::parse_long(f[3], "n")),
                        static_cast<int>(csv::parse_long(f[4], "I")), csv::parse_double(f[5], "lcl"),
                        csv::parse_double(f[6], "ucl")});
    }
    return rows;
}

std::vector<TarlRow> parse_tarl_csv(std::istream& in) {
    require_header(in, kTarlCsvHeader);
    std::vector<TarlRow> rows;
    std::vector<std::string> f;
    while (csv::read_record(in, f)) {
        if (f.size() != 9) throw ValidationError("TARL CSV row must have 9 fields");
        rows.push_back({csv::parse_double(f[0], "gamma_x"), csv::parse_double(f[1], "gamma_y"),
                        csv::parse_double(f[2], "rho0"), csv::parse_double(f[3], "rho1"),
                        static_cast<int>(csv::parse_long(f[4], "n")), static_cast<int>(csv::parse_long(f[5], "I")),
                        csv::parse_double(f[6], "tau"), parse_side(f[7]), csv::parse_double(f[8], "tarl1")});
    }
    return rows;
}

std::vector<TarlDiscrepancy> compare_tarl(const std::vector<TarlRow>& computed, const std::vector<TarlRow>& reference) {
    std::vector<TarlDiscrepancy> out;
    for (const auto& ref : reference) {
        const TarlRow* nearest = nullptr;
        bool matched = false;
        for (const auto& row : computed) {
            if (!same_cell(row, ref)) continue;
            if (tarl1dp(row.tarl1) == tarl1dp(ref.tarl1)) {
                matched = true;
                break;
            }
            if (!nearest || std::fabs(row.tarl1 - ref.tarl1) < std::fabs(nearest->tarl1 - ref.tarl1)) {
                nearest = &row;
            }
        }
        if (!matched && nearest) out.push_back({*nearest, ref.tarl1});
    }
    return out;
}

}  // namespace rzchart

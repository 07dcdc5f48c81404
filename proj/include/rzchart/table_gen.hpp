#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "rzchart/chart_design.hpp"

namespace rzchart {

struct GammaPair {
    double gamma_x;
    double gamma_y;
    friend bool operator==(const GammaPair&, const GammaPair&) = default;
};

struct Rho1EqualsRho0 {};
struct Rho1Explicit {
    std::vector<std::pair<double, double>> pairs;  // (rho0, rho1)
};
using Rho1Rule = std::variant<Rho1EqualsRho0, Rho1Explicit>;

// Parameter grid for table regeneration. Defaults reproduce the standard
// grid: gammas in {0.01, 0.2}^2, rho0 in {0, +-0.4, +-0.8}, n in
// {1, 5, 7, 10, 15}, I in {10, 30, 50}, four downward and four upward taus.
struct GridSpec {
    std::vector<GammaPair> gammas{{0.01, 0.01}, {0.2, 0.2}, {0.01, 0.2}, {0.2, 0.01}};
    std::vector<double> rhos{-0.8, -0.4, 0.0, 0.4, 0.8};
    std::vector<int> ns{1, 5, 7, 10, 15};
    std::vector<int> horizons{10, 30, 50};
    std::vector<double> taus{0.9, 0.95, 0.98, 0.99, 1.01, 1.02, 1.05, 1.1};
    Rho1Rule rho1_rule = Rho1EqualsRho0{};
    double z0 = 1.0;

    void validate() const;
};

// The rho0 -> rho1 pairs used for the correlation-shift tables.
GridSpec correlation_shift_grid();

struct LimitsRow {
    double gamma_x = 0.0;
    double gamma_y = 0.0;
    double rho0 = 0.0;
    int n = 1;
    int horizon = 1;
    double lcl = 0.0;
    double ucl = 0.0;
    friend bool operator==(const LimitsRow&, const LimitsRow&) = default;
};

struct TarlRow {
    double gamma_x = 0.0;
    double gamma_y = 0.0;
    double rho0 = 0.0;
    double rho1 = 0.0;
    int n = 1;
    int horizon = 1;
    double tau = 1.0;
    ChartSide side = ChartSide::Lower;
    double tarl1 = 0.0;
    friend bool operator==(const TarlRow&, const TarlRow&) = default;
};

// One row per (gamma pair, rho0, n, I), in that nesting order.
std::vector<LimitsRow> gen_limits_table(const GridSpec& grid);

// One row per (I, gamma pair, rho pair, n, tau). Lower chart for tau < 1,
// upper chart for tau > 1, one row for each side at tau == 1. Values are
// not clamped to I.
std::vector<TarlRow> gen_tarl_table(const GridSpec& grid);

enum class TableFormat { Csv, AlignedText };

TableFormat parse_table_format(const std::string& text);

inline constexpr const char* kLimitsCsvHeader = "gamma_x,gamma_y,rho0,n,I,lcl,ucl";
inline constexpr const char* kTarlCsvHeader = "gamma_x,gamma_y,rho0,rho1,n,I,tau,chart,tarl1";

// Limits at 4 decimals, TARL at 1 decimal. CSV uses LF endings and RFC 4180
// quoting. Throws ValidationError on empty input, IoError on stream failure.
void render(const std::vector<LimitsRow>& rows, TableFormat format, std::ostream& out);
void render(const std::vector<TarlRow>& rows, TableFormat format, std::ostream& out);
std::string render(const std::vector<LimitsRow>& rows, TableFormat format);
std::string render(const std::vector<TarlRow>& rows, TableFormat format);

std::vector<LimitsRow> parse_limits_csv(std::istream& in);
std::vector<TarlRow> parse_tarl_csv(std::istream& in);

// A generated TARL cell that disagrees with a reference value.
struct TarlDiscrepancy {
    TarlRow computed;
    double reference = 0.0;
};

// Cells of `computed` whose 1-decimal rendering differs from the reference
// row with the same parameters. Reference rows with no computed match are
// ignored; for tau == 1 either side may match.
std::vector<TarlDiscrepancy> compare_tarl(const std::vector<TarlRow>& computed,
                                          const std::vector<TarlRow>& reference);

}  // namespace rzchart

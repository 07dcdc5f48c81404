#pragma once

#include <string>
#include <vector>

namespace rzchart {

// Approximate law of Z = X / Y for (X, Y) bivariate normal, expressed through
// the coefficients of variation, the standard-deviation ratio and the
// correlation. Accurate as long as Y stays positive with near certainty,
// i.e. for small gamma_y.
struct RatioParams {
    double gamma_x = 0.0;  // sigma_X / mu_X
    double gamma_y = 0.0;  // sigma_Y / mu_Y
    double omega = 0.0;    // sigma_X / sigma_Y
    double rho = 0.0;

    // Throws ValidationError when an invariant is broken.
    void validate() const;
};

// Parameters of the ratio of sample means over n paired units with
// in-control ratio z0 = mu_X / mu_Y.
struct SampleRatioParams {
    int n = 1;
    double gamma_x = 0.0;
    double gamma_y = 0.0;
    double z0 = 1.0;
    double rho0 = 0.0;

    void validate() const;

    // gamma/sqrt(n) for both variables and omega0 = z0 * gamma_x / gamma_y.
    RatioParams aggregated() const;
};

// Coefficients of variation above this are accepted but flagged.
inline constexpr double kGammaWarnAbove = 0.2;
// Hard ceiling for coefficients of variation.
inline constexpr double kGammaMax = 0.5;

// Human-readable notes for parameters that are valid but outside the range
// where the approximation has been exercised. Empty when nothing to report.
std::vector<std::string> validity_warnings(double gamma_x, double gamma_y);

double ratio_cdf(double z, const RatioParams& params);
double ratio_pdf(double z, const RatioParams& params);

// Quantile from the closed-form quadratic root. Lower root for p <= 0.5,
// upper root for p >= 0.5. Throws DomainError when p is outside (0, 1) or
// outside the attainable range (Phi(-1/gamma_y), Phi(1/gamma_y)).
double ratio_idf(double p, const RatioParams& params);

double sample_ratio_cdf(double z, const SampleRatioParams& sp);
double sample_ratio_idf(double p, const SampleRatioParams& sp);

}  // namespace rzchart

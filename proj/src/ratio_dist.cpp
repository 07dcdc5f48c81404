#include "rzchart/ratio_dist.hpp"

#include <cmath>
#include <fmt/format.h>

#include "rzchart/errors.hpp"
#include "rzchart/normal.hpp"

namespace rzchart {

namespace {

void check_gamma(const char* name, double g) {
    if (!std::isfinite(g) || !(g > 0.0)) {
        throw ValidationError(std::string(name) + " must be a positive finite number");
    }
    if (g > kGammaMax) {
        throw ValidationError(std::string(name) + " above 0.5 is outside the supported range");
    }
}

void check_rho(const char* name, double rho) {
    if (!std::isfinite(rho) || !(rho > -1.0 && rho < 1.0)) {
        throw ValidationError(std::string(name) + " must lie in the open interval (-1, 1)");
    }
}

struct Quadratic {
    double a;
    double b;
};

// A and B of the normal approximation at z.
Quadratic ab_terms(double z, const RatioParams& p) {
    const double a = z / p.gamma_y - p.omega / p.gamma_x;
    const double b2 = p.omega * p.omega - 2.0 * p.rho * p.omega * z + z * z;
    if (!(b2 >= 1e-300)) {
        throw DomainError("ratio distribution: B^2 = omega^2 - 2 rho omega z + z^2 is not positive");
    }
    return {a, std::sqrt(b2)};
}

}  // namespace

void RatioParams::validate() const {
    check_gamma("gamma_x", gamma_x);
    check_gamma("gamma_y", gamma_y);
    if (!std::isfinite(omega) || !(omega > 0.0)) {
        throw ValidationError("omega must be a positive finite number");
    }
    check_rho("rho", rho);
}

void SampleRatioParams::validate() const {
    if (n < 1) throw ValidationError("n must be at least 1");
    check_gamma("gamma_x", gamma_x);
    check_gamma("gamma_y", gamma_y);
    if (!std::isfinite(z0) || !(z0 > 0.0)) {
        throw ValidationError("z0 must be a positive finite number");
    }
    check_rho("rho0", rho0);
}

RatioParams SampleRatioParams::aggregated() const {
    const double root_n = std::sqrt(static_cast<double>(n));
    return {gamma_x / root_n, gamma_y / root_n, z0 * gamma_x / gamma_y, rho0};
}

std::vector<std::string> validity_warnings(double gamma_x, double gamma_y) {
    std::vector<std::string> out;
    if (gamma_x > kGammaWarnAbove) {
        out.push_back(fmt::format("gamma_x = {} exceeds 0.2; the normal approximation of the ratio is less reliable", gamma_x));
    }
    if (gamma_y > kGammaWarnAbove) {
        out.push_back(fmt::format("gamma_y = {} exceeds 0.2; the normal approximation of the ratio is less reliable", gamma_y));
    }
    return out;
}

double ratio_cdf(double z, const RatioParams& params) {
    params.validate();
    if (!std::isfinite(z)) throw DomainError("ratio_cdf: z must be finite");
    const auto [a, b] = ab_terms(z, params);
    return std_normal_cdf(a / b);
}

double ratio_pdf(double z, const RatioParams& params) {
    params.validate();
    if (!std::isfinite(z)) throw DomainError("ratio_pdf: z must be finite");
    const auto [a, b] = ab_terms(z, params);
    const double slope = 1.0 / (b * params.gamma_y) - (z - params.rho * params.omega) * a / (b * b * b);
    return slope * std_normal_pdf(a / b);
}

double ratio_idf(double p, const RatioParams& params) {
    params.validate();
    if (!(p > 0.0 && p < 1.0)) {
        throw DomainError(fmt::format("ratio_idf: p must lie in (0, 1), got {}", p));
    }
    const double q = std_normal_quantile(p);
    const double q2 = q * q;
    const double gx = params.gamma_x;
    const double gy = params.gamma_y;
    const double w = params.omega;

    const double c1 = 1.0 / (gy * gy) - q2;
    const double c2 = 2.0 * w * (params.rho * q2 - 1.0 / (gx * gy));
    const double c3 = w * w * (1.0 / (gx * gx) - q2);

    if (std::fabs(c1) <= 1e-14 / (gy * gy)) {
        // Quadratic collapses to its linear term.
        return -c3 / c2;
    }
    if (c1 < 0.0) {
        throw DomainError(fmt::format(
            "ratio_idf: p = {} is beyond the attainable range of the approximation (|Phi^-1(p)| >= 1/gamma_y)", p));
    }

    // c2^2 - 4 c1 c3 expanded by hand: the q^0 terms cancel exactly, which
    // keeps the double root at p = 0.5 (and its neighbourhood) accurate.
    const double a = 1.0 / gx - params.rho / gy;
    double d = a * a + (1.0 - params.rho * params.rho) * c1;
    if (d < 0.0) {
        if (d >= -1e-10 * a * a) {
            d = 0.0;
        } else {
            throw DomainError("ratio_idf: negative discriminant");
        }
    }
    const double root = 2.0 * w * std::fabs(q) * std::sqrt(d);
    // Cancellation-free pair of roots; lower/upper since c1 > 0.
    const double t = -0.5 * (c2 + std::copysign(root, c2));
    double lo;
    double hi;
    if (t == 0.0) {
        lo = hi = 0.0;
    } else {
        const double r1 = t / c1;
        const double r2 = c3 / t;
        lo = std::fmin(r1, r2);
        hi = std::fmax(r1, r2);
    }
    return p <= 0.5 ? lo : hi;
}

double sample_ratio_cdf(double z, const SampleRatioParams& sp) {
    sp.validate();
    return ratio_cdf(z, sp.aggregated());
}

double sample_ratio_idf(double p, const SampleRatioParams& sp) {
    sp.validate();
    return ratio_idf(p, sp.aggregated());
}

}  // namespace rzchart

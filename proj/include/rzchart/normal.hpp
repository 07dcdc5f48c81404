#pragma once

namespace rzchart {

inline constexpr double kInvSqrt2Pi = 0.398942280401432677939946059934;
inline constexpr double kSqrt2Pi = 2.50662827463100050241576528481;

/// Standard normal cumulative distribution function.
double std_normal_cdf(double x) noexcept;

/// Standard normal density exp(-x^2/2)/sqrt(2*pi).
double std_normal_pdf(double x) noexcept;

/// Inverse of std_normal_cdf for p in (0, 1); throws DomainError otherwise.
/// Wichura's AS 241 rational approximation polished by one Halley step,
/// so |std_normal_cdf(std_normal_quantile(p)) - p| stays below 1e-12.
double std_normal_quantile(double p);

}  // namespace rzchart

// Standard normal kernels shared by the credit-default model and the
// confidence-interval estimator: CDF (via the complementary error
// function), density, quantile, and the truncated first moment.

#pragma once

#include <cmath>
#include <limits>
#include <numbers>

#include "fairaudit/core.hpp"

namespace fairaudit {

inline constexpr double kInvSqrt2Pi = 0.39894228040143267793994605993438;

/// Standard normal CDF, accurate to well below 1e-12 absolute.
inline double std_normal_cdf(double x) {
  detail::require(!std::isnan(x), "std_normal_cdf: x must not be NaN");
  return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

/// Standard normal density. Accepts +/-infinity (density 0).
inline double std_normal_pdf(double x) {
  detail::require(!std::isnan(x), "std_normal_pdf: x must not be NaN");
  return kInvSqrt2Pi * std::exp(-0.5 * x * x);
}

/// E[xi * 1{a < xi <= b}] for a standard normal xi: pdf(a) - pdf(b).
/// Infinite endpoints are allowed.
inline double partial_expectation(double a, double b) {
  detail::require(!std::isnan(a) && !std::isnan(b), "partial_expectation: NaN endpoint");
  detail::require(a <= b, "partial_expectation: requires a <= b");
  return std_normal_pdf(a) - std_normal_pdf(b);
}

namespace detail {

// Rational approximation of the normal quantile (relative error below
// 1.2e-9 on its own), used as the seed for Newton refinement.
inline double normal_quantile_seed(double p) {
  static constexpr double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                  -2.759285104469687e+02, 1.383577518672690e+02,
                                  -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                  -1.556989798598866e+02, 6.680131188771972e+01,
                                  -1.328068155288572e+01};
  static constexpr double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                  -2.400758277161838e+00, -2.549732539343734e+00,
                                  4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                                  2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;
  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (p > 1.0 - p_low) {
    const double q = std::sqrt(-2.0 * std::log(1.0 - p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  const double q = p - 0.5;
  const double r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

}  // namespace detail

/// Inverse standard normal CDF on (0, 1). Rational seed plus two Newton
/// steps against the erfc-based CDF.
inline double std_normal_quantile(double p) {
  detail::require(std::isfinite(p) && p > 0.0 && p < 1.0,
                  "std_normal_quantile: p must lie in (0,1)");
  double x = detail::normal_quantile_seed(p);
  for (int i = 0; i < 2; ++i) {
    const double density = std_normal_pdf(x);
    if (density <= std::numeric_limits<double>::min()) break;
    x -= (std_normal_cdf(x) - p) / density;
  }
  return x;
}

}  // namespace fairaudit

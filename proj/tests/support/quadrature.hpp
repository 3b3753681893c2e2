// Test-only oracle for the structural default model: integrates the
// piecewise mortgage payoff against the normal density with adaptive
// Simpson quadrature. Shares no code with the erfc-based closed forms it
// cross-checks.

#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>

#include "fairaudit/merton.hpp"

namespace testsupport {

namespace detail {

inline double simpson(double a, double fa, double b, double fb, double fm) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

inline double adaptive_step(const std::function<double(double)>& f, double a, double fa,
                            double b, double fb, double m, double fm, double whole, double tol,
                            int depth) {
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = simpson(a, fa, m, fm, flm);
  const double right = simpson(m, fm, b, fb, frm);
  const double delta = left + right - whole;
  if (depth <= 0) throw std::runtime_error("adaptive quadrature: recursion limit reached");
  if (std::fabs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return adaptive_step(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
         adaptive_step(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double tol) {
  if (a >= b) return 0.0;
  const double m = 0.5 * (a + b);
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(m);
  return detail::adaptive_step(f, a, fa, b, fb, m, fm, detail::simpson(a, fa, b, fb, fm), tol,
                               60);
}

/// Payoff of an accepted mortgage as a function of terminal wealth.
inline double mortgage_payoff(const fairaudit::MortgageParams& p, double x) {
  if (x > p.mortgage_T) return p.price_T + x - p.capital_0 - p.mortgage_T;
  if (p.recovery_price() + x > p.mortgage_T)
    return p.recovery_price() + x - p.capital_0 - p.mortgage_T;
  return -p.capital_0;
}

/// E[payoff(X)] for X ~ N(mu, sigma^2) by quadrature, split at the two
/// payoff breakpoints. Tails beyond 15 sigma are negligible against the
/// 1e-6 relative budget this oracle serves.
inline double quadrature_accepted_payoff(const fairaudit::MortgageParams& p) {
  const auto integrand = [&p](double x) {
    const double z = (x - p.mu) / p.sigma;
    const double density =
        std::exp(-0.5 * z * z) / (p.sigma * 2.5066282746310005024157652848110);
    return mortgage_payoff(p, x) * density;
  };
  const double lo = p.mu - 15.0 * p.sigma;
  const double hi = p.mu + 15.0 * p.sigma;
  double cuts[4] = {lo, p.mortgage_T - p.recovery_price(), p.mortgage_T, hi};
  for (double& c : cuts) c = std::min(std::max(c, lo), hi);
  double total = 0.0;
  for (int i = 0; i < 3; ++i)
    total += adaptive_simpson(integrand, cuts[i], cuts[i + 1], 1e-9 * p.sigma);
  return total;
}

}  // namespace testsupport

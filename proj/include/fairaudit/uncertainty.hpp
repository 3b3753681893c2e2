// Interval uncertainty for the reduced setting: boxes around the two
// reduced probabilities per group, worst-case bounds on the utility
// difference over those boxes, and Wilson score intervals for
// probabilities estimated from counts.

#pragma once

#include <cmath>
#include <cstdint>

#include "fairaudit/core.hpp"
#include "fairaudit/normal.hpp"

namespace fairaudit {

struct ProbInterval {
  double lo = 0.0;
  double hi = 0.0;

  void validate() const {
    detail::require(detail::is_probability(lo) && detail::is_probability(hi) && lo <= hi,
                    "ProbInterval: requires 0 <= lo <= hi <= 1");
  }

  double width() const { return hi - lo; }
  double midpoint() const { return 0.5 * (lo + hi); }
};

/// Per-group uncertainty box over the two reduced probabilities. The two
/// coordinates are treated as independent intervals; the only cross
/// constraint is that the joint cannot exceed the marginal across the box.
struct IntervalTable {
  ProbInterval p11;
  ProbInterval p_accept;

  void validate() const {
    p11.validate();
    p_accept.validate();
    detail::require(p11.lo <= p_accept.hi, "IntervalTable: p11 interval lies above pAccept");
  }

  ReducedJointTable midpoint() const {
    return ReducedJointTable{std::min(p11.midpoint(), p_accept.midpoint()),
                             p_accept.midpoint()};
  }
};

/// Per-group observation counts: accepted-and-good, accepted-and-bad,
/// rejected.
struct CountData {
  std::int64_t n11 = 0;
  std::int64_t n01 = 0;
  std::int64_t n0 = 0;

  void validate() const {
    detail::require(n11 >= 0 && n01 >= 0 && n0 >= 0, "CountData: counts must be nonnegative");
    detail::require(total() > 0, "CountData: total count must be positive");
  }

  std::int64_t total() const { return n11 + n01 + n0; }
};

namespace detail {

// Worst-case component difference for a coefficient of the given sign.
inline double extreme_difference(double coef, const ProbInterval& std_iv,
                                 const ProbInterval& prot_iv, bool maximize) {
  const bool take_outer = (coef >= 0.0) == maximize;
  return take_outer ? std_iv.hi - prot_iv.lo : std_iv.lo - prot_iv.hi;
}

inline double ud_extreme(const IntervalTable& std_box, const IntervalTable& prot_box,
                         const ReducedUtilityMatrix& u, bool maximize) {
  std_box.validate();
  prot_box.validate();
  u.validate();
  const double u1 = u.u11 - u.u01;
  const double u2 = u.u01 - u.u0;
  return u1 * extreme_difference(u1, std_box.p11, prot_box.p11, maximize) +
         u2 * extreme_difference(u2, std_box.p_accept, prot_box.p_accept, maximize);
}

}  // namespace detail

/// Largest reduced utility difference attainable over the two boxes.
/// Each component takes the interval endpoints that maximize its signed
/// contribution; for a componentwise nonnegative utility vector this is
/// exactly <U, (upper_0 - lower_1)>.
inline double ud_upper_bound(const IntervalTable& std_box, const IntervalTable& prot_box,
                             const ReducedUtilityMatrix& u) {
  return detail::ud_extreme(std_box, prot_box, u, true);
}

/// Smallest reduced utility difference attainable over the two boxes.
inline double ud_lower_bound(const IntervalTable& std_box, const IntervalTable& prot_box,
                             const ReducedUtilityMatrix& u) {
  return detail::ud_extreme(std_box, prot_box, u, false);
}

/// Wilson score interval for a binomial proportion at the given
/// two-sided confidence level. Degenerate observations pin the matching
/// endpoint exactly (0 successes -> lo = 0, all successes -> hi = 1).
inline ProbInterval wilson_interval(std::int64_t successes, std::int64_t n, double confidence) {
  detail::require(n >= 1, "wilson_interval: n must be >= 1");
  detail::require(successes >= 0 && successes <= n,
                  "wilson_interval: successes must lie in [0, n]");
  detail::require(std::isfinite(confidence) && confidence > 0.0 && confidence < 1.0,
                  "wilson_interval: confidence must lie in (0,1)");
  const double z = std_normal_quantile(0.5 * (1.0 + confidence));
  const double z2 = z * z;
  const double nn = static_cast<double>(n);
  const double p_hat = static_cast<double>(successes) / nn;
  const double denom = 1.0 + z2 / nn;
  const double center = (p_hat + z2 / (2.0 * nn)) / denom;
  const double half =
      z * std::sqrt(p_hat * (1.0 - p_hat) / nn + z2 / (4.0 * nn * nn)) / denom;
  ProbInterval iv{std::max(0.0, center - half), std::min(1.0, center + half)};
  if (successes == 0) iv.lo = 0.0;
  if (successes == n) iv.hi = 1.0;
  return iv;
}

/// Wilson intervals for the two reduced probabilities of one group,
/// clamped so the joint interval never escapes the acceptance interval.
inline IntervalTable counts_to_interval_table(const CountData& c, double confidence) {
  c.validate();
  const std::int64_t n = c.total();
  ProbInterval p11 = wilson_interval(c.n11, n, confidence);
  const ProbInterval accept = wilson_interval(c.n11 + c.n01, n, confidence);
  p11.hi = std::min(p11.hi, accept.hi);
  p11.lo = std::min(p11.lo, p11.hi);
  IntervalTable t{p11, accept};
  t.validate();
  return t;
}

}  // namespace fairaudit

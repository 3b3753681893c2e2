// Worked-example machinery: the closed-form college-admission utility
// difference, the admission rate that would remove the disadvantage, the
// equal-utility acceptance solvers for the reduced setting, and
// acceptance-rate sweeps (optionally under a fixed admission budget).

#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "fairaudit/core.hpp"

namespace fairaudit {

/// College admission parameters. delta is the standard group's edge in
/// conditional completion probability: P_0(Y=1|Yhat=1) = q11 + delta.
struct CollegeParams {
  double q0 = 0.0;     ///< standard-group admission rate
  double q1 = 0.0;     ///< protected-group admission rate
  double delta = 0.0;  ///< conditional completion gap, in [0,1]
  double q11 = 0.0;    ///< protected-group completion rate given admission
  double u11 = 0.0;    ///< utility of completing the studies
  double u01 = 0.0;    ///< utility (often negative) of admission without completion

  void validate() const {
    detail::require(detail::is_probability(q0), "CollegeParams: q0 out of [0,1]");
    detail::require(detail::is_probability(q1), "CollegeParams: q1 out of [0,1]");
    detail::require(detail::is_probability(delta), "CollegeParams: delta out of [0,1]");
    detail::require(detail::is_probability(q11), "CollegeParams: q11 out of [0,1]");
    detail::require(q11 + delta <= 1.0 + 1e-12,
                    "CollegeParams: q11 + delta exceeds 1");
    detail::require(std::isfinite(u11) && std::isfinite(u01),
                    "CollegeParams: utilities must be finite");
  }
};

/// Closed-form utility difference
///   (u11-u01) * (q11*(q0-q1) + q0*delta) + u01*(q0-q1),
/// expanded term by term so the q0 = q1 special cases evaluate without
/// cancellation noise.
inline double college_ud(const CollegeParams& p) {
  p.validate();
  const double gain = p.u11 - p.u01;
  const double rate_gap = p.q0 - p.q1;
  return gain * p.q11 * rate_gap + gain * p.q0 * p.delta + p.u01 * rate_gap;
}

/// Embeds the college parameters into full joint tables (rejected mass
/// split evenly across the two rejected cells, immaterial because
/// u00 = u10 = 0).
inline Scenario embed_college(const CollegeParams& p) {
  p.validate();
  const auto group = [](double accept, double success_rate) {
    const double p11 = accept * success_rate;
    const double p01 = accept - p11;
    const double rejected = 1.0 - accept;
    return JointTable{p11, p01, 0.5 * rejected, 0.5 * rejected};
  };
  Scenario s;
  s.standard = group(p.q0, p.q11 + p.delta);
  s.protected_group = group(p.q1, p.q11);
  s.utilities = UtilityMatrix{p.u11, p.u01, 0.0, 0.0};
  s.tau = 0.0;
  s.validate();
  return s;
}

/// Smallest protected-group admission rate with no disadvantage, for the
/// reference case u01 = 0: q1* = q0 * (1 + delta/q11). May exceed 1, in
/// which case no admission rate alone removes the disadvantage.
inline double solve_q1_star(const CollegeParams& p) {
  p.validate();
  detail::require(p.q11 > 0.0, "solve_q1_star: q11 must be positive");
  detail::require(p.u01 == 0.0,
                  "solve_q1_star: closed form applies to the u01 = 0 case only");
  return p.q0 * (1.0 + p.delta / p.q11);
}

enum class SolveMode {
  fixed_conditional,  ///< protected table (p*c, p): conditional rate held fixed
  fixed_joint,        ///< protected p11 held fixed, only the acceptance varies
};

inline const char* to_string(SolveMode m) {
  return m == SolveMode::fixed_conditional ? "fixed-conditional" : "fixed-joint";
}

/// Result of an equal-utility acceptance solve. rate is absent when the
/// root lies outside [0,1] or the equation is degenerate; the boundary
/// utility differences are always reported.
struct AcceptanceSolution {
  SolveMode mode = SolveMode::fixed_conditional;
  std::optional<double> rate;
  double ud_at_zero = 0.0;
  double ud_at_one = 0.0;
  std::string note;
};

namespace detail {

inline AcceptanceSolution solve_linear_acceptance(SolveMode mode, double constant,
                                                  double slope) {
  AcceptanceSolution out;
  out.mode = mode;
  out.ud_at_zero = constant;
  out.ud_at_one = constant - slope;
  if (slope == 0.0) {
    if (constant == 0.0) {
      out.note = "every acceptance rate equalizes the utilities";
    } else {
      out.note = "degenerate equation: no acceptance rate changes the utility difference";
    }
    return out;
  }
  const double p = constant / slope;
  if (p >= 0.0 && p <= 1.0) {
    out.rate = p;
  } else {
    out.note = "root " + std::to_string(p) + " lies outside [0,1]";
  }
  return out;
}

}  // namespace detail

/// Solves <U, P0 - (p*c, p)> = 0 for the protected acceptance rate p,
/// holding the protected conditional non-default rate c fixed. Identical
/// groups solve to the standard group's own acceptance rate.
inline AcceptanceSolution solve_equal_utility_acceptance(const ReducedJointTable& std_group,
                                                         double prot_conditional,
                                                         const ReducedUtilityMatrix& u) {
  std_group.validate();
  u.validate();
  detail::require(detail::is_probability(prot_conditional),
                  "solve_equal_utility_acceptance: conditional rate out of [0,1]");
  const double u1 = u.u11 - u.u01;
  const double u2 = u.u01 - u.u0;
  const double constant = u1 * std_group.p11 + u2 * std_group.p_accept;
  const double slope = u1 * prot_conditional + u2;
  AcceptanceSolution out = detail::solve_linear_acceptance(SolveMode::fixed_conditional,
                                                           constant, slope);
  if (out.rate && !(std::isfinite(*out.rate))) out.rate.reset();
  return out;
}

/// The same solve with the protected joint probability held fixed, the
/// calculation the worked mortgage example performs. The root may be
/// inconsistent with the frozen joint (p < prot_p11); the note says so.
inline AcceptanceSolution solve_equal_utility_acceptance_fixed_joint(
    const ReducedJointTable& std_group, double prot_p11, const ReducedUtilityMatrix& u) {
  std_group.validate();
  u.validate();
  detail::require(detail::is_probability(prot_p11),
                  "solve_equal_utility_acceptance_fixed_joint: p11 out of [0,1]");
  const double u1 = u.u11 - u.u01;
  const double u2 = u.u01 - u.u0;
  // u1*(p11_0 - p11_1) + u2*(acc_0 - p) = 0, linear in p alone.
  const double constant = u1 * (std_group.p11 - prot_p11) + u2 * std_group.p_accept;
  AcceptanceSolution out =
      detail::solve_linear_acceptance(SolveMode::fixed_joint, constant, u2);
  if (out.rate && *out.rate < prot_p11) {
    out.note = "solution holds the joint fixed at " + std::to_string(prot_p11) +
               ", which exceeds the solved acceptance rate; the frozen-joint table is "
               "not a valid distribution";
  }
  return out;
}

/// Fixed admission budget for sweeps: raising protected admissions
/// removes the same number of standard-group admissions.
struct FixedSlots {
  std::int64_t total_slots = 0;
  std::int64_t total_population = 0;
  std::int64_t protected_population = 0;

  void validate() const {
    detail::require(total_slots > 0 && total_population > 0 && protected_population > 0,
                    "FixedSlots: counts must be positive");
    detail::require(protected_population < total_population,
                    "FixedSlots: protected population must leave room for the standard group");
    detail::require(total_slots <= total_population,
                    "FixedSlots: more slots than people");
  }

  std::int64_t standard_population() const { return total_population - protected_population; }
};

struct SweepSpec {
  double lo = 0.0;
  double hi = 0.0;
  double step = 0.0;
  std::optional<FixedSlots> slots;

  void validate() const {
    detail::require(std::isfinite(lo) && std::isfinite(hi) && lo <= hi,
                    "SweepSpec: requires lo <= hi");
    detail::require(std::isfinite(step) && step > 0.0, "SweepSpec: step must be positive");
    if (slots) slots->validate();
  }

  std::vector<double> grid() const {
    validate();
    std::vector<double> values;
    const auto count = static_cast<std::int64_t>(std::floor((hi - lo) / step + 1e-9));
    values.reserve(static_cast<std::size_t>(count) + 1);
    for (std::int64_t i = 0; i <= count; ++i) values.push_back(lo + static_cast<double>(i) * step);
    return values;
  }
};

struct SweepRow {
  double value = 0.0;
  double ud = 0.0;
  bool feasible = true;
};

/// Utility difference as the protected admission rate sweeps the grid.
/// Under a slot budget the standard rate becomes
/// (total_slots - q1 * protected_population) / standard_population; grid
/// points forcing it outside [0,1] are flagged infeasible.
inline std::vector<SweepRow> sweep_college(const CollegeParams& base, const SweepSpec& spec) {
  base.validate();
  std::vector<SweepRow> rows;
  for (double q1 : spec.grid()) {
    SweepRow row;
    row.value = q1;
    CollegeParams p = base;
    p.q1 = q1;
    if (spec.slots) {
      const double standard_admissions =
          static_cast<double>(spec.slots->total_slots) -
          q1 * static_cast<double>(spec.slots->protected_population);
      const double q0 =
          standard_admissions / static_cast<double>(spec.slots->standard_population());
      if (q0 < 0.0 || q0 > 1.0 || q1 > 1.0) {
        row.feasible = false;
        row.ud = std::numeric_limits<double>::quiet_NaN();
        rows.push_back(row);
        continue;
      }
      p.q0 = q0;
    }
    if (q1 > 1.0) {
      row.feasible = false;
      row.ud = std::numeric_limits<double>::quiet_NaN();
    } else {
      row.ud = college_ud(p);
    }
    rows.push_back(row);
  }
  return rows;
}

/// Reduced-setting sweep over the protected acceptance rate with the
/// conditional non-default rate held fixed.
inline std::vector<SweepRow> sweep_reduced(const ReducedJointTable& std_group,
                                           double prot_conditional,
                                           const ReducedUtilityMatrix& u,
                                           const SweepSpec& spec) {
  std_group.validate();
  u.validate();
  detail::require(detail::is_probability(prot_conditional),
                  "sweep_reduced: conditional rate out of [0,1]");
  detail::require(!spec.slots.has_value(),
                  "sweep_reduced: the slot budget applies to college sweeps only");
  std::vector<SweepRow> rows;
  for (double p : spec.grid()) {
    SweepRow row;
    row.value = p;
    if (p > 1.0) {
      row.feasible = false;
      row.ud = std::numeric_limits<double>::quiet_NaN();
    } else {
      row.ud = reduced_utility_difference(std_group,
                                          ReducedJointTable{p * prot_conditional, p}, u);
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace fairaudit

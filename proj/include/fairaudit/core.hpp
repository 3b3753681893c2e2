// Core value types for two-group utility audits: joint outcome/decision
// tables, outcome utilities, and the expected-utility decomposition used
// throughout the library. All types are plain immutable values; all
// operations are pure functions and safe to call concurrently.

#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace fairaudit {

/// Thrown when an input value violates a documented domain invariant.
class validation_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

namespace detail {

inline void require(bool condition, const std::string& message) {
  if (!condition) throw validation_error(message);
}

inline bool is_probability(double x) { return std::isfinite(x) && x >= 0.0 && x <= 1.0; }

}  // namespace detail

/// Tolerance for the cell-sum invariant of a joint table.
inline constexpr double kCellSumTolerance = 1e-12;

/// Outcome utilities u[y][yhat]: y = 1 is the good outcome, yhat = 1 the
/// favorable decision. Utilities are shared by both groups.
struct UtilityMatrix {
  double u11 = 0.0;  ///< accepted, good outcome
  double u01 = 0.0;  ///< accepted, bad outcome
  double u00 = 0.0;  ///< rejected, bad outcome
  double u10 = 0.0;  ///< rejected, good outcome

  void validate() const {
    detail::require(std::isfinite(u11) && std::isfinite(u01) && std::isfinite(u00) &&
                        std::isfinite(u10),
                    "UtilityMatrix: all entries must be finite");
  }
};

/// Utilities for the reduced setting, where both rejected cells carry the
/// single utility u0 because no outcome data exists for rejected cases.
struct ReducedUtilityMatrix {
  double u11 = 0.0;
  double u01 = 0.0;
  double u0 = 0.0;

  void validate() const {
    detail::require(std::isfinite(u11) && std::isfinite(u01) && std::isfinite(u0),
                    "ReducedUtilityMatrix: all entries must be finite");
  }
};

/// One group's joint distribution over (outcome Y, decision Yhat).
/// Cell p[y][yhat]; the four cells are nonnegative and sum to one.
struct JointTable {
  double p11 = 0.0;  ///< P(Y=1, Yhat=1)
  double p01 = 0.0;  ///< P(Y=0, Yhat=1)
  double p00 = 0.0;  ///< P(Y=0, Yhat=0)
  double p10 = 0.0;  ///< P(Y=1, Yhat=0)

  void validate() const {
    detail::require(detail::is_probability(p11), "JointTable: p11 out of [0,1]");
    detail::require(detail::is_probability(p01), "JointTable: p01 out of [0,1]");
    detail::require(detail::is_probability(p00), "JointTable: p00 out of [0,1]");
    detail::require(detail::is_probability(p10), "JointTable: p10 out of [0,1]");
    const double sum = p11 + p01 + p00 + p10;
    detail::require(std::fabs(sum - 1.0) <= kCellSumTolerance,
                    "JointTable: cells must sum to 1 (got " + std::to_string(sum) + ")");
  }

  double accept_rate() const { return p11 + p01; }  ///< P(Yhat=1)
  double reject_rate() const { return p00 + p10; }  ///< P(Yhat=0)
  double base_rate() const { return p11 + p10; }    ///< P(Y=1)
};

/// One group's distribution in the reduced setting: only the accepted
/// column is resolved by outcome.
struct ReducedJointTable {
  double p11 = 0.0;       ///< P(Y=1, Yhat=1)
  double p_accept = 0.0;  ///< P(Yhat=1)

  void validate() const {
    detail::require(detail::is_probability(p11), "ReducedJointTable: p11 out of [0,1]");
    detail::require(detail::is_probability(p_accept), "ReducedJointTable: pAccept out of [0,1]");
    detail::require(p11 <= p_accept, "ReducedJointTable: p11 exceeds pAccept");
  }
};

inline ReducedJointTable reduce(const JointTable& t) {
  return ReducedJointTable{t.p11, t.accept_rate()};
}

/// The three probabilities entering the expected-utility decomposition.
/// Also reused for componentwise differences between two groups, in which
/// case entries lie in [-1, 1].
struct ProbVector {
  double true_positive = 0.0;  ///< P(Y=1, Yhat=1)
  double true_negative = 0.0;  ///< P(Y=0, Yhat=0)
  double accepted = 0.0;       ///< P(Yhat=1)
};

/// Coefficients pairing with ProbVector: E[U] = <UtilityVector, ProbVector> + u10.
struct UtilityVector {
  double true_positive = 0.0;  ///< u11 - u01
  double true_negative = 0.0;  ///< u00 - u10
  double accepted = 0.0;       ///< u01 - u10
};

inline UtilityVector utility_vector(const UtilityMatrix& u) {
  u.validate();
  return UtilityVector{u.u11 - u.u01, u.u00 - u.u10, u.u01 - u.u10};
}

inline ProbVector prob_vector(const JointTable& t) {
  t.validate();
  return ProbVector{t.p11, t.p00, t.accept_rate()};
}

inline double dot(const UtilityVector& u, const ProbVector& p) {
  return u.true_positive * p.true_positive + u.true_negative * p.true_negative +
         u.accepted * p.accepted;
}

inline double infinity_norm(const UtilityVector& u) {
  return std::max({std::fabs(u.true_positive), std::fabs(u.true_negative),
                   std::fabs(u.accepted)});
}

inline double infinity_norm(const ProbVector& p) {
  return std::max({std::fabs(p.true_positive), std::fabs(p.true_negative),
                   std::fabs(p.accepted)});
}

/// A full two-group audit problem. The utility difference is directed:
/// standard minus protected, so positive values disadvantage the
/// protected group. tau is the level of negligible differences.
struct Scenario {
  JointTable standard;
  JointTable protected_group;
  UtilityMatrix utilities;
  double tau = 0.0;

  void validate() const {
    standard.validate();
    protected_group.validate();
    utilities.validate();
    detail::require(std::isfinite(tau) && tau >= 0.0, "Scenario: tau must be >= 0");
  }
};

/// Reduced-setting counterpart of Scenario.
struct ReducedScenario {
  ReducedJointTable standard;
  ReducedJointTable protected_group;
  ReducedUtilityMatrix utilities;
  double tau = 0.0;

  void validate() const {
    standard.validate();
    protected_group.validate();
    utilities.validate();
    detail::require(std::isfinite(tau) && tau >= 0.0, "ReducedScenario: tau must be >= 0");
  }
};

/// Expected utility of one group via the three-term decomposition
/// E[U] = <U, P> + u10.
inline double expected_utility(const JointTable& joint, const UtilityMatrix& u) {
  const UtilityVector uv = utility_vector(u);
  const ProbVector pv = prob_vector(joint);
  return dot(uv, pv) + u.u10;
}

/// Expected utility summed cell by cell. Kept as an algebraically
/// independent route so the two paths can cross-check each other.
inline double brute_force_expected_utility(const JointTable& joint, const UtilityMatrix& u) {
  joint.validate();
  u.validate();
  return joint.p11 * u.u11 + joint.p01 * u.u01 + joint.p00 * u.u00 + joint.p10 * u.u10;
}

/// Componentwise group difference of the probability vectors (a minus b).
inline ProbVector prob_difference(const JointTable& a, const JointTable& b) {
  a.validate();
  b.validate();
  return ProbVector{a.p11 - b.p11, a.p00 - b.p00, a.accept_rate() - b.accept_rate()};
}

/// Utility difference UD = <U, P0 - P1>. Positive values mean the
/// protected group is worse off.
inline double utility_difference(const Scenario& s) {
  s.validate();
  const UtilityVector uv = utility_vector(s.utilities);
  const ProbVector pd = prob_difference(s.standard, s.protected_group);
  return dot(uv, pd);
}

/// Reduced-setting expected utility: (u11-u01) p11 + (u01-u0) pAccept + u0.
inline double reduced_expected_utility(const ReducedJointTable& joint,
                                       const ReducedUtilityMatrix& u) {
  joint.validate();
  u.validate();
  return (u.u11 - u.u01) * joint.p11 + (u.u01 - u.u0) * joint.p_accept + u.u0;
}

/// Reduced-setting utility difference as a dot product of differences.
inline double reduced_utility_difference(const ReducedJointTable& std_group,
                                         const ReducedJointTable& prot_group,
                                         const ReducedUtilityMatrix& u) {
  std_group.validate();
  prot_group.validate();
  u.validate();
  return (u.u11 - u.u01) * (std_group.p11 - prot_group.p11) +
         (u.u01 - u.u0) * (std_group.p_accept - prot_group.p_accept);
}

}  // namespace fairaudit

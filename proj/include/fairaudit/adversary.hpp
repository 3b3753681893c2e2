// Constructive worst case for epsilon-fairness: given any nonzero
// diagonal probability difference, build utilities that drive the
// utility difference to an arbitrary target, no matter how small the
// probability distance is.

#pragma once

#include <cmath>
#include <string>

#include "fairaudit/core.hpp"

namespace fairaudit {

/// A request to realize a target disadvantage on top of a given group
/// probability difference. Requires some mass on the diagonal entries,
/// since the construction zeroes the acceptance term.
struct AdversaryRequest {
  ProbVector pd;
  double target_k = 0.0;

  void validate() const {
    detail::require(std::isfinite(pd.true_positive) && std::fabs(pd.true_positive) <= 1.0,
                    "AdversaryRequest: pd true-positive component out of [-1,1]");
    detail::require(std::isfinite(pd.true_negative) && std::fabs(pd.true_negative) <= 1.0,
                    "AdversaryRequest: pd true-negative component out of [-1,1]");
    detail::require(std::isfinite(pd.accepted) && std::fabs(pd.accepted) <= 1.0,
                    "AdversaryRequest: pd accepted component out of [-1,1]");
    detail::require(std::fabs(pd.true_positive) + std::fabs(pd.true_negative) > 0.0,
                    "AdversaryRequest: distance concentrated on off-diagonal; "
                    "construction undefined");
    detail::require(std::isfinite(target_k) && target_k > 0.0,
                    "AdversaryRequest: target K must be positive");
  }
};

/// Builds a utility matrix whose utility difference equals target_k for
/// any tables realizing the requested probability difference. Always
/// sets u01 = u10 so the acceptance term vanishes; the larger diagonal
/// component carries the construction (ties go to the true-positive
/// one), and its sign is absorbed into the single nonzero utility.
inline UtilityMatrix construct_adversarial_utilities(const AdversaryRequest& req) {
  req.validate();
  const bool use_true_positive =
      std::fabs(req.pd.true_positive) >= std::fabs(req.pd.true_negative);
  const double component = use_true_positive ? req.pd.true_positive : req.pd.true_negative;
  detail::require(std::fabs(component) >= 1e-300 * req.target_k,
                  "AdversaryRequest: probability difference too small for the "
                  "requested K without utility overflow");
  UtilityMatrix u;  // u01 = u10 = 0 and the unused diagonal utility stays 0
  if (use_true_positive) {
    u.u11 = req.target_k / component;
  } else {
    u.u00 = req.target_k / component;
  }
  return u;
}

/// Closes the loop numerically: checks that the tables realize the
/// requested probability difference and returns the achieved utility
/// difference.
inline double verify_adversary(const AdversaryRequest& req, const UtilityMatrix& u,
                               const JointTable& std_group, const JointTable& prot_group) {
  req.validate();
  const ProbVector actual = prob_difference(std_group, prot_group);
  const double mismatch =
      std::max({std::fabs(actual.true_positive - req.pd.true_positive),
                std::fabs(actual.true_negative - req.pd.true_negative),
                std::fabs(actual.accepted - req.pd.accepted)});
  detail::require(mismatch <= 1e-12,
                  "verify_adversary: tables do not realize the requested probability "
                  "difference (max deviation " + std::to_string(mismatch) + ")");
  return utility_difference(Scenario{std_group, prot_group, u, 0.0});
}

}  // namespace fairaudit

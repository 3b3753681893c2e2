// Structural mortgage-default model: terminal wealth is normally
// distributed and default splits into a partial-recovery region (the
// house sale at a haircut still covers the mortgage) and a wipe-out
// region. Closed forms for the region probabilities and the partial
// expected utilities, plus the bridge into the reduced audit setting.

#pragma once

#include <cmath>
#include <optional>
#include <string>

#include "fairaudit/core.hpp"
#include "fairaudit/normal.hpp"

namespace fairaudit {

/// Scenario parameters for one group's mortgage. horizon_T is
/// documentary; the model works directly with the time-T quantities.
struct MortgageParams {
  double price_T = 0.0;     ///< house value at maturity
  double mortgage_T = 0.0;  ///< outstanding mortgage at maturity
  double capital_0 = 0.0;   ///< initial liquid capital
  double haircut = 0.0;     ///< forced-sale discount, in [0,1)
  double mu = 0.0;          ///< mean of terminal wealth X_T
  double sigma = 0.0;       ///< standard deviation of X_T, positive
  double rent_cost = 0.0;   ///< cost of renting over the horizon
  double horizon_T = 0.0;   ///< years, informational

  void validate() const {
    detail::require(std::isfinite(price_T) && std::isfinite(mortgage_T) &&
                        std::isfinite(capital_0) && std::isfinite(mu) &&
                        std::isfinite(rent_cost) && std::isfinite(horizon_T),
                    "MortgageParams: money fields must be finite");
    detail::require(std::isfinite(sigma) && sigma > 0.0, "MortgageParams: sigma must be > 0");
    detail::require(std::isfinite(haircut) && haircut >= 0.0 && haircut < 1.0,
                    "MortgageParams: haircut must lie in [0,1)");
  }

  /// Sale proceeds after the haircut.
  double recovery_price() const { return price_T * (1.0 - haircut); }
};

struct DefaultProbabilities {
  double p_no_default = 0.0;
  double p_d1 = 0.0;  ///< default, house sale covers the mortgage
  double p_d2 = 0.0;  ///< default, wipe-out
};

/// Unconditional (indicator-weighted) expected utilities per region plus
/// the region probabilities. eu11 and eu01 include the region indicator,
/// so they add up to the full expected payoff of an accepted mortgage.
struct MortgageBreakdown {
  double p_no_default = 0.0;
  double p_d1 = 0.0;
  double p_d2 = 0.0;
  double eu11 = 0.0;
  double eu01 = 0.0;
  double eu0 = 0.0;

  void validate() const {
    detail::require(std::fabs(p_no_default + p_d1 + p_d2 - 1.0) <= 1e-12,
                    "MortgageBreakdown: region probabilities must sum to 1");
    detail::require(p_d1 >= 0.0 && p_d2 >= 0.0,
                    "MortgageBreakdown: default probabilities must be nonnegative");
  }

  double p_default() const { return p_d1 + p_d2; }
};

/// Region probabilities: no default when X_T > M_T, D2 when even the
/// haircut sale cannot cover the mortgage, D1 in between.
inline DefaultProbabilities default_probabilities(const MortgageParams& p) {
  p.validate();
  const double z_no_default = (p.mu - p.mortgage_T) / p.sigma;
  const double z_wipe_out = (p.mortgage_T - p.recovery_price() - p.mu) / p.sigma;
  DefaultProbabilities out;
  out.p_no_default = std_normal_cdf(z_no_default);
  out.p_d2 = std_normal_cdf(z_wipe_out);
  out.p_d1 = std::max(0.0, std_normal_cdf(-z_no_default) - out.p_d2);
  return out;
}

/// Closed-form breakdown per the normal model:
///   eu11 = (P_T + mu - x_0 - M_T) Phi(z) + sigma phi(z),  z = (mu-M_T)/sigma
///   eu01 = -x_0 P(D) + (P_T(1-l) + mu - M_T) P(D1) + sigma (phi(z_w) - phi(-z))
///   eu0  = x_0 + mu - C
inline MortgageBreakdown expected_utilities(const MortgageParams& p) {
  const DefaultProbabilities probs = default_probabilities(p);
  const double z_no_default = (p.mu - p.mortgage_T) / p.sigma;
  const double z_wipe_out = (p.mortgage_T - p.recovery_price() - p.mu) / p.sigma;
  MortgageBreakdown out;
  out.p_no_default = probs.p_no_default;
  out.p_d1 = probs.p_d1;
  out.p_d2 = probs.p_d2;
  out.eu11 = (p.price_T + p.mu - p.capital_0 - p.mortgage_T) * probs.p_no_default +
             p.sigma * std_normal_pdf(z_no_default);
  out.eu01 = -p.capital_0 * (probs.p_d1 + probs.p_d2) +
             (p.recovery_price() + p.mu - p.mortgage_T) * probs.p_d1 +
             p.sigma * partial_expectation(z_wipe_out, -z_no_default);
  out.eu0 = p.capital_0 + p.mu - p.rent_cost;
  out.validate();
  return out;
}

namespace detail {

// Conditional utility for a branch; zero-weight branches fall back to 0.
inline double conditional_utility(double partial_eu, double branch_prob, double branch_weight,
                                  const std::string& branch) {
  if (branch_prob > 0.0) return partial_eu / branch_prob;
  require(branch_weight <= 0.0,
          "to_reduced_scenario: conditional utility for branch " + branch +
              " undefined (probability 0 in the standard-group model) but the branch "
              "carries positive weight");
  return 0.0;
}

}  // namespace detail

/// Bridges the model into the reduced setting: per-group tables use each
/// group's own default probabilities, while the shared utility matrix
/// comes from the standard group's breakdown (conditional expected
/// utilities) unless an override is supplied.
inline ReducedScenario to_reduced_scenario(const MortgageParams& std_params,
                                           const MortgageParams& prot_params,
                                           double accept_std, double accept_prot,
                                           std::optional<ReducedUtilityMatrix> utilities_override =
                                               std::nullopt) {
  detail::require(detail::is_probability(accept_std),
                  "to_reduced_scenario: standard acceptance rate out of [0,1]");
  detail::require(detail::is_probability(accept_prot),
                  "to_reduced_scenario: protected acceptance rate out of [0,1]");
  const MortgageBreakdown std_breakdown = expected_utilities(std_params);
  const DefaultProbabilities prot_probs = default_probabilities(prot_params);

  ReducedScenario s;
  s.standard = ReducedJointTable{accept_std * std_breakdown.p_no_default, accept_std};
  s.protected_group = ReducedJointTable{accept_prot * prot_probs.p_no_default, accept_prot};
  if (utilities_override) {
    s.utilities = *utilities_override;
  } else {
    const double weight_good =
        std::max(s.standard.p11, s.protected_group.p11);
    const double weight_default =
        std::max(accept_std * std_breakdown.p_default(),
                 accept_prot * (prot_probs.p_d1 + prot_probs.p_d2));
    s.utilities.u11 = detail::conditional_utility(std_breakdown.eu11,
                                                  std_breakdown.p_no_default, weight_good,
                                                  "accepted/no-default");
    s.utilities.u01 = detail::conditional_utility(std_breakdown.eu01,
                                                  std_breakdown.p_default(), weight_default,
                                                  "accepted/default");
    s.utilities.u0 = std_breakdown.eu0;
  }
  s.validate();
  return s;
}

}  // namespace fairaudit

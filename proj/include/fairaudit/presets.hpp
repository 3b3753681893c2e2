// Built-in parameterizations for the worked examples, mirrored by the
// scenario files shipped under scenarios/.

#pragma once

#include "fairaudit/merton.hpp"
#include "fairaudit/solver.hpp"

namespace fairaudit::presets {

/// College admission, reference case: equal 80% admission, completion
/// rates 90% vs 70%, completion worth 170,000.
inline CollegeParams college_baseline() {
  return CollegeParams{0.8, 0.8, 0.2, 0.7, 170000.0, 0.0};
}

/// Same rates with the outstanding student loan of 60,000 on failure.
inline CollegeParams college_loans() {
  return CollegeParams{0.8, 0.8, 0.2, 0.7, 170000.0, -60000.0};
}

/// Mortgage default model, base case: mean income 20,000 above the
/// outstanding mortgage.
inline MortgageParams mortgage_base() {
  MortgageParams p;
  p.price_T = 400000.0;
  p.mortgage_T = 200000.0;
  p.capital_0 = 90000.0;
  p.haircut = 0.2;
  p.mu = 220000.0;
  p.sigma = 30000.0;
  p.rent_cost = 100000.0;
  p.horizon_T = 10.0;
  return p;
}

/// Variant with mean income 50,000 above the mortgage (default
/// probability near 5%).
inline MortgageParams mortgage_high_mean() {
  MortgageParams p = mortgage_base();
  p.mu = 250000.0;
  return p;
}

/// Reduced-setting mortgage audit: equal 80% acceptance, conditional
/// non-default 95% vs 90%, utilities 310,000 / 160,000 / 190,000.
inline ReducedScenario mortgage_reduced() {
  ReducedScenario s;
  s.standard = ReducedJointTable{0.8 * 0.95, 0.8};
  s.protected_group = ReducedJointTable{0.8 * 0.9, 0.8};
  s.utilities = ReducedUtilityMatrix{310000.0, 160000.0, 190000.0};
  s.tau = 0.0;
  return s;
}

/// Plain sweep of the protected admission rate from 80% to 100%.
inline SweepSpec college_sweep() { return SweepSpec{0.8, 1.0, 0.01, std::nullopt}; }

/// Sweep under a fixed budget of 1000 admissions for 1250 people, 250 of
/// them in the protected group.
inline SweepSpec college_fixed_slots_sweep() {
  return SweepSpec{0.8, 1.0, 0.005, FixedSlots{1000, 1250, 250}};
}

}  // namespace fairaudit::presets

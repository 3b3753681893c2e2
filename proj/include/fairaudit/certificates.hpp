// Sufficiency certificates and quantitative bounds: conditions on the
// group distributions (and utilities) under which absence of a
// disadvantage is guaranteed, plus the worst-case bounds that apply when
// only the sizes of the probability and utility differences are known.
//
// Certificates are sufficient, never necessary: a failing certificate
// does not establish a disadvantage.

#pragma once

#include <algorithm>
#include <optional>
#include <string>

#include "fairaudit/core.hpp"

namespace fairaudit {

/// Outcome of one certificate evaluation. slack is the largest margin by
/// which the binding condition is violated (0 when the certificate
/// holds); bound, when present, is the guaranteed maximum disadvantage.
struct CertificateReport {
  std::string name;
  bool holds = false;
  double slack = 0.0;
  std::optional<double> bound;
  std::string details;
};

/// Inputs to the worst-case bounds: K caps |u1|,|u2|,|u3|, eps caps the
/// componentwise probability differences, gamma is the larger group-0
/// use accuracy.
struct BoundParams {
  double k = 0.0;
  double eps = 0.0;
  double gamma = 0.0;

  void validate() const {
    detail::require(std::isfinite(k) && k >= 0.0, "BoundParams: K must be >= 0");
    detail::require(detail::is_probability(eps), "BoundParams: eps must be in [0,1]");
    detail::require(detail::is_probability(gamma), "BoundParams: gamma must be in [0,1]");
  }
};

/// Worst-case disadvantage 3*eps*K when nothing but the two caps is known.
inline double rough_bound(const BoundParams& p) {
  p.validate();
  return 3.0 * p.eps * p.k;
}

/// Tightened worst case (1 + 2*gamma)*eps*K available under equal
/// conditional use accuracy.
inline double cua_bound(const BoundParams& p) {
  p.validate();
  return (1.0 + 2.0 * p.gamma) * p.eps * p.k;
}

namespace detail {

inline double conditional(double joint, double margin, const std::string& margin_name) {
  require(margin > 0.0, "degenerate margin: " + margin_name + " = 0");
  return joint / margin;
}

}  // namespace detail

/// P(Y=1 | Yhat=1) for one group. Throws on a zero acceptance margin.
inline double success_given_accept(const JointTable& t, const std::string& group = "group") {
  t.validate();
  return detail::conditional(t.p11, t.accept_rate(), "P(Yhat=1) for " + group);
}

/// P(Y=0 | Yhat=0) for one group. Throws on a zero rejection margin.
inline double negative_given_reject(const JointTable& t, const std::string& group = "group") {
  t.validate();
  return detail::conditional(t.p00, t.reject_rate(), "P(Yhat=0) for " + group);
}

/// Gamma = max of the standard group's two use accuracies.
inline double gamma_of(const Scenario& s) {
  s.validate();
  return std::max(success_given_accept(s.standard, "standard group"),
                  negative_given_reject(s.standard, "standard group"));
}

/// The concrete distance backing epsilon-fairness here: the max-norm of
/// the three-entry probability difference vector.
inline double epsilon_distance(const JointTable& a, const JointTable& b) {
  return infinity_norm(prob_difference(a, b));
}

/// Equal joint probabilities certificate. Three matching cells suffice
/// because the cells of each table sum to one.
inline CertificateReport check_equal_joints(const Scenario& s, double tol) {
  s.validate();
  double diffs[4] = {std::fabs(s.standard.p11 - s.protected_group.p11),
                     std::fabs(s.standard.p01 - s.protected_group.p01),
                     std::fabs(s.standard.p00 - s.protected_group.p00),
                     std::fabs(s.standard.p10 - s.protected_group.p10)};
  std::sort(diffs, diffs + 4);
  const double third_smallest = diffs[2];
  CertificateReport r;
  r.name = "equal-joints";
  r.holds = third_smallest <= tol;
  r.slack = r.holds ? 0.0 : third_smallest - tol;
  if (r.holds) {
    if (tol == 0.0) r.bound = 0.0;
    r.details = "at least three cell pairs agree within " + std::to_string(tol);
  } else {
    r.details = "fewer than three cell pairs agree within tolerance";
  }
  return r;
}

/// Equal conditional use accuracy: P(Y=i | Yhat=i) matches across groups
/// for i = 0, 1. When it holds, the disadvantage is bounded by
/// (1 + 2*Gamma) * |PD(Yhat=1)| * K with K taken from the scenario's
/// utility vector.
inline CertificateReport check_cua(const Scenario& s, double tol) {
  s.validate();
  const double sga0 = success_given_accept(s.standard, "standard group");
  const double sga1 = success_given_accept(s.protected_group, "protected group");
  const double ngr0 = negative_given_reject(s.standard, "standard group");
  const double ngr1 = negative_given_reject(s.protected_group, "protected group");
  const double dev_accept = std::fabs(sga0 - sga1);
  const double dev_reject = std::fabs(ngr0 - ngr1);
  const double worst = std::max(dev_accept, dev_reject);

  CertificateReport r;
  r.name = "conditional-use-accuracy";
  r.holds = worst <= tol;
  r.slack = r.holds ? 0.0 : worst - tol;
  if (r.holds) {
    const double eps_hat =
        std::fabs(s.standard.accept_rate() - s.protected_group.accept_rate());
    const double k_hat = infinity_norm(utility_vector(s.utilities));
    const double gamma = gamma_of(s);
    r.bound = cua_bound(BoundParams{k_hat, eps_hat, gamma});
    r.details = "use accuracies match; bound uses eps=" + std::to_string(eps_hat) +
                ", K=" + std::to_string(k_hat) + ", Gamma=" + std::to_string(gamma);
  } else {
    r.details = "conditional use accuracies differ (accept dev " + std::to_string(dev_accept) +
                ", reject dev " + std::to_string(dev_reject) + ")";
  }
  return r;
}

/// Demographic parity: equal acceptance rates.
inline CertificateReport check_demographic_parity(const Scenario& s, double tol) {
  s.validate();
  const double dev = std::fabs(s.standard.accept_rate() - s.protected_group.accept_rate());
  CertificateReport r;
  r.name = "demographic-parity";
  r.holds = dev <= tol;
  r.slack = r.holds ? 0.0 : dev - tol;
  r.details = "acceptance-rate difference " + std::to_string(dev);
  return r;
}

/// Statistical parity: equal base rates P(Y=1).
inline CertificateReport check_statistical_parity(const Scenario& s, double tol) {
  s.validate();
  const double dev = std::fabs(s.standard.base_rate() - s.protected_group.base_rate());
  CertificateReport r;
  r.name = "statistical-parity";
  r.holds = dev <= tol;
  r.slack = r.holds ? 0.0 : dev - tol;
  r.details = "base-rate difference " + std::to_string(dev);
  return r;
}

/// Equalized odds: equal P(Yhat=i | Y=i) for i = 0, 1. Requires both
/// outcome margins to be positive in both groups.
inline CertificateReport check_equalized_odds(const Scenario& s, double tol) {
  s.validate();
  const auto rate_given_outcome = [](const JointTable& t, const std::string& group) {
    const double tpr =
        detail::conditional(t.p11, t.base_rate(), "P(Y=1) for " + group);
    const double tnr =
        detail::conditional(t.p00, t.p00 + t.p01, "P(Y=0) for " + group);
    return std::pair<double, double>{tpr, tnr};
  };
  const auto [tpr0, tnr0] = rate_given_outcome(s.standard, "standard group");
  const auto [tpr1, tnr1] = rate_given_outcome(s.protected_group, "protected group");
  const double dev = std::max(std::fabs(tpr0 - tpr1), std::fabs(tnr0 - tnr1));
  CertificateReport r;
  r.name = "equalized-odds";
  r.holds = dev <= tol;
  r.slack = r.holds ? 0.0 : dev - tol;
  r.details = "true-positive-rate dev " + std::to_string(std::fabs(tpr0 - tpr1)) +
              ", true-negative-rate dev " + std::to_string(std::fabs(tnr0 - tnr1));
  return r;
}

/// Statistical parity + equalized odds + u01 = u10 together certify
/// absence of a disadvantage.
inline CertificateReport certify_eo_sp(const Scenario& s, double tol) {
  s.validate();
  const CertificateReport eo = check_equalized_odds(s, tol);
  const CertificateReport sp = check_statistical_parity(s, tol);
  const double u_dev = std::fabs(s.utilities.u01 - s.utilities.u10);
  const bool u_ok = u_dev <= tol;
  CertificateReport r;
  r.name = "equalized-odds+statistical-parity";
  r.holds = eo.holds && sp.holds && u_ok;
  r.slack = r.holds ? 0.0 : std::max({eo.slack, sp.slack, u_ok ? 0.0 : u_dev - tol});
  if (r.holds) {
    if (tol == 0.0) r.bound = 0.0;
    r.details = "equalized odds, statistical parity and u01 = u10 all hold";
  } else {
    r.details = std::string("failed: ") + (eo.holds ? "" : "equalized odds; ") +
                (sp.holds ? "" : "statistical parity; ") + (u_ok ? "" : "u01 != u10; ");
  }
  return r;
}

/// Joint distribution over (group, outcome, decision), stored as group
/// masses plus per-group conditional tables.
struct MixtureTable {
  double standard_mass = 0.5;
  JointTable standard;
  double protected_mass = 0.5;
  JointTable protected_group;

  void validate() const {
    detail::require(std::isfinite(standard_mass) && standard_mass > 0.0,
                    "MixtureTable: standard group mass must be positive");
    detail::require(std::isfinite(protected_mass) && protected_mass > 0.0,
                    "MixtureTable: protected group mass must be positive");
    detail::require(std::fabs(standard_mass + protected_mass - 1.0) <= kCellSumTolerance,
                    "MixtureTable: group masses must sum to 1");
    standard.validate();
    protected_group.validate();
  }
};

/// Independence of (Y, Yhat) and the group variable: every group
/// conditional cell matches the corresponding marginal cell.
inline CertificateReport check_independence(const MixtureTable& m, double tol) {
  m.validate();
  const double cells0[4] = {m.standard.p11, m.standard.p01, m.standard.p00, m.standard.p10};
  const double cells1[4] = {m.protected_group.p11, m.protected_group.p01,
                            m.protected_group.p00, m.protected_group.p10};
  double worst = 0.0;
  for (int i = 0; i < 4; ++i) {
    const double marginal = m.standard_mass * cells0[i] + m.protected_mass * cells1[i];
    worst = std::max(worst, std::fabs(cells0[i] - marginal));
    worst = std::max(worst, std::fabs(cells1[i] - marginal));
  }
  CertificateReport r;
  r.name = "independence";
  r.holds = worst <= tol;
  r.slack = r.holds ? 0.0 : worst - tol;
  if (r.holds && tol == 0.0) r.bound = 0.0;
  r.details = "largest deviation of a group conditional from the marginal: " +
              std::to_string(worst);
  return r;
}

/// Reduced-setting use accuracy: equal P(Y=1 | Yhat=1) and equal
/// rejection rates. Sufficient for absence of a disadvantage for every
/// reduced utility matrix.
inline CertificateReport check_reduced_ua(const ReducedJointTable& std_group,
                                          const ReducedJointTable& prot_group, double tol) {
  std_group.validate();
  prot_group.validate();
  detail::require(std_group.p_accept > 0.0, "degenerate margin: P(Yhat=1) = 0 for standard group");
  detail::require(prot_group.p_accept > 0.0,
                  "degenerate margin: P(Yhat=1) = 0 for protected group");
  const double cond_dev =
      std::fabs(std_group.p11 / std_group.p_accept - prot_group.p11 / prot_group.p_accept);
  const double accept_dev = std::fabs(std_group.p_accept - prot_group.p_accept);
  const double worst = std::max(cond_dev, accept_dev);
  CertificateReport r;
  r.name = "reduced-use-accuracy";
  r.holds = worst <= tol;
  r.slack = r.holds ? 0.0 : worst - tol;
  if (r.holds && tol == 0.0) r.bound = 0.0;
  r.details = "P(Y=1|Yhat=1) dev " + std::to_string(cond_dev) + ", acceptance dev " +
              std::to_string(accept_dev);
  return r;
}

}  // namespace fairaudit

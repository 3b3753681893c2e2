// Scenario files, dataset ingestion, and audit report assembly.
//
// Scenario files are JSON with an explicit schemaVersion and exactly one
// setting block (standard, reduced, college, or mortgage). Reports are
// deterministic: fixed key order, no timestamps, numbers serialized
// losslessly.

#pragma once

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <istream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "fairaudit/adversary.hpp"
#include "fairaudit/certificates.hpp"
#include "fairaudit/core.hpp"
#include "fairaudit/merton.hpp"
#include "fairaudit/solver.hpp"
#include "fairaudit/uncertainty.hpp"

namespace fairaudit::io {

using ordered_json = nlohmann::ordered_json;

/// Raised for malformed files and schema violations; messages are
/// path-qualified.
class schema_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Setting { standard, reduced, college, mortgage };

inline const char* to_string(Setting s) {
  switch (s) {
    case Setting::standard: return "standard";
    case Setting::reduced: return "reduced";
    case Setting::college: return "college";
    case Setting::mortgage: return "mortgage";
  }
  return "?";
}

inline Setting setting_from_string(const std::string& s, const std::string& context) {
  if (s == "standard") return Setting::standard;
  if (s == "reduced") return Setting::reduced;
  if (s == "college") return Setting::college;
  if (s == "mortgage") return Setting::mortgage;
  throw schema_error(context + ": unknown setting '" + s + "'");
}

/// In-memory form of a scenario file. Group payloads depend on the
/// setting; the standard group always comes first.
struct ScenarioFile {
  int schema_version = 1;
  Setting setting = Setting::standard;
  double tau = 0.0;
  std::string metadata;
  std::string standard_name = "standard";
  std::string protected_name = "protected";

  std::optional<JointTable> standard_full, protected_full;
  std::optional<UtilityMatrix> full_utilities;
  std::optional<double> standard_weight, protected_weight;

  std::optional<ReducedJointTable> standard_reduced, protected_reduced;
  std::optional<ReducedUtilityMatrix> reduced_utilities;
  std::optional<IntervalTable> standard_intervals, protected_intervals;
  std::optional<CountData> standard_counts, protected_counts;

  std::optional<CollegeParams> college;

  std::optional<MortgageParams> standard_mortgage, protected_mortgage;
  std::optional<double> standard_acceptance, protected_acceptance;
  std::optional<ReducedUtilityMatrix> mortgage_utilities_override;
};

namespace detail {

inline double get_number(const ordered_json& j, const std::string& key,
                         const std::string& context) {
  if (!j.contains(key)) throw schema_error(context + "." + key + ": missing");
  if (!j.at(key).is_number()) throw schema_error(context + "." + key + ": expected a number");
  return j.at(key).get<double>();
}

inline double get_number_or(const ordered_json& j, const std::string& key, double fallback,
                            const std::string& context) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number()) throw schema_error(context + "." + key + ": expected a number");
  return j.at(key).get<double>();
}

inline std::int64_t get_integer(const ordered_json& j, const std::string& key,
                                const std::string& context) {
  if (!j.contains(key)) throw schema_error(context + "." + key + ": missing");
  if (!j.at(key).is_number_integer())
    throw schema_error(context + "." + key + ": expected an integer");
  return j.at(key).get<std::int64_t>();
}

// Cells straight from a file may carry ingestion noise: deviations of the
// cell sum up to 1e-9 are renormalized, anything larger is rejected.
inline JointTable normalize_cells(JointTable t, const std::string& context) {
  const double sum = t.p11 + t.p01 + t.p00 + t.p10;
  if (std::fabs(sum - 1.0) > 1e-9)
    throw schema_error(context + ": cells sum to " + std::to_string(sum) +
                       ", outside the renormalization tolerance 1e-9");
  if (std::fabs(sum - 1.0) > kCellSumTolerance) {
    t.p11 /= sum;
    t.p01 /= sum;
    t.p00 /= sum;
    t.p10 /= sum;
  }
  try {
    t.validate();
  } catch (const validation_error& e) {
    throw schema_error(context + ": " + e.what());
  }
  return t;
}

inline JointTable parse_full_group(const ordered_json& j, const std::string& context) {
  if (j.contains("p11") || j.contains("p01") || j.contains("p00") || j.contains("p10")) {
    JointTable t{get_number(j, "p11", context), get_number(j, "p01", context),
                 get_number(j, "p00", context), get_number(j, "p10", context)};
    return normalize_cells(t, context);
  }
  if (j.contains("acceptance")) {
    const double accept = get_number(j, "acceptance", context);
    const double success = get_number(j, "successGivenAccepted", context);
    const double negative = get_number(j, "negativeGivenRejected", context);
    if (!fairaudit::detail::is_probability(accept) ||
        !fairaudit::detail::is_probability(success) ||
        !fairaudit::detail::is_probability(negative))
      throw schema_error(context + ": conditional parameterization out of [0,1]");
    const double p11 = accept * success;
    const double rejected = 1.0 - accept;
    const double p00 = rejected * negative;
    JointTable t{p11, accept - p11, p00, rejected - p00};
    return normalize_cells(t, context);
  }
  throw schema_error(context + ": expected cells p11/p01/p00/p10 or an "
                     "acceptance/successGivenAccepted/negativeGivenRejected block");
}

inline ReducedJointTable parse_reduced_group(const ordered_json& j, const std::string& context) {
  ReducedJointTable t;
  if (j.contains("pAccept") || j.contains("p11")) {
    t = ReducedJointTable{get_number(j, "p11", context), get_number(j, "pAccept", context)};
  } else if (j.contains("acceptance")) {
    const double accept = get_number(j, "acceptance", context);
    const double success = get_number(j, "successGivenAccepted", context);
    if (!fairaudit::detail::is_probability(accept) ||
        !fairaudit::detail::is_probability(success))
      throw schema_error(context + ": conditional parameterization out of [0,1]");
    t = ReducedJointTable{accept * success, accept};
  } else {
    throw schema_error(context + ": expected p11/pAccept or an "
                       "acceptance/successGivenAccepted block");
  }
  if (t.p11 > t.p_accept && t.p11 <= t.p_accept + 1e-9) t.p11 = t.p_accept;
  try {
    t.validate();
  } catch (const validation_error& e) {
    throw schema_error(context + ": " + e.what());
  }
  return t;
}

inline ProbInterval parse_interval(const ordered_json& j, const std::string& context) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw schema_error(context + ": expected [lo, hi]");
  ProbInterval iv{j[0].get<double>(), j[1].get<double>()};
  try {
    iv.validate();
  } catch (const validation_error& e) {
    throw schema_error(context + ": " + e.what());
  }
  return iv;
}

inline MortgageParams parse_mortgage_params(const ordered_json& j, const std::string& context) {
  MortgageParams p;
  p.price_T = get_number(j, "priceT", context);
  p.mortgage_T = get_number(j, "mortgageT", context);
  p.capital_0 = get_number(j, "capital0", context);
  p.haircut = get_number(j, "haircut", context);
  p.mu = get_number(j, "mu", context);
  p.sigma = get_number(j, "sigma", context);
  p.rent_cost = get_number(j, "rentCost", context);
  p.horizon_T = get_number_or(j, "horizonT", 0.0, context);
  try {
    p.validate();
  } catch (const validation_error& e) {
    throw schema_error(context + ": " + e.what());
  }
  return p;
}

// The two group entries in file order, standard group first once the
// optional standardGroup key is applied.
inline std::pair<std::string, std::string> resolve_group_order(const ordered_json& groups,
                                                               const ordered_json& root,
                                                               const std::string& context) {
  if (!groups.is_object() || groups.size() != 2)
    throw schema_error(context + ".groups: expected exactly two named groups");
  std::vector<std::string> names;
  for (const auto& item : groups.items()) names.push_back(item.key());
  std::string standard = names[0];
  if (root.contains("standardGroup")) {
    standard = root.at("standardGroup").get<std::string>();
    if (standard != names[0] && standard != names[1])
      throw schema_error(context + ".standardGroup: '" + standard + "' is not a group name");
  }
  const std::string prot = standard == names[0] ? names[1] : names[0];
  return {standard, prot};
}

}  // namespace detail

/// Parses a scenario document. context (usually the file path) prefixes
/// every error message.
inline ScenarioFile parse_scenario(const ordered_json& root, const std::string& context) {
  if (!root.is_object()) throw schema_error(context + ": expected a JSON object");
  ScenarioFile f;
  if (!root.contains("schemaVersion") || !root.at("schemaVersion").is_number_integer())
    throw schema_error(context + ".schemaVersion: missing or not an integer");
  f.schema_version = root.at("schemaVersion").get<int>();
  if (f.schema_version != 1)
    throw schema_error(context + ".schemaVersion: unsupported version " +
                       std::to_string(f.schema_version));
  if (!root.contains("setting") || !root.at("setting").is_string())
    throw schema_error(context + ".setting: missing or not a string");
  f.setting = setting_from_string(root.at("setting").get<std::string>(), context + ".setting");
  f.tau = detail::get_number_or(root, "tau", 0.0, context);
  if (!std::isfinite(f.tau) || f.tau < 0.0)
    throw schema_error(context + ".tau: must be a nonnegative number");
  if (root.contains("metadata")) f.metadata = root.at("metadata").get<std::string>();

  const auto parse_counts = [&](const ordered_json& j, const std::string& ctx) {
    CountData c{detail::get_integer(j, "n11", ctx), detail::get_integer(j, "n01", ctx),
                detail::get_integer(j, "n0", ctx)};
    try {
      c.validate();
    } catch (const validation_error& e) {
      throw schema_error(ctx + ": " + e.what());
    }
    return c;
  };

  switch (f.setting) {
    case Setting::standard: {
      if (!root.contains("groups")) throw schema_error(context + ".groups: missing");
      const auto& groups = root.at("groups");
      const auto [std_name, prot_name] = detail::resolve_group_order(groups, root, context);
      f.standard_name = std_name;
      f.protected_name = prot_name;
      const auto parse_group = [&](const std::string& name, std::optional<JointTable>& table,
                                   std::optional<double>& weight) {
        const std::string ctx = context + ".groups." + name;
        const auto& g = groups.at(name);
        table = detail::parse_full_group(g, ctx);
        if (g.contains("weight")) {
          const double w = detail::get_number(g, "weight", ctx);
          if (!(std::isfinite(w) && w > 0.0))
            throw schema_error(ctx + ".weight: must be positive");
          weight = w;
        }
      };
      parse_group(std_name, f.standard_full, f.standard_weight);
      parse_group(prot_name, f.protected_full, f.protected_weight);
      if (!root.contains("utilities"))
        throw schema_error(context + ".utilities: missing");
      const auto& u = root.at("utilities");
      const std::string uctx = context + ".utilities";
      f.full_utilities =
          UtilityMatrix{detail::get_number_or(u, "u11", 0.0, uctx),
                        detail::get_number_or(u, "u01", 0.0, uctx),
                        detail::get_number_or(u, "u00", 0.0, uctx),
                        detail::get_number_or(u, "u10", 0.0, uctx)};
      f.full_utilities->validate();
      break;
    }
    case Setting::reduced: {
      if (!root.contains("groups")) throw schema_error(context + ".groups: missing");
      const auto& groups = root.at("groups");
      const auto [std_name, prot_name] = detail::resolve_group_order(groups, root, context);
      f.standard_name = std_name;
      f.protected_name = prot_name;
      f.standard_reduced =
          detail::parse_reduced_group(groups.at(std_name), context + ".groups." + std_name);
      f.protected_reduced =
          detail::parse_reduced_group(groups.at(prot_name), context + ".groups." + prot_name);
      if (!root.contains("utilities"))
        throw schema_error(context + ".utilities: missing");
      const auto& u = root.at("utilities");
      const std::string uctx = context + ".utilities";
      f.reduced_utilities = ReducedUtilityMatrix{detail::get_number_or(u, "u11", 0.0, uctx),
                                                 detail::get_number_or(u, "u01", 0.0, uctx),
                                                 detail::get_number_or(u, "u0", 0.0, uctx)};
      f.reduced_utilities->validate();
      if (root.contains("intervals")) {
        const auto& ivs = root.at("intervals");
        const auto parse_box = [&](const std::string& name) -> std::optional<IntervalTable> {
          if (!ivs.contains(name)) return std::nullopt;
          const std::string ctx = context + ".intervals." + name;
          IntervalTable t{detail::parse_interval(ivs.at(name).at("p11"), ctx + ".p11"),
                          detail::parse_interval(ivs.at(name).at("pAccept"), ctx + ".pAccept")};
          try {
            t.validate();
          } catch (const validation_error& e) {
            throw schema_error(ctx + ": " + e.what());
          }
          return t;
        };
        f.standard_intervals = parse_box(std_name);
        f.protected_intervals = parse_box(prot_name);
      }
      if (root.contains("counts")) {
        const auto& counts = root.at("counts");
        if (counts.contains(std_name))
          f.standard_counts = parse_counts(counts.at(std_name), context + ".counts." + std_name);
        if (counts.contains(prot_name))
          f.protected_counts =
              parse_counts(counts.at(prot_name), context + ".counts." + prot_name);
      }
      break;
    }
    case Setting::college: {
      if (!root.contains("college")) throw schema_error(context + ".college: missing");
      const auto& c = root.at("college");
      const std::string cctx = context + ".college";
      CollegeParams p;
      p.q0 = detail::get_number(c, "q0", cctx);
      p.q1 = detail::get_number(c, "q1", cctx);
      p.delta = detail::get_number(c, "delta", cctx);
      p.q11 = detail::get_number(c, "q11", cctx);
      p.u11 = detail::get_number(c, "u11", cctx);
      p.u01 = detail::get_number_or(c, "u01", 0.0, cctx);
      try {
        p.validate();
      } catch (const validation_error& e) {
        throw schema_error(cctx + ": " + e.what());
      }
      f.college = p;
      break;
    }
    case Setting::mortgage: {
      if (!root.contains("mortgage")) throw schema_error(context + ".mortgage: missing");
      const auto& m = root.at("mortgage");
      const std::string mctx = context + ".mortgage";
      if (!m.contains("groups")) throw schema_error(mctx + ".groups: missing");
      const auto& groups = m.at("groups");
      const auto [std_name, prot_name] = detail::resolve_group_order(groups, m, mctx);
      f.standard_name = std_name;
      f.protected_name = prot_name;
      const auto parse_group = [&](const std::string& name,
                                   std::optional<MortgageParams>& params,
                                   std::optional<double>& acceptance) {
        const std::string ctx = mctx + ".groups." + name;
        const auto& g = groups.at(name);
        if (!g.contains("params")) throw schema_error(ctx + ".params: missing");
        params = detail::parse_mortgage_params(g.at("params"), ctx + ".params");
        const double a = detail::get_number(g, "acceptance", ctx);
        if (!fairaudit::detail::is_probability(a))
          throw schema_error(ctx + ".acceptance: out of [0,1]");
        acceptance = a;
      };
      parse_group(std_name, f.standard_mortgage, f.standard_acceptance);
      parse_group(prot_name, f.protected_mortgage, f.protected_acceptance);
      if (m.contains("utilityOverride")) {
        const auto& u = m.at("utilityOverride");
        const std::string uctx = mctx + ".utilityOverride";
        f.mortgage_utilities_override =
            ReducedUtilityMatrix{detail::get_number(u, "u11", uctx),
                                 detail::get_number(u, "u01", uctx),
                                 detail::get_number(u, "u0", uctx)};
        f.mortgage_utilities_override->validate();
      }
      break;
    }
  }
  return f;
}

inline ScenarioFile load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw schema_error(path + ": cannot open file");
  ordered_json root;
  try {
    in >> root;
  } catch (const nlohmann::json::exception& e) {
    throw schema_error(path + ": invalid JSON: " + e.what());
  }
  return parse_scenario(root, path);
}

/// Canonical JSON form of a scenario; parse(serialize(f)) reproduces the
/// tables bit for bit.
inline ordered_json serialize_scenario(const ScenarioFile& f, bool include_metadata = true) {
  ordered_json root;
  root["schemaVersion"] = f.schema_version;
  root["setting"] = to_string(f.setting);
  root["tau"] = f.tau;
  switch (f.setting) {
    case Setting::standard: {
      root["standardGroup"] = f.standard_name;
      ordered_json groups;
      const auto dump_group = [&](const std::string& name, const JointTable& t,
                                  const std::optional<double>& weight) {
        ordered_json g;
        g["p11"] = t.p11;
        g["p01"] = t.p01;
        g["p00"] = t.p00;
        g["p10"] = t.p10;
        if (weight) g["weight"] = *weight;
        groups[name] = g;
      };
      dump_group(f.standard_name, *f.standard_full, f.standard_weight);
      dump_group(f.protected_name, *f.protected_full, f.protected_weight);
      root["groups"] = groups;
      ordered_json u;
      u["u11"] = f.full_utilities->u11;
      u["u01"] = f.full_utilities->u01;
      u["u00"] = f.full_utilities->u00;
      u["u10"] = f.full_utilities->u10;
      root["utilities"] = u;
      break;
    }
    case Setting::reduced: {
      root["standardGroup"] = f.standard_name;
      ordered_json groups;
      const auto dump_group = [&](const std::string& name, const ReducedJointTable& t) {
        ordered_json g;
        g["p11"] = t.p11;
        g["pAccept"] = t.p_accept;
        groups[name] = g;
      };
      dump_group(f.standard_name, *f.standard_reduced);
      dump_group(f.protected_name, *f.protected_reduced);
      root["groups"] = groups;
      ordered_json u;
      u["u11"] = f.reduced_utilities->u11;
      u["u01"] = f.reduced_utilities->u01;
      u["u0"] = f.reduced_utilities->u0;
      root["utilities"] = u;
      if (f.standard_intervals || f.protected_intervals) {
        ordered_json ivs;
        const auto dump_box = [&](const std::string& name,
                                  const std::optional<IntervalTable>& box) {
          if (!box) return;
          ordered_json b;
          b["p11"] = ordered_json::array({box->p11.lo, box->p11.hi});
          b["pAccept"] = ordered_json::array({box->p_accept.lo, box->p_accept.hi});
          ivs[name] = b;
        };
        dump_box(f.standard_name, f.standard_intervals);
        dump_box(f.protected_name, f.protected_intervals);
        root["intervals"] = ivs;
      }
      if (f.standard_counts || f.protected_counts) {
        ordered_json counts;
        const auto dump_counts = [&](const std::string& name,
                                     const std::optional<CountData>& c) {
          if (!c) return;
          ordered_json b;
          b["n11"] = c->n11;
          b["n01"] = c->n01;
          b["n0"] = c->n0;
          counts[name] = b;
        };
        dump_counts(f.standard_name, f.standard_counts);
        dump_counts(f.protected_name, f.protected_counts);
        root["counts"] = counts;
      }
      break;
    }
    case Setting::college: {
      ordered_json c;
      c["q0"] = f.college->q0;
      c["q1"] = f.college->q1;
      c["delta"] = f.college->delta;
      c["q11"] = f.college->q11;
      c["u11"] = f.college->u11;
      c["u01"] = f.college->u01;
      root["college"] = c;
      break;
    }
    case Setting::mortgage: {
      ordered_json m;
      m["standardGroup"] = f.standard_name;
      ordered_json groups;
      const auto dump_group = [&](const std::string& name, const MortgageParams& p,
                                  double acceptance) {
        ordered_json params;
        params["priceT"] = p.price_T;
        params["mortgageT"] = p.mortgage_T;
        params["capital0"] = p.capital_0;
        params["haircut"] = p.haircut;
        params["mu"] = p.mu;
        params["sigma"] = p.sigma;
        params["rentCost"] = p.rent_cost;
        params["horizonT"] = p.horizon_T;
        ordered_json g;
        g["params"] = params;
        g["acceptance"] = acceptance;
        groups[name] = g;
      };
      dump_group(f.standard_name, *f.standard_mortgage, *f.standard_acceptance);
      dump_group(f.protected_name, *f.protected_mortgage, *f.protected_acceptance);
      m["groups"] = groups;
      if (f.mortgage_utilities_override) {
        ordered_json u;
        u["u11"] = f.mortgage_utilities_override->u11;
        u["u01"] = f.mortgage_utilities_override->u01;
        u["u0"] = f.mortgage_utilities_override->u0;
        m["utilityOverride"] = u;
      }
      root["mortgage"] = m;
      break;
    }
  }
  if (include_metadata && !f.metadata.empty()) root["metadata"] = f.metadata;
  return root;
}

struct AuditOptions {
  std::optional<double> tau_override;
  double certificate_tol = 1e-9;
  double confidence = 0.95;
  bool include_metadata = true;
};

struct AuditOutcome {
  ordered_json report;
  std::string verdict;
  double utility_difference = 0.0;
  int exit_code = 0;  ///< 0 = no/negligible disadvantage, 2 = disadvantage
};

inline ordered_json solution_to_json(const AcceptanceSolution& s) {
  ordered_json j;
  j["mode"] = to_string(s.mode);
  if (s.rate)
    j["rate"] = *s.rate;
  else
    j["rate"] = nullptr;
  j["udAtZero"] = s.ud_at_zero;
  j["udAtOne"] = s.ud_at_one;
  if (!s.note.empty()) j["note"] = s.note;
  return j;
}

/// Worst-case bounds section for a standard-setting scenario: the
/// max-norm distance, the utility cap, the generic 3*eps*K bound, the
/// tighter term-by-term bound, and the CUA bound when it applies.
inline ordered_json scenario_bounds(const Scenario& s) {
  const UtilityVector uv = utility_vector(s.utilities);
  const ProbVector pd = prob_difference(s.standard, s.protected_group);
  const double eps = infinity_norm(pd);
  const double k = infinity_norm(uv);
  ordered_json b;
  b["epsilonDistance"] = eps;
  b["utilityBoundK"] = k;
  b["rough"] = rough_bound(BoundParams{k, eps, 0.0});
  // Term-by-term bound: tighter whenever some components are inactive.
  b["activeTerm"] = std::fabs(uv.true_positive * pd.true_positive) +
                    std::fabs(uv.true_negative * pd.true_negative) +
                    std::fabs(uv.accepted * pd.accepted);
  try {
    const double gamma = gamma_of(s);
    b["gamma"] = gamma;
    const CertificateReport cua = check_cua(s, 1e-9);
    if (cua.holds && cua.bound) b["cua"] = *cua.bound;
  } catch (const validation_error&) {
    // degenerate margins: gamma and the CUA bound are not defined
  }
  return b;
}

namespace detail {

inline ordered_json certificate_to_json(const CertificateReport& r) {
  ordered_json j;
  j["name"] = r.name;
  j["holds"] = r.holds;
  j["slack"] = r.slack;
  if (r.bound) j["bound"] = *r.bound;
  j["details"] = r.details;
  return j;
}

template <typename Check>
inline void push_certificate(ordered_json& list, const std::string& name, Check&& check) {
  try {
    list.push_back(certificate_to_json(check()));
  } catch (const validation_error& e) {
    ordered_json j;
    j["name"] = name;
    j["holds"] = false;
    j["slack"] = 0.0;
    j["details"] = std::string("not evaluable: ") + e.what();
    list.push_back(j);
  }
}

inline std::string verdict_for(double ud, double tau) {
  if (ud > tau) return "disadvantage";
  if (ud > 0.0) return "negligible";
  return "no-disadvantage";
}

inline ordered_json standard_certificates(const Scenario& s,
                                          const std::optional<MixtureTable>& mixture,
                                          double tol) {
  ordered_json list = ordered_json::array();
  push_certificate(list, "equal-joints", [&] { return check_equal_joints(s, tol); });
  push_certificate(list, "demographic-parity",
                   [&] { return check_demographic_parity(s, tol); });
  push_certificate(list, "statistical-parity",
                   [&] { return check_statistical_parity(s, tol); });
  push_certificate(list, "equalized-odds", [&] { return check_equalized_odds(s, tol); });
  push_certificate(list, "equalized-odds+statistical-parity",
                   [&] { return certify_eo_sp(s, tol); });
  push_certificate(list, "conditional-use-accuracy", [&] { return check_cua(s, tol); });
  if (mixture)
    push_certificate(list, "independence", [&] { return check_independence(*mixture, tol); });
  return list;
}

struct ReducedAuditInput {
  ReducedJointTable standard;
  ReducedJointTable protected_group;
  ReducedUtilityMatrix utilities;
  std::optional<IntervalTable> standard_box, protected_box;
};

inline void fill_reduced_audit(ordered_json& report, const ReducedAuditInput& in, double tol) {
  const double e0 = reduced_expected_utility(in.standard, in.utilities);
  const double e1 = reduced_expected_utility(in.protected_group, in.utilities);
  ordered_json pe;
  pe["standardExpectedUtility"] = e0;
  pe["protectedExpectedUtility"] = e1;
  pe["utilityDifference"] = e0 - e1;
  report["pointEstimates"] = pe;

  ordered_json certs = ordered_json::array();
  push_certificate(certs, "reduced-use-accuracy",
                   [&] { return check_reduced_ua(in.standard, in.protected_group, tol); });
  report["certificates"] = certs;

  if (in.standard_box && in.protected_box) {
    ordered_json iv;
    iv["lower"] = ud_lower_bound(*in.standard_box, *in.protected_box, in.utilities);
    iv["upper"] = ud_upper_bound(*in.standard_box, *in.protected_box, in.utilities);
    iv["groupBoxesIndependent"] = true;
    report["intervalBounds"] = iv;
  }

  ordered_json solver;
  if (in.protected_group.p_accept > 0.0) {
    const double conditional = in.protected_group.p11 / in.protected_group.p_accept;
    solver["fixedConditional"] = solution_to_json(
        solve_equal_utility_acceptance(in.standard, conditional, in.utilities));
    solver["fixedJoint"] = solution_to_json(solve_equal_utility_acceptance_fixed_joint(
        in.standard, in.protected_group.p11, in.utilities));
  } else {
    solver["note"] = "protected acceptance rate is 0; conditional rate undefined";
  }
  report["solverResults"] = solver;
}

}  // namespace detail

/// Runs the full audit for a loaded scenario and assembles the report.
inline AuditOutcome audit_scenario(const ScenarioFile& f, const AuditOptions& options = {}) {
  const double tau = options.tau_override.value_or(f.tau);
  fairaudit::detail::require(std::isfinite(tau) && tau >= 0.0, "audit: tau must be >= 0");
  const double tol = options.certificate_tol;

  ordered_json report;
  report["schemaVersion"] = 1;
  report["scenario"] = serialize_scenario(f, options.include_metadata);
  report["tau"] = tau;

  double ud = 0.0;
  switch (f.setting) {
    case Setting::standard: {
      Scenario s{*f.standard_full, *f.protected_full, *f.full_utilities, tau};
      s.validate();
      const double e0 = expected_utility(s.standard, s.utilities);
      const double e1 = expected_utility(s.protected_group, s.utilities);
      ud = e0 - e1;
      ordered_json pe;
      pe["standardExpectedUtility"] = e0;
      pe["protectedExpectedUtility"] = e1;
      pe["utilityDifference"] = ud;
      report["pointEstimates"] = pe;
      std::optional<MixtureTable> mixture;
      if (f.standard_weight && f.protected_weight) {
        const double total = *f.standard_weight + *f.protected_weight;
        mixture = MixtureTable{*f.standard_weight / total, s.standard,
                               *f.protected_weight / total, s.protected_group};
      }
      report["certificates"] = detail::standard_certificates(s, mixture, tol);
      report["bounds"] = scenario_bounds(s);
      break;
    }
    case Setting::reduced: {
      detail::ReducedAuditInput in{*f.standard_reduced, *f.protected_reduced,
                                   *f.reduced_utilities, f.standard_intervals,
                                   f.protected_intervals};
      if (!in.standard_box && f.standard_counts)
        in.standard_box = counts_to_interval_table(*f.standard_counts, options.confidence);
      if (!in.protected_box && f.protected_counts)
        in.protected_box = counts_to_interval_table(*f.protected_counts, options.confidence);
      detail::fill_reduced_audit(report, in, tol);
      ud = report["pointEstimates"]["utilityDifference"].get<double>();
      break;
    }
    case Setting::college: {
      const CollegeParams& p = *f.college;
      ud = college_ud(p);
      const Scenario embedded = embed_college(p);
      const double e0 = expected_utility(embedded.standard, embedded.utilities);
      const double e1 = expected_utility(embedded.protected_group, embedded.utilities);
      ordered_json pe;
      pe["standardExpectedUtility"] = e0;
      pe["protectedExpectedUtility"] = e1;
      pe["utilityDifference"] = ud;  // closed form; e0 - e1 agrees to rounding
      report["pointEstimates"] = pe;
      report["certificates"] = detail::standard_certificates(embedded, std::nullopt, tol);
      report["bounds"] = scenario_bounds(embedded);
      ordered_json solver;
      if (p.u01 == 0.0 && p.q11 > 0.0) {
        const double q1_star = solve_q1_star(p);
        ordered_json qs;
        qs["q1Star"] = q1_star;
        qs["exceedsOne"] = q1_star > 1.0;
        if (q1_star > 1.0)
          qs["note"] = "no admission rate alone removes the disadvantage; the completion "
                       "gap itself must shrink";
        solver["admissionRate"] = qs;
      } else {
        solver["note"] = "closed-form admission-rate solution applies to the u01 = 0 case";
      }
      report["solverResults"] = solver;
      break;
    }
    case Setting::mortgage: {
      const MortgageBreakdown std_breakdown = expected_utilities(*f.standard_mortgage);
      const MortgageBreakdown prot_breakdown = expected_utilities(*f.protected_mortgage);
      const auto breakdown_json = [](const MortgageBreakdown& b) {
        ordered_json j;
        j["pNoDefault"] = b.p_no_default;
        j["pD1"] = b.p_d1;
        j["pD2"] = b.p_d2;
        j["eU11"] = b.eu11;
        j["eU01"] = b.eu01;
        j["eU0"] = b.eu0;
        return j;
      };
      ordered_json breakdowns;
      breakdowns[f.standard_name] = breakdown_json(std_breakdown);
      breakdowns[f.protected_name] = breakdown_json(prot_breakdown);
      report["breakdowns"] = breakdowns;
      const ReducedScenario rs =
          to_reduced_scenario(*f.standard_mortgage, *f.protected_mortgage,
                              *f.standard_acceptance, *f.protected_acceptance,
                              f.mortgage_utilities_override);
      detail::ReducedAuditInput in{rs.standard, rs.protected_group, rs.utilities,
                                   std::nullopt, std::nullopt};
      detail::fill_reduced_audit(report, in, tol);
      ud = report["pointEstimates"]["utilityDifference"].get<double>();
      break;
    }
  }

  AuditOutcome out;
  out.utility_difference = ud;
  out.verdict = detail::verdict_for(ud, tau);
  report["verdict"] = out.verdict;
  out.report = report;
  out.exit_code = out.verdict == "disadvantage" ? 2 : 0;
  return out;
}

// ---------------------------------------------------------------------------
// CSV ingestion

struct IngestOptions {
  std::optional<std::string> standard_label;
  std::optional<std::string> protected_label;
  UtilityMatrix full_utilities{};
  ReducedUtilityMatrix reduced_utilities{};
  double tau = 0.0;
  std::string source_name;
};

namespace detail {

inline std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(trim(field));
  if (!line.empty() && line.back() == ',') fields.push_back("");
  return fields;
}

struct GroupCounts {
  std::int64_t c11 = 0, c01 = 0, c00 = 0, c10 = 0, rejected = 0;
  std::int64_t total() const { return c11 + c01 + c00 + c10 + rejected; }
};

}  // namespace detail

/// Reads group,y,yhat rows into per-group maximum-likelihood tables. An
/// empty y is allowed only for rejected cases and switches the whole
/// dataset into the reduced setting.
inline ScenarioFile ingest_csv(std::istream& in, const IngestOptions& options = {}) {
  const std::string name = options.source_name.empty() ? "<csv>" : options.source_name;
  std::string line;
  if (!std::getline(in, line)) throw schema_error(name + ": empty file");
  {
    auto header = detail::split_csv_line(line);
    for (auto& h : header)
      std::transform(h.begin(), h.end(), h.begin(),
                     [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (header.size() != 3 || header[0] != "group" || header[1] != "y" || header[2] != "yhat")
      throw schema_error(name + ": expected header 'group,y,yhat'");
  }

  const bool mapped = options.standard_label.has_value() || options.protected_label.has_value();
  if (mapped && !(options.standard_label && options.protected_label))
    throw schema_error(name + ": --standard and --protected must be given together");

  std::vector<std::string> labels;  // first-seen order
  std::vector<detail::GroupCounts> counts;
  bool reduced_mode = false;
  std::int64_t skipped = 0;
  std::size_t line_no = 1;

  const auto group_index = [&](const std::string& label) -> std::optional<std::size_t> {
    for (std::size_t i = 0; i < labels.size(); ++i)
      if (labels[i] == label) return i;
    if (mapped) {
      if (label != *options.standard_label && label != *options.protected_label)
        return std::nullopt;  // filtered out
    } else if (labels.size() == 2) {
      throw schema_error(name + ": line " + std::to_string(line_no) +
                         ": more than two group labels; supply --standard/--protected to "
                         "select two");
    }
    labels.push_back(label);
    counts.emplace_back();
    return labels.size() - 1;
  };

  while (std::getline(in, line)) {
    ++line_no;
    if (detail::trim(line).empty()) continue;
    const auto fields = detail::split_csv_line(line);
    if (fields.size() != 3)
      throw schema_error(name + ": line " + std::to_string(line_no) + ": expected 3 fields");
    const std::string& group = fields[0];
    const std::string& y = fields[1];
    const std::string& yhat = fields[2];
    if (group.empty())
      throw schema_error(name + ": line " + std::to_string(line_no) + ": empty group label");
    if (yhat != "0" && yhat != "1")
      throw schema_error(name + ": line " + std::to_string(line_no) +
                         ": yhat must be 0 or 1, got '" + yhat + "'");
    if (!y.empty() && y != "0" && y != "1")
      throw schema_error(name + ": line " + std::to_string(line_no) +
                         ": y must be 0, 1 or empty, got '" + y + "'");
    if (y.empty() && yhat == "1")
      throw schema_error(name + ": line " + std::to_string(line_no) +
                         ": missing outcome for an accepted case");
    const auto idx = group_index(group);
    if (!idx) {
      ++skipped;
      continue;
    }
    detail::GroupCounts& c = counts[*idx];
    if (y.empty()) {
      reduced_mode = true;
      ++c.rejected;
    } else if (yhat == "1") {
      ++(y == "1" ? c.c11 : c.c01);
    } else {
      ++(y == "1" ? c.c10 : c.c00);
    }
  }

  if (labels.size() < 2) throw schema_error(name + ": fewer than 2 groups in the data");
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (counts[i].total() == 0)
      throw schema_error(name + ": group '" + labels[i] + "' has no rows");

  std::size_t std_idx = 0;
  if (options.standard_label) {
    bool found = false;
    for (std::size_t i = 0; i < labels.size(); ++i)
      if (labels[i] == *options.standard_label) {
        std_idx = i;
        found = true;
      }
    if (!found)
      throw schema_error(name + ": standard label '" + *options.standard_label +
                         "' not present in the data");
  }
  const std::size_t prot_idx = std_idx == 0 ? 1 : 0;

  ScenarioFile f;
  f.setting = reduced_mode ? Setting::reduced : Setting::standard;
  f.tau = options.tau;
  f.standard_name = labels[std_idx];
  f.protected_name = labels[prot_idx];
  f.metadata = "ingested from " + name +
               (skipped > 0 ? " (" + std::to_string(skipped) + " rows outside the selected "
                              "groups skipped)"
                            : "");

  const auto to_counts = [](const detail::GroupCounts& c) {
    return CountData{c.c11, c.c01, c.c00 + c.c10 + c.rejected};
  };
  const auto& cs = counts[std_idx];
  const auto& cp = counts[prot_idx];
  if (reduced_mode) {
    const auto table = [](const detail::GroupCounts& c) {
      const double n = static_cast<double>(c.total());
      return ReducedJointTable{static_cast<double>(c.c11) / n,
                               static_cast<double>(c.c11 + c.c01) / n};
    };
    f.standard_reduced = table(cs);
    f.protected_reduced = table(cp);
    f.reduced_utilities = options.reduced_utilities;
    f.standard_counts = to_counts(cs);
    f.protected_counts = to_counts(cp);
  } else {
    const auto table = [](const detail::GroupCounts& c) {
      const double n = static_cast<double>(c.total());
      return JointTable{static_cast<double>(c.c11) / n, static_cast<double>(c.c01) / n,
                        static_cast<double>(c.c00) / n, static_cast<double>(c.c10) / n};
    };
    f.standard_full = table(cs);
    f.protected_full = table(cp);
    f.full_utilities = options.full_utilities;
  }
  return f;
}

inline ScenarioFile ingest_csv_file(const std::string& path, IngestOptions options = {}) {
  std::ifstream in(path);
  if (!in) throw schema_error(path + ": cannot open file");
  if (options.source_name.empty()) options.source_name = path;
  return ingest_csv(in, options);
}

// ---------------------------------------------------------------------------
// Output formatting

/// Numbers in CSV output carry 17 significant digits so they parse back
/// to the identical double.
inline std::string format_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

inline std::string sweep_to_csv(const std::vector<SweepRow>& rows) {
  std::string out = "value,ud,feasible\n";
  for (const SweepRow& r : rows) {
    out += format_number(r.value);
    out += ',';
    out += format_number(r.ud);
    out += ',';
    out += r.feasible ? "true" : "false";
    out += '\n';
  }
  return out;
}

}  // namespace fairaudit::io

// Command-line front end: audits scenario files, ingests CSV datasets,
// evaluates the worked examples, and prints bounds. JSON goes to stdout;
// the audit exit code is 0 for no/negligible disadvantage, 2 for a
// disadvantage, 1 for any error.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "fairaudit/fairaudit.hpp"

namespace {

using fairaudit::io::ordered_json;

void print_json(const ordered_json& j) { std::cout << j.dump(2) << "\n"; }

fairaudit::ProbVector parse_pd(const std::string& text) {
  std::vector<double> parts;
  std::stringstream ss(text);
  std::string field;
  while (std::getline(ss, field, ',')) parts.push_back(std::stod(field));
  if (parts.size() != 3)
    throw fairaudit::validation_error("--pd expects three comma-separated numbers");
  return fairaudit::ProbVector{parts[0], parts[1], parts[2]};
}

ordered_json utilities_json(const fairaudit::UtilityMatrix& u) {
  ordered_json j;
  j["u11"] = u.u11;
  j["u01"] = u.u01;
  j["u00"] = u.u00;
  j["u10"] = u.u10;
  return j;
}

ordered_json breakdown_json(const fairaudit::MortgageBreakdown& b) {
  ordered_json j;
  j["pNoDefault"] = b.p_no_default;
  j["pD1"] = b.p_d1;
  j["pD2"] = b.p_d2;
  j["pDefault"] = b.p_default();
  j["eU11"] = b.eu11;
  j["eU01"] = b.eu01;
  j["eU0"] = b.eu0;
  return j;
}

int run_audit(const std::string& path, const fairaudit::io::AuditOptions& options) {
  const fairaudit::io::ScenarioFile f = fairaudit::io::load_scenario(path);
  const fairaudit::io::AuditOutcome outcome = fairaudit::io::audit_scenario(f, options);
  print_json(outcome.report);
  return outcome.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fairaudit: utility-based fairness audits for binary decision rules"};
  app.require_subcommand(1);

  // audit
  auto* audit = app.add_subcommand("audit", "audit a scenario file and print the report");
  std::string audit_path;
  double audit_tau = -1.0;
  double audit_tol = 1e-9;
  double audit_confidence = 0.95;
  bool audit_no_meta = false;
  audit->add_option("scenario", audit_path, "scenario JSON file")->required();
  audit->add_option("--tau", audit_tau, "override the negligible-difference level");
  audit->add_option("--tol", audit_tol, "certificate tolerance (default 1e-9)");
  audit->add_option("--confidence", audit_confidence,
                    "confidence level for count-derived intervals (default 0.95)");
  audit->add_flag("--no-meta", audit_no_meta, "omit the metadata echo from the report");

  // ingest
  auto* ingest = app.add_subcommand("ingest", "turn a group,y,yhat CSV into a scenario file");
  std::string ingest_csv_path, ingest_out;
  fairaudit::io::IngestOptions ingest_options;
  std::string ingest_standard, ingest_protected;
  ingest->add_option("csv", ingest_csv_path, "input CSV with header group,y,yhat")->required();
  ingest->add_option("-o,--out", ingest_out, "output scenario path (default: stdout)");
  ingest->add_option("--standard", ingest_standard, "label of the standard group");
  ingest->add_option("--protected", ingest_protected, "label of the protected group");
  ingest->add_option("--u11", ingest_options.full_utilities.u11, "utility for Y=1, Yhat=1");
  ingest->add_option("--u01", ingest_options.full_utilities.u01, "utility for Y=0, Yhat=1");
  ingest->add_option("--u00", ingest_options.full_utilities.u00, "utility for Y=0, Yhat=0");
  ingest->add_option("--u10", ingest_options.full_utilities.u10, "utility for Y=1, Yhat=0");
  ingest->add_option("--u0", ingest_options.reduced_utilities.u0,
                     "utility for rejection (reduced setting)");
  ingest->add_option("--tau", ingest_options.tau, "negligible-difference level");

  // adversary
  auto* adversary = app.add_subcommand(
      "adversary", "construct utilities that realize a target disadvantage");
  std::string adversary_pd;
  double adversary_k = 0.0;
  adversary->add_option("--pd", adversary_pd,
                        "probability differences as 'tp,tn,accept'")->required();
  adversary->add_option("--k", adversary_k, "target utility difference")->required();

  // mortgage
  auto* mortgage = app.add_subcommand("mortgage", "evaluate the structural default model");
  std::string mortgage_preset = "base";
  fairaudit::MortgageParams mortgage_params = fairaudit::presets::mortgage_base();
  mortgage->add_option("--preset", mortgage_preset, "base or high-mean (default base)");
  auto* mu_opt = mortgage->add_option("--mu", mortgage_params.mu, "mean terminal wealth");
  auto* sigma_opt = mortgage->add_option("--sigma", mortgage_params.sigma, "wealth std dev");
  auto* price_opt = mortgage->add_option("--price", mortgage_params.price_T, "house value");
  auto* mort_opt =
      mortgage->add_option("--mortgage", mortgage_params.mortgage_T, "outstanding mortgage");
  auto* cap_opt = mortgage->add_option("--capital", mortgage_params.capital_0, "initial capital");
  auto* hair_opt = mortgage->add_option("--haircut", mortgage_params.haircut, "sale discount");
  auto* rent_opt = mortgage->add_option("--rent", mortgage_params.rent_cost, "rent cost");

  // college
  auto* college = app.add_subcommand("college", "closed-form college admission analysis");
  std::string college_preset = "baseline";
  fairaudit::CollegeParams college_params = fairaudit::presets::college_baseline();
  college->add_option("--preset", college_preset, "baseline or loans (default baseline)");
  auto* q0_opt = college->add_option("--q0", college_params.q0, "standard admission rate");
  auto* q1_opt = college->add_option("--q1", college_params.q1, "protected admission rate");
  auto* delta_opt = college->add_option("--delta", college_params.delta, "completion gap");
  auto* q11_opt =
      college->add_option("--q11", college_params.q11, "protected completion rate");
  auto* u11_opt = college->add_option("--u11", college_params.u11, "completion utility");
  auto* u01_opt = college->add_option("--u01", college_params.u01, "non-completion utility");

  // solve
  auto* solve = app.add_subcommand(
      "solve", "equal-utility acceptance rate for a reduced scenario");
  std::string solve_path, solve_mode = "both";
  solve->add_option("scenario", solve_path, "reduced-setting scenario file")->required();
  solve->add_option("--mode", solve_mode, "fixed-conditional, fixed-joint or both");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "utility difference over an acceptance grid (CSV)");
  std::string sweep_preset, sweep_path;
  double sweep_lo = 0.8, sweep_hi = 1.0, sweep_step = 0.01;
  std::vector<std::int64_t> sweep_slots;
  sweep->add_option("--preset", sweep_preset, "college or college-fixed-slots");
  sweep->add_option("--scenario", sweep_path, "college or reduced scenario file");
  sweep->add_option("--lo", sweep_lo, "grid start (default 0.8)");
  sweep->add_option("--hi", sweep_hi, "grid end (default 1.0)");
  sweep->add_option("--step", sweep_step, "grid step (default 0.01)");
  sweep->add_option("--slots", sweep_slots,
                    "fixed admission budget: total-slots total-population protected-population")
      ->expected(3);

  // bounds
  auto* bounds = app.add_subcommand("bounds", "worst-case disadvantage bounds");
  double bounds_k = -1.0, bounds_eps = -1.0, bounds_gamma = -1.0;
  std::string bounds_path;
  bounds->add_option("--k", bounds_k, "utility-difference bound K");
  bounds->add_option("--eps", bounds_eps, "probability-difference bound");
  bounds->add_option("--gamma", bounds_gamma, "larger standard-group use accuracy");
  bounds->add_option("--scenario", bounds_path, "derive K, eps and gamma from a scenario file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    std::cerr << app.help();
    return 1;
  }

  try {
    if (app.got_subcommand(audit)) {
      fairaudit::io::AuditOptions options;
      if (audit_tau >= 0.0) options.tau_override = audit_tau;
      options.certificate_tol = audit_tol;
      options.confidence = audit_confidence;
      options.include_metadata = !audit_no_meta;
      return run_audit(audit_path, options);
    }

    if (app.got_subcommand(ingest)) {
      if (!ingest_standard.empty()) ingest_options.standard_label = ingest_standard;
      if (!ingest_protected.empty()) ingest_options.protected_label = ingest_protected;
      const fairaudit::io::ScenarioFile f =
          fairaudit::io::ingest_csv_file(ingest_csv_path, ingest_options);
      const ordered_json j = fairaudit::io::serialize_scenario(f);
      if (ingest_out.empty()) {
        print_json(j);
      } else {
        std::ofstream out(ingest_out);
        if (!out) throw fairaudit::io::schema_error(ingest_out + ": cannot open for writing");
        out << j.dump(2) << "\n";
      }
      return 0;
    }

    if (app.got_subcommand(adversary)) {
      const fairaudit::AdversaryRequest request{parse_pd(adversary_pd), adversary_k};
      const fairaudit::UtilityMatrix u = fairaudit::construct_adversarial_utilities(request);
      ordered_json j;
      ordered_json pd;
      pd["truePositive"] = request.pd.true_positive;
      pd["trueNegative"] = request.pd.true_negative;
      pd["accepted"] = request.pd.accepted;
      j["request"] = ordered_json{{"pd", pd}, {"targetK", request.target_k}};
      j["utilities"] = utilities_json(u);
      j["impliedUtilityDifference"] = dot(utility_vector(u), request.pd);
      print_json(j);
      return 0;
    }

    if (app.got_subcommand(mortgage)) {
      if (!mu_opt->count() && !sigma_opt->count() && !price_opt->count() &&
          !mort_opt->count() && !cap_opt->count() && !hair_opt->count() &&
          !rent_opt->count()) {
        if (mortgage_preset == "base")
          mortgage_params = fairaudit::presets::mortgage_base();
        else if (mortgage_preset == "high-mean")
          mortgage_params = fairaudit::presets::mortgage_high_mean();
        else
          throw fairaudit::validation_error("unknown mortgage preset '" + mortgage_preset +
                                            "' (use base or high-mean)");
      }
      const fairaudit::MortgageBreakdown b = fairaudit::expected_utilities(mortgage_params);
      ordered_json j;
      ordered_json params;
      params["priceT"] = mortgage_params.price_T;
      params["mortgageT"] = mortgage_params.mortgage_T;
      params["capital0"] = mortgage_params.capital_0;
      params["haircut"] = mortgage_params.haircut;
      params["mu"] = mortgage_params.mu;
      params["sigma"] = mortgage_params.sigma;
      params["rentCost"] = mortgage_params.rent_cost;
      j["params"] = params;
      j["breakdown"] = breakdown_json(b);
      print_json(j);
      return 0;
    }

    if (app.got_subcommand(college)) {
      if (!q0_opt->count() && !q1_opt->count() && !delta_opt->count() && !q11_opt->count() &&
          !u11_opt->count() && !u01_opt->count()) {
        if (college_preset == "baseline")
          college_params = fairaudit::presets::college_baseline();
        else if (college_preset == "loans")
          college_params = fairaudit::presets::college_loans();
        else
          throw fairaudit::validation_error("unknown college preset '" + college_preset +
                                            "' (use baseline or loans)");
      }
      ordered_json j;
      ordered_json params;
      params["q0"] = college_params.q0;
      params["q1"] = college_params.q1;
      params["delta"] = college_params.delta;
      params["q11"] = college_params.q11;
      params["u11"] = college_params.u11;
      params["u01"] = college_params.u01;
      j["params"] = params;
      j["utilityDifference"] = fairaudit::college_ud(college_params);
      if (college_params.u01 == 0.0 && college_params.q11 > 0.0) {
        const double q1_star = fairaudit::solve_q1_star(college_params);
        j["q1Star"] = q1_star;
        j["q1StarExceedsOne"] = q1_star > 1.0;
      }
      print_json(j);
      return 0;
    }

    if (app.got_subcommand(solve)) {
      const fairaudit::io::ScenarioFile f = fairaudit::io::load_scenario(solve_path);
      if (f.setting != fairaudit::io::Setting::reduced)
        throw fairaudit::io::schema_error(solve_path + ": solve expects a reduced scenario");
      const auto& std_group = *f.standard_reduced;
      const auto& prot_group = *f.protected_reduced;
      const auto& u = *f.reduced_utilities;
      if (prot_group.p_accept <= 0.0)
        throw fairaudit::validation_error(
            "protected acceptance rate is 0; conditional rate undefined");
      const double conditional = prot_group.p11 / prot_group.p_accept;
      ordered_json j;
      if (solve_mode == "fixed-conditional" || solve_mode == "both")
        j["fixedConditional"] = fairaudit::io::solution_to_json(
            fairaudit::solve_equal_utility_acceptance(std_group, conditional, u));
      if (solve_mode == "fixed-joint" || solve_mode == "both")
        j["fixedJoint"] = fairaudit::io::solution_to_json(
            fairaudit::solve_equal_utility_acceptance_fixed_joint(std_group, prot_group.p11,
                                                                  u));
      if (j.empty())
        throw fairaudit::validation_error("unknown solve mode '" + solve_mode +
                                          "' (use fixed-conditional, fixed-joint or both)");
      print_json(j);
      return 0;
    }

    if (app.got_subcommand(sweep)) {
      fairaudit::SweepSpec spec{sweep_lo, sweep_hi, sweep_step, std::nullopt};
      if (!sweep_slots.empty())
        spec.slots = fairaudit::FixedSlots{sweep_slots[0], sweep_slots[1], sweep_slots[2]};
      std::vector<fairaudit::SweepRow> rows;
      if (!sweep_preset.empty()) {
        if (sweep_preset == "college") {
          rows = fairaudit::sweep_college(fairaudit::presets::college_baseline(),
                                          fairaudit::presets::college_sweep());
        } else if (sweep_preset == "college-fixed-slots") {
          rows = fairaudit::sweep_college(fairaudit::presets::college_baseline(),
                                          fairaudit::presets::college_fixed_slots_sweep());
        } else {
          throw fairaudit::validation_error("unknown sweep preset '" + sweep_preset +
                                            "' (use college or college-fixed-slots)");
        }
      } else if (!sweep_path.empty()) {
        const fairaudit::io::ScenarioFile f = fairaudit::io::load_scenario(sweep_path);
        if (f.setting == fairaudit::io::Setting::college) {
          rows = fairaudit::sweep_college(*f.college, spec);
        } else if (f.setting == fairaudit::io::Setting::reduced) {
          const auto& prot_group = *f.protected_reduced;
          if (prot_group.p_accept <= 0.0)
            throw fairaudit::validation_error(
                "protected acceptance rate is 0; conditional rate undefined");
          rows = fairaudit::sweep_reduced(*f.standard_reduced,
                                          prot_group.p11 / prot_group.p_accept,
                                          *f.reduced_utilities, spec);
        } else {
          throw fairaudit::io::schema_error(sweep_path +
                                            ": sweep expects a college or reduced scenario");
        }
      } else {
        throw fairaudit::validation_error("sweep needs --preset or --scenario");
      }
      std::cout << fairaudit::io::sweep_to_csv(rows);
      return 0;
    }

    if (app.got_subcommand(bounds)) {
      ordered_json j;
      if (!bounds_path.empty()) {
        const fairaudit::io::ScenarioFile f = fairaudit::io::load_scenario(bounds_path);
        if (f.setting != fairaudit::io::Setting::standard)
          throw fairaudit::io::schema_error(bounds_path +
                                            ": bounds --scenario expects the standard setting");
        const fairaudit::Scenario s{*f.standard_full, *f.protected_full, *f.full_utilities,
                                    f.tau};
        j = fairaudit::io::scenario_bounds(s);
      } else {
        if (bounds_k < 0.0 || bounds_eps < 0.0)
          throw fairaudit::validation_error("bounds needs --k and --eps (or --scenario)");
        j["rough"] = fairaudit::rough_bound(fairaudit::BoundParams{bounds_k, bounds_eps, 0.0});
        if (bounds_gamma >= 0.0)
          j["cua"] = fairaudit::cua_bound(
              fairaudit::BoundParams{bounds_k, bounds_eps, bounds_gamma});
      }
      print_json(j);
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

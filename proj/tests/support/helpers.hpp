// Shared test utilities: deterministic generators for valid tables and
// utilities, tolerance helpers, and a tiny process runner for the CLI
// round trips. Everything here is test-only and deliberately avoids the
// code paths it is used to check.

#pragma once

#include <sys/wait.h>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <random>
#include <stdexcept>
#include <string>

#include "fairaudit/core.hpp"
#include "fairaudit/uncertainty.hpp"

namespace testsupport {

inline std::mt19937_64 make_rng(std::uint64_t seed = 0x5eed5eedULL) {
  return std::mt19937_64{seed};
}

// Uniform in [0,1), bit-reproducible across standard libraries (the
// distribution classes are implementation-defined; this is not).
inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform01(rng);
}

inline fairaudit::JointTable random_joint(std::mt19937_64& rng) {
  double cells[4];
  double sum = 0.0;
  for (double& c : cells) {
    c = -std::log(1.0 - uniform01(rng));
    sum += c;
  }
  return fairaudit::JointTable{cells[0] / sum, cells[1] / sum, cells[2] / sum, cells[3] / sum};
}

inline fairaudit::UtilityMatrix random_utilities(std::mt19937_64& rng, double scale) {
  return fairaudit::UtilityMatrix{uniform(rng, -scale, scale), uniform(rng, -scale, scale),
                                  uniform(rng, -scale, scale), uniform(rng, -scale, scale)};
}

inline fairaudit::ReducedUtilityMatrix random_reduced_utilities(std::mt19937_64& rng,
                                                                double scale) {
  return fairaudit::ReducedUtilityMatrix{uniform(rng, -scale, scale),
                                         uniform(rng, -scale, scale),
                                         uniform(rng, -scale, scale)};
}

inline fairaudit::ReducedJointTable random_reduced_table(std::mt19937_64& rng) {
  const double accept = uniform01(rng);
  return fairaudit::ReducedJointTable{accept * uniform01(rng), accept};
}

// A probability interval inside [lo_limit, hi_limit].
inline fairaudit::ProbInterval random_interval(std::mt19937_64& rng, double lo_limit = 0.0,
                                               double hi_limit = 1.0) {
  double a = uniform(rng, lo_limit, hi_limit);
  double b = uniform(rng, lo_limit, hi_limit);
  if (a > b) std::swap(a, b);
  return fairaudit::ProbInterval{a, b};
}

// Interval table whose 16 corner combinations are all valid reduced
// tables: the p11 box sits entirely below the acceptance box.
inline fairaudit::IntervalTable random_corner_valid_box(std::mt19937_64& rng) {
  const double split = uniform(rng, 0.05, 0.95);
  return fairaudit::IntervalTable{random_interval(rng, 0.0, split),
                                  random_interval(rng, split, 1.0)};
}

// |a - b| measured against the problem scale, so near-cancellations are
// judged fairly.
inline bool near(double a, double b, double rel_tol, double scale = 1.0) {
  const double reference = std::max({1.0, std::fabs(a), std::fabs(b), std::fabs(scale)});
  return std::fabs(a - b) <= rel_tol * reference;
}

struct CommandResult {
  int exit_code = -1;
  std::string output;
};

// Runs a shell command and captures stdout (stderr is left alone).
inline CommandResult run_command(const std::string& command) {
  CommandResult result;
  FILE* pipe = popen(command.c_str(), "r");
  if (pipe == nullptr) throw std::runtime_error("popen failed for: " + command);
  char buffer[4096];
  std::size_t n = 0;
  while ((n = fread(buffer, 1, sizeof(buffer), pipe)) > 0) result.output.append(buffer, n);
  const int status = pclose(pipe);
  result.exit_code = (status >= 0 && WIFEXITED(status)) ? WEXITSTATUS(status) : -1;
  return result;
}

inline std::string cli_path() {
#ifdef FAIRAUDIT_CLI_PATH
  return FAIRAUDIT_CLI_PATH;
#else
  return "./fairaudit";
#endif
}

inline std::string scenario_dir() {
#ifdef FAIRAUDIT_SCENARIO_DIR
  return FAIRAUDIT_SCENARIO_DIR;
#else
  return "scenarios";
#endif
}

inline std::string scenario_path(const std::string& name) {
  return scenario_dir() + "/" + name;
}

}  // namespace testsupport

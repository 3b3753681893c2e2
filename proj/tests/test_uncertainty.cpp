#include "doctest.h"

#include <cmath>

#include "fairaudit/uncertainty.hpp"
#include "support/helpers.hpp"

using namespace fairaudit;
using testsupport::near;

namespace {

const ReducedUtilityMatrix kMortgageUtilities{310000.0, 160000.0, 190000.0};

IntervalTable point_box(const ReducedJointTable& t) {
  return IntervalTable{ProbInterval{t.p11, t.p11}, ProbInterval{t.p_accept, t.p_accept}};
}

// Extreme of the objective over all 16 corners, evaluated with the same
// expression shape as reduced_utility_difference but without table
// validation (generic boxes may contain invalid corners).
double corner_extreme(const IntervalTable& s, const IntervalTable& p,
                      const ReducedUtilityMatrix& u, bool maximize) {
  const double u1 = u.u11 - u.u01;
  const double u2 = u.u01 - u.u0;
  double best = maximize ? -1e308 : 1e308;
  const double s11[2] = {s.p11.lo, s.p11.hi};
  const double sacc[2] = {s.p_accept.lo, s.p_accept.hi};
  const double p11[2] = {p.p11.lo, p.p11.hi};
  const double pacc[2] = {p.p_accept.lo, p.p_accept.hi};
  for (double a : s11)
    for (double b : sacc)
      for (double c : p11)
        for (double d : pacc) {
          const double value = u1 * (a - c) + u2 * (b - d);
          best = maximize ? std::max(best, value) : std::min(best, value);
        }
  return best;
}

}  // namespace

TEST_CASE("interval bounds collapse to the point value on degenerate boxes") {
  auto rng = testsupport::make_rng(51);
  for (int i = 0; i < 300; ++i) {
    const ReducedJointTable a = testsupport::random_reduced_table(rng);
    const ReducedJointTable b = testsupport::random_reduced_table(rng);
    const ReducedUtilityMatrix u = testsupport::random_reduced_utilities(rng, 1e5);
    const double point = reduced_utility_difference(a, b, u);
    REQUIRE(ud_upper_bound(point_box(a), point_box(b), u) == point);
    REQUIRE(ud_lower_bound(point_box(a), point_box(b), u) == point);
  }
}

TEST_CASE("worked interval example") {
  const IntervalTable std_box{ProbInterval{0.74, 0.78}, ProbInterval{0.79, 0.81}};
  const IntervalTable prot_box{ProbInterval{0.70, 0.74}, ProbInterval{0.79, 0.81}};
  CHECK(near(ud_upper_bound(std_box, prot_box, kMortgageUtilities), 12600.0, 1e-9, 12600.0));
  CHECK(near(ud_lower_bound(std_box, prot_box, kMortgageUtilities), -600.0, 1e-9, 12600.0));
}

TEST_CASE("widening an interval never shrinks the upper bound") {
  auto rng = testsupport::make_rng(52);
  for (int i = 0; i < 300; ++i) {
    const IntervalTable s = testsupport::random_corner_valid_box(rng);
    const IntervalTable p = testsupport::random_corner_valid_box(rng);
    const ReducedUtilityMatrix u = testsupport::random_reduced_utilities(rng, 1e5);
    const double base = ud_upper_bound(s, p, u);
    IntervalTable wider = s;
    wider.p11.lo = std::max(0.0, wider.p11.lo - 0.01);
    wider.p11.hi = std::min(1.0, wider.p11.hi + 0.01);
    wider.p_accept.lo = std::max(0.0, wider.p_accept.lo - 0.01);
    wider.p_accept.hi = std::min(1.0, wider.p_accept.hi + 0.01);
    REQUIRE(ud_upper_bound(wider, p, u) >= base);
  }
}

TEST_CASE("bounds bracket the midpoint evaluation") {
  auto rng = testsupport::make_rng(53);
  for (int i = 0; i < 500; ++i) {
    const IntervalTable s = testsupport::random_corner_valid_box(rng);
    const IntervalTable p = testsupport::random_corner_valid_box(rng);
    const ReducedUtilityMatrix u = testsupport::random_reduced_utilities(rng, 1e5);
    const double lower = ud_lower_bound(s, p, u);
    const double upper = ud_upper_bound(s, p, u);
    const double mid = reduced_utility_difference(s.midpoint(), p.midpoint(), u);
    REQUIRE(lower <= upper);
    REQUIRE(lower <= mid + 1e-9);
    REQUIRE(mid <= upper + 1e-9);
  }
}

TEST_CASE("sign-aware bounds equal the 16-corner enumeration") {
  auto rng = testsupport::make_rng(54);
  SUBCASE("corner-valid boxes, enumerated through the public difference") {
    for (int i = 0; i < 2000; ++i) {
      const IntervalTable s = testsupport::random_corner_valid_box(rng);
      const IntervalTable p = testsupport::random_corner_valid_box(rng);
      const ReducedUtilityMatrix u = testsupport::random_reduced_utilities(rng, 1e5);
      double best = -1e308, worst = 1e308;
      const double s11[2] = {s.p11.lo, s.p11.hi};
      const double sacc[2] = {s.p_accept.lo, s.p_accept.hi};
      const double p11[2] = {p.p11.lo, p.p11.hi};
      const double pacc[2] = {p.p_accept.lo, p.p_accept.hi};
      for (double a : s11)
        for (double b : sacc)
          for (double c : p11)
            for (double d : pacc) {
              const double value = reduced_utility_difference(ReducedJointTable{a, b},
                                                              ReducedJointTable{c, d}, u);
              best = std::max(best, value);
              worst = std::min(worst, value);
            }
      REQUIRE(near(ud_upper_bound(s, p, u), best, 1e-12, 1e5));
      REQUIRE(near(ud_lower_bound(s, p, u), worst, 1e-12, 1e5));
    }
  }
  SUBCASE("generic boxes, enumerated on the raw objective") {
    for (int i = 0; i < 2000; ++i) {
      const IntervalTable s{testsupport::random_interval(rng), testsupport::random_interval(rng)};
      const IntervalTable p{testsupport::random_interval(rng), testsupport::random_interval(rng)};
      if (s.p11.lo > s.p_accept.hi || p.p11.lo > p.p_accept.hi) continue;
      const ReducedUtilityMatrix u = testsupport::random_reduced_utilities(rng, 1e5);
      REQUIRE(near(ud_upper_bound(s, p, u), corner_extreme(s, p, u, true), 1e-12, 1e5));
      REQUIRE(near(ud_lower_bound(s, p, u), corner_extreme(s, p, u, false), 1e-12, 1e5));
    }
  }
}

TEST_CASE("componentwise nonnegative utilities reproduce the outer-endpoint formula") {
  auto rng = testsupport::make_rng(55);
  for (int i = 0; i < 300; ++i) {
    const IntervalTable s = testsupport::random_corner_valid_box(rng);
    const IntervalTable p = testsupport::random_corner_valid_box(rng);
    // u1 = u11-u01 >= 0 and u2 = u01-u0 >= 0
    const double u0 = testsupport::uniform(rng, -1e5, 1e5);
    const double u01 = u0 + testsupport::uniform(rng, 0.0, 1e5);
    const double u11 = u01 + testsupport::uniform(rng, 0.0, 1e5);
    const ReducedUtilityMatrix u{u11, u01, u0};
    const double direct = (u11 - u01) * (s.p11.hi - p.p11.lo) +
                          (u01 - u0) * (s.p_accept.hi - p.p_accept.lo);
    REQUIRE(ud_upper_bound(s, p, u) == direct);
  }
}

TEST_CASE("wilson_interval") {
  SUBCASE("50 of 100 at 95%") {
    const ProbInterval iv = wilson_interval(50, 100, 0.95);
    CHECK(near(iv.lo, 0.404, 1e-3));
    CHECK(near(iv.hi, 0.596, 1e-3));
  }
  SUBCASE("degenerate observations pin the endpoints") {
    CHECK(wilson_interval(100, 100, 0.95).hi == 1.0);
    CHECK(wilson_interval(0, 100, 0.95).lo == 0.0);
  }
  SUBCASE("interval shrinks as n grows") {
    const ProbInterval small = wilson_interval(30, 100, 0.95);
    const ProbInterval large = wilson_interval(3000, 10000, 0.95);
    CHECK(large.width() < small.width());
  }
  CHECK_THROWS_AS(wilson_interval(0, 0, 0.95), validation_error);
  CHECK_THROWS_AS(wilson_interval(5, 4, 0.95), validation_error);
  CHECK_THROWS_AS(wilson_interval(5, 10, 1.0), validation_error);
}

TEST_CASE("wilson coverage on a seeded binomial simulation") {
  auto rng = testsupport::make_rng(56);
  const int n = 100;
  const int replicates = 10000;
  for (double p : {0.1, 0.5, 0.9}) {
    int covered = 0;
    for (int r = 0; r < replicates; ++r) {
      int successes = 0;
      for (int i = 0; i < n; ++i)
        if (testsupport::uniform01(rng) < p) ++successes;
      const ProbInterval iv = wilson_interval(successes, n, 0.95);
      if (iv.lo <= p && p <= iv.hi) ++covered;
    }
    const double coverage = static_cast<double>(covered) / replicates;
    CHECK(coverage >= 0.93);  // nominal 0.95 minus 2 points
  }
}

TEST_CASE("counts_to_interval_table") {
  SUBCASE("mortgage-like counts center the acceptance interval near 0.8") {
    const IntervalTable t = counts_to_interval_table(CountData{76, 4, 20}, 0.95);
    CHECK(t.p_accept.lo < 0.8);
    CHECK(t.p_accept.hi > 0.8);
    CHECK(std::fabs(t.p_accept.midpoint() - 0.8) < 0.02);
    CHECK(t.p11.lo <= t.p_accept.hi);
  }
  SUBCASE("all mass rejected pins the acceptance lower endpoint") {
    const IntervalTable t = counts_to_interval_table(CountData{0, 0, 50}, 0.95);
    CHECK(t.p_accept.lo == 0.0);
    CHECK(t.p11.lo == 0.0);
  }
  SUBCASE("intervals shrink toward the point values as n grows") {
    const IntervalTable small = counts_to_interval_table(CountData{76, 4, 20}, 0.95);
    const IntervalTable large = counts_to_interval_table(CountData{76000, 4000, 20000}, 0.95);
    CHECK(large.p11.width() < small.p11.width());
    CHECK(large.p_accept.width() < small.p_accept.width());
    CHECK(std::fabs(large.p11.midpoint() - 0.76) < 1e-3);
  }
  CHECK_THROWS_AS(counts_to_interval_table(CountData{0, 0, 0}, 0.95), validation_error);
}

TEST_CASE("normal quantile reference values") {
  CHECK(near(std_normal_quantile(0.975), 1.959963984540054, 1e-9));
  CHECK(near(std_normal_quantile(0.995), 2.5758293035489004, 1e-9));
  CHECK(near(std_normal_quantile(0.9), 1.2815515655446004, 1e-9));
  CHECK(std::fabs(std_normal_quantile(0.5)) < 1e-15);
  SUBCASE("round trip through the CDF") {
    for (double p : {1e-6, 0.01, 0.2, 0.5, 0.8, 0.99, 1.0 - 1e-6})
      CHECK(near(std_normal_cdf(std_normal_quantile(p)), p, 1e-12));
  }
  CHECK_THROWS_AS(std_normal_quantile(0.0), validation_error);
  CHECK_THROWS_AS(std_normal_quantile(1.0), validation_error);
}

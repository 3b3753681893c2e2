#include "doctest.h"

#include <cmath>

#include "fairaudit/adversary.hpp"
#include "fairaudit/certificates.hpp"
#include "support/helpers.hpp"

using namespace fairaudit;
using testsupport::near;

namespace {

// Tables realizing pd = (0.01, 0, 0.01) around the uniform table.
const JointTable kNudgedUp{0.26, 0.25, 0.25, 0.24};
const JointTable kUniform{0.25, 0.25, 0.25, 0.25};

}  // namespace

TEST_CASE("construct_adversarial_utilities: true-positive branch") {
  const AdversaryRequest req{ProbVector{0.01, 0.0, 0.01}, 1e6};
  const UtilityMatrix u = construct_adversarial_utilities(req);
  CHECK(u.u11 == 1e8);
  CHECK(u.u01 == 0.0);
  CHECK(u.u00 == 0.0);
  CHECK(u.u10 == 0.0);
  CHECK(near(verify_adversary(req, u, kNudgedUp, kUniform), 1e6, 1e-12, 1e6));
}

TEST_CASE("construct_adversarial_utilities: true-negative branch") {
  const AdversaryRequest req{ProbVector{0.0, 0.02, 0.0}, 1000.0};
  const UtilityMatrix u = construct_adversarial_utilities(req);
  CHECK(u.u00 == 50000.0);
  CHECK(u.u11 == 0.0);
  CHECK(u.u01 == u.u10);
  CHECK(near(dot(utility_vector(u), req.pd), 1000.0, 1e-12, 1000.0));
}

TEST_CASE("construct_adversarial_utilities: negative component still reaches +K") {
  const AdversaryRequest req{ProbVector{-0.01, 0.0, 0.0}, 1.0};
  const UtilityMatrix u = construct_adversarial_utilities(req);
  CHECK(u.u11 == -100.0);
  CHECK(near(dot(utility_vector(u), req.pd), 1.0, 1e-12));
}

TEST_CASE("request validation") {
  CHECK_THROWS_AS(AdversaryRequest(ProbVector{0.01, 0.0, 0.01}, 0.0).validate(),
                  validation_error);
  CHECK_THROWS_AS(AdversaryRequest(ProbVector{0.0, 0.0, 0.05}, 10.0).validate(),
                  validation_error);
  CHECK_THROWS_AS(AdversaryRequest(ProbVector{0.0, 0.0, 0.0}, 10.0).validate(),
                  validation_error);
  // overflow guard: component far too small for the requested K
  CHECK_THROWS_AS(
      construct_adversarial_utilities(AdversaryRequest{ProbVector{1e-305, 0.0, 0.0}, 1e3}),
      validation_error);
}

TEST_CASE("verify_adversary rejects tables that do not realize the difference") {
  const AdversaryRequest req{ProbVector{0.01, 0.0, 0.01}, 1e6};
  const UtilityMatrix u = construct_adversarial_utilities(req);
  CHECK_THROWS_AS(verify_adversary(req, u, kUniform, kUniform), validation_error);
}

TEST_CASE("the construction hits the target for every sign case") {
  auto rng = testsupport::make_rng(41);
  for (int i = 0; i < 1000; ++i) {
    const JointTable base = testsupport::random_joint(rng);
    const JointTable other = testsupport::random_joint(rng);
    // mix toward base to exercise tiny distances as well
    const double theta = i % 3 == 0 ? 1e-7 : testsupport::uniform01(rng);
    const JointTable prot{(1.0 - theta) * base.p11 + theta * other.p11,
                          (1.0 - theta) * base.p01 + theta * other.p01,
                          (1.0 - theta) * base.p00 + theta * other.p00,
                          (1.0 - theta) * base.p10 + theta * other.p10};
    const ProbVector pd = prob_difference(base, prot);
    if (std::fabs(pd.true_positive) + std::fabs(pd.true_negative) < 1e-300) continue;
    const double k = std::pow(10.0, testsupport::uniform(rng, 0.0, 9.0));
    const AdversaryRequest req{pd, k};
    const UtilityMatrix u = construct_adversarial_utilities(req);
    CHECK(u.u01 == u.u10);  // acceptance term always zeroed
    const double achieved = verify_adversary(req, u, base, prot);
    REQUIRE(achieved >= k * (1.0 - 1e-9));
    // utilities do not touch the probability distance
    REQUIRE(epsilon_distance(base, prot) == infinity_norm(pd));
  }
}

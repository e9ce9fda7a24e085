#include <gtest/gtest.h>

#include <random>
#include <vector>

#include "schmidt_forge/fixedprob.hpp"
#include "schmidt_forge/oracle.hpp"
#include "support/expect_error.hpp"
#include "support/reference.hpp"

using namespace schmidt_forge;

namespace {
const std::vector<double> kFour{0.4, 0.3, 0.2, 0.1};
}

TEST(FixedProbRequest, Validation) {
  EXPECT_SF_ERROR(fixed_prob_request(0.0), ErrorKind::PFixOutOfRange);
  EXPECT_SF_ERROR(fixed_prob_request(1.5), ErrorKind::PFixOutOfRange);
  EXPECT_SF_ERROR(fixed_prob_request(-0.2), ErrorKind::PFixOutOfRange);
  EXPECT_DOUBLE_EQ(fixed_prob_request(1.0).p_fix, 1.0);
}

TEST(OptimalPlanFixed, WorkedFourLevelCase) {
  const auto o = optimal_plan_fixed(make_spectrum(kFour), {0.7});
  const double t = ref::water_level(kFour, 0.7);
  EXPECT_NEAR(t, 0.2, 1e-15);
  const std::vector<double> x{0.2, 0.2, 0.2, 0.1};
  const std::vector<double> y{0.5, 2.0 / 3, 1, 1};
  for (std::size_t m = 0; m < 4; ++m) {
    EXPECT_NEAR(o.plan.x[m], x[m], 1e-15);
    EXPECT_NEAR(o.plan.y[m], y[m], 1e-15);
  }
  EXPECT_TRUE(o.plan.n_opt == 2u || o.plan.n_opt == 3u);
  EXPECT_NEAR(o.post_measures.purity, 13.0 / 49, 1e-12);
  EXPECT_NEAR(o.post_measures.schmidt_number, 49.0 / 13, 1e-12);
  EXPECT_NEAR(o.p_success, 0.7, 1e-12);
}

TEST(OptimalPlanFixed, UnitProbabilityIsIdentity) {
  const auto s = make_spectrum(kFour);
  const auto o = optimal_plan_fixed(s, {1.0});
  EXPECT_EQ(o.plan.y, std::vector<double>(4, 1.0));
  EXPECT_NEAR(o.post_measures.purity, 0.3, 1e-15);
}

TEST(OptimalPlanFixed, BelowStandardProbabilityIsUniform) {
  const auto o = optimal_plan_fixed(make_spectrum(kFour), {0.2});
  EXPECT_EQ(o.plan.n_opt, 4u);
  for (double x : o.plan.x) EXPECT_NEAR(x, 0.05, 1e-15);
  EXPECT_NEAR(o.post_measures.schmidt_number, 4.0, 1e-12);
}

TEST(OptimalPlanFixed, MatchesWaterFilling) {
  std::mt19937_64 rng(43);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int t = 0; t < 2000; ++t) {
    const std::size_t d = 2 + t % 30;
    const auto s = make_spectrum(ref::random_simplex(d, rng));
    const std::vector<double> a2(s.sq_coeffs().begin(), s.sq_coeffs().end());
    const double p = 1.0 - unit(rng);
    const auto o = optimal_plan_fixed(s, {p});
    ASSERT_NEAR(o.p_success, p, 1e-12);
    const double level = ref::water_level(a2, p);
    for (std::size_t m = 0; m < d; ++m) ASSERT_NEAR(o.plan.x[m], std::min(a2[m], level), 1e-12);
  }
}

TEST(OptimalPlanFixed, BeatsRandomFeasiblePlans) {
  std::mt19937_64 rng(47);
  const auto s = make_spectrum(kFour);
  const double best = optimal_plan_fixed(s, {0.7}).post_measures.purity;
  for (int t = 0; t < 100000; ++t) {
    const auto y = random_feasible_y(s, 0.7, rng);
    ASSERT_GE(apply_plan(s, y).post_measures.purity, best - 1e-12);
  }
}

TEST(OptimalPlanFixed, PurityMonotoneInProbability) {
  std::mt19937_64 rng(53);
  for (int t = 0; t < 100; ++t) {
    const auto s = make_spectrum(ref::random_simplex(3 + t % 12, rng));
    double prev = 0.0;
    for (int k = 1; k <= 100; ++k) {
      const double purity = optimal_plan_fixed(s, {k / 100.0}).post_measures.purity;
      EXPECT_GE(purity, prev - 1e-12);
      prev = purity;
    }
  }
}

TEST(DualityCheck, Examples) {
  const auto s = make_spectrum(kFour);
  EXPECT_TRUE(duality_check(s, reference_from(ReferenceKind::p_ref, 0.3, 4)));
  EXPECT_NEAR(optimal_plan_fixed(s, {0.75}).plan.crop_level, 0.225, 1e-15);
  const auto uni = make_spectrum({0.25, 0.25, 0.25, 0.25});
  for (double p : {0.25, 0.5, 1.0})
    EXPECT_TRUE(duality_check(uni, reference_from(ReferenceKind::p_ref, p, 4)));
  EXPECT_TRUE(duality_check(s, reference_from(ReferenceKind::p_ref, 0.25, 4)));
}

TEST(DualityCheck, RandomInstances) {
  std::mt19937_64 rng(59);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int t = 0; t < 1000; ++t) {
    const std::size_t d = 2 + t % 20;
    const auto s = make_spectrum(ref::random_simplex(d, rng));
    const double p = std::max(1.0 / d, std::pow(static_cast<double>(d), -unit(rng)));
    EXPECT_TRUE(duality_check(s, reference_from(ReferenceKind::p_ref, p, d))) << t;
  }
}

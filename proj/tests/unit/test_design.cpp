/*
 * Copyright 2026 The rankdesign Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <gtest/gtest.h>

#include <cmath>

#include "fixtures.hpp"
#include "rankdesign/design.hpp"

namespace rankdesign {
namespace {

using namespace rankdesign::testing;

TEST(OptimizeTwoLevel, Societal) {
  const auto best = optimize_two_level(linear_population(), 0.2, Objective::SocietalUtility);
  EXPECT_NEAR(best.c, 4.0 / 7.0, 1e-4);
  EXPECT_NEAR(best.value, 0.4048245641, 1e-8);
  EXPECT_NEAR(best.value, 0.40476, 1e-3);
  EXPECT_NEAR(best.value, societal_utility(solve(linear_population(), two_level(best.c, 0.2))), 1e-9);
}

TEST(OptimizeTwoLevel, PrivateAtNonRandomized) {
  const auto best = optimize_two_level(linear_population(), 0.2, Objective::PrivateUtility);
  EXPECT_NEAR(best.c, 0.8, 1e-9);
  EXPECT_NEAR(best.value, 0.32, 1e-9);
  for (std::size_t i = 1; i < best.profile.size(); ++i) {
    EXPECT_GE(best.profile[i].second, best.profile[i - 1].second - 1e-9);
  }
}

TEST(OptimizeTwoLevel, ApplicantAtPureRandomization) {
  const auto best = optimize_two_level(linear_population(), 0.2, Objective::ApplicantWelfare);
  EXPECT_EQ(best.c, 0.0);
  EXPECT_EQ(best.value, 0.2);
}

TEST(OptimizeTwoLevel, WorkersDoNotChangeResult) {
  const auto a = optimize_two_level(linear_population(), 0.2, Objective::SocietalUtility, 100, 1e-6, 1);
  const auto b = optimize_two_level(linear_population(), 0.2, Objective::SocietalUtility, 100, 1e-6, 3);
  EXPECT_EQ(a.c, b.c);
  EXPECT_EQ(a.value, b.value);
}

TEST(ThreeLevelCheck, LargeUpperSkillHolds) {
  // Skill jumps sharply above c2, so the middle band's cheap admissions pay off.
  const auto f = FunctionSpec::piecewise({{0, 0}, {0.85, 0.05}, {0.9, 5}, {1, 6}}, Role::SkillQuantile);
  const PopulationSpec pop(f, sqrt_transfer(), square_cost(), 0.0);
  const double c1 = 0.5, c2 = 0.9, rho = 0.2;
  const double x = (rho - (1 - c2)) / (c2 - c1);
  const double bound = (f(1 - rho) * rho - x * x * f(c1) * (c2 - c1) - x * f(c1) * (1 - c2)) / ((1 - x) * (1 - c2));
  ASSERT_GT(f(c2), bound);
  const auto check = three_level_counterexample_check(pop, x, c1, c2, rho);
  EXPECT_TRUE(check.simplified_holds);
  EXPECT_GT(check.lhs, check.rhs);
}

TEST(ThreeLevelCheck, DegenerateCollapsesToTwoLevel) {
  const auto check = three_level_counterexample_check(linear_population(), 0.5, 0.8, 0.8, 0.2);
  EXPECT_NEAR(check.lhs, check.rhs, 1e-12);
  EXPECT_EQ(check.three_level_utility, check.two_level_utility);
  EXPECT_FALSE(check.holds);
}

TEST(ThreeLevelCheck, CapacityMismatch) {
  EXPECT_THROW(three_level_counterexample_check(linear_population(), 0.5, 0.3, 0.9, 0.2), CapacityError);
}

TEST(ThreeLevelCheck, UniformSkillRecordsOutcome) {
  // No claim either way for uniform skills; the check must simply evaluate.
  const double c1 = 0.5, c2 = 0.85, rho = 0.2;
  const double x = (rho - (1 - c2)) / (c2 - c1);
  const auto check = three_level_counterexample_check(uniform_population(), x, c1, c2, rho);
  EXPECT_TRUE(std::isfinite(check.three_level_utility));
  EXPECT_TRUE(std::isfinite(check.lhs));
}

TEST(ThreeLevelSearch, HeavyTailImproves) {
  const PopulationSpec pop(quantile(1, 8), sqrt_transfer(), square_cost(), 0.0);
  const auto found = find_three_level_improvement(pop, 0.2, 2000, 0, 2);
  ASSERT_TRUE(found.has_value());
  EXPECT_GT(found->improvement(), kImprovementMargin);
  EXPECT_TRUE(validate(found->policy).ok());
  const auto check = three_level_counterexample_check(pop, found->x, found->c1, found->c2, 0.2);
  EXPECT_TRUE(check.holds);
  EXPECT_EQ(check.simplified_holds, check.holds);
}

TEST(ThreeLevelSearch, ZeroBudget) {
  EXPECT_FALSE(find_three_level_improvement(linear_population(), 0.2, 0).has_value());
}

TEST(ThreeLevelSearch, Deterministic) {
  const PopulationSpec pop(quantile(1, 8), sqrt_transfer(), square_cost(), 0.0);
  const auto a = find_three_level_improvement(pop, 0.2, 400, 5, 1);
  const auto b = find_three_level_improvement(pop, 0.2, 400, 5, 3);
  ASSERT_EQ(a.has_value(), b.has_value());
  if (a) {
    EXPECT_EQ(a->c1, b->c1);
    EXPECT_EQ(a->c2, b->c2);
  }
}

TEST(ThreeLevelSearch, LinearSkillAnchor) {
  const auto found = find_three_level_improvement(linear_population(), 0.2, 2000, 0, 2);
  EXPECT_FALSE(found.has_value());
}

}  // namespace
}  // namespace rankdesign

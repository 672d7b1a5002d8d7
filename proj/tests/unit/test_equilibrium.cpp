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
#include <random>

#include "fixtures.hpp"
#include "rankdesign/equilibrium.hpp"

namespace rankdesign {
namespace {

using namespace rankdesign::testing;

TEST(Effort, TwoLevelValues) {
  const auto s = solve(linear_population(), two_level(0.8, 0.2));
  EXPECT_NEAR(s.effort_at(0.9), std::pow(0.8 / 0.9, 2), 1e-12);
  EXPECT_EQ(s.effort_at(0.5), 0.0);
  EXPECT_NEAR(s.score_at(0.95), 1.6, 1e-12);
  EXPECT_EQ(s.score_at(0.3), 0.0);
  const auto& b = s.bands()[1];
  ASSERT_TRUE(b.threshold_effort && b.threshold_score);
  EXPECT_NEAR(s.score_at(0.8), std::sqrt(*b.threshold_effort) * 1.6, 1e-12);
  EXPECT_FALSE(b.switch_point.has_value());
}

TEST(Effort, JumpsUpAtEveryCutpoint) {
  const auto s = solve(linear_population(), four_level_policy());
  for (double c : four_level_policy().cutpoints) {
    EXPECT_GT(s.effort_at(c + 1e-9), s.effort_at(c - 1e-9)) << "cutpoint " << c;
  }
}

TEST(Effort, DecreasesWithinBands) {
  const auto s = solve(linear_population(), four_level_policy());
  for (std::size_t k = 1; k < s.band_count(); ++k) {
    const auto& b = s.bands()[k];
    double prev = s.effort_in_band(k, b.lower);
    for (int i = 1; i < 200; ++i) {
      const double t = b.lower + (b.upper - b.lower) * i / 200.0;
      const double e = s.effort_at(t);
      ASSERT_LT(e, prev) << "band " << k << " theta " << t;
      prev = e;
    }
  }
}

TEST(Effort, BaselineAboveSwitchPoint) {
  // With g(e0) > 0 high ranks out-score the threshold at baseline effort.
  const auto pop = shifted_population();
  const RewardPolicy policy{{0.0, 0.1}, {0.5}, 0.05};
  const auto s = solve(pop, policy);
  const auto& b = s.bands()[1];
  ASSERT_TRUE(b.switch_point.has_value());
  const double star = *b.switch_point;
  EXPECT_NEAR(pop.f(star) * pop.g(pop.e0), *b.threshold_score, 1e-9);
  EXPECT_GT(s.effort_at(0.5 * (0.5 + star)), pop.e0);
  EXPECT_EQ(s.effort_at(0.5 * (star + 1.0)), pop.e0);
}

TEST(Solve, Deterministic) {
  const auto a = solve(linear_population(), four_level_policy());
  const auto b = solve(linear_population(), four_level_policy());
  for (int i = 0; i <= 1000; ++i) {
    const double t = i / 1000.0;
    ASSERT_EQ(a.effort_at(t), b.effort_at(t));
  }
}

TEST(Solve, SinglePolicyBandIsBaseline) {
  const auto s = solve(linear_population(), two_level(0.0, 0.2));
  EXPECT_EQ(s.band_count(), 1u);
  EXPECT_EQ(s.effort_at(0.99), 0.0);
}

struct Case {
  PopulationSpec pop;
  RewardPolicy policy;
};

std::vector<Case> cases() {
  return {{linear_population(), two_level(0.8, 0.2)},
          {linear_population(), two_level(0.3, 0.2)},
          {linear_population(), four_level_policy()},
          {uniform_population(), RewardPolicy{{0.05, 0.15, 0.3, 0.45}, {0.4, 0.6, 0.8}, 0.2}},
          {shifted_population(), four_level_policy()},
          {PopulationSpec(quantile(1, 8), sqrt_transfer(), square_cost(), 0.0), RewardPolicy{{0, 0.5, 1}, {0.6, 0.9}, 0.25}},
          {PopulationSpec(FunctionSpec::piecewise({{0, 0}, {0.5, 0.2}, {1, 3}}, Role::SkillQuantile),
                          FunctionSpec::power(2, 0.7, Role::EffortTransfer),
                          FunctionSpec::power(1, 1.5, Role::CostFunction), 0.0),
           four_level_policy()}};
}

TEST(Property, SecondPriceIndifference) {
  for (const auto& [pop, policy] : cases()) {
    const auto s = solve(pop, policy);
    for (std::size_t k = 1; k < s.band_count(); ++k) {
      const double below = s.effort_in_band(k - 1, policy.band_lower(k));
      const double lhs = pop.p(*s.bands()[k].threshold_effort) - pop.p(below);
      EXPECT_NEAR(lhs, policy.levels[k] - policy.levels[k - 1], 1e-10) << "band " << k;
    }
  }
}

// No applicant gains by switching to the cheapest effort that reaches any
// other band.
TEST(Property, BestResponseSpotCheck) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (const auto& [pop, policy] : cases()) {
    const auto s = solve(pop, policy);
    for (int i = 0; i < 100; ++i) {
      const double theta = u(rng);
      if (theta == 0.0) continue;
      const std::size_t band = policy.band_of(theta);
      const double current = policy.levels[band] - pop.p(s.effort_at(theta));
      for (std::size_t b = 0; b < s.band_count(); ++b) {
        if (b == band) continue;
        const double target = s.score_in_band(b, policy.band_lower(b));
        const double needed = target / pop.f(theta);
        const double effort = needed <= pop.g(pop.e0) ? pop.e0 : pop.g.invert(needed);
        const double deviation = policy.levels[b] - pop.p(effort);
        ASSERT_GE(current, deviation - 1e-9) << "theta " << theta << " to band " << b;
      }
    }
  }
}

TEST(RankPreservation, RepresentativeFourLevel) {
  const auto s = solve(linear_population(), four_level_policy());
  const auto report = check_rank_preservation(s, 10000);
  EXPECT_TRUE(report.ok());
  EXPECT_EQ(report.samples, 10003u);
}

TEST(RankPreservation, AllCases) {
  for (const auto& [pop, policy] : cases()) {
    EXPECT_TRUE(check_rank_preservation(solve(pop, policy), 2000).ok());
  }
}

TEST(RankPreservation, SingleLevelTrivial) {
  EXPECT_TRUE(check_rank_preservation(solve(linear_population(), two_level(0.0, 0.2)), 100).ok());
}

TEST(RankPreservation, IndependentSortAgrees) {
  const auto s = solve(linear_population(), four_level_policy());
  std::vector<std::pair<double, std::size_t>> scored;
  for (int i = 0; i < 10000; ++i) {
    const double t = (i + 0.5) / 10000.0;
    scored.emplace_back(s.score_at(t), four_level_policy().band_of(t));
  }
  std::sort(scored.begin(), scored.end());
  for (std::size_t i = 1; i < scored.size(); ++i) ASSERT_LE(scored[i - 1].second, scored[i].second);
}

// Halving the first threshold effort pushes it below e0, so band 1 no longer
// out-scores band 0 at the cutpoint.
TEST(RankPreservation, CorruptedScheduleIsCaught) {
  const auto pop = shifted_population();
  const auto good = solve(pop, four_level_policy());
  auto bands = good.bands();
  const double halved = 0.5 * *bands[1].threshold_effort;
  ASSERT_LT(halved, pop.e0);
  bands[1].threshold_effort = halved;
  bands[1].threshold_score = pop.g(std::max(halved, pop.e0)) * pop.f(bands[1].lower);
  bands[1].switch_point = bands[1].lower;
  const EquilibriumSchedule<FunctionSpec> bad(pop.f, pop.g, pop.p, pop.e0, four_level_policy(), bands);
  EXPECT_TRUE(check_rank_preservation(good, 2000).ok());
  const auto report = check_rank_preservation(bad, 2000);
  ASSERT_FALSE(report.ok());
  EXPECT_EQ(report.violations.front().band, 1u);
}

TEST(ComparativeStatics, RaisingOneLevel) {
  const auto r = comparative_statics_check(linear_population(), four_level_policy(), 1, 3, 0.01);
  EXPECT_TRUE(r.ok);
  EXPECT_EQ(r.lower_band_change, 0.0);
  EXPECT_GE(r.band_k_min_change, 0.0);
  EXPECT_LE(r.upper_band_max_change, 0.0);
}

TEST(ComparativeStatics, ZeroDeltaChangesNothing) {
  const auto r = comparative_statics_check(linear_population(), four_level_policy(), 1, 3, 0.0);
  EXPECT_TRUE(r.ok);
  EXPECT_EQ(r.band_k_min_change, 0.0);
  EXPECT_EQ(r.upper_band_max_change, 0.0);
}

TEST(ComparativeStatics, BandZeroStaysAtBaseline) {
  RewardPolicy policy{{0.1, 0.25, 0.5, 1.0}, {0.4, 0.6, 0.9}, 0.34};
  ASSERT_TRUE(validate(policy).ok()) << validate(policy).summary();
  const auto r = comparative_statics_check(linear_population(), policy, 0, 2, 0.01);
  EXPECT_TRUE(r.ok);
  const auto s = solve(linear_population(), r.perturbed);
  EXPECT_EQ(s.effort_at(0.2), 0.0);
}

TEST(ComparativeStatics, InvalidPerturbation) {
  EXPECT_THROW(comparative_statics_check(linear_population(), four_level_policy(), 3, 1, 0.01),
               PerturbationError);
  EXPECT_THROW(comparative_statics_check(linear_population(), four_level_policy(), 1, 3, 0.5),
               PerturbationError);
}

}  // namespace
}  // namespace rankdesign

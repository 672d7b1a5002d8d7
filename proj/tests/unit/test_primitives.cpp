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

#include "rankdesign/function_spec.hpp"

namespace rankdesign {
namespace {

FunctionSpec quantile(double s, double e) { return FunctionSpec::power(s, e, Role::SkillQuantile); }
FunctionSpec transfer(double s, double e) { return FunctionSpec::power(s, e, Role::EffortTransfer); }
FunctionSpec cost(double s, double e) { return FunctionSpec::power(s, e, Role::CostFunction); }

TEST(Evaluate, PowerValues) {
  EXPECT_DOUBLE_EQ(quantile(2, 1).evaluate(0.8), 1.6);
  EXPECT_DOUBLE_EQ(transfer(1, 0.5).evaluate(1.0), 1.0);
  EXPECT_DOUBLE_EQ(cost(1, 2).evaluate(0.5), 0.25);
  EXPECT_DOUBLE_EQ(cost(1, 2)(0.5), 0.25);
}

TEST(Evaluate, AffinePowerShiftsArgument) {
  const auto p = FunctionSpec::affine_power(1, 2, 1, Role::CostFunction);
  EXPECT_DOUBLE_EQ(p.evaluate(1.0), 0.0);
  EXPECT_DOUBLE_EQ(p.evaluate(3.0), 4.0);
  EXPECT_DOUBLE_EQ(p.domain_lower(), 1.0);
  EXPECT_THROW(p.evaluate(0.5), DomainError);
}

TEST(Evaluate, PiecewiseInterpolates) {
  const auto f = FunctionSpec::piecewise({{0, 0}, {0.5, 0.1}, {1, 1}}, Role::SkillQuantile);
  EXPECT_DOUBLE_EQ(f.evaluate(0.25), 0.05);
  EXPECT_DOUBLE_EQ(f.evaluate(0.75), 0.55);
  EXPECT_EQ(f.breakpoints().size(), 3u);
}

TEST(Evaluate, OutsideDomainThrows) {
  EXPECT_THROW(quantile(1, 1).evaluate(-0.1), DomainError);
  EXPECT_THROW(quantile(1, 1).evaluate(std::nan("")), DomainError);
  const auto f = FunctionSpec::piecewise({{0, 0}, {1, 1}}, Role::SkillQuantile);
  EXPECT_THROW(f.evaluate(1.5), DomainError);
}

TEST(Invert, Values) {
  EXPECT_NEAR(cost(1, 2).invert(0.25), 0.5, 1e-15);
  EXPECT_NEAR(quantile(2, 1).invert(1.6), 0.8, 1e-15);
  EXPECT_NEAR(transfer(1, 0.5).invert(1.2), 1.44, 1e-12);
  EXPECT_NEAR(transfer(1, 0.5).evaluate(1.44), 1.2, 1e-12);
}

TEST(Invert, OutsideImageThrows) {
  EXPECT_THROW(cost(1, 2).invert(-1.0), RangeError);
  const auto f = FunctionSpec::piecewise({{0, 0}, {1, 1}}, Role::SkillQuantile);
  EXPECT_THROW(f.invert(2.0), RangeError);
}

TEST(Derivative, Values) {
  EXPECT_NEAR(cost(1, 2).derivative(1.0).value, 2.0, 1e-12);
  EXPECT_NEAR(quantile(2, 1).derivative(0.3).value, 2.0, 1e-12);
  EXPECT_NEAR(transfer(1, 0.5).derivative(4.0).value, 0.25, 1e-12);
  EXPECT_FALSE(cost(1, 2).derivative(1.0).approximate);
}

TEST(Validation, RejectsBadParameters) {
  EXPECT_THROW(quantile(0, 1), SpecError);
  EXPECT_THROW(quantile(1, -1), SpecError);
  EXPECT_THROW(transfer(1, 1.5), SpecError);  // convex transfer
  EXPECT_THROW(cost(1, 1.0), SpecError);      // not strictly convex
  EXPECT_THROW(FunctionSpec::piecewise({{0, 0}, {0, 1}}, Role::SkillQuantile), SpecError);
  EXPECT_THROW(FunctionSpec::piecewise({{0, 0}, {1, 1}, {2, 3}}, Role::EffortTransfer), SpecError);
  EXPECT_THROW(FunctionSpec::piecewise({{0, 0}, {1, 2}, {2, 3}}, Role::CostFunction), SpecError);
}

TEST(Population, Validation) {
  EXPECT_NO_THROW(PopulationSpec(quantile(2, 1), transfer(1, 0.5), cost(1, 2), 0.0));
  EXPECT_THROW(PopulationSpec(transfer(1, 0.5), quantile(2, 1), cost(1, 2), 0.0), SpecError);
  EXPECT_THROW(PopulationSpec(quantile(2, 1), transfer(1, 0.5), cost(1, 2), 0.5), SpecError);  // p(e0) != 0
  EXPECT_THROW(PopulationSpec(quantile(2, 1), transfer(1, 0.5), cost(1, 2), -1.0), SpecError);
  const PopulationSpec shifted(quantile(2, 1), transfer(1, 0.5),
                               FunctionSpec::affine_power(1, 2, 1, Role::CostFunction), 1.0);
  EXPECT_DOUBLE_EQ(shifted.transfer_at_baseline(), 1.0);
}

// Random-draw properties over a spread of families.
class FamilyProperty : public ::testing::TestWithParam<int> {
 protected:
  std::vector<FunctionSpec> specs() const {
    return {quantile(2, 1),
            quantile(1, 8),
            quantile(0.5, 0.3),
            transfer(1, 0.5),
            transfer(3, 1),
            transfer(2, 0.2),
            cost(1, 2),
            cost(4, 1.5),
            cost(0.5, 3),
            FunctionSpec::affine_power(1, 2, 1, Role::CostFunction),
            FunctionSpec::affine_power(2, 0.5, 0.5, Role::EffortTransfer),
            FunctionSpec::piecewise({{0, 0}, {0.3, 0.01}, {0.9, 0.5}, {1, 2}}, Role::SkillQuantile),
            FunctionSpec::piecewise({{0, 0}, {1, 2}, {3, 3}, {5, 3.5}}, Role::EffortTransfer),
            FunctionSpec::piecewise({{0, 0}, {1, 0.5}, {2, 2}, {3, 5}}, Role::CostFunction)};
  }
  static double upper(const FunctionSpec& f) {
    return std::isfinite(f.domain_upper()) ? f.domain_upper() : f.domain_lower() + 5.0;
  }
};

TEST_P(FamilyProperty, RoundTrip) {
  std::mt19937_64 rng(11);
  for (const auto& f : specs()) {
    std::uniform_real_distribution<double> u(f.domain_lower(), upper(f));
    for (int i = 0; i < 1000; ++i) {
      const double x = u(rng);
      ASSERT_NEAR(f.invert(f.evaluate(x)), x, 1e-9) << to_string(f.role()) << " x=" << x;
    }
  }
}

TEST_P(FamilyProperty, StrictlyIncreasing) {
  std::mt19937_64 rng(12);
  for (const auto& f : specs()) {
    std::uniform_real_distribution<double> u(f.domain_lower(), upper(f));
    for (int i = 0; i < 1000; ++i) {
      double a = u(rng), b = u(rng);
      if (a == b) continue;
      if (a > b) std::swap(a, b);
      if (b - a < 1e-9) continue;
      ASSERT_LT(f.evaluate(a), f.evaluate(b));
    }
  }
}

TEST_P(FamilyProperty, CurvatureByRole) {
  std::mt19937_64 rng(13);
  for (const auto& f : specs()) {
    if (f.role() == Role::SkillQuantile) continue;
    std::uniform_real_distribution<double> u(f.domain_lower(), upper(f));
    for (int i = 0; i < 1000; ++i) {
      const double a = u(rng), b = u(rng);
      const double mid = f.evaluate(0.5 * (a + b));
      const double chord = 0.5 * (f.evaluate(a) + f.evaluate(b));
      if (f.role() == Role::EffortTransfer) {
        ASSERT_GE(mid, chord - 1e-12);
      } else {
        ASSERT_LE(mid, chord + 1e-12);
      }
    }
  }
}

INSTANTIATE_TEST_SUITE_P(Primitives, FamilyProperty, ::testing::Values(0));

TEST(Derivative, MatchesFiniteDifference) {
  std::mt19937_64 rng(14);
  std::uniform_real_distribution<double> u(0.1, 2.0);
  for (const auto& f : {transfer(1, 0.5), cost(1, 2), cost(0.5, 3)}) {
    for (int i = 0; i < 200; ++i) {
      const double x = u(rng);
      const double h = 1e-6;
      const double fd = (f.evaluate(x + h) - f.evaluate(x - h)) / (2 * h);
      ASSERT_NEAR(f.derivative(x).value, fd, 1e-6 * std::max(1.0, std::abs(fd)));
    }
  }
}

}  // namespace
}  // namespace rankdesign

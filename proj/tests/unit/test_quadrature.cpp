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

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "rankdesign/quadrature.hpp"

namespace rankdesign {
namespace {

TEST(AdaptiveSimpson, PolynomialsAreExact) {
  const auto r = adaptive_simpson([](double x) { return 3 * x * x * x - x + 2; }, -1.0, 2.0);
  EXPECT_NEAR(r.value, 3.0 * (16.0 - 1.0) / 4.0 - (4.0 - 1.0) / 2.0 + 6.0, 1e-12);
}

TEST(AdaptiveSimpson, SmoothAndSingularIntegrands) {
  EXPECT_NEAR(adaptive_simpson([](double x) { return std::sin(x); }, 0.0, std::numbers::pi).value, 2.0, 1e-8);
  EXPECT_NEAR(adaptive_simpson([](double x) { return std::sqrt(x); }, 0.0, 1.0).value, 2.0 / 3.0, 1e-8);
  EXPECT_NEAR(adaptive_simpson([](double x) { return std::exp(-x * x); }, -3.0, 3.0).value,
              std::sqrt(std::numbers::pi) * std::erf(3.0), 1e-8);
}

TEST(AdaptiveSimpson, EmptyIntervalIsZero) {
  EXPECT_EQ(adaptive_simpson([](double) { return 1.0; }, 1.0, 1.0).value, 0.0);
}

TEST(AdaptiveSimpson, DepthFailureCarriesPartialEstimate) {
  const auto step = [](double x) { return x < 1.0 / 3.0 ? 0.0 : 1.0; };
  try {
    adaptive_simpson(step, 0.0, 1.0, {1e-12, 1e-15, 4});
    FAIL() << "expected QuadratureError";
  } catch (const QuadratureError& e) {
    EXPECT_NEAR(e.partial_estimate(), 2.0 / 3.0, 0.05);
  }
}

TEST(IntegratePiecewise, ForcedNodesResolveKinks) {
  const auto ramp = [](double x) { return std::max(0.0, x - 1.0 / 3.0); };
  const std::vector<double> nodes{0.0, 1.0 / 3.0, 1.0};
  EXPECT_NEAR(integrate_piecewise(ramp, nodes).value, 2.0 / 9.0, 1e-12);
  const auto kink = [](double x) { return std::abs(x - 0.3); };
  const std::vector<double> knots{1.0, 0.3, 0.0, 0.3};  // unsorted, duplicated
  EXPECT_NEAR(integrate_piecewise(kink, knots).value, 0.045 + 0.245, 1e-12);
}

}  // namespace
}  // namespace rankdesign

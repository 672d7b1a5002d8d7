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

#ifndef RANKDESIGN_TESTS_FIXTURES_HPP_
#define RANKDESIGN_TESTS_FIXTURES_HPP_

#include "rankdesign/function_spec.hpp"
#include "rankdesign/policy.hpp"

namespace rankdesign::testing {

inline FunctionSpec quantile(double scale, double exponent) {
  return FunctionSpec::power(scale, exponent, Role::SkillQuantile);
}
inline FunctionSpec sqrt_transfer() { return FunctionSpec::power(1, 0.5, Role::EffortTransfer); }
inline FunctionSpec square_cost() { return FunctionSpec::power(1, 2, Role::CostFunction); }

// f = 2x, g = sqrt, p = x^2, e0 = 0.
inline PopulationSpec linear_population() {
  return PopulationSpec(quantile(2, 1), sqrt_transfer(), square_cost(), 0.0);
}

// f = x, g = sqrt, p = x^2, e0 = 0.
inline PopulationSpec uniform_population() {
  return PopulationSpec(quantile(1, 1), sqrt_transfer(), square_cost(), 0.0);
}

// Baseline effort 1 with g(e0) = 1 > 0: p(e) = (e - 1)^2.
inline PopulationSpec shifted_population() {
  return PopulationSpec(quantile(2, 1), sqrt_transfer(),
                        FunctionSpec::affine_power(1, 2, 1, Role::CostFunction), 1.0);
}

inline RewardPolicy four_level_policy() { return {{0.0, 0.25, 0.5, 1.0}, {0.4, 0.6, 0.9}, 0.3}; }

}  // namespace rankdesign::testing

#endif  // RANKDESIGN_TESTS_FIXTURES_HPP_

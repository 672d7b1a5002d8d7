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

#ifndef RANKDESIGN_DESIGN_HPP_
#define RANKDESIGN_DESIGN_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "rankdesign/golden_section.hpp"
#include "rankdesign/parallel.hpp"
#include "rankdesign/welfare.hpp"

namespace rankdesign {

enum class Objective { ApplicantWelfare, SocietalUtility, PrivateUtility };

inline const char* to_string(Objective o) {
  switch (o) {
    case Objective::ApplicantWelfare:
      return "applicant_welfare";
    case Objective::SocietalUtility:
      return "societal_utility";
    case Objective::PrivateUtility:
      return "private_utility";
  }
  return "?";
}

inline double two_level_objective(const PopulationSpec& population, double rho, double c,
                                  Objective objective) {
  const auto schedule = solve(population, two_level(c, rho));
  switch (objective) {
    case Objective::ApplicantWelfare:
      return applicant_welfare(schedule);
    case Objective::SocietalUtility:
      return societal_utility(schedule);
    case Objective::PrivateUtility:
      return private_utility(schedule);
  }
  return 0.0;
}

struct TwoLevelOptimum {
  double c = 0.0;
  double value = 0.0;
  std::vector<std::pair<double, double>> profile;
};

// Grid over [0, 1 - rho] (c = 0 is pure randomization), then golden-section
// refinement inside the best grid cell's neighbourhood.
inline TwoLevelOptimum optimize_two_level(const PopulationSpec& population, double rho,
                                          Objective objective, std::size_t grid_points = 200,
                                          double c_tol = 1e-6, std::size_t workers = 1) {
  if (!(rho > 0.0 && rho < 1.0)) throw CapacityError("capacity must lie in (0, 1)");
  grid_points = std::max<std::size_t>(grid_points, 3);
  const double top = 1.0 - rho;
  const auto values = parallel_map(grid_points, workers, [&](std::size_t i) {
    const double c = top * static_cast<double>(i) / static_cast<double>(grid_points - 1);
    return std::pair{c, two_level_objective(population, rho, c, objective)};
  });
  TwoLevelOptimum out;
  out.profile = values;
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i].second > values[best].second) best = i;
  }
  out.c = values[best].first;
  out.value = values[best].second;

  const double lo = values[best == 0 ? 0 : best - 1].first;
  const double hi = values[std::min(best + 1, values.size() - 1)].first;
  const auto refined = golden_section_maximize(
      [&](double c) { return two_level_objective(population, rho, c, objective); }, lo, hi, c_tol);
  if (refined.value > out.value) {
    out.c = refined.x;
    out.value = refined.value;
  }
  return out;
}

struct ThreeLevelCheck {
  bool holds = false;  // quadrature: three-level private utility strictly higher
  double lhs = 0.0;    // simplified inequality, f-only form
  double rhs = 0.0;
  bool simplified_holds = false;
  double three_level_utility = 0.0;
  double two_level_utility = 0.0;
};

// Policy with levels (0, x, 1) and cutpoints (c1, c2); collapses to the
// non-randomized two-level policy when the middle band is empty.
inline RewardPolicy three_level_policy(double x, double c1, double c2, double rho) {
  if (std::abs(c2 - c1) <= 1e-15) return two_level(c2, rho);
  return RewardPolicy{{0.0, x, 1.0}, {c1, c2}, rho};
}

// Compares the three-level policy (0, x, 1) against non-randomized admissions
// two ways: the closed inequality that holds when g(p^-1(y)) = y, and the
// quadrature private utility under the population's actual g and p.
inline ThreeLevelCheck three_level_counterexample_check(const PopulationSpec& population,
                                                        double x, double c1, double c2,
                                                        double rho) {
  if (!(c1 > 0.0 && c1 <= c2 && c2 < 1.0) || !(x > 0.0 && x < 1.0)) {
    throw SpecError("three-level check needs 0 < c1 <= c2 < 1 and 0 < x < 1");
  }
  const double mass = x * (c2 - c1) + (1.0 - c2);
  if (std::abs(mass - rho) > kCapacityTolerance) {
    throw CapacityError("three-level policy fills " + std::to_string(mass) +
                        " instead of capacity " + std::to_string(rho));
  }
  const auto& f = population.f;
  ThreeLevelCheck out;
  out.lhs = x * f(c1) * (c2 - c1) * x + ((1.0 - x) * f(c2) + x * f(c1)) * (1.0 - c2);
  out.rhs = f(1.0 - rho) * rho;
  out.simplified_holds = out.lhs > out.rhs;
  out.three_level_utility = private_utility(solve(population, three_level_policy(x, c1, c2, rho)));
  out.two_level_utility = private_utility(solve(population, two_level(1.0 - rho, rho)));
  out.holds = out.three_level_utility > out.two_level_utility;
  return out;
}

struct ThreeLevelCandidate {
  double x = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
  RewardPolicy policy;
  double utility = 0.0;
  double baseline = 0.0;
  double improvement() const { return utility - baseline; }
};

inline constexpr double kImprovementMargin = 1e-6;

// Grid + uniform random search over (c1, c2) in (0, 1-rho) x (1-rho, 1); the
// middle level x is fixed by capacity. Returns the best policy that beats
// non-randomized admissions by more than kImprovementMargin.
inline std::optional<ThreeLevelCandidate> find_three_level_improvement(
    const PopulationSpec& population, double rho, std::size_t search_budget,
    std::uint64_t seed = 0, std::size_t workers = 1) {
  if (search_budget == 0) return std::nullopt;
  if (!(rho > 0.0 && rho < 1.0)) throw CapacityError("capacity must lie in (0, 1)");
  const double top = 1.0 - rho;
  std::vector<std::pair<double, double>> cuts;
  const auto side = static_cast<std::size_t>(std::sqrt(static_cast<double>(search_budget) / 2.0));
  for (std::size_t i = 0; i < side; ++i) {
    for (std::size_t j = 0; j < side; ++j) {
      cuts.emplace_back(top * (static_cast<double>(i) + 0.5) / static_cast<double>(side),
                        top + rho * (static_cast<double>(j) + 0.5) / static_cast<double>(side));
    }
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  while (cuts.size() < search_budget) {
    const double c1 = top * u01(rng);
    const double c2 = top + rho * u01(rng);
    if (c1 > 0.0 && c2 > top && c2 < 1.0) cuts.emplace_back(c1, c2);
  }

  const double baseline = private_utility(solve(population, two_level(top, rho)));
  const auto utilities = parallel_map(cuts.size(), workers, [&](std::size_t i) {
    const auto [c1, c2] = cuts[i];
    const double x = (rho - (1.0 - c2)) / (c2 - c1);
    try {
      return private_utility(solve(population, three_level_policy(x, c1, c2, rho)));
    } catch (const Error&) {
      return -std::numeric_limits<double>::infinity();
    }
  });

  std::optional<ThreeLevelCandidate> best;
  for (std::size_t i = 0; i < cuts.size(); ++i) {
    const auto [c1, c2] = cuts[i];
    const double x = (rho - (1.0 - c2)) / (c2 - c1);
    if (!(utilities[i] - baseline > kImprovementMargin)) continue;
    const bool better =
        !best || utilities[i] > best->utility ||
        (utilities[i] == best->utility && std::tie(x, c1, c2) < std::tie(best->x, best->c1, best->c2));
    if (better) {
      best = ThreeLevelCandidate{x, c1, c2, three_level_policy(x, c1, c2, rho), utilities[i],
                                 baseline};
    }
  }
  return best;
}

}  // namespace rankdesign

#endif  // RANKDESIGN_DESIGN_HPP_

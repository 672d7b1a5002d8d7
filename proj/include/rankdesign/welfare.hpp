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

#ifndef RANKDESIGN_WELFARE_HPP_
#define RANKDESIGN_WELFARE_HPP_

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "rankdesign/equilibrium.hpp"
#include "rankdesign/parallel.hpp"
#include "rankdesign/quadrature.hpp"

namespace rankdesign {

struct WelfareReport {
  double applicant_welfare = 0.0;
  double societal_utility = 0.0;
  double private_utility = 0.0;
  std::vector<double> per_band_effort_cost;
  double quadrature_error_estimate = 0.0;

  // Mean score among admitted applicants (private utility / capacity).
  double admitted_mean_score(double capacity) const { return private_utility / capacity; }
};

namespace detail {

// Integrates fn(k, theta) over each band separately, splitting at the
// schedule's kinks.
template <SkillQuantile Q, class Fn>
QuadratureResult integrate_bands(const EquilibriumSchedule<Q>& s, const Fn& fn,
                                 std::vector<double>* per_band = nullptr) {
  const auto nodes = s.nodes();
  QuadratureResult total;
  for (std::size_t k = 0; k < s.band_count(); ++k) {
    const double lo = s.bands()[k].lower;
    const double hi = s.bands()[k].upper;
    std::vector<double> local{lo, hi};
    for (double x : nodes) {
      if (x > lo && x < hi) local.push_back(x);
    }
    // Effort decays like a power of theta above a small cutpoint; grade the
    // mesh geometrically so each piece spans a bounded ratio.
    if (lo > 0.0) {
      for (double x = 16.0 * lo; x < hi; x *= 16.0) local.push_back(x);
    }
    const auto piece = integrate_piecewise([&](double t) { return fn(k, t); }, local);
    total.value += piece.value;
    total.error_estimate += piece.error_estimate;
    if (per_band) per_band->push_back(piece.value);
  }
  return total;
}

}  // namespace detail

template <SkillQuantile Q>
double expected_effort_cost(const EquilibriumSchedule<Q>& s) {
  return detail::integrate_bands(
             s, [&](std::size_t k, double t) { return s.cost().evaluate(s.effort_in_band(k, t)); })
      .value;
}

template <SkillQuantile Q>
double applicant_welfare(const EquilibriumSchedule<Q>& s) {
  return s.policy().capacity - expected_effort_cost(s);
}

template <SkillQuantile Q>
double societal_utility(const EquilibriumSchedule<Q>& s) {
  return detail::integrate_bands(s, [&](std::size_t k, double t) { return s.score_in_band(k, t); })
      .value;
}

// Integral of score times reward over ranks (rank preservation lets the reward
// be read at the pre-effort rank).
template <SkillQuantile Q>
double private_utility(const EquilibriumSchedule<Q>& s) {
  return detail::integrate_bands(s,
                                 [&](std::size_t k, double t) {
                                   return s.bands()[k].level * s.score_in_band(k, t);
                                 })
      .value;
}

template <SkillQuantile Q>
WelfareReport evaluate_welfare(const EquilibriumSchedule<Q>& s) {
  WelfareReport report;
  const auto cost = detail::integrate_bands(
      s, [&](std::size_t k, double t) { return s.cost().evaluate(s.effort_in_band(k, t)); },
      &report.per_band_effort_cost);
  const auto soc =
      detail::integrate_bands(s, [&](std::size_t k, double t) { return s.score_in_band(k, t); });
  const auto pri = detail::integrate_bands(s, [&](std::size_t k, double t) {
    return s.bands()[k].level * s.score_in_band(k, t);
  });
  report.applicant_welfare = s.policy().capacity - cost.value;
  report.societal_utility = soc.value;
  report.private_utility = pri.value;
  report.quadrature_error_estimate = cost.error_estimate + soc.error_estimate + pri.error_estimate;
  return report;
}

struct SweepRow {
  double c = 0.0;
  double level1 = 0.0;
  WelfareReport report;
  std::string error;  // non-empty when the point failed
};

// Two-level sweep over the given cutoffs; rows come back in input order.
inline std::vector<SweepRow> sweep_two_level(const PopulationSpec& population, double rho,
                                             const std::vector<double>& cutoffs,
                                             std::size_t workers = 1) {
  return parallel_map(cutoffs.size(), workers, [&](std::size_t i) {
    SweepRow row;
    row.c = cutoffs[i];
    try {
      const auto policy = two_level(row.c, rho);
      row.level1 = policy.max_level();
      row.report = evaluate_welfare(solve(population, policy));
    } catch (const CapacityError& e) {
      row.error = std::string("CapacityError: ") + e.what();
    } catch (const Error& e) {
      row.error = e.what();
    }
    return row;
  });
}

}  // namespace rankdesign

#endif  // RANKDESIGN_WELFARE_HPP_

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

#ifndef RANKDESIGN_MULTIDIM_HPP_
#define RANKDESIGN_MULTIDIM_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <numeric>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "rankdesign/equilibrium.hpp"
#include "rankdesign/oracle.hpp"
#include "rankdesign/quadrature.hpp"

namespace rankdesign {

// m skills with quantiles f_i, announced weights alpha and a linear transfer
// g(e) = slope * e.
struct MultiSkillSpec {
  std::vector<FunctionSpec> quantiles;
  std::vector<double> weights;
  double slope = 1.0;

  MultiSkillSpec(std::vector<FunctionSpec> f, std::vector<double> alpha, double h)
      : quantiles(std::move(f)), weights(std::move(alpha)), slope(h) {
    validate();
  }

  std::size_t skill_count() const noexcept { return quantiles.size(); }
  FunctionSpec transfer() const { return FunctionSpec::power(slope, 1.0, Role::EffortTransfer); }

  void validate() const {
    if (quantiles.empty()) throw SpecError("multi-skill spec needs at least one skill");
    if (weights.size() != quantiles.size()) throw SpecError("weights and quantiles differ in length");
    for (double a : weights) {
      if (!(a >= 0.0)) throw SpecError("weights must be non-negative");
    }
    const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
    if (std::abs(total - 1.0) > 1e-12) throw SpecError("weights must sum to 1");
    if (!(slope > 0.0)) throw SpecError("transfer slope must be positive");
    for (std::size_t i = 0; i < quantiles.size(); ++i) {
      const auto& f = quantiles[i];
      if (f.role() != Role::SkillQuantile) throw SpecError("skill " + std::to_string(i) + " is not a quantile");
      double prev = f.evaluate(0.0);
      for (int j = 1; j <= 64; ++j) {
        const double cur = f.evaluate(j / 64.0);
        if (!(cur > prev)) {
          throw SpecError("quantile of skill " + std::to_string(i) + " is not strictly increasing");
        }
        prev = cur;
      }
    }
  }
};

struct PreIndex {
  double value = 0.0;
  std::size_t skill = 0;  // zero-based
};

// max_i alpha_i f_i(theta_i); ties go to the lowest skill index.
inline PreIndex pre_index(const MultiSkillSpec& spec, std::span<const double> ranks) {
  if (ranks.size() != spec.skill_count()) throw SpecError("rank vector has wrong length");
  PreIndex best{-1.0, 0};
  for (std::size_t i = 0; i < ranks.size(); ++i) {
    if (!(ranks[i] >= 0.0 && ranks[i] <= 1.0)) throw DomainError("skill rank outside [0, 1]");
    const double v = spec.weights[i] * spec.quantiles[i].evaluate(ranks[i]);
    if (v > best.value) best = {v, i};
  }
  return best;
}

using IndexFunction = std::function<double(const MultiSkillSpec&, std::span<const double>)>;

inline double max_index(const MultiSkillSpec& spec, std::span<const double> ranks) {
  return pre_index(spec, ranks).value;
}

struct MultidimRow {
  std::size_t agent = 0;
  double v_pre = 0.0;
  std::size_t reward_band = 0;
  bool violation = false;
};

struct MultidimReport {
  std::vector<MultidimRow> rows;
  std::size_t violations = 0;
  bool converged = false;
  std::size_t rounds = 0;
  std::vector<std::size_t> cycling_agents;
  bool ok() const { return converged && violations == 0; }
};

struct MultidimOptions {
  double effort_step = 1e-3;
  std::size_t max_rounds = 20000;
  double epsilon = 1e-9;
};

// Flags agent a when some agent b with v_pre(b) <= v_pre(a) ends in a
// strictly higher band.
inline std::size_t flag_order_violations(std::vector<MultidimRow>& rows) {
  std::vector<std::size_t> order(rows.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return rows[a].v_pre < rows[b].v_pre; });
  std::size_t count = 0;
  std::size_t prefix_max = 0;
  bool any = false;
  for (std::size_t start = 0; start < order.size();) {
    std::size_t end = start;
    std::size_t group_max = 0;
    while (end < order.size() && rows[order[end]].v_pre == rows[order[start]].v_pre) {
      group_max = std::max(group_max, rows[order[end]].reward_band);
      ++end;
    }
    const std::size_t reach = any ? std::max(prefix_max, group_max) : group_max;
    for (std::size_t k = start; k < end; ++k) {
      auto& row = rows[order[k]];
      row.violation = row.reward_band < reach;
      count += row.violation ? 1 : 0;
    }
    prefix_max = reach;
    any = true;
    start = end;
  }
  return count;
}

// Draws independent uniform ranks per skill, lets each agent compete with its
// strongest weighted skill under best-response dynamics, then checks that the
// realized bands are ordered by `index` (the max pre-index unless overridden).
inline MultidimReport check_multidim_rank_preservation(const MultiSkillSpec& spec,
                                                       std::size_t sample_size,
                                                       const RewardPolicy& policy,
                                                       const FunctionSpec& p, double e0,
                                                       std::uint64_t seed,
                                                       const IndexFunction& index = max_index,
                                                       const MultidimOptions& opt = {}) {
  if (sample_size < 2) throw SpecError("sample size must be at least 2");
  if (p.role() != Role::CostFunction) throw SpecError("cost function has wrong role");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<std::vector<double>> ranks(sample_size, std::vector<double>(spec.skill_count()));
  std::vector<double> skills(sample_size);
  std::vector<double> checked(sample_size);
  for (std::size_t i = 0; i < sample_size; ++i) {
    for (auto& r : ranks[i]) r = u(rng);
    skills[i] = pre_index(spec, ranks[i]).value;
    checked[i] = index(spec, ranks[i]);
  }
  const double cap = default_effort_cap(p, e0, policy, opt.effort_step);
  DiscreteInstance inst(skills, skills, spec.transfer(), p, e0, policy,
                        EffortGrid(e0, opt.effort_step, cap));
  auto run = best_response_dynamics(std::move(inst), opt.max_rounds, opt.epsilon);
  const auto result = outcomes(run.final_instance);

  MultidimReport report;
  report.converged = run.converged;
  report.rounds = run.rounds;
  report.cycling_agents = run.cycling_agents;
  report.rows.resize(sample_size);
  for (std::size_t i = 0; i < sample_size; ++i) {
    report.rows[i] = {i, checked[i], result[i].band, false};
  }
  report.violations = flag_order_violations(report.rows);
  return report;
}

// Two skills: a measurable one that drives admission and an unmeasurable one
// receiving the rest of a fixed effort budget. Both skill ranks share the
// quantile f and are independent.
struct UnmeasurableSpec {
  PopulationSpec population;
  double budget = 1.0;
  double rho = 0.2;
  double beta = 0.5;

  void validate() const {
    if (!(budget > 0.0)) throw SpecError("effort budget must be positive");
    if (!(rho > 0.0 && rho < 1.0)) throw SpecError("capacity must lie in (0, 1)");
    if (!(beta >= 0.0 && beta <= 1.0)) throw SpecError("beta must lie in [0, 1]");
    if (population.transfer_at_baseline() != 0.0) {
      throw AssumptionError("unmeasurable-skill analysis requires g(e0) = 0");
    }
  }
};

struct ConditionalMeans {
  double measurable = 0.0;
  double unmeasurable = 0.0;
};

namespace detail {

inline void check_cutoff(const UnmeasurableSpec& spec, double c) {
  if (!(c > 0.0 && c < 1.0 - spec.rho)) throw DomainError("cutoff must lie in (0, 1 - rho)");
}

}  // namespace detail

// Means of v^M and v^U over admitted agents under the two-level policy at c.
inline ConditionalMeans conditional_means(const UnmeasurableSpec& spec, double c) {
  spec.validate();
  detail::check_cutoff(spec, c);
  const auto& pop = spec.population;
  const auto schedule = solve(pop, two_level(c, spec.rho));
  const double threshold = *schedule.bands()[1].threshold_score;
  const double e_top = schedule.effort_in_band(1, c);
  if (e_top > spec.budget) {
    throw ModelError("effort budget " + std::to_string(spec.budget) +
                     " is below the admission effort " + std::to_string(e_top));
  }
  std::vector<double> nodes{c, 1.0};
  for (double b : pop.f.breakpoints()) {
    if (b > c && b < 1.0) nodes.push_back(b);
  }
  std::sort(nodes.begin(), nodes.end());
  const double spare = integrate_piecewise(
                           [&](double t) {
                             return pop.g.evaluate(std::max(0.0, spec.budget - schedule.effort_in_band(1, t)));
                           },
                           nodes)
                           .value;
  std::vector<double> all{0.0, 1.0};
  for (double b : pop.f.breakpoints()) {
    if (b > 0.0 && b < 1.0) all.push_back(b);
  }
  std::sort(all.begin(), all.end());
  const double mean_f = integrate_piecewise([&](double t) { return pop.f.evaluate(t); }, all).value;
  return {threshold, mean_f * spare / (1.0 - c)};
}

inline double weighted_private_utility(const UnmeasurableSpec& spec, double c) {
  const auto m = conditional_means(spec, c);
  return spec.beta * m.measurable + (1.0 - spec.beta) * m.unmeasurable;
}

struct BetaResult {
  double beta = 0.0;
  double d_measurable = 0.0;
  double d_unmeasurable = 0.0;
  ConditionalMeans means;
};

// Weight on the measurable skill at which the weighted utility is stationary
// in c. Derivatives by central difference.
inline BetaResult beta_for_interior_optimum(const UnmeasurableSpec& spec, double c,
                                            double h = 1e-5) {
  detail::check_cutoff(spec, c);
  if (!(c - h > 0.0 && c + h < 1.0 - spec.rho)) throw DomainError("cutoff too close to the boundary");
  const auto up = conditional_means(spec, c + h);
  const auto down = conditional_means(spec, c - h);
  BetaResult out;
  out.means = conditional_means(spec, c);
  out.d_measurable = (up.measurable - down.measurable) / (2.0 * h);
  out.d_unmeasurable = (up.unmeasurable - down.unmeasurable) / (2.0 * h);
  if (!(out.d_measurable > 0.0) || !(out.d_unmeasurable < 0.0)) {
    throw AssumptionError("expected d/dc E[v^M] > 0 and d/dc E[v^U] < 0, measured " +
                          std::to_string(out.d_measurable) + " and " +
                          std::to_string(out.d_unmeasurable));
  }
  out.beta = -out.d_unmeasurable / (out.d_measurable - out.d_unmeasurable);
  return out;
}

}  // namespace rankdesign

#endif  // RANKDESIGN_MULTIDIM_HPP_

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

#ifndef RANKDESIGN_ORACLE_HPP_
#define RANKDESIGN_ORACLE_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "rankdesign/equilibrium.hpp"
#include "rankdesign/welfare.hpp"

namespace rankdesign {

// Efforts e0, e0 + step, ..., up to the first point at or beyond cap.
// Efforts below e0 are dominated (lower score, higher cost) and not offered.
struct EffortGrid {
  double e0 = 0.0;
  double step = 1e-3;
  std::size_t last = 0;

  EffortGrid() = default;
  EffortGrid(double e0_, double step_, double cap) : e0(e0_), step(step_) {
    if (!(step > 0.0)) throw SpecError("effort grid step must be positive");
    if (!(cap >= e0)) throw SpecError("effort cap must be >= e0");
    last = static_cast<std::size_t>(std::ceil((cap - e0) / step - 1e-9));
  }
  std::size_t size() const noexcept { return last + 1; }
  double at(std::size_t m) const noexcept { return e0 + static_cast<double>(m) * step; }
};

enum class RankSampling { Midpoint, MonteCarlo };

// N agents with fixed skill values competing for the rewards of a policy.
// Agent i's score is g(effort_i) * skill_i.
class DiscreteInstance {
 public:
  DiscreteInstance(std::vector<double> ranks, std::vector<double> skills, FunctionSpec g,
                   FunctionSpec p, double e0, RewardPolicy policy, EffortGrid grid)
      : ranks_(std::move(ranks)),
        skills_(std::move(skills)),
        efforts_(skills_.size(), e0),
        g_(std::move(g)),
        p_(std::move(p)),
        e0_(e0),
        policy_(std::move(policy)),
        grid_(grid) {
    require_valid(policy_);
    if (ranks_.size() != skills_.size()) throw SpecError("ranks and skills differ in length");
    if (skills_.empty()) throw SpecError("instance needs at least one agent");
  }

  std::size_t size() const noexcept { return skills_.size(); }
  const std::vector<double>& ranks() const noexcept { return ranks_; }
  const std::vector<double>& skills() const noexcept { return skills_; }
  const std::vector<double>& efforts() const noexcept { return efforts_; }
  const FunctionSpec& transfer() const noexcept { return g_; }
  const FunctionSpec& cost() const noexcept { return p_; }
  double baseline_effort() const noexcept { return e0_; }
  const RewardPolicy& policy() const noexcept { return policy_; }
  const EffortGrid& grid() const noexcept { return grid_; }

  void set_effort(std::size_t i, double e) { efforts_.at(i) = e; }
  void set_efforts(std::vector<double> e) {
    if (e.size() != size()) throw SpecError("effort vector has wrong length");
    efforts_ = std::move(e);
  }

  double score_with(std::size_t i, double effort) const { return g_.evaluate(effort) * skills_[i]; }
  double score(std::size_t i) const { return score_with(i, efforts_[i]); }

  // Band paid to sorted position j (0 = best): the band of rank 1 - (j + 0.5) / N.
  std::size_t band_of_position(std::size_t j) const {
    const double n = static_cast<double>(size());
    return policy_.band_of(std::clamp(1.0 - (static_cast<double>(j) + 0.5) / n, 0.0, 1.0));
  }

 private:
  std::vector<double> ranks_;
  std::vector<double> skills_;
  std::vector<double> efforts_;
  FunctionSpec g_;
  FunctionSpec p_;
  double e0_;
  RewardPolicy policy_;
  EffortGrid grid_;
};

// Largest effort worth considering: costs beyond the full reward spread are
// never recovered.
inline double default_effort_cap(const FunctionSpec& p, double e0, const RewardPolicy& policy,
                                 double step) {
  return p.invert(p.evaluate(e0) + policy.max_level() - policy.min_level()) + step;
}

// Agents at midpoint-stratified ranks (i + 0.5) / N, or i.i.d. uniform ranks
// (sorted) drawn from `seed` in Monte Carlo mode.
inline DiscreteInstance make_instance(const PopulationSpec& pop, const RewardPolicy& policy,
                                      std::size_t n, double effort_step,
                                      std::optional<double> effort_cap = std::nullopt,
                                      RankSampling sampling = RankSampling::Midpoint,
                                      std::uint64_t seed = 0) {
  if (n == 0) throw SpecError("instance needs at least one agent");
  std::vector<double> ranks(n);
  if (sampling == RankSampling::Midpoint) {
    for (std::size_t i = 0; i < n; ++i) {
      ranks[i] = (static_cast<double>(i) + 0.5) / static_cast<double>(n);
    }
  } else {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (auto& r : ranks) r = u(rng);
    std::sort(ranks.begin(), ranks.end());
  }
  std::vector<double> skills(n);
  for (std::size_t i = 0; i < n; ++i) skills[i] = pop.f.evaluate(ranks[i]);
  const double cap = effort_cap.value_or(default_effort_cap(pop.p, pop.e0, policy, effort_step));
  return DiscreteInstance(std::move(ranks), std::move(skills), pop.g, pop.p, pop.e0, policy,
                          EffortGrid(pop.e0, effort_step, cap));
}

template <SkillQuantile Q>
void seed_from_schedule(DiscreteInstance& instance, const EquilibriumSchedule<Q>& schedule) {
  std::vector<double> e(instance.size());
  for (std::size_t i = 0; i < e.size(); ++i) e[i] = schedule.effort_at(instance.ranks()[i]);
  instance.set_efforts(std::move(e));
}

// Scores sorted best-first; equal scores ordered by ascending agent index.
// A deviating agent is ranked against this fixed profile, its own current
// entry included: one agent's deviation does not move the ranking function.
class Ranking {
 public:
  struct Entry {
    double score;
    std::size_t agent;
  };

  explicit Ranking(const DiscreteInstance& inst) {
    entries_.reserve(inst.size());
    for (std::size_t i = 0; i < inst.size(); ++i) entries_.push_back({inst.score(i), i});
    std::sort(entries_.begin(), entries_.end(), before);
  }

  const std::vector<Entry>& entries() const noexcept { return entries_; }

  // Position agent i would occupy with score v.
  std::size_t position(double v, std::size_t agent) const {
    const auto first_not_above = std::partition_point(
        entries_.begin(), entries_.end(), [v](const Entry& e) { return e.score > v; });
    const auto ties_before = std::partition_point(
        first_not_above, entries_.end(),
        [v, agent](const Entry& e) { return e.score == v && e.agent < agent; });
    return static_cast<std::size_t>(ties_before - entries_.begin());
  }

  void update(std::size_t agent, double old_score, double new_score) {
    const Entry old{old_score, agent};
    auto it = std::lower_bound(entries_.begin(), entries_.end(), old, before);
    if (it != entries_.end() && it->agent == agent) entries_.erase(it);
    const Entry fresh{new_score, agent};
    entries_.insert(std::lower_bound(entries_.begin(), entries_.end(), fresh, before), fresh);
  }

 private:
  static bool before(const Entry& a, const Entry& b) {
    return a.score != b.score ? a.score > b.score : a.agent < b.agent;
  }
  std::vector<Entry> entries_;
};

struct BestResponse {
  std::size_t grid_index = 0;
  double effort = 0.0;
  double welfare = 0.0;
  double current_welfare = 0.0;
  std::size_t band = 0;
  double gain() const { return welfare - current_welfare; }
};

// The welfare-maximising grid effort for agent i against `ranking`. Reward is
// a non-decreasing step function of effort and cost is increasing, so the
// optimum sits at the cheapest grid effort reaching some band; those are found
// by bisection on the grid instead of a full scan. Ties go to lower effort.
inline BestResponse best_response(const DiscreteInstance& inst, const Ranking& ranking,
                                  std::size_t i) {
  const auto& grid = inst.grid();
  const auto& levels = inst.policy().levels;
  auto band_at = [&](std::size_t m) {
    return inst.band_of_position(ranking.position(inst.score_with(i, grid.at(m)), i));
  };
  BestResponse best;
  best.current_welfare =
      levels[inst.band_of_position(ranking.position(inst.score(i), i))] -
      inst.cost().evaluate(inst.efforts()[i]);
  best.grid_index = 0;
  best.effort = grid.at(0);
  best.band = band_at(0);
  best.welfare = levels[best.band] - inst.cost().evaluate(best.effort);
  const std::size_t top_band = band_at(grid.last);
  for (std::size_t target = best.band + 1; target <= top_band; ++target) {
    std::size_t lo = 0;
    std::size_t hi = grid.last;
    while (lo < hi) {
      const std::size_t mid = lo + (hi - lo) / 2;
      if (band_at(mid) >= target) {
        hi = mid;
      } else {
        lo = mid + 1;
      }
    }
    const std::size_t band = band_at(lo);
    const double w = levels[band] - inst.cost().evaluate(grid.at(lo));
    if (w > best.welfare) {
      best = {lo, grid.at(lo), w, best.current_welfare, band};
    }
  }
  return best;
}

struct DynamicsResult {
  bool converged = false;
  std::size_t rounds = 0;
  DiscreteInstance final_instance;
  // Agents that moved in the last round when the run did not converge.
  std::vector<std::size_t> cycling_agents;
};

// Sequential round-robin best response starting from the instance's efforts.
// An agent moves only for a welfare gain above `epsilon`; the run has
// converged once a full sweep moves nobody. (A one-step tolerance would stop
// a run started at e0 after its first sweep, since early moves are single
// grid steps.)
inline DynamicsResult best_response_dynamics(DiscreteInstance instance, std::size_t max_rounds,
                                             double epsilon) {
  if (!(epsilon > 0.0)) throw SpecError("dynamics epsilon must be positive");
  Ranking ranking(instance);
  std::vector<std::size_t> moved;
  for (std::size_t round = 1; round <= max_rounds; ++round) {
    moved.clear();
    for (std::size_t i = 0; i < instance.size(); ++i) {
      const auto br = best_response(instance, ranking, i);
      if (!(br.gain() > epsilon)) continue;
      const double old_effort = instance.efforts()[i];
      const double old_score = instance.score(i);
      instance.set_effort(i, br.effort);
      ranking.update(i, old_score, instance.score(i));
      if (br.effort != old_effort) moved.push_back(i);
    }
    if (moved.empty()) return {true, round, std::move(instance), {}};
  }
  return {false, max_rounds, std::move(instance), moved};
}

struct Certification {
  bool certified = false;
  double worst_gain = 0.0;
  std::size_t worst_agent = 0;
  std::vector<double> per_band_max_gain;
};

// Largest welfare gain any agent can obtain from a grid deviation; certified
// when it does not exceed epsilon.
inline Certification certify_equilibrium(const DiscreteInstance& instance, double epsilon) {
  const Ranking ranking(instance);
  Certification out;
  out.worst_gain = -std::numeric_limits<double>::infinity();
  out.per_band_max_gain.assign(instance.policy().band_count(),
                               -std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < instance.size(); ++i) {
    const auto br = best_response(instance, ranking, i);
    const double gain = br.gain();
    const std::size_t band = instance.band_of_position(ranking.position(instance.score(i), i));
    out.per_band_max_gain[band] = std::max(out.per_band_max_gain[band], gain);
    if (gain > out.worst_gain) {
      out.worst_gain = gain;
      out.worst_agent = i;
    }
  }
  for (auto& g : out.per_band_max_gain) {
    if (!std::isfinite(g)) g = 0.0;
  }
  out.certified = out.worst_gain <= epsilon;
  return out;
}

struct AgentOutcome {
  std::size_t agent = 0;
  double rank = 0.0;
  double effort = 0.0;
  double score = 0.0;
  std::size_t band = 0;
  double reward = 0.0;
  double welfare = 0.0;
};

inline std::vector<AgentOutcome> outcomes(const DiscreteInstance& instance) {
  const Ranking ranking(instance);
  std::vector<AgentOutcome> out(instance.size());
  const auto& entries = ranking.entries();
  for (std::size_t j = 0; j < entries.size(); ++j) {
    const std::size_t i = entries[j].agent;
    const std::size_t band = instance.band_of_position(j);
    const double reward = instance.policy().levels[band];
    out[i] = {i,      instance.ranks()[i], instance.efforts()[i], entries[j].score,
              band,   reward,              reward - instance.cost().evaluate(instance.efforts()[i])};
  }
  return out;
}

// Sample means of reward - cost, score and score * reward. Rewards are summed
// per band before dividing so that equal rewards average exactly.
inline WelfareReport empirical_welfare(const DiscreteInstance& instance) {
  const std::size_t K = instance.policy().band_count();
  WelfareReport report;
  report.per_band_effort_cost.assign(K, 0.0);
  std::vector<double> band_count(K, 0.0);
  double cost_sum = 0.0;
  const double n = static_cast<double>(instance.size());
  for (const auto& o : outcomes(instance)) {
    const double cost = instance.cost().evaluate(o.effort);
    band_count[o.band] += 1.0;
    cost_sum += cost;
    report.societal_utility += o.score;
    report.private_utility += o.score * o.reward;
    report.per_band_effort_cost[o.band] += cost;
  }
  double reward_sum = 0.0;
  for (std::size_t k = 0; k < K; ++k) {
    reward_sum += band_count[k] * instance.policy().levels[k];
    report.per_band_effort_cost[k] /= n;
  }
  report.applicant_welfare = (reward_sum - cost_sum) / n;
  report.societal_utility /= n;
  report.private_utility /= n;
  return report;
}

}  // namespace rankdesign

#endif  // RANKDESIGN_ORACLE_HPP_
